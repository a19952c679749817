"""Growth of the embedded joint-spectral-radius system next to direct JSR bounds."""
from dataclasses import dataclass

from _config import parse_config
from bilinear_growth import bounds_report, embed_jsr, growth_table, jsr_bounds

PAIRS = {
    "shear": (((1, 1), (0, 1)), ((1, 0), (1, 1))),
    "diag": (((2, 0), (0, 1)), ((1, 0), (0, 2))),
    "scalar": (((2,),), ((3,),)),
}


@dataclass
class Config:
    """Compare cubed pattern rates against JSR enclosures."""
    pattern_size: int = 12
    n: int = 12
    jsr_depth: int = 8


def main(cfg: Config):
    for name, (a, b) in PAIRS.items():
        emb = embed_jsr(a, b)
        g = growth_table(emb.system, cfg.n).g_sequence()
        r = bounds_report(emb.system, cfg.pattern_size, 4)
        enc = jsr_bounds([a, b], cfg.jsr_depth)
        print(f"{name}: dim={emb.system.dim}")
        print(f"  g(1..{cfg.n}) = {g}")
        print(f"  lower^3 = {r.lower ** 3:.6f}   jsr in [{enc.lo:.6f}, {enc.hi:.6f}]")


if __name__ == "__main__":
    main(parse_config(Config))
