"""Lower and upper bounds on the golden-ratio system as the budget grows."""
import math
from dataclasses import dataclass

from _config import parse_config
from bilinear_growth import bounds_report, golden, growth_table


@dataclass
class Config:
    """Bound sandwich for the golden system."""
    max_size: int = 12
    cert_depth: int = 12


def main(cfg: Config):
    g = golden()
    phi = (1 + math.sqrt(5)) / 2
    print(f"g(1..{cfg.max_size}) = {growth_table(g, cfg.max_size).g_sequence()}")
    print("size\tx_n^(1/n)\tpattern rate\tupper\tgap to phi")
    for n in range(2, cfg.max_size + 1, 2):
        r = bounds_report(g, n, min(n, cfg.cert_depth))
        diag = max(s.root for s in r.lower_steps)
        print(f"{n}\t{diag:.6f}\t{r.lower:.9f}\t{r.upper:.6f}\t{r.upper - phi:.2e}")


if __name__ == "__main__":
    main(parse_config(Config))
