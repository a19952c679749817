"""Zero-vector search on both mortality embeddings against brute-force word products."""
import itertools
from dataclasses import dataclass

from _config import parse_config
from bilinear_growth import embed_mortality, find_zero_vector
from bilinear_growth.core import tree_to_string
from bilinear_growth.reductions import is_mortal_upto


@dataclass
class Config:
    """Agreement of each variant with the word oracle on 0/1 matrices."""
    n_max: int = 9
    word_len: int = 3
    samples: int = 0  # 0 means every pair


def main(cfg: Config):
    mats = [((v[0], v[1]), (v[2], v[3])) for v in itertools.product((0, 1), repeat=4)]
    pairs = list(itertools.combinations_with_replacement(mats, 2))
    if cfg.samples:
        pairs = pairs[:cfg.samples]
    for variant in ("stated", "repaired"):
        agree, first = 0, None
        for a, b in pairs:
            w = find_zero_vector(embed_mortality(a, b, variant=variant).system, cfg.n_max)
            if (w is not None) == (is_mortal_upto(a, b, cfg.word_len) is not None):
                agree += 1
            elif first is None:
                first = (a, b, tree_to_string(w) if w else "none")
        print(f"{variant}: {agree}/{len(pairs)} agree with the word oracle; first mismatch {first}")


if __name__ == "__main__":
    main(parse_config(Config))
