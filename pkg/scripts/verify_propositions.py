"""Exhaustive checks of the embedding and transform identities at small sizes."""
import itertools
from dataclasses import dataclass

from _config import parse_config
from bilinear_growth import golden
from bilinear_growth.reductions import (embed_two_ops, verify_block_congruences, verify_buffer_analysis,
                                        verify_insert_zero_odd)


@dataclass
class Config:
    """Buffer analysis on all 0/1 pairs plus the parity and congruence checks."""
    n_max: int = 6
    m_max: int = 4
    congruence_n: int = 8


def main(cfg: Config):
    mats = [((v[0], v[1]), (v[2], v[3])) for v in itertools.product((0, 1), repeat=4)]
    checked = bad = 0
    for a, b in itertools.combinations_with_replacement(mats, 2):
        rep = verify_buffer_analysis(a, b, cfg.n_max)
        checked += rep.checked
        bad += len(rep.counterexamples)
    print(f"buffer analysis, {len(mats) * (len(mats) + 1) // 2} pairs: {checked} checks, {bad} counterexamples")
    g = golden()
    rep = verify_insert_zero_odd(g, cfg.m_max)
    print(f"insert-zero-odd on golden: {rep.checked} checks, passed={rep.passed}")
    op, s = g.operators[0], g.seeds[0]
    rep = verify_block_congruences(embed_two_ops(op, op, s), cfg.congruence_n)
    print(f"two-operator congruences: {rep.checked} trees, passed={rep.passed}")


if __name__ == "__main__":
    main(parse_config(Config))
