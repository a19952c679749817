from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bilinear_growth import linalg
from bilinear_growth.core import BilinearSystem, Leaf, MisuseError, Node, parse_tree
from bilinear_growth.patterns import (HOLE, LinearPattern, LivenessError, best_pattern_rate, compose,
                                      connector_pattern, count_patterns, dependency_components,
                                      enumerate_patterns, eval_pattern, lower_bound_sequence,
                                      pattern_fronts, pattern_matrix, pattern_power, pattern_rate)
from bilinear_growth.reductions import embed_jsr, single_matrix_system

from conftest import nonneg_systems

PHI = (1 + 5 ** 0.5) / 2


def pat(text, system=None):
    names = system.seed_names if system else ("s",)
    ops = system.op_names if system else ("*",)
    tree, mark = parse_tree(text, names, ops)
    return LinearPattern(tree, mark)


LEFT = pat("u*s")
RIGHT = pat("s*u")


def test_golden_pattern_matrices(gold):
    assert pattern_matrix(gold, LEFT) == ((1, 1), (1, 0))
    assert pattern_matrix(gold, RIGHT) == ((1, 1), (0, 1))


def test_compose_examples(gold):
    pp = compose(LEFT, LEFT)
    assert pattern_matrix(gold, pp) == ((2, 1), (1, 1))
    assert len(compose(pat("(u*s)*s"), pat("s*((s*s)*u)"))) == 5
    assert pattern_matrix(gold, pattern_power(LEFT, 3)) == ((3, 2), (2, 1))
    assert pattern_power(LEFT, 1) == LEFT and pattern_power(LEFT, 2) == pp
    m = pattern_matrix(gold, LEFT)
    assert pattern_matrix(gold, pattern_power(LEFT, 4)) == linalg.mat_pow(m, 4)
    with pytest.raises(MisuseError):
        pattern_power(LEFT, 0)


def test_single_matrix_pattern_diagonals():
    # a size-m pattern maps U to A^a U A^b with a + b = m, so the diagonal
    # entry at position (r, c) is (A^a)_rr (A^b)_cc
    a = ((1, 2), (0, 3))
    system = single_matrix_system(a)
    for m in (1, 2, 3):
        powers = [linalg.mat_pow(a, k) for k in range(m + 1)]
        splits = [tuple(powers[k][r][r] * powers[m - k][c][c] for r in range(2) for c in range(2))
                  for k in range(m + 1)]
        for p in enumerate_patterns(system, m):
            assert linalg.diagonal(pattern_matrix(system, p)) in splits
    x = lower_bound_sequence(single_matrix_system(((2,),)), 4)
    assert [s.x for s in x] == [2, 4, 8, 16]


def test_enumeration_counts(gold):
    assert len(list(enumerate_patterns(gold, 1))) == 2
    assert len(list(enumerate_patterns(gold, 2))) == 6
    for n in range(1, 5):
        ps = list(enumerate_patterns(gold, n))
        assert len(ps) == len(set(ps)) == count_patterns(n)
    mats = {pattern_matrix(gold, p) for p in enumerate_patterns(gold, 1)}
    assert mats == {((1, 1), (1, 0)), ((1, 1), (0, 1))}


def test_enumeration_multi_counts():
    system = BilinearSystem(1, (*[BilinearSystem.from_coeffs(1, {(0, 0, 0): 1}, (1,)).operators[0]] * 2,),
                            ((1,), (2,)))
    for n in range(1, 4):
        assert len(set(enumerate_patterns(system, n))) == count_patterns(n, 2, 2)


def test_pattern_rates(gold):
    assert pattern_rate(gold, LEFT).contains(PHI, 1e-9)
    assert pattern_rate(gold, RIGHT).contains(1.0, 1e-9)
    assert pattern_rate(gold, compose(LEFT, LEFT)).contains(PHI, 1e-9)
    with pytest.raises(MisuseError):
        pattern_rate(gold, HOLE)


def test_lower_bound_examples(gold):
    steps = lower_bound_sequence(gold, 3)
    assert [s.x for s in steps] == [1, 2, 3]
    for s in steps:
        assert pattern_matrix(gold, s.pattern)[s.index][s.index] == s.x
    jsr = lower_bound_sequence(embed_jsr([[2]], [[2]]).system, 4)
    assert jsr[0].x == 0 and jsr[1].x == 0


def test_best_pattern_rate_golden(gold):
    enc, p = best_pattern_rate(gold, 6)
    assert enc.contains(PHI, 1e-6) and len(p) == 1


def test_connectors(gold):
    p = connector_pattern(gold, 1, 0)
    assert pattern_matrix(gold, p)[1][0] > 0 and len(p) == 1
    block = BilinearSystem.from_coeffs(2, {(0, 0, 0): 1, (1, 1, 1): 1}, (1, 1))
    assert connector_pattern(block, 0, 1) is None
    assert len(dependency_components(block)) == 2
    chain = BilinearSystem.from_coeffs(3, {(0, 1, 2): 1, (1, 2, 2): 1}, (0, 0, 1))
    p = connector_pattern(chain, 0, 2)
    assert p is not None and pattern_matrix(chain, p)[0][2] > 0
    dead = BilinearSystem.from_coeffs(2, {}, (1, 0))
    with pytest.raises(LivenessError):
        connector_pattern(dead, 0, 1)


@given(nonneg_systems(max_dim=3, max_seeds=2, max_ops=2), st.data())
def test_matrix_homomorphism(system, data):
    p = data.draw(st.sampled_from(list(enumerate_patterns(system, data.draw(st.integers(1, 2))))))
    q = data.draw(st.sampled_from(list(enumerate_patterns(system, data.draw(st.integers(1, 2))))))
    pq = compose(p, q)
    assert len(pq) == len(p) + len(q)
    assert pattern_matrix(system, pq) == linalg.mat_mul(pattern_matrix(system, p), pattern_matrix(system, q))


@given(nonneg_systems(max_dim=3), st.data())
def test_matrix_matches_evaluation(system, data):
    n = data.draw(st.integers(1, 5))
    p = data.draw(st.sampled_from(list(enumerate_patterns(system, n))))
    u = tuple(data.draw(st.fractions(min_value=0, max_value=5)) for _ in range(system.dim))
    assert eval_pattern(system, p, u) == linalg.mat_vec(pattern_matrix(system, p), u)
    assert p.fill(Leaf(0)).leaves == n + 1


@given(nonneg_systems(max_dim=3))
def test_fronts_match_enumeration(system):
    fronts = pattern_fronts(system, 4)
    for n in range(1, 5):
        full = [pattern_matrix(system, p) for p in enumerate_patterns(system, n)]
        for i in range(system.dim):
            assert max(m[i][i] for m in full) == max(e.matrix[i][i] for e in fronts[n])
        for e in fronts[n]:
            assert pattern_matrix(system, e.pattern) == e.matrix


@given(nonneg_systems(max_dim=3))
def test_diagonal_supermultiplicative(system):
    fronts = pattern_fronts(system, 8)
    a = [[max(e.matrix[i][i] for e in fronts[n]) for i in range(system.dim)] for n in range(9)]
    for m in range(1, 8):
        for n in range(1, 9 - m):
            for i in range(system.dim):
                assert a[m + n][i] >= a[m][i] * a[n][i]


@given(nonneg_systems(max_dim=3), st.integers(1, 4))
def test_rate_invariant_under_powers(system, m):
    p = max(enumerate_patterns(system, 1), key=lambda q: sum(linalg.diagonal(pattern_matrix(system, q))))
    base = pattern_rate(system, p, tol=1e-7)
    powered = pattern_rate(system, pattern_power(p, m), tol=1e-7)
    assert abs(base.mid - powered.mid) <= 2e-6 + base.width + powered.width


def test_dead_dimensions_give_no_lower_bound():
    # dimension 1 is never positive, so M(u*s)_11 = 1 must not count
    system = BilinearSystem.from_coeffs(2, {(0, 0, 1): 1}, (0, 1))
    assert pattern_matrix(system, LEFT)[0][0] == 1
    assert all(s.x == 0 for s in lower_bound_sequence(system, 4))
    assert best_pattern_rate(system, 4) == (None, None) or best_pattern_rate(system, 4)[0].lo == 0
    assert pattern_rate(system, LEFT).hi == 0.0
