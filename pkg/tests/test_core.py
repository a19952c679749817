from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bilinear_growth.core import (BilinearMap, BilinearSystem, EmptySystemError, Leaf, MisuseError,
                                  Node, SignClass, StructuralError, UnsupportedError, as_scalar,
                                  brute_force_g, catalan, count_trees, eliminate_degenerate,
                                  enumerate_trees, eval_tree, format_scalar, growth_table,
                                  live_dimensions, liveness_witnesses, pareto_prune, parse_tree,
                                  positivity_profile, tree_to_string)
from bilinear_growth.reductions import LEFT3, embed_jsr, extract_matrix

from conftest import nonneg_systems

S = Leaf(0)


def t(text, seeds=("s",), ops=("*",)):
    return parse_tree(text, seeds, ops)[0]


# --- scalars --------------------------------------------------------------------

def test_scalar_parsing():
    assert as_scalar("3") == 3 and isinstance(as_scalar("3"), int)
    assert as_scalar("-2/5") == Fraction(-2, 5)
    assert as_scalar("0.125") == Fraction(1, 8)
    assert as_scalar(Fraction(4, 2)) == 2 and isinstance(as_scalar(Fraction(4, 2)), int)
    with pytest.raises(TypeError):
        as_scalar(0.5)
    with pytest.raises(TypeError):
        as_scalar(True)


@given(st.fractions())
def test_scalar_format_roundtrip(q):
    assert as_scalar(format_scalar(q)) == q


# --- systems ------------------------------------------------------------------------

def test_map_drops_zero_coefficients():
    op = BilinearMap(2, {(0, 0, 0): 0, (1, 0, 1): 2})
    assert op.coeffs == {(1, 0, 1): 2}


def test_map_index_out_of_range():
    with pytest.raises(StructuralError):
        BilinearMap(2, {(2, 0, 0): 1})


def test_nonnegative_class_rejects_negative_entries():
    with pytest.raises(MisuseError):
        BilinearSystem(1, (BilinearMap(1, {(0, 0, 0): -1}),), ((1,),))
    sys_ = BilinearSystem.from_coeffs(1, {(0, 0, 0): -1}, (1,))
    assert sys_.sign_class is SignClass.GENERAL


def test_left_right_matrices(gold):
    op = gold.operators[0]
    x, y = (2, 3), (5, 7)
    from bilinear_growth.linalg import mat_vec
    assert mat_vec(op.left_matrix(y), x) == op.apply(x, y)
    assert mat_vec(op.right_matrix(x), y) == op.apply(x, y)


# --- trees ----------------------------------------------------------------------------

def test_eval_examples(gold):
    assert eval_tree(gold, S) == (1, 1)
    assert eval_tree(gold, t("(s*s)*s")) == (3, 2)


def test_eval_jsr_left_triple_gives_a():
    a, b = ((1, 1), (0, 1)), ((1, 0), (1, 1))
    emb = embed_jsr(a, b)
    v = eval_tree(emb.system, LEFT3)
    assert extract_matrix(emb.block(v, "C")) == a


def test_eval_bad_index(gold):
    with pytest.raises(StructuralError):
        eval_tree(gold, Leaf(3))
    with pytest.raises(StructuralError):
        eval_tree(gold, Node(S, S, 2))


@pytest.mark.parametrize("n,seeds,ops,count", [(1, 1, 1, 1), (4, 1, 1, 5), (3, 2, 1, 16), (3, 1, 2, 8)])
def test_tree_counts(n, seeds, ops, count):
    trees = list(enumerate_trees(n, seeds, ops))
    assert len(trees) == count == count_trees(n, seeds, ops)
    assert len(set(trees)) == count


@given(st.integers(1, 7), st.integers(1, 2), st.integers(1, 2))
def test_tree_enumeration_is_exhaustive_and_unique(n, seeds, ops):
    trees = list(enumerate_trees(n, seeds, ops))
    assert len(trees) == len(set(trees)) == catalan(n - 1) * ops ** (n - 1) * seeds ** n
    assert all(tr.leaves == n for tr in trees)


def test_four_leaf_trees_match_listing():
    listing = {"s*(s*(s*s))", "s*((s*s)*s)", "(s*s)*(s*s)", "(s*(s*s))*s", "((s*s)*s)*s"}
    assert {tree_to_string(tr) for tr in enumerate_trees(4)} == listing


@given(st.integers(1, 6).flatmap(lambda n: st.sampled_from(list(enumerate_trees(n, 2, 2)))))
def test_tree_string_roundtrip(tree):
    names, ops = ("s", "s'"), ("*", "*'")
    text = tree_to_string(tree, names, ops)
    assert parse_tree(text, names, ops) == (tree, None)


def test_parse_marked_leaf():
    tree, mark = parse_tree("(u*s)*s")
    assert mark == (0, 0) and tree.leaves == 3
    with pytest.raises(StructuralError):
        parse_tree("(u*s)*u")
    with pytest.raises(StructuralError):
        parse_tree("(s*s")


# --- fronts and growth ---------------------------------------------------------------

def test_pareto_examples():
    assert pareto_prune({(5, 3), (4, 2), (5, 2)}) == {(5, 3)}
    assert pareto_prune({(1, 0), (0, 1)}) == {(1, 0), (0, 1)}
    with pytest.raises(MisuseError):
        pareto_prune({(1, -1)})


def test_golden_front_at_four(gold):
    achieved = {eval_tree(gold, tr) for tr in enumerate_trees(4)}
    assert pareto_prune(achieved) == {(5, 3)}
    assert growth_table(gold, 4).vectors(4) == [(5, 3)]


def test_growth_examples(gold, plus):
    assert growth_table(gold, 8).g_sequence() == [1, 2, 3, 5, 8, 13, 21, 34]
    assert growth_table(plus, 8).g_sequence() == [1, 2, 3, 5, 7, 11, 16, 26]
    jsr = embed_jsr([[2]], [[2]]).system
    table = growth_table(jsr, 6)
    assert (table.g(3), table.g(4), table.g(5), table.g(6)) == (2, 0, 0, 4)


def test_growth_rejects_general():
    sys_ = BilinearSystem.from_coeffs(1, {(0, 0, 0): -1}, (1,))
    with pytest.raises(UnsupportedError):
        growth_table(sys_, 3)


def test_second_example_recurrence(plus):
    f = {1: 1}
    for n in range(2, 9):
        f[n] = max(f[a] * f[n - a] for a in range(1, n)) + 1
    assert growth_table(plus, 8).g_sequence() == [f[n] for n in range(1, 9)]


@given(nonneg_systems(max_dim=3))
def test_fronts_match_brute_force(system):
    table = growth_table(system, 7)
    for n in range(1, 8):
        assert table.g(n) == brute_force_g(system, n)


@given(nonneg_systems(max_dim=2, max_seeds=2, max_ops=2))
def test_fronts_match_brute_force_multi(system):
    table = growth_table(system, 5)
    for n in range(1, 6):
        assert table.g(n) == brute_force_g(system, n)


@given(nonneg_systems(max_dim=3, max_seeds=2))
def test_front_witnesses_replay(system):
    table = growth_table(system, 6)
    for n in range(1, 7):
        for e in table.front(n):
            assert e.witness.leaves == n
            assert eval_tree(system, e.witness) == e.vector


@given(nonneg_systems(max_dim=3))
def test_front_is_antichain(system):
    table = growth_table(system, 6)
    for n in range(1, 7):
        vs = table.vectors(n)
        assert pareto_prune(set(vs)) == set(vs)


# --- liveness -----------------------------------------------------------------------------

def test_live_examples(gold):
    assert live_dimensions(gold) == {0, 1}
    assert live_dimensions(BilinearSystem.from_coeffs(2, {}, (1, 0))) == {0}
    assert live_dimensions(embed_jsr([[2]], [[2]]).system) == set(range(5))


def test_eliminate_examples(gold):
    assert eliminate_degenerate(gold) is gold
    reduced = eliminate_degenerate(BilinearSystem.from_coeffs(2, {}, (1, 0)))
    assert reduced.dim == 1 and reduced.seeds == ((1,),)
    kept = BilinearSystem.from_coeffs(2, {(0, 1, 1): 1}, (0, 1))
    assert eliminate_degenerate(kept).dim == 2
    assert growth_table(kept, 2).g_i(2) == (1, 0)
    with pytest.raises(EmptySystemError):
        eliminate_degenerate(BilinearSystem.from_coeffs(2, {(0, 0, 0): 1}, (0, 0)))


@given(nonneg_systems(max_dim=4))
def test_live_matches_growth(system):
    live = live_dimensions(system)
    table = growth_table(system, 2 ** system.dim)
    seen = {k for n in range(1, 2 ** system.dim + 1) for k, x in enumerate(table.g_i(n)) if x > 0}
    assert live == seen
    for k, tree in liveness_witnesses(system).items():
        assert eval_tree(system, tree)[k] > 0


@given(nonneg_systems(max_dim=4))
def test_eliminate_preserves_growth(system):
    live = sorted(live_dimensions(system))
    if not live:
        return
    reduced = eliminate_degenerate(system)
    a, b = growth_table(system, 8), growth_table(reduced, 8)
    for n in range(1, 9):
        assert tuple(a.g_i(n)[k] for k in live) == b.g_i(n)


@given(nonneg_systems(max_dim=3, max_seeds=2))
def test_positivity_profile_matches_fronts(system):
    prof = positivity_profile(system, 8)
    table = growth_table(system, 8)
    for n in range(1, 9):
        assert prof[n] == {k for k, x in enumerate(table.g_i(n)) if x > 0}
