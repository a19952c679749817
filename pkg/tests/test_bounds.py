from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bilinear_growth import linalg
from bilinear_growth.bounds import (AtMostCertified, CertificateRefusal, GradedCertificate, GreaterThan,
                                    SupermultiplicativityError, Unresolved, bounds_report,
                                    decide_threshold, estimate_limsup, fekete_limit, graded_upper_bound,
                                    limit_condition_check, mass_certificate, max_split_envelope,
                                    search_weight_certificate, verify_graded_certificate,
                                    verify_weight_certificate, weight_upper_bound)
from bilinear_growth.catalog import zero
from bilinear_growth.core import BilinearSystem, MisuseError, growth_table
from bilinear_growth.patterns import lower_bound_sequence
from bilinear_growth.reductions import embed_jsr, single_matrix_system, transform_insert_zero_odd

from conftest import nonneg_systems

PHI = (1 + 5 ** 0.5) / 2


# --- weight certificates ---------------------------------------------------------------

def test_weight_examples(gold):
    cert = verify_weight_certificate(gold, (2, 1), 2)
    assert (cert.c, cert.bound) == (1, 2)
    with pytest.raises(CertificateRefusal) as info:
        verify_weight_certificate(gold, (1, 1), 1)
    assert info.value.coordinate == 0  # first coordinate
    with pytest.raises(CertificateRefusal):
        verify_weight_certificate(gold, (0, 1), 5)


@given(nonneg_systems(max_dim=3, max_seeds=2, max_ops=2))
def test_mass_certificate_always_verifies(system):
    cert = mass_certificate(system)
    table = growth_table(system, 6)
    for n in range(1, 7):
        assert table.g(n) <= cert.g_bound(n)


@given(nonneg_systems(max_dim=3, max_seeds=2))
def test_weight_certificate_soundness(system):
    cert = weight_upper_bound(system, iterations=24, steps=12)
    table = growth_table(system, 8)
    for n in range(1, 9):
        assert table.g(n) <= cert.g_bound(n)


def test_weight_family_floors_at_two_on_golden(gold):
    # diagonal certificates cannot certify anything below 2 here
    assert search_weight_certificate(gold, Fraction(199, 100), iterations=200) is None
    assert weight_upper_bound(gold).bound == 2


# --- graded certificates -----------------------------------------------------------------

def test_graded_examples(gold):
    cert = graded_upper_bound(gold, 3)
    assert PHI <= cert.gamma <= 2
    assert graded_upper_bound(single_matrix_system(((2,),)), 4).gamma == 2
    flat = graded_upper_bound(BilinearSystem.from_coeffs(1, {}, (1,)), 3)
    assert flat.degenerate and flat.bound == 0


def test_graded_converges_on_golden(gold):
    gammas = [float(graded_upper_bound(gold, n).gamma) for n in (3, 6, 10)]
    assert gammas[-1] - PHI < 1e-4
    assert gammas == sorted(gammas, reverse=True)


def test_graded_refusal(gold):
    with pytest.raises(CertificateRefusal):
        verify_graded_certificate(gold, 4, Fraction(3, 2))
    assert verify_graded_certificate(gold, 4, 2).bound == 2


@given(nonneg_systems(max_dim=3, max_seeds=2), st.integers(2, 5))
def test_graded_soundness(system, N):
    cert = graded_upper_bound(system, N, resolution_bits=20)
    env = cert.envelope
    table = growth_table(system, 8)
    gamma = Fraction(cert.gamma)
    for n in range(1, 9):
        assert table.g(n) <= cert.g_bound(n)
        for v in table.vectors(n):
            if n <= N:
                assert all(x <= y for x, y in zip(v, env[n]))
            else:
                assert any(all(x <= gamma ** (n - k) * y for x, y in zip(v, env[k]))
                           for k in range(1, N + 1))


@given(nonneg_systems(max_dim=3, max_seeds=2))
def test_envelope_dominates_fronts(system):
    env = max_split_envelope(system, 6)
    table = growth_table(system, 6)
    for n in range(1, 7):
        for v in table.vectors(n):
            assert all(x <= y for x, y in zip(v, env[n]))


@given(nonneg_systems(max_dim=3))
def test_sandwich(system):
    rep = bounds_report(system, pattern_size=5, cert_depth=5)
    assert rep.consistent
    best_lower = max(s.root for s in lower_bound_sequence(system, 5))
    assert best_lower <= float(rep.weight.bound) + 1e-12
    assert best_lower <= float(rep.graded.gamma) + 1e-12


# --- threshold decision -----------------------------------------------------------------------

def test_decide_examples(gold):
    v = decide_threshold(gold, 1, 1000)
    assert isinstance(v, GreaterThan)
    assert (v.pattern.leaf_count, v.index, v.value) == (2, 0, 2)
    assert v.replay(gold)
    v = decide_threshold(gold, 2, 1000)
    assert isinstance(v, AtMostCertified) and v.certificate.bound <= 2
    with pytest.raises(MisuseError):
        decide_threshold(gold, 0)


def test_decide_boundary_case():
    system = embed_jsr([[1]], [[1]]).system
    assert isinstance(decide_threshold(system, 1, 10), Unresolved)
    # with more budget a graded certificate at gamma = 1 closes the boundary case
    v = decide_threshold(system, 1, 1000)
    assert isinstance(v, AtMostCertified)
    assert verify_graded_certificate(system, v.certificate.N, 1).bound == 1


def test_decide_jsr_above_one():
    system = embed_jsr(((1, 1), (0, 1)), ((1, 0), (1, 1))).system
    v = decide_threshold(system, 1, 500)
    assert isinstance(v, GreaterThan) and v.replay(system)


@given(nonneg_systems(max_dim=2), st.sampled_from([Fraction(1, 2), 1, Fraction(3, 2), 2, 3]),
       st.sampled_from([20, 100, 400]))
def test_decide_never_contradicts(system, theta, budget):
    v = decide_threshold(system, theta, budget)
    if isinstance(v, GreaterThan):
        assert v.replay(system)
        # no certificate may then put lambda at or below theta
        assert weight_upper_bound(system, iterations=16, steps=8).bound > theta
    elif isinstance(v, AtMostCertified):
        assert v.certificate.bound <= theta
        for s in lower_bound_sequence(system, 6):
            assert Fraction(s.x) <= Fraction(theta) ** s.n


# --- limit condition ---------------------------------------------------------------------------

def test_limit_examples(gold):
    assert limit_condition_check(gold, 30).n0 == 1
    rep = limit_condition_check(embed_jsr([[2]], [[2]]).system, 30)
    assert rep.n0 is None and rep.status == "refuted-pattern"
    assert rep.period[1] == 3 and set(rep.zero_residues) == {1, 2}
    assert all(n % 3 for n in rep.zero_sizes) and min(rep.zero_sizes) == 4
    rep = limit_condition_check(transform_insert_zero_odd(gold), 30)
    assert rep.n0 is None
    assert set(rep.zero_sizes) == set(range(3, 31, 2))


# --- Fekete ------------------------------------------------------------------------------------

def test_fekete_examples():
    rep = fekete_limit([2 ** n for n in range(1, 20)])
    assert {r for _, r in rep.positive_roots} == {2.0}
    m = ((1, 1), (1, 0))
    diag = [linalg.mat_pow(m, n)[0][0] for n in range(1, 65)]
    rep = fekete_limit(diag)
    roots = [r for _, r in rep.positive_roots]
    assert roots == sorted(roots) and roots[-1] < PHI
    assert rep.last_gap <= 1e-2
    rep = fekete_limit(["0", "4", "0", "16", "0", "64"])
    assert rep.supermultiplicative and {r for _, r in rep.positive_roots} == {2.0}
    with pytest.raises(SupermultiplicativityError) as info:
        fekete_limit([2, 3])
    assert (info.value.m, info.value.n) == (1, 1)


def test_estimate_limsup(gold):
    prof = estimate_limsup(gold, 8)
    assert abs(prof.values[-1] - 34 ** (1 / 8)) < 1e-12 and not prof.certified
    jsr = estimate_limsup(embed_jsr([[2]], [[2]]).system, 9)
    assert [v == 0 for v in jsr.values[3:]] == [n % 3 != 0 for n in range(4, 10)]
    assert set(estimate_limsup(zero(), 5).values) == {0.0}
