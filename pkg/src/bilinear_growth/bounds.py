"""Certified bounds on the growth rate and the threshold semi-decision.

Upper bounds come from two exactly checkable certificate families:

* weight certificates ``(w, gamma, c)`` with ``s <= c w`` for every seed and
  ``w * w <= gamma w`` for every operator, giving ``lambda <= c gamma``;
* graded certificates built from the max-split envelope ``G(1..N)``.

Lower bounds come from linear patterns (see :mod:`.patterns`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .core import (BilinearSystem, MisuseError, Scalar, as_scalar, as_vec,
                   format_scalar, growth_table, live_dimensions, positivity_profile,
                   require_nonnegative)
from .patterns import (LinearPattern, PatternFronts, best_diagonal, best_pattern_rate,
                       lower_bound_sequence)
from .spectra import root_down, root_up


class CertificateRefusal(ValueError):
    """A proposed certificate fails one of its exact inequalities."""

    def __init__(self, message, coordinate=None):
        super().__init__(message)
        self.coordinate = coordinate


class SupermultiplicativityError(ValueError):
    def __init__(self, m, n):
        super().__init__(f"a_{m + n} < a_{m} * a_{n}")
        self.m, self.n = m, n


# --- weight certificates --------------------------------------------------------

@dataclass(frozen=True)
class WeightCertificate:
    w: tuple
    gamma: Scalar
    c: Scalar

    @property
    def bound(self) -> Scalar:
        return self.c * self.gamma

    def g_bound(self, n: int) -> Scalar:
        """Certified ``g(n) <= c^n gamma^(n-1) max_i w_i``."""
        return Fraction(self.c) ** n * Fraction(self.gamma) ** (n - 1) * max(self.w)


def verify_weight_certificate(system: BilinearSystem, w, gamma) -> WeightCertificate:
    """Check both inequalities exactly; raise :class:`CertificateRefusal` on failure."""
    require_nonnegative(system, "weight certificates")
    w = as_vec(w)
    gamma = as_scalar(gamma)
    if len(w) != system.dim:
        raise CertificateRefusal(f"weight has length {len(w)}, system has dim {system.dim}")
    for k, x in enumerate(w):
        if x <= 0:
            raise CertificateRefusal(f"weight entry {k + 1} is not positive", k)
    if gamma < 0:
        raise CertificateRefusal("gamma must be nonnegative")
    for op_idx, op in enumerate(system.operators):
        ww = op.apply(w, w)
        for k in range(system.dim):
            if ww[k] > gamma * w[k]:
                raise CertificateRefusal(
                    f"(w {system.op_names[op_idx]} w)_{k + 1} = {format_scalar(ww[k])} > "
                    f"gamma * w_{k + 1} = {format_scalar(gamma * w[k])}", k)
    c = max(Fraction(x) / y for s in system.seeds for x, y in zip(s, w))
    c = as_scalar(c)
    return WeightCertificate(w, gamma, c)


def _weight_ok(system, w, gamma) -> bool:
    for op in system.operators:
        ww = op.apply(w, w)
        if any(x > gamma * y for x, y in zip(ww, w)):
            return False
    return True


def mass_certificate(system: BilinearSystem) -> WeightCertificate:
    """The all-ones weight with gamma the largest coefficient row mass."""
    require_nonnegative(system, "weight certificates")
    mass = 0
    for op in system.operators:
        rows = [0] * system.dim
        for k, _, _, c in op.terms:
            rows[k] += c
        mass = max([mass] + rows)
    return verify_weight_certificate(system, (1,) * system.dim, mass)


def search_weight_certificate(system: BilinearSystem, gamma, iterations: int = 64,
                              bits: int = 48) -> WeightCertificate | None:
    """Look for ``w`` with ``w * w <= gamma w`` and ``w >= every seed``.

    Iterates ``w <- max(w0, (w * w) / gamma)`` from a strictly positive
    ``w0``, rounding up to dyadics so sizes stay bounded; every candidate is
    re-verified exactly.  ``None`` when nothing verifies in time.
    """
    gamma = as_scalar(gamma)
    if gamma <= 0:
        return None
    d = system.dim
    top = max(max(s) for s in system.seeds)
    floor = Fraction(top if top > 0 else 1, 1 << 20)
    w0 = tuple(max([floor] + [Fraction(s[k]) for s in system.seeds]) for k in range(d))
    cap = Fraction(top if top > 0 else 1) * (1 << 64)
    w = w0
    for _ in range(iterations):
        if _weight_ok(system, w, gamma):
            cert = verify_weight_certificate(system, w, gamma)
            if cert.c <= 1:
                return cert
        if max(w) > cap:
            return None  # diverging: gamma is below what any weight can support
        nxt = list(w0)
        for op in system.operators:
            ww = op.apply(w, w)
            for k in range(d):
                v = linalg.round_scalar(Fraction(ww[k]) / gamma, bits, up=True)
                if v > nxt[k]:
                    nxt[k] = v
        nxt = tuple(nxt)
        if nxt == w:
            break
        w = nxt
    return None


def weight_upper_bound(system: BilinearSystem, iterations: int = 64, steps: int = 30) -> WeightCertificate:
    """Smallest ``c gamma`` found by bisecting on ``gamma`` (mass bound as fallback)."""
    best = mass_certificate(system)
    lo, hi = Fraction(0), Fraction(best.bound)
    if hi == 0:
        return best
    for _ in range(steps):
        mid = (lo + hi) / 2
        mid = linalg.round_scalar(mid, 32, up=True)
        cert = search_weight_certificate(system, mid, iterations)
        if cert is not None and cert.bound < best.bound:
            best = cert
            hi = Fraction(cert.bound)
        else:
            lo = Fraction(mid)
        if hi - lo < Fraction(1, 1 << 20):
            break
    return best


# --- graded certificates ----------------------------------------------------------

def max_split_envelope(system: BilinearSystem, N: int) -> list:
    """``G(1) = max seeds``, ``G(n) = max over splits/operators of G(n1) * G(n2)``.

    Componentwise maxima; ``G(n)`` dominates every achievable vector of size
    ``n``.  Index 0 is unused.
    """
    require_nonnegative(system, "max_split_envelope")
    d = system.dim
    env = [None, tuple(max(s[k] for s in system.seeds) for k in range(d))]
    for n in range(2, N + 1):
        best = [0] * d
        for n1 in range(1, n):
            for op in system.operators:
                v = op.apply(env[n1], env[n - n1])
                for k in range(d):
                    if v[k] > best[k]:
                        best[k] = v[k]
        env.append(tuple(best))
    return env


@dataclass(frozen=True)
class GradedCertificate:
    N: int
    envelope: tuple  # G(1..N), index 0 unused
    gamma: Scalar
    degenerate: bool = False  # gamma == 0: g(n) = 0 beyond N

    @property
    def bound(self) -> Scalar:
        return self.gamma

    def g_bound(self, n: int) -> Scalar:
        """Certified upper bound on ``g(n)``."""
        if n <= self.N:
            return max(self.envelope[n])
        g = Fraction(self.gamma)
        return max(g ** (n - m) * max(self.envelope[m]) for m in range(1, self.N + 1))


def _graded_pairs(system, env, N):
    for m in range(1, N + 1):
        for n in range(N + 1 - m, N + 1):
            if m + n <= N:
                continue
            for op in system.operators:
                yield m, n, op.apply(env[m], env[n])


def graded_violation(system: BilinearSystem, env, N: int, gamma):
    """First ``(m, n)`` breaking the graded invariant at ``gamma``, else ``None``."""
    gamma = Fraction(gamma)
    powers = [gamma ** e for e in range(2 * N + 1)]
    for m, n, w in _graded_pairs(system, env, N):
        if not any(m + n - k >= 0 and all(x <= powers[m + n - k] * y for x, y in zip(w, env[k]))
                   for k in range(1, N + 1)):
            return m, n
    return None


def verify_graded_certificate(system: BilinearSystem, N: int, gamma) -> GradedCertificate:
    env = max_split_envelope(system, N)
    gamma = as_scalar(gamma)
    if gamma < 0:
        raise CertificateRefusal("gamma must be nonnegative")
    bad = graded_violation(system, env, N, gamma)
    if bad is not None:
        raise CertificateRefusal(f"no n' <= {N} dominates G({bad[0]}) * G({bad[1]})")
    return GradedCertificate(N, tuple(env), gamma, gamma == 0)


def _graded_gamma_estimate(system, env, N) -> float:
    est = 0.0
    for m, n, w in _graded_pairs(system, env, N):
        best = math.inf
        for k in range(1, N + 1):
            e = m + n - k
            need = 0.0
            for x, y in zip(w, env[k]):
                if x == 0:
                    continue
                if y == 0:
                    need = math.inf
                    break
                need = max(need, math.exp((math.log(Fraction(x).numerator) - math.log(Fraction(x).denominator)
                                           - math.log(Fraction(y).numerator) + math.log(Fraction(y).denominator)) / e))
            best = min(best, need)
        est = max(est, best)
    return est


def graded_upper_bound(system: BilinearSystem, N: int, resolution_bits: int = 40) -> GradedCertificate:
    """Minimal dyadic ``gamma`` (to ``2^-resolution_bits``) passing the graded check."""
    require_nonnegative(system, "graded_upper_bound")
    env = max_split_envelope(system, N)
    if graded_violation(system, env, N, 0) is None:
        return GradedCertificate(N, tuple(env), 0, True)
    scale = 1 << resolution_bits
    est = _graded_gamma_estimate(system, env, N)
    if math.isfinite(est):
        hi = Fraction(math.ceil(est * (1 + 1e-9) * scale) + 1, scale)
    else:
        hi = Fraction(2)
    while graded_violation(system, env, N, hi) is not None:
        hi *= 2
    lo = Fraction(max(0, math.floor(est * (1 - 1e-9) * scale) - 1), scale) if math.isfinite(est) else Fraction(0)
    if lo >= hi or graded_violation(system, env, N, lo) is None:
        lo = Fraction(0)
    while hi - lo > Fraction(1, scale):
        mid = Fraction(math.floor((lo + hi) / 2 * scale), scale)
        if mid <= lo:
            break
        if graded_violation(system, env, N, mid) is None:
            hi = mid
        else:
            lo = mid
    return GradedCertificate(N, tuple(env), as_scalar(hi), False)


# --- threshold decision ---------------------------------------------------------------

@dataclass(frozen=True)
class GreaterThan:
    pattern: LinearPattern
    index: int
    value: Scalar  # M(P)_ii
    theta: Scalar

    def replay(self, system: BilinearSystem) -> bool:
        from .patterns import pattern_matrix

        n = self.pattern.leaf_count
        m = pattern_matrix(system, self.pattern)
        return (self.index in live_dimensions(system) and m[self.index][self.index] == self.value
                and Fraction(self.value) > Fraction(self.theta) ** n)


@dataclass(frozen=True)
class AtMostCertified:
    certificate: object  # WeightCertificate or GradedCertificate
    theta: Scalar


@dataclass(frozen=True)
class Unresolved:
    spent: int
    pattern_levels: int
    certificate_depth: int
    best_lower: float
    best_upper: object


def decide_threshold(system: BilinearSystem, theta, budget: int = 1000):
    """Semi-decide ``lambda > theta`` versus ``lambda <= theta``.

    Rounds ``r = 1, 2, ...`` alternate (a) the pattern level ``|P| = r``,
    looking for an exact witness ``M(P)_ii > theta^r``, and (b) certificates
    for ``lambda <= theta``: ``r`` steps of the weight iteration, then the
    graded check at depth ``r``.  Work is counted in candidate matrices
    plus certificate checks; the search stops once ``budget`` is spent.
    Deterministic for a given budget.
    """
    require_nonnegative(system, "decide_threshold")
    theta = as_scalar(theta)
    if theta <= 0:
        raise MisuseError("theta must be a positive rational")
    theta_q = Fraction(theta)
    fronts = PatternFronts(system)
    spent, r = 0, 0
    best_lower, best_upper = 0.0, None
    while spent < budget:
        r += 1
        before = fronts.work
        fronts.extend(r)
        spent += fronts.work - before
        x, pat, i = best_diagonal(fronts[r], fronts.live)
        if pat is not None:
            best_lower = max(best_lower, root_down(x, r))
            if Fraction(x) > theta_q ** r:
                return GreaterThan(pat, i, x, theta)
        cert = search_weight_certificate(system, theta, iterations=r)
        spent += r
        if cert is not None:
            return AtMostCertified(cert, theta)
        env = max_split_envelope(system, r)
        spent += r * r * len(system.operators)
        if graded_violation(system, env, r, theta) is None:
            return AtMostCertified(GradedCertificate(r, tuple(env), theta, False), theta)
    return Unresolved(spent, r, r, best_lower, best_upper)


# --- limit condition -----------------------------------------------------------------

@dataclass(frozen=True)
class LimitReport:
    horizon: int
    n0: int | None  # least n0 with every live g_i(n) > 0 on [n0, horizon]
    zero_sizes: tuple  # sizes n with g(n) = 0
    period: tuple | None  # (start, period) of the positivity profile, if detected
    zero_residues: tuple  # residues mod period of zero sizes beyond start

    @property
    def status(self) -> str:
        if self.n0 is not None:
            return "n0-found"
        if self.period is not None:
            return "refuted-pattern"
        return "inconclusive"


def _detect_period(profile, horizon):
    for q in range(1, horizon // 3 + 1):
        for t in range(1, horizon - 2 * q + 2):
            if all(profile[n] == profile[n + q] for n in range(t, horizon - q + 1)):
                return t, q
    return None


def limit_condition_check(system: BilinearSystem, horizon: int = 48) -> LimitReport:
    """Finite-horizon check of "every live ``g_i(n) > 0`` from some ``n0`` on".

    Dead dimensions are ignored.  A detected period is a candidate only: it
    is observed up to ``horizon``, not proved.
    """
    require_nonnegative(system, "limit_condition_check")
    live = live_dimensions(system)
    prof = positivity_profile(system, horizon)
    n0 = None
    for n in range(horizon, 0, -1):
        if live <= prof[n]:
            n0 = n
        else:
            break
    # a tail that is positive only at the horizon itself proves nothing
    if n0 is not None and n0 > horizon // 2:
        n0 = None
    zeros = tuple(n for n in range(1, horizon + 1) if not prof[n])
    period = _detect_period(prof, horizon)
    residues = ()
    if period is not None:
        t, q = period
        residues = tuple(sorted({n % q for n in zeros if n >= t}))
    return LimitReport(horizon, n0, zeros, period, residues)


# --- Fekete extension --------------------------------------------------------------------

@dataclass(frozen=True)
class FeketeReport:
    sup: float
    sup_index: int
    positive_roots: tuple  # ((n, a_n^(1/n)), ...) for a_n > 0
    supermultiplicative: bool | None

    @property
    def last_gap(self) -> float:
        """``sup - (last positive root)``; the lemma says this tends to 0."""
        return self.sup - self.positive_roots[-1][1] if self.positive_roots else 0.0


def check_supermultiplicative(a) -> tuple | None:
    """First ``(m, n)`` with ``a_{m+n} < a_m a_n`` (1-based), else ``None``."""
    L = len(a)
    for m in range(1, L + 1):
        for n in range(m, L + 1 - m):
            if a[m + n - 1] < a[m - 1] * a[n - 1]:
                return m, n
    return None


def fekete_limit(a, check_super: bool = True) -> FeketeReport:
    """Roots ``a_n^(1/n)`` of a nonnegative sequence ``a_1, a_2, ...``."""
    a = [as_scalar(x) for x in a]
    if any(x < 0 for x in a):
        raise MisuseError("sequence must be nonnegative")
    sm = None
    if check_super:
        bad = check_supermultiplicative(a)
        if bad is not None:
            raise SupermultiplicativityError(*bad)
        sm = True
    roots = tuple((n, root_down(x, n)) for n, x in enumerate(a, start=1) if x > 0)
    if roots:
        idx, sup = max(roots, key=lambda t: t[1])
    else:
        idx, sup = 0, 0.0
    return FeketeReport(sup, idx, roots, sm)


# --- diagnostics ------------------------------------------------------------------------------

@dataclass(frozen=True)
class LimsupProfile:
    values: tuple  # g(n)^(1/n), n = 1..N
    g: tuple
    certified: bool = False  # finite profiles bound lambda in neither direction


def estimate_limsup(system: BilinearSystem, N: int) -> LimsupProfile:
    table = growth_table(system, N)
    g = tuple(table.g_sequence())
    vals = tuple(float(Fraction(x)) ** (1.0 / n) if x > 0 else 0.0 for n, x in enumerate(g, start=1))
    return LimsupProfile(vals, g)


# --- report -------------------------------------------------------------------------------------

@dataclass
class BoundsReport:
    lower_steps: list
    pattern_rate: object  # Enclosure or None
    rate_pattern: LinearPattern | None
    weight: WeightCertificate
    graded: GradedCertificate
    lower: float = field(init=False)
    upper: float = field(init=False)
    lower_source: str = field(init=False)
    upper_source: str = field(init=False)

    def __post_init__(self):
        diag = max((s.root for s in self.lower_steps), default=0.0)
        rate = self.pattern_rate.lo if self.pattern_rate is not None else 0.0
        self.lower, self.lower_source = (rate, "pattern-rate") if rate > diag else (diag, "diagonal")
        w = root_up(Fraction(self.weight.bound), 1) if self.weight.bound else 0.0
        gr = root_up(Fraction(self.graded.gamma), 1) if self.graded.gamma else 0.0
        self.upper, self.upper_source = (w, "weight") if w <= gr else (gr, "graded")

    @property
    def consistent(self) -> bool:
        return self.lower <= self.upper


def bounds_report(system: BilinearSystem, pattern_size: int = 8, cert_depth: int = 8,
                  tol: float = 1e-6) -> BoundsReport:
    require_nonnegative(system, "bounds_report")
    fronts = PatternFronts(system, growth_table(system, max(pattern_size, 1)))
    steps = lower_bound_sequence(system, pattern_size, fronts)
    enc, pat = best_pattern_rate(system, pattern_size, fronts, tol=tol)
    return BoundsReport(steps, enc, pat, weight_upper_bound(system), graded_upper_bound(system, cert_depth))
