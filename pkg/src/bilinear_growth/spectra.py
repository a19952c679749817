"""Certified spectral radius enclosures for nonnegative matrices.

Lower bounds come from diagonal entries of powers,
``rho(A) >= max_i ((A^n)_ii)^(1/n)``; upper bounds from max-norms,
``rho(A) <= (d * ||A^n||_max)^(1/n)``.  Both are evaluated on exact
rationals.  Long power chains are carried as ``2^e * V`` with ``V`` rounded
outward to dyadic rationals, so sizes stay bounded and every rounding step
moves the bound in the safe direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .core import MisuseError, UnsupportedError

# math.log on ints is accurate to a few ulps; this relative margin covers it
# for every root we take (|log q| / n stays far below 1e3).
_REL_MARGIN = 1e-12
_BITS = 96


def _log2_floor(q) -> int:
    q = Fraction(q)
    e = q.numerator.bit_length() - q.denominator.bit_length()
    return e if Fraction(2) ** e <= q else e - 1


def _log(q, exp2: int = 0) -> float:
    q = Fraction(q)
    return math.log(q.numerator) - math.log(q.denominator) + exp2 * math.log(2)


def root_down(q, n: int, exp2: int = 0) -> float:
    """Float ``r`` with ``r^n <= q * 2^exp2``."""
    if q <= 0:
        return 0.0
    r = math.exp(_log(q, exp2) / n)
    if n <= 64 and _pow_cmp(r, n, q, exp2) <= 0:
        up = math.nextafter(r, math.inf)
        return up if _pow_cmp(up, n, q, exp2) <= 0 else r
    return math.nextafter(r * (1 - _REL_MARGIN), 0.0)


def root_up(q, n: int, exp2: int = 0) -> float:
    """Float ``r`` with ``r^n >= q * 2^exp2``."""
    if q <= 0:
        return 0.0
    try:
        r = math.exp(_log(q, exp2) / n)
    except OverflowError:
        return math.inf
    if n <= 64 and _pow_cmp(r, n, q, exp2) >= 0:
        down = math.nextafter(r, 0.0)
        return down if _pow_cmp(down, n, q, exp2) >= 0 else r
    return math.nextafter(r * (1 + _REL_MARGIN), math.inf)


def _pow_cmp(r: float, n: int, q, exp2: int) -> int:
    """Sign of ``r^n - q * 2^exp2``, exactly."""
    lhs = Fraction(r) ** n
    rhs = Fraction(q) * Fraction(2) ** exp2
    return (lhs > rhs) - (lhs < rhs)


@dataclass(frozen=True)
class Enclosure:
    lo: float
    hi: float
    converged: bool = True
    lo_power: int = 0
    hi_power: int = 0
    witness: object = None

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return (self.lo + self.hi) / 2

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack

    def root(self, m: int) -> "Enclosure":
        """Enclosure of ``x^(1/m)`` for ``x`` in this enclosure."""
        if m == 1:
            return self
        hi = math.inf if math.isinf(self.hi) else root_up(Fraction(self.hi), m)
        return Enclosure(root_down(Fraction(self.lo), m), hi,
                         self.converged, self.lo_power, self.hi_power, self.witness)


def _check(a):
    if not linalg.is_nonnegative(a):
        raise UnsupportedError("spectral bounds need a nonnegative matrix")


def _diag_root(a, n, exp2=0) -> float:
    return max(root_down(x, n, exp2) for x in linalg.diagonal(a))


def _norm_root(a, n, exp2=0) -> float:
    m = linalg.max_norm(a)
    if m == 0:
        return 0.0
    return root_up(len(a) * m, n, exp2)


def _normalise(a, up: bool):
    """Split ``a`` as ``2^e * V`` with ``V`` of max entry in [1, 2) on a fixed dyadic grid."""
    m = linalg.max_norm(a)
    if m == 0:
        return a, 0
    e = _log2_floor(m)
    scaled = tuple(tuple(Fraction(x) / (Fraction(2) ** e) for x in row) for row in a)
    return linalg.round_fixed(scaled, _BITS, up), e


def spectral_radius(a, tol: float = 1e-4, max_squarings: int = 24, sequential: int | None = None) -> Enclosure:
    """Enclosure ``[lo, hi]`` of the spectral radius of a nonnegative matrix.

    ``sequential`` exact powers are scanned first (period detection for the
    diagonal bound); after that both bounds are refined by repeated squaring
    until ``hi - lo <= tol`` or ``max_squarings`` is hit, in which case the
    result is flagged ``converged=False``.
    """
    a = linalg.as_matrix(a)
    _check(a)
    d = len(a)
    if sequential is None:
        sequential = 2 * d + 2
    lo, lo_n, hi, hi_n = 0.0, 0, math.inf, 0
    best_p, best_root = 1, -1.0
    power = a
    for n in range(1, sequential + 1):
        if n > 1:
            power = linalg.mat_mul(power, a)
        r = _diag_root(power, n)
        if r > lo:
            lo, lo_n = r, n
        if r > best_root:
            best_p, best_root = n, r
        h = _norm_root(power, n)
        if h < hi:
            hi, hi_n = h, n
        if linalg.max_norm(power) == 0:
            return Enclosure(0.0, 0.0, True, n, n)
        if hi - lo <= tol:
            return Enclosure(lo, max(hi, lo), True, lo_n, hi_n)

    up, up_e = _normalise(a, up=True)
    down, down_e = _normalise(linalg.mat_pow(a, best_p), up=False)
    up_n, down_n = 1, best_p
    for _ in range(max_squarings):
        up, s = _normalise(linalg.mat_mul(up, up), up=True)
        up_e, up_n = 2 * up_e + s, 2 * up_n
        down, s = _normalise(linalg.mat_mul(down, down), up=False)
        down_e, down_n = 2 * down_e + s, 2 * down_n
        h = _norm_root(up, up_n, up_e)
        if h < hi:
            hi, hi_n = h, up_n
        r = _diag_root(down, down_n, down_e)
        if r > lo:
            lo, lo_n = r, down_n
        if hi - lo <= tol:
            return Enclosure(lo, hi, True, lo_n, hi_n)
    return Enclosure(lo, hi, False, lo_n, hi_n)


def diag_formula_profile(a, N: int) -> list:
    """``max_i ((A^n)_ii)^(1/n)`` for ``n = 1..N`` (each rounded down)."""
    a = linalg.as_matrix(a)
    _check(a)
    out, power = [], a
    for n in range(1, N + 1):
        if n > 1:
            power = linalg.mat_mul(power, a)
        out.append(_diag_root(power, n))
    return out


def norm_bound_profile(a, N: int) -> list:
    """``(d * ||A^n||_max)^(1/n)`` for ``n = 1..N`` (each rounded up)."""
    a = linalg.as_matrix(a)
    _check(a)
    out, power = [], a
    for n in range(1, N + 1):
        if n > 1:
            power = linalg.mat_mul(power, a)
        out.append(_norm_root(power, n))
    return out


def eigen_oracle(a) -> float:
    """Double-precision spectral radius by dense eigenvalue solve."""
    import numpy as np

    return float(max(abs(np.linalg.eigvals(linalg.to_float_array(a)))))


def jsr_bounds(matrices, depth: int, tol: float = 1e-6) -> Enclosure:
    """Enclosure of the joint spectral radius from products of length ``<= depth``.

    ``lo`` maximises ``rho(product)^(1/n)``; products whose norm bound cannot
    beat the current ``lo`` are not sent to the spectral solver.  ``hi``
    minimises ``(d * max ||product||_max)^(1/n)`` over all products of each
    length.  ``witness`` is the word (tuple of indices) attaining ``lo``.
    """
    mats = [linalg.as_matrix(m) for m in matrices]
    if not mats:
        raise MisuseError("empty matrix set")
    for m in mats:
        _check(m)
    if len({len(m) for m in mats}) > 1:
        raise MisuseError("matrices of different sizes")
    unique = sorted(set(mats))
    if len(unique) == 1:
        enc = spectral_radius(unique[0], tol=tol)
        return Enclosure(enc.lo, enc.hi, enc.converged, 1, 1, (mats.index(unique[0]),))
    d = len(mats[0])
    lo, lo_word, hi, hi_n = 0.0, (), math.inf, 0
    level = [((), linalg.identity(d))]
    for n in range(1, depth + 1):
        level = [(w + (k,), linalg.mat_mul(p, m)) for w, p in level for k, m in enumerate(mats)]
        norms = [linalg.max_norm(p) for _, p in level]
        h = root_up(d * max(norms), n) if max(norms) else 0.0
        if h < hi:
            hi, hi_n = h, n
        for (w, p), nm in zip(level, norms):
            if nm == 0 or root_up(d * nm, n) <= lo:
                continue
            enc = spectral_radius(p, tol=tol)
            r = root_down(Fraction(enc.lo), n)
            if r > lo:
                lo, lo_word = r, w
    hi = max(hi, lo)
    return Enclosure(lo, hi, hi - lo <= tol, len(lo_word), hi_n, lo_word)
