"""Exact dense matrices as tuples of row tuples."""

from __future__ import annotations

from fractions import Fraction


def identity(d: int) -> tuple:
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def zeros(d: int) -> tuple:
    return tuple((0,) * d for _ in range(d))


def as_matrix(rows) -> tuple:
    from .core import as_scalar

    m = tuple(tuple(as_scalar(x) for x in row) for row in rows)
    if not m or any(len(r) != len(m) for r in m):
        raise ValueError("matrix must be square and nonempty")
    return m


def mat_mul(a: tuple, b: tuple) -> tuple:
    """Product skipping zero entries of ``a`` (pattern matrices are sparse)."""
    n = len(b[0])
    out = []
    for row in a:
        acc = [0] * n
        for k, x in enumerate(row):
            if x:
                bk = b[k]
                for j in range(n):
                    y = bk[j]
                    if y:
                        acc[j] += x * y
        out.append(tuple(acc))
    return tuple(out)


def mat_vec(a: tuple, v) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v) if x and y) for row in a)


def mat_pow(a: tuple, m: int) -> tuple:
    if m < 0:
        raise ValueError("negative power")
    result = identity(len(a))
    base = a
    while m:
        if m & 1:
            result = mat_mul(result, base)
        m >>= 1
        if m:
            base = mat_mul(base, base)
    return result


def max_norm(a: tuple):
    return max(abs(x) for row in a for x in row)


def diagonal(a: tuple) -> tuple:
    return tuple(a[i][i] for i in range(len(a)))


def is_nonnegative(a: tuple) -> bool:
    return all(x >= 0 for row in a for x in row)


def flat(a: tuple) -> tuple:
    return tuple(x for row in a for x in row)


def to_float_array(a: tuple):
    import numpy as np

    return np.array([[float(x) for x in row] for row in a], dtype=float)


def round_scalar(q, bits: int, up: bool):
    """Dyadic rational with ``bits`` significant bits, rounded up or down (``q >= 0``)."""
    if q == 0:
        return 0
    q = Fraction(q)
    num, den = q.numerator, q.denominator
    if num.bit_length() <= bits and den.bit_length() <= bits:
        return q
    shift = bits - (num.bit_length() - den.bit_length())
    if shift >= 0:
        scaled, rem = divmod(num << shift, den)
        return Fraction(scaled + (1 if up and rem else 0), 1 << shift)
    scaled, rem = divmod(num, den << -shift)
    return (scaled + (1 if up and rem else 0)) << -shift


def round_fixed(a: tuple, bits: int, up: bool) -> tuple:
    """Round each entry to a multiple of ``2^-bits`` (ceiling if ``up``, else floor).

    Suited to matrices scaled to max entry about 1: tiny entries do not
    keep ``bits`` significant bits of their own.
    """
    scale = 1 << bits
    out = []
    for row in a:
        new = []
        for x in row:
            q = Fraction(x) * scale
            n = -(-q.numerator // q.denominator) if up else q.numerator // q.denominator
            new.append(Fraction(n, scale) if n else 0)
        out.append(tuple(new))
    return tuple(out)
