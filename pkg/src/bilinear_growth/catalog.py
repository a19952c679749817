"""Small named systems used in examples, tests and the CLI."""

from __future__ import annotations

from .core import BilinearSystem


def golden() -> BilinearSystem:
    """``s = (1, 1)``, ``x * y = (x1 y2 + x2 y1, x1 y2)``: ``g(n)`` is Fibonacci, rate phi."""
    return BilinearSystem.from_coeffs(2, {(0, 0, 1): 1, (0, 1, 0): 1, (1, 0, 1): 1}, (1, 1))


def plus_one() -> BilinearSystem:
    """``s = (1, 1)``, ``x * y = (x1 y1 + x2 y2, x2 y2)``: ``g(n) = max g(a) g(b) + 1``."""
    return BilinearSystem.from_coeffs(2, {(0, 0, 0): 1, (0, 1, 1): 1, (1, 1, 1): 1}, (1, 1))


def zero(dim: int = 1) -> BilinearSystem:
    """Operator with no terms and a zero seed."""
    return BilinearSystem.from_coeffs(dim, {}, (0,) * dim)


CATALOG = {"golden": golden, "plus-one": plus_one, "zero": zero}
