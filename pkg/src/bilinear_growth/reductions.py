"""Constructions that embed other problems into bilinear systems.

Matrix products are bilinear, so a ``d x d`` matrix stored row-major in a
block of ``d^2`` coordinates can be multiplied by the operator itself.  The
constructions here follow that idea: joint spectral radius and mortality
embeddings, the parity and limit transforms, the multi-seed and
multi-operator embeddings, and a variant with strictly positive seed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .core import (BilinearMap, BilinearSystem, Leaf, MisuseError, Node, SignClass, Tree,
                   as_scalar, as_vec, enumerate_trees, eval_tree, growth_table,
                   infer_sign_class, require_nonnegative)


class UncertifiedAlphaWarning(UserWarning):
    """``alpha`` could not be confirmed as a lower bound on the growth rate."""


# --- matrix <-> vector -----------------------------------------------------------

@dataclass(frozen=True)
class MatrixEmbedding:
    """Row-major layout: entry ``(r, c)`` of a ``d x d`` matrix sits at ``r*d + c``."""

    d: int

    def index(self, r: int, c: int) -> int:
        return r * self.d + c

    def embed(self, a) -> tuple:
        a = linalg.as_matrix(a)
        if len(a) != self.d:
            raise MisuseError(f"expected a {self.d}x{self.d} matrix")
        return tuple(x for row in a for x in row)

    def extract(self, v) -> tuple:
        v = tuple(v)
        if len(v) != self.d * self.d:
            raise MisuseError(f"expected a vector of length {self.d * self.d}")
        return tuple(tuple(v[r * self.d:(r + 1) * self.d]) for r in range(self.d))

    def product_terms(self, out: int, left: int, right: int) -> dict:
        """Coefficients placing ``Gamma(x[left:]) @ Gamma(y[right:])`` at ``out``."""
        d = self.d
        return {(out + r * d + c, left + r * d + t, right + t * d + c): 1
                for r in range(d) for c in range(d) for t in range(d)}


def embed_matrix(a) -> tuple:
    a = linalg.as_matrix(a)
    return MatrixEmbedding(len(a)).embed(a)


def extract_matrix(v, d: int | None = None) -> tuple:
    v = tuple(v)
    if d is None:
        d = int(round(len(v) ** 0.5))
    return MatrixEmbedding(d).extract(v)


@dataclass(frozen=True)
class EmbeddedSystem:
    system: BilinearSystem
    ranges: dict  # block name -> range of 0-based coordinates
    indices: dict  # single-coordinate name -> 0-based coordinate
    provenance: dict = field(default_factory=dict)

    def block(self, v, name: str) -> tuple:
        return tuple(v[k] for k in self.ranges[name])

    def matrix_block(self, v, name: str = "C") -> tuple:
        return extract_matrix(self.block(v, name))


def _check_pair(a, b, nonnegative: bool):
    a, b = linalg.as_matrix(a), linalg.as_matrix(b)
    if len(a) != len(b):
        raise MisuseError("A and B must have the same size")
    if nonnegative and not (linalg.is_nonnegative(a) and linalg.is_nonnegative(b)):
        raise MisuseError("negative entries: use embed_mortality or embed_positive instead")
    return a, b


def single_matrix_system(a) -> BilinearSystem:
    """``s = Gamma~(A)`` and ``u * v = Gamma~(Gamma(u) Gamma(v))``: every tree gives ``A^n``."""
    a = linalg.as_matrix(a)
    if not linalg.is_nonnegative(a):
        raise MisuseError("single_matrix_system expects a nonnegative matrix")
    emb = MatrixEmbedding(len(a))
    d2 = emb.d * emb.d
    return BilinearSystem(d2, (BilinearMap(d2, emb.product_terms(0, 0, 0)),), (emb.embed(a),))


# --- joint spectral radius and mortality -------------------------------------------------

def _jsr_layout(d):
    d2 = d * d
    ranges = {"A": range(0, d2), "B": range(d2, 2 * d2), "C": range(2 * d2, 3 * d2)}
    return ranges, {"i": 3 * d2, "j": 3 * d2 + 1}


def _jsr_coeffs(d):
    """``(x*y)_C = Gamma~(Gamma(x_C) Gamma(y_C)) + x_j y_A + x_B y_j``, ``(x*y)_j = x_i y_i``."""
    emb = MatrixEmbedding(d)
    ranges, idx = _jsr_layout(d)
    a0, b0, c0 = ranges["A"].start, ranges["B"].start, ranges["C"].start
    i, j = idx["i"], idx["j"]
    coeffs = emb.product_terms(c0, c0, c0)
    for t in range(d * d):
        coeffs[(c0 + t, j, a0 + t)] = 1
        coeffs[(c0 + t, b0 + t, j)] = 1
    coeffs[(j, i, i)] = 1
    return coeffs


def embed_jsr(a, b) -> EmbeddedSystem:
    """System of dimension ``3d^2 + 2`` with growth rate ``rho({A, B})^(1/3)``."""
    a, b = _check_pair(a, b, nonnegative=True)
    d = len(a)
    dim = 3 * d * d + 2
    ranges, idx = _jsr_layout(d)
    seed = _jsr_seed(a, b, dim)
    system = BilinearSystem(dim, (BilinearMap(dim, _jsr_coeffs(d)),), (tuple(seed),))
    return EmbeddedSystem(system, ranges, idx, {"construction": "jsr", "A": a, "B": b})


def embed_mortality(a, b, variant: str = "stated") -> EmbeddedSystem:
    """JSR system extended so that a zero vector can signal a mortal pair.

    ``variant="stated"`` adds three signed coordinates ``p, q, r`` with
    ``p = x_q y_q``, ``q = x_p y_p`` and
    ``r = x_p y_q + x_q y_p + x_r y_r - x_i y_j - x_j y_i`` (dimension
    ``3d^2 + 5``).  This gadget does not separate mortal from immortal pairs:
    ``s * (s * (s * s))`` is the zero vector for every ``(A, B)``.

    ``variant="repaired"`` instead adds three ``d^2`` blocks ``D0, D1, D2``
    (dimension ``6d^2 + 2``).  Every tree of size ``n >= 3`` then carries the
    product ``Q`` of the matrices it has built in exactly one block: ``C``
    when every subcombination has ``< 3`` or ``3k`` leaves, otherwise
    ``D_(n mod 3)``.  Its vector is zero iff ``Q = 0``, so a zero vector is
    reachable iff the pair is mortal.
    """
    if variant == "repaired":
        return _embed_mortality_repaired(a, b)
    if variant != "stated":
        raise MisuseError(f"unknown variant {variant!r}")
    a, b = _check_pair(a, b, nonnegative=False)
    d = len(a)
    d2 = d * d
    dim = 3 * d2 + 5
    ranges, idx = _jsr_layout(d)
    p, q, r = 3 * d2 + 2, 3 * d2 + 3, 3 * d2 + 4
    idx = dict(idx, p=p, q=q, r=r)
    i, j = idx["i"], idx["j"]
    coeffs = _jsr_coeffs(d)
    coeffs.update({(p, q, q): 1, (q, p, p): 1,
                   (r, p, q): 1, (r, q, p): 1, (r, r, r): 1,
                   (r, i, j): -1, (r, j, i): -1})
    seed = _jsr_seed(a, b, dim)
    seed[p] = 1
    system = BilinearSystem(dim, (BilinearMap(dim, coeffs),), (tuple(seed),), SignClass.GENERAL)
    return EmbeddedSystem(system, ranges, idx,
                          {"construction": "mortality", "variant": "stated", "A": a, "B": b})


def _jsr_seed(a, b, dim) -> list:
    d = len(a)
    ranges, idx = _jsr_layout(d)
    emb = MatrixEmbedding(d)
    seed = [0] * dim
    for t, x in enumerate(emb.embed(a)):
        seed[ranges["A"].start + t] = x
    for t, x in enumerate(emb.embed(b)):
        seed[ranges["B"].start + t] = x
    seed[idx["i"]] = 1
    return seed


def _embed_mortality_repaired(a, b) -> EmbeddedSystem:
    a, b = _check_pair(a, b, nonnegative=False)
    d = len(a)
    d2 = d * d
    dim = 6 * d2 + 2
    ranges, idx = _jsr_layout(d)
    base = 3 * d2 + 2
    for t in range(3):
        ranges[f"D{t}"] = range(base + t * d2, base + (t + 1) * d2)
    i, j = idx["i"], idx["j"]
    emb = MatrixEmbedding(d)
    coeffs = _jsr_coeffs(d)
    # (block, size class mod 3); C holds the well-split products
    blocks = [("C", 0), ("D0", 0), ("D1", 1), ("D2", 2)]
    for lname, lt in blocks:
        for rname, rt in blocks:
            if lname == rname == "C":
                continue
            out = ranges[f"D{(lt + rt) % 3}"].start
            for key, c in emb.product_terms(out, ranges[lname].start, ranges[rname].start).items():
                coeffs[key] = coeffs.get(key, 0) + c
    # a single leaf carries I in D1 and s * s carries I in D2; their size-3
    # combinations are well split, so cancel the identity they put in D0
    for t in range(d):
        k = ranges["D0"].start + emb.index(t, t)
        coeffs[(k, i, j)] = coeffs.get((k, i, j), 0) - 1
        coeffs[(k, j, i)] = coeffs.get((k, j, i), 0) - 1
    seed = _jsr_seed(a, b, dim)
    for t, x in enumerate(emb.embed(linalg.identity(d))):
        seed[ranges["D1"].start + t] = x
    system = BilinearSystem(dim, (BilinearMap(dim, coeffs),), (tuple(seed),), SignClass.GENERAL)
    return EmbeddedSystem(system, ranges, idx,
                          {"construction": "mortality", "variant": "repaired", "A": a, "B": b})


def is_mortal_upto(a, b, m_max: int) -> tuple | None:
    """Shortest word of length ``<= m_max`` whose product is zero, if any."""
    a, b = linalg.as_matrix(a), linalg.as_matrix(b)
    zero = linalg.zeros(len(a))
    for m in range(1, m_max + 1):
        for p, w in word_products(a, b, m).items():
            if p == zero:
                return w
    return None


def find_zero_vector(system: BilinearSystem, n_max: int) -> Tree | None:
    """First tree (by size, then canonical combination order) evaluating to zero.

    Exhaustive over distinct achievable vectors per size; no pruning, since
    signs may be arbitrary.
    """
    zero = (0,) * system.dim
    levels = [None, {}]
    for idx, s in enumerate(system.seeds):
        levels[1].setdefault(s, Leaf(idx))
    if zero in levels[1]:
        return levels[1][zero]
    for n in range(2, n_max + 1):
        level = {}
        for n1 in range(1, n):
            left, right = levels[n1], levels[n - n1]
            for op_idx, op in enumerate(system.operators):
                for x, tx in left.items():
                    for y, ty in right.items():
                        v = op.apply(x, y)
                        if v not in level:
                            level[v] = Node(tx, ty, op_idx)
                            if v == zero:
                                return level[v]
        levels.append(level)
    return None


@dataclass
class VerificationReport:
    name: str
    checked: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def fail(self, check: str, n: int, tree):
        self.counterexamples.append((check, n, tree))


def word_products(a, b, m: int) -> dict:
    """Map each product of ``m`` factors from ``{A, B}`` to its first word."""
    out = {}
    level = [((), linalg.identity(len(a)))]
    for _ in range(m):
        level = [(w + (k,), linalg.mat_mul(p, x)) for w, p in level for k, x in enumerate((a, b))]
    for w, p in level:
        out.setdefault(p, w)
    return out


def _well_split(tree) -> bool:
    """Every bracketed subcombination has fewer than 3 or a multiple of 3 leaves."""
    if isinstance(tree, Leaf):
        return True
    ok = tree.leaves < 3 or tree.leaves % 3 == 0
    return ok and _well_split(tree.left) and _well_split(tree.right)


def verify_buffer_analysis(a, b, n_max: int = 9) -> VerificationReport:
    """Brute-force every tree up to ``n_max`` leaves on the JSR embedding of ``(A, B)``.

    Checks: ``v_C = 0`` unless ``3 | n``; for ``n = 3m`` a nonzero ``Gamma(v_C)``
    is a product of ``m`` factors; every such product is realised; trees
    whose subcombinations all have ``< 3`` or ``3k`` leaves give a product;
    ``v_i``, ``v_j``, ``v_A``, ``v_B`` vanish outside ``n = 1`` / ``n = 2``.
    """
    emb = embed_jsr(a, b)
    a, b = emb.provenance["A"], emb.provenance["B"]
    rep = VerificationReport("buffer-analysis")
    i, j = emb.indices["i"], emb.indices["j"]
    for n in range(1, n_max + 1):
        products = word_products(a, b, n // 3) if n % 3 == 0 else {}
        realised = set()
        for t in enumerate_trees(n):
            rep.checked += 1
            v = eval_tree(emb.system, t)
            c = emb.block(v, "C")
            nonzero = any(c)
            if n % 3 and nonzero:
                rep.fail("v_C nonzero with 3 not dividing n", n, t)
            if n % 3 == 0:
                mat = extract_matrix(c)
                if nonzero and mat not in products:
                    rep.fail("nonzero v_C is not a product of n/3 factors", n, t)
                if _well_split(t) and mat not in products:
                    rep.fail("well-split tree does not give a product", n, t)
                realised.add(mat)
            if (v[i] != 0) != (n == 1) or (n != 2 and v[j] != 0):
                rep.fail("v_i / v_j support", n, t)
            if n >= 2 and (any(emb.block(v, "A")) or any(emb.block(v, "B"))):
                rep.fail("v_A or v_B nonzero for n >= 2", n, t)
        for p, w in products.items():
            if p not in realised:
                rep.fail("product not realised by any tree", n, w)
    return rep


# --- limit transforms -----------------------------------------------------------------------

def transform_insert_zero_odd(system: BilinearSystem) -> BilinearSystem:
    """``g'(2m) = g(m)`` and ``g'(2m+1) = 0``; one extra coordinate."""
    if not system.is_classical:
        raise MisuseError("insert-zero-odd needs one seed and one operator")
    d = system.dim
    s = system.seeds[0]
    coeffs = dict(system.operators[0].coeffs)
    for k in range(d):
        if s[k]:
            coeffs[(k, d, d)] = s[k]
    seed = (0,) * d + (1,)
    op = BilinearMap(d + 1, coeffs)
    return BilinearSystem(d + 1, (op,), (seed,), infer_sign_class([op], [seed]))


def transform_append_one(system: BilinearSystem) -> BilinearSystem:
    """Append a coordinate that is always 1, so the growth rate is at least 1."""
    d = system.dim
    ops = []
    for op in system.operators:
        coeffs = dict(op.coeffs)
        coeffs[(d, d, d)] = 1
        ops.append(BilinearMap(d + 1, coeffs))
    seeds = tuple(tuple(s) + (1,) for s in system.seeds)
    return BilinearSystem(d + 1, tuple(ops), seeds, system.sign_class,
                          system.seed_names, system.op_names)


def alpha_is_certified(system: BilinearSystem, alpha, depth: int = 6) -> bool:
    """True when some pattern of size ``n <= depth`` has ``M(P)_ii >= alpha^n`` exactly."""
    from .patterns import lower_bound_sequence

    alpha = Fraction(alpha)
    return any(Fraction(step.x) >= alpha ** step.n for step in lower_bound_sequence(system, depth))


def transform_ensure_limit(system: BilinearSystem, alpha, check_depth: int = 6) -> BilinearSystem:
    """Two extra coordinates that make ``g'(n)^(1/n)`` converge to the same rate.

    ``alpha`` must satisfy ``0 < alpha <= lambda``; a warning is issued when
    no pattern up to ``check_depth`` confirms it.
    """
    require_nonnegative(system, "transform_ensure_limit")
    alpha = as_scalar(alpha)
    if alpha <= 0:
        raise MisuseError("alpha must be positive")
    if not alpha_is_certified(system, alpha, check_depth):
        warnings.warn(f"alpha = {alpha} is not certified as a lower bound on the growth rate",
                      UncertifiedAlphaWarning, stacklevel=2)
    d = system.dim
    ops = []
    for op in system.operators:
        coeffs = dict(op.coeffs)
        for i in range(d):
            coeffs[(d, i, d + 1)] = 1
        coeffs[(d + 1, d + 1, d + 1)] = 1
        ops.append(BilinearMap(d + 2, coeffs))
    seeds = tuple(tuple(s) + (alpha, alpha) for s in system.seeds)
    return BilinearSystem(d + 2, tuple(ops), seeds, system.sign_class,
                          system.seed_names, system.op_names)


# --- several seeds or operators -------------------------------------------------------------

def _three_block_layout(d):
    ranges = {"A": range(0, d), "B": range(d, 2 * d), "C": range(2 * d, 3 * d)}
    return ranges, {"i": 3 * d, "j": 3 * d + 1}


def _shift_terms(op: BilinearMap, out: int, left: int, right: int) -> dict:
    return {(out + k, left + i, right + j): c for (k, i, j), c in op.coeffs.items()}


def embed_two_seeds(op: BilinearMap, s, s2) -> EmbeddedSystem:
    """One seed standing for a free choice between ``s`` and ``s2``; rate is cubed."""
    d = op.dim
    s, s2 = as_vec(s), as_vec(s2)
    if len(s) != d or len(s2) != d:
        raise MisuseError("seeds must match the operator's dimension")
    dim = 3 * d + 2
    ranges, idx = _three_block_layout(d)
    a0, b0, c0 = 0, d, 2 * d
    i, j = idx["i"], idx["j"]
    coeffs = _shift_terms(op, c0, c0, c0)
    for t in range(d):
        coeffs[(c0 + t, j, a0 + t)] = 1
        coeffs[(c0 + t, b0 + t, j)] = 1
    coeffs[(j, i, i)] = 1
    seed = s + s2 + (0,) * d + (1, 0)
    new_op = BilinearMap(dim, coeffs)
    system = BilinearSystem(dim, (new_op,), (seed,), infer_sign_class([new_op], [seed]))
    return EmbeddedSystem(system, ranges, idx, {"construction": "two-seeds"})


def embed_two_ops(op1: BilinearMap, op2: BilinearMap, s) -> EmbeddedSystem:
    """One operator standing for a free choice between ``op1`` and ``op2``; rate to the fifth."""
    d = op1.dim
    s = as_vec(s)
    if op2.dim != d or len(s) != d:
        raise MisuseError("operators and seed must share a dimension")
    dim = 3 * d + 2
    ranges, idx = _three_block_layout(d)
    a0, b0, c0 = 0, d, 2 * d
    i, j = idx["i"], idx["j"]
    coeffs = _shift_terms(op1, a0, c0, c0)
    coeffs.update(_shift_terms(op2, b0, c0, c0))
    for t in range(d):
        coeffs[(c0 + t, j, a0 + t)] = 1
        coeffs[(c0 + t, b0 + t, j)] = 1
    coeffs[(j, i, i)] = 1
    seed = s + s + (0,) * d + (1, 0)
    new_op = BilinearMap(dim, coeffs)
    system = BilinearSystem(dim, (new_op,), (seed,), infer_sign_class([new_op], [seed]))
    return EmbeddedSystem(system, ranges, idx, {"construction": "two-ops"})


def embed_system(system: BilinearSystem) -> EmbeddedSystem:
    """Dispatch a two-seed or two-operator system to the matching embedding."""
    if len(system.operators) == 1 and len(system.seeds) == 2:
        return embed_two_seeds(system.operators[0], *system.seeds)
    if len(system.operators) == 2 and len(system.seeds) == 1:
        return embed_two_ops(*system.operators, system.seeds[0])
    raise MisuseError("expected one operator with two seeds, or two operators with one seed")


def verify_block_congruences(emb: EmbeddedSystem, n_max: int = 8) -> VerificationReport:
    """Exhaustive support check for the two-operator embedding.

    ``v_C != 0`` only for ``n = 5k + 3`` and ``v_A`` or ``v_B != 0`` only for
    ``n = 5k + 1``.
    """
    rep = VerificationReport("congruences")
    for n in range(1, n_max + 1):
        for t in enumerate_trees(n):
            rep.checked += 1
            v = eval_tree(emb.system, t)
            if any(emb.block(v, "C")) and n % 5 != 3:
                rep.fail("v_C nonzero off 5k+3", n, t)
            if (any(emb.block(v, "A")) or any(emb.block(v, "B"))) and n % 5 != 1:
                rep.fail("v_A/v_B nonzero off 5k+1", n, t)
    return rep


def verify_insert_zero_odd(system: BilinearSystem, m_max: int = 4) -> VerificationReport:
    """``g'(2m) = g(m)`` and ``g'(2m+1) = 0`` for ``1 <= m <= m_max``, exactly."""
    rep = VerificationReport("insert-zero-odd")
    base = growth_table(system, m_max)
    lifted = growth_table(transform_insert_zero_odd(system), 2 * m_max + 1)
    for m in range(1, m_max + 1):
        rep.checked += 2
        if lifted.g(2 * m) != base.g(m):
            rep.fail(f"g'({2 * m}) = {lifted.g(2 * m)} != g({m}) = {base.g(m)}", 2 * m, None)
        if lifted.g(2 * m + 1) != 0:
            rep.fail(f"g'({2 * m + 1}) = {lifted.g(2 * m + 1)} != 0", 2 * m + 1, None)
    return rep


# --- strictly positive seed --------------------------------------------------------------------

def solve_positive_offsets(a, b, eps) -> tuple:
    """Solve for ``X, Y`` so the two size-3 trees give exactly ``A`` and ``B``.

    With ``E`` the all-``eps`` matrix the conditions are
    ``X = E^3 + eps (A - X) E + eps (B - Y) E`` and
    ``Y = E^3 + eps E (A - X) + eps E (B - Y)``; ``2 d^2`` linear unknowns.
    Returns ``None`` if the system is singular.
    """
    import sympy

    d = len(a)
    eps = sympy.Rational(Fraction(eps).numerator, Fraction(eps).denominator)
    e2 = eps ** 2
    n = 2 * d * d
    mat = sympy.zeros(n, n)
    rhs = sympy.zeros(n, 1)
    X = lambda r, c: r * d + c  # noqa: E731
    Y = lambda r, c: d * d + r * d + c  # noqa: E731
    q = lambda x: sympy.Rational(Fraction(x).numerator, Fraction(x).denominator)  # noqa: E731
    for r in range(d):
        for c in range(d):
            row = X(r, c)
            mat[row, X(r, c)] += 1
            for t in range(d):
                mat[row, X(r, t)] += e2
                mat[row, Y(r, t)] += e2
            rhs[row] = d * d * eps ** 3 + e2 * sum(q(a[r][t]) + q(b[r][t]) for t in range(d))
            row = Y(r, c)
            mat[row, Y(r, c)] += 1
            for t in range(d):
                mat[row, X(t, c)] += e2
                mat[row, Y(t, c)] += e2
            rhs[row] = d * d * eps ** 3 + e2 * sum(q(a[t][c]) + q(b[t][c]) for t in range(d))
    if mat.det() == 0:
        return None
    sol = mat.LUsolve(rhs)
    to_q = lambda z: as_scalar(Fraction(int(z.p), int(z.q)))  # noqa: E731
    xs = tuple(tuple(to_q(sol[X(r, c)]) for c in range(d)) for r in range(d))
    ys = tuple(tuple(to_q(sol[Y(r, c)]) for c in range(d)) for r in range(d))
    return xs, ys


def embed_positive(a, b, eps0=Fraction(1, 10), max_halvings: int = 40) -> EmbeddedSystem:
    """JSR-shaped system with every seed entry strictly positive.

    ``eps`` starts at ``eps0`` and is halved until ``X < A`` and ``Y < B``
    entrywise; then ``s_A = A - X``, ``s_B = B - Y``, ``s_C = eps``,
    ``s_i = 1``, ``s_j = eps``.
    """
    a, b = _check_pair(a, b, nonnegative=True)
    if any(x <= 0 for row in a + b for x in row):
        raise MisuseError("embed_positive needs strictly positive matrices")
    d = len(a)
    eps = Fraction(as_scalar(eps0))
    if eps <= 0:
        raise MisuseError("eps0 must be positive")
    for _ in range(max_halvings + 1):
        sol = solve_positive_offsets(a, b, eps)
        if sol is not None:
            xs, ys = sol
            if all(xs[r][c] < a[r][c] and ys[r][c] < b[r][c] for r in range(d) for c in range(d)):
                break
        eps /= 2
    else:
        raise MisuseError(f"no admissible eps after {max_halvings} halvings")
    eps = as_scalar(eps)
    dim = 3 * d * d + 2
    ranges, idx = _jsr_layout(d)
    emb = MatrixEmbedding(d)
    seed = [0] * dim
    diff_a = tuple(tuple(a[r][c] - xs[r][c] for c in range(d)) for r in range(d))
    diff_b = tuple(tuple(b[r][c] - ys[r][c] for c in range(d)) for r in range(d))
    for t, x in enumerate(emb.embed(diff_a)):
        seed[ranges["A"].start + t] = as_scalar(Fraction(x))
    for t, x in enumerate(emb.embed(diff_b)):
        seed[ranges["B"].start + t] = as_scalar(Fraction(x))
    for t in ranges["C"]:
        seed[t] = eps
    seed[idx["i"]] = 1
    seed[idx["j"]] = eps
    system = BilinearSystem(dim, (BilinearMap(dim, _jsr_coeffs(d)),), (tuple(seed),))
    return EmbeddedSystem(system, ranges, idx,
                          {"construction": "positive", "A": a, "B": b, "eps": eps, "X": xs, "Y": ys})


# trees of three leaves used throughout the embeddings
LEFT3 = Node(Node(Leaf(0), Leaf(0)), Leaf(0))   # (s*s)*s
RIGHT3 = Node(Leaf(0), Node(Leaf(0), Leaf(0)))  # s*(s*s)
