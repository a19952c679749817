"""Bilinear systems, composition trees and exact growth tables.

A bilinear system ``(*, s)`` on ``R^d`` is given by coefficients
``c[k, i, j]`` with ``(x * y)_k = sum_{i,j} c[k, i, j] x_i y_j`` and one or
more seed vectors.  All arithmetic here is exact: scalars are ``int`` or
``fractions.Fraction``.  Indices are 0-based in code; file formats and
printed reports use 1-based indices.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence, Union

Scalar = Union[int, Fraction]
Vec = tuple  # tuple[Scalar, ...]


class StructuralError(ValueError):
    """A tree or pattern refers to a seed/operator that does not exist."""


class MisuseError(ValueError):
    """An operation was called outside its precondition."""


class UnsupportedError(ValueError):
    """The operation is not available for this sign class."""


class EmptySystemError(ValueError):
    """No dimension of the system can ever become positive."""


def as_scalar(value) -> Scalar:
    """Parse ``value`` into an exact rational.

    Accepts ints, Fractions, and strings such as ``"3"``, ``"-2/5"`` or
    ``"0.125"``.  Floats are rejected: they would silently bring rounding
    into exact computations.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        q = value
    elif isinstance(value, str):
        q = Fraction(value.strip())
    else:
        raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")
    return q.numerator if q.denominator == 1 else q


def format_scalar(q: Scalar) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def as_vec(entries: Iterable) -> Vec:
    return tuple(as_scalar(x) for x in entries)


class SignClass(enum.Enum):
    NONNEGATIVE = "nonnegative"
    GENERAL = "general"


@dataclass(frozen=True, eq=False)
class BilinearMap:
    """Sparse bilinear map; ``coeffs`` maps ``(k, i, j)`` to a nonzero scalar."""

    dim: int
    coeffs: Mapping

    def __post_init__(self):
        if self.dim < 1:
            raise StructuralError("dimension must be positive")
        clean = {}
        for (k, i, j), c in self.coeffs.items():
            if not all(0 <= t < self.dim for t in (k, i, j)):
                raise StructuralError(f"coefficient index {(k, i, j)} out of range for dim {self.dim}")
            c = as_scalar(c)
            if c != 0:
                clean[(k, i, j)] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    def __eq__(self, other):
        return isinstance(other, BilinearMap) and self.dim == other.dim and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.dim, tuple(self.coeffs.items())))

    @cached_property
    def terms(self) -> tuple:
        return tuple((k, i, j, c) for (k, i, j), c in self.coeffs.items())

    def apply(self, x: Vec, y: Vec) -> Vec:
        out = [0] * self.dim
        for k, i, j, c in self.terms:
            xi = x[i]
            if xi:
                yj = y[j]
                if yj:
                    out[k] += c * xi * yj
        return tuple(out)

    def left_matrix(self, y: Vec) -> tuple:
        """Matrix ``L`` with ``x * y = L x`` for fixed right argument ``y``."""
        rows = [[0] * self.dim for _ in range(self.dim)]
        for k, i, j, c in self.terms:
            if y[j]:
                rows[k][i] += c * y[j]
        return tuple(map(tuple, rows))

    def right_matrix(self, x: Vec) -> tuple:
        """Matrix ``R`` with ``x * y = R y`` for fixed left argument ``x``."""
        rows = [[0] * self.dim for _ in range(self.dim)]
        for k, i, j, c in self.terms:
            if x[i]:
                rows[k][j] += c * x[i]
        return tuple(map(tuple, rows))

    def is_nonnegative(self) -> bool:
        return all(c > 0 for c in self.coeffs.values())


@dataclass(frozen=True)
class BilinearSystem:
    dim: int
    operators: tuple
    seeds: tuple
    sign_class: SignClass = SignClass.NONNEGATIVE
    seed_names: tuple = ()
    op_names: tuple = ()

    def __post_init__(self):
        ops = tuple(self.operators)
        seeds = tuple(as_vec(s) for s in self.seeds)
        if not ops:
            raise StructuralError("a system needs at least one operator")
        if not seeds:
            raise StructuralError("a system needs at least one seed")
        for op in ops:
            if op.dim != self.dim:
                raise StructuralError(f"operator of dim {op.dim} in system of dim {self.dim}")
        for s in seeds:
            if len(s) != self.dim:
                raise StructuralError(f"seed of length {len(s)} in system of dim {self.dim}")
        if self.sign_class is SignClass.NONNEGATIVE:
            if not all(op.is_nonnegative() for op in ops) or any(x < 0 for s in seeds for x in s):
                raise MisuseError("negative coefficient or seed entry in a nonnegative system")
        seed_names = tuple(self.seed_names) or default_seed_names(len(seeds))
        op_names = tuple(self.op_names) or default_op_names(len(ops))
        if len(seed_names) != len(seeds) or len(op_names) != len(ops):
            raise StructuralError("name lists must match seeds/operators")
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "seeds", seeds)
        object.__setattr__(self, "seed_names", seed_names)
        object.__setattr__(self, "op_names", op_names)

    @classmethod
    def from_coeffs(cls, dim, coeffs, seed, sign_class=None):
        """Single-operator, single-seed system; sign class inferred when omitted."""
        op = BilinearMap(dim, coeffs)
        seed = as_vec(seed)
        if sign_class is None:
            sign_class = infer_sign_class([op], [seed])
        return cls(dim, (op,), (seed,), sign_class)

    @property
    def is_classical(self) -> bool:
        return len(self.operators) == 1 and len(self.seeds) == 1

    def with_names(self, seed_names=(), op_names=()):
        return BilinearSystem(self.dim, self.operators, self.seeds, self.sign_class,
                              tuple(seed_names), tuple(op_names))


def infer_sign_class(operators, seeds) -> SignClass:
    ok = all(op.is_nonnegative() for op in operators) and all(x >= 0 for s in seeds for x in s)
    return SignClass.NONNEGATIVE if ok else SignClass.GENERAL


def default_seed_names(n):
    return tuple("s" + "'" * t for t in range(n))


def default_op_names(n):
    return tuple("*" + "'" * t for t in range(n))


def require_nonnegative(system: BilinearSystem, what: str):
    if system.sign_class is not SignClass.NONNEGATIVE:
        raise UnsupportedError(f"{what} requires a nonnegative system")


# --- composition trees -----------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    seed: int = 0

    @property
    def leaves(self) -> int:
        return 1


@dataclass(frozen=True)
class Node:
    left: "Tree"
    right: "Tree"
    op: int = 0
    leaves: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "leaves", self.left.leaves + self.right.leaves)


Tree = Union[Leaf, Node]


def eval_tree(system: BilinearSystem, tree: Tree) -> Vec:
    if isinstance(tree, Leaf):
        if not 0 <= tree.seed < len(system.seeds):
            raise StructuralError(f"seed index {tree.seed} out of range")
        return system.seeds[tree.seed]
    if not 0 <= tree.op < len(system.operators):
        raise StructuralError(f"operator index {tree.op} out of range")
    return system.operators[tree.op].apply(eval_tree(system, tree.left), eval_tree(system, tree.right))


def enumerate_trees(n: int, num_seeds: int = 1, num_ops: int = 1) -> Iterator[Tree]:
    """Yield every tree with ``n`` leaves exactly once, in canonical order.

    Order: left subtree size ascending, then operator, then left and right
    subtrees recursively.
    """
    if n < 1:
        raise MisuseError("trees have at least one leaf")
    if n == 1:
        for s in range(num_seeds):
            yield Leaf(s)
        return
    for n1 in range(1, n):
        lefts = list(enumerate_trees(n1, num_seeds, num_ops))
        rights = list(enumerate_trees(n - n1, num_seeds, num_ops))
        for op in range(num_ops):
            for left in lefts:
                for right in rights:
                    yield Node(left, right, op)


def catalan(n: int) -> int:
    from math import comb
    return comb(2 * n, n) // (n + 1)


def count_trees(n: int, num_seeds: int = 1, num_ops: int = 1) -> int:
    return catalan(n - 1) * num_ops ** (n - 1) * num_seeds ** n


def tree_to_string(tree: Tree, seed_names=("s",), op_names=("*",), marked_path=None, mark="u") -> str:
    """Fully parenthesised combination string, e.g. ``((s*s)*s)*s``.

    ``marked_path`` (a tuple of 0/1 steps from the root) prints that leaf as
    ``mark`` instead of a seed name.
    """

    def go(t, path, top):
        if marked_path is not None and path == tuple(marked_path):
            return mark
        if isinstance(t, Leaf):
            return seed_names[t.seed]
        body = go(t.left, path + (0,), False) + op_names[t.op] + go(t.right, path + (1,), False)
        return body if top else f"({body})"

    return go(tree, (), True)


def parse_tree(text: str, seed_names=("s",), op_names=("*",), mark="u"):
    """Inverse of :func:`tree_to_string`; returns ``(tree, marked_path)``.

    ``marked_path`` is ``None`` when the string has no ``mark`` leaf.
    """
    tokens = re.findall(r"\(|\)|[A-Za-z_]\w*'*|[^\sA-Za-z0-9_()]+", text)
    seeds = {name: idx for idx, name in enumerate(seed_names)}
    ops = {name: idx for idx, name in enumerate(op_names)}
    marked = Leaf(-1)
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(tokens):
            raise StructuralError(f"unexpected end of combination {text!r}")
        pos += 1
        return tokens[pos - 1]

    def atom():
        tok = take()
        if tok == "(":
            t = expr()
            if take() != ")":
                raise StructuralError(f"unbalanced parentheses in {text!r}")
            return t
        if tok in seeds:
            return Leaf(seeds[tok])
        if tok == mark:
            return marked
        raise StructuralError(f"unknown seed name {tok!r}")

    def expr():
        left = atom()
        if pos < len(tokens) and tokens[pos] in ops:
            op = ops[take()]
            return Node(left, atom(), op)
        return left

    tree = expr()
    if pos != len(tokens):
        raise StructuralError(f"trailing tokens in {text!r}")
    paths = [p for p, leaf in leaf_paths(tree) if leaf is marked]
    if len(paths) > 1:
        raise StructuralError("more than one marked leaf")
    if not paths:
        return tree, None
    return replace_at(tree, paths[0], Leaf(0)), paths[0]


def leaf_paths(tree: Tree, prefix=()):
    """Yield ``(path, leaf)`` for every leaf, left to right."""
    if isinstance(tree, Leaf):
        yield prefix, tree
    else:
        yield from leaf_paths(tree.left, prefix + (0,))
        yield from leaf_paths(tree.right, prefix + (1,))


def subtree_at(tree: Tree, path) -> Tree:
    for step in path:
        if isinstance(tree, Leaf):
            raise StructuralError("path runs past a leaf")
        tree = tree.right if step else tree.left
    return tree


def replace_at(tree: Tree, path, new: Tree) -> Tree:
    if not path:
        return new
    if isinstance(tree, Leaf):
        raise StructuralError("path runs past a leaf")
    if path[0]:
        return Node(tree.left, replace_at(tree.right, path[1:], new), tree.op)
    return Node(replace_at(tree.left, path[1:], new), tree.right, tree.op)


# --- Pareto fronts and growth tables ----------------------------------------

def dominates(a: Sequence, b: Sequence) -> bool:
    """``a >= b`` componentwise with strict inequality somewhere."""
    strict = False
    for x, y in zip(a, b):
        if x < y:
            return False
        if x > y:
            strict = True
    return strict


def _prune_keyed(items, key):
    # sort by coordinate sum: a dominator always has a strictly larger sum
    ranked = sorted(items, key=lambda it: sum(key(it)), reverse=True)
    kept, seen = [], set()
    for it in ranked:
        v = key(it)
        if v in seen:
            continue
        if any(dominates(key(k), v) for k in kept):
            continue
        kept.append(it)
        seen.add(v)
    return kept


def pareto_prune(vs: Iterable[Vec]) -> set:
    vs = [tuple(v) for v in vs]
    if any(x < 0 for v in vs for x in v):
        raise MisuseError("Pareto pruning is unsound for vectors with negative entries")
    if len({len(v) for v in vs}) > 1:
        raise MisuseError("vectors of different lengths")
    return set(_prune_keyed(vs, key=lambda v: v))


@dataclass(frozen=True)
class FrontEntry:
    vector: Vec
    witness: Tree


@dataclass
class GrowthTable:
    """Pareto fronts of achievable vectors for sizes ``1..N``.

    ``fronts[n]`` is a list of :class:`FrontEntry`; ``fronts[0]`` is unused.
    """

    system: BilinearSystem
    fronts: list

    @property
    def N(self) -> int:
        return len(self.fronts) - 1

    def front(self, n: int) -> list:
        return self.fronts[n]

    def vectors(self, n: int) -> list:
        return [e.vector for e in self.fronts[n]]

    def g_i(self, n: int) -> tuple:
        d = self.system.dim
        best = [0] * d
        for e in self.fronts[n]:
            for i, x in enumerate(e.vector):
                if x > best[i]:
                    best[i] = x
        return tuple(best)

    def g(self, n: int) -> Scalar:
        return max(self.g_i(n))

    def g_sequence(self) -> list:
        return [self.g(n) for n in range(1, self.N + 1)]

    def extend(self, N: int) -> "GrowthTable":
        """Append levels until the table reaches size ``N``."""
        for n in range(len(self.fronts), N + 1):
            level = []
            for n1 in range(1, n):
                level.extend(combine_fronts(self.system, self.fronts[n1], self.fronts[n - n1]))
            self.fronts.append(_prune_keyed(level, key=lambda e: e.vector))
        return self


def combine_fronts(system: BilinearSystem, left: list, right: list) -> list:
    out = []
    for op_idx, op in enumerate(system.operators):
        for a in left:
            for b in right:
                out.append(FrontEntry(op.apply(a.vector, b.vector), Node(a.witness, b.witness, op_idx)))
    return out


def growth_table(system: BilinearSystem, N: int) -> GrowthTable:
    """Exact fronts for every size up to ``N``.

    Nonnegative bilinear maps are monotone in each argument, so a dominated
    vector can never produce an outcome that is not dominated; pruning each
    level therefore loses nothing for the maxima ``g_i(n)``.
    """
    require_nonnegative(system, "growth_table")
    if N < 1:
        raise MisuseError("N must be at least 1")
    seeds = [FrontEntry(s, Leaf(idx)) for idx, s in enumerate(system.seeds)]
    table = GrowthTable(system, [[], _prune_keyed(seeds, key=lambda e: e.vector)])
    table.extend(N)
    return table


def brute_force_g(system: BilinearSystem, n: int) -> Scalar:
    """Max entry over every tree with ``n`` leaves; the exhaustive oracle."""
    best = None
    for t in enumerate_trees(n, len(system.seeds), len(system.operators)):
        m = max(eval_tree(system, t))
        best = m if best is None or m > best else best
    return best


# --- liveness ----------------------------------------------------------------

def liveness_witnesses(system: BilinearSystem) -> dict:
    """Map each live dimension to a tree whose vector is positive there.

    Least fixpoint over the support: ``k`` is live when some seed has a
    positive ``k`` entry, or some operator has ``c[k, i, j] > 0`` with both
    ``i`` and ``j`` live.
    """
    require_nonnegative(system, "live_dimensions")
    wit = {}
    for idx, s in enumerate(system.seeds):
        for k, x in enumerate(s):
            if x > 0 and k not in wit:
                wit[k] = Leaf(idx)
    changed = True
    while changed:
        changed = False
        found = {}
        for op_idx, op in enumerate(system.operators):
            for k, i, j, _ in op.terms:
                if k not in wit and k not in found and i in wit and j in wit:
                    found[k] = Node(wit[i], wit[j], op_idx)
        if found:
            wit.update(found)
            changed = True
    return wit


def live_dimensions(system: BilinearSystem) -> frozenset:
    return frozenset(liveness_witnesses(system))


def eliminate_degenerate(system: BilinearSystem) -> BilinearSystem:
    """Restrict the system to its live dimensions (order preserved)."""
    live = sorted(live_dimensions(system))
    if not live:
        raise EmptySystemError("no dimension is ever positive")
    if len(live) == system.dim:
        return system
    new_index = {old: new for new, old in enumerate(live)}
    ops = []
    for op in system.operators:
        coeffs = {(new_index[k], new_index[i], new_index[j]): c
                  for (k, i, j), c in op.coeffs.items()
                  if k in new_index and i in new_index and j in new_index}
        ops.append(BilinearMap(len(live), coeffs))
    seeds = [tuple(s[k] for k in live) for s in system.seeds]
    return BilinearSystem(len(live), tuple(ops), tuple(seeds), system.sign_class,
                          system.seed_names, system.op_names)


def positivity_profile(system: BilinearSystem, horizon: int) -> list:
    """``profile[n]`` is the frozenset of ``i`` with ``g_i(n) > 0``.

    Support-only dynamic programme; index 0 is unused.
    """
    require_nonnegative(system, "positivity_profile")
    prof = [frozenset()]
    prof.append(frozenset(k for s in system.seeds for k, x in enumerate(s) if x > 0))
    terms = [(k, i, j) for op in system.operators for k, i, j, _ in op.terms]
    for n in range(2, horizon + 1):
        level = set()
        for n1 in range(1, n):
            a, b = prof[n1], prof[n - n1]
            if not a or not b:
                continue
            for k, i, j in terms:
                if i in a and j in b:
                    level.add(k)
        prof.append(frozenset(level))
    return prof

