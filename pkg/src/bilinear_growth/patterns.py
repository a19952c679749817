"""Linear patterns: trees with one marked leaf acting as a linear map.

Filling the marked leaf of a pattern ``P`` with a vector ``u`` yields
``M(P) u``.  ``|P|`` counts the unmarked leaves.  Composition ``P (+) Q``
plugs ``Q`` into the marked leaf of ``P`` and multiplies matrices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import linalg
from .core import (BilinearSystem, Leaf, MisuseError, Node, StructuralError, Tree,
                   _prune_keyed, enumerate_trees, eval_tree, growth_table,
                   liveness_witnesses, replace_at, require_nonnegative, subtree_at,
                   tree_to_string)
from .spectra import Enclosure, root_down, spectral_radius


class LivenessError(MisuseError):
    """A requested dimension is never positive."""


@dataclass(frozen=True)
class LinearPattern:
    tree: Tree
    mark: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "mark", tuple(self.mark))
        if not isinstance(subtree_at(self.tree, self.mark), Leaf):
            raise StructuralError("marked path must end at a leaf")

    @property
    def leaf_count(self) -> int:
        return self.tree.leaves - 1

    def __len__(self):
        return self.leaf_count

    def fill(self, tree: Tree) -> Tree:
        """The tree ``P (+) T``: marked leaf replaced by ``tree``."""
        return replace_at(self.tree, self.mark, tree)

    def to_string(self, system: BilinearSystem | None = None, mark: str = "u") -> str:
        seeds = system.seed_names if system else ("s",)
        ops = system.op_names if system else ("*",)
        return tree_to_string(self.tree, seeds, ops, marked_path=self.mark, mark=mark)


HOLE = LinearPattern(Leaf(0), ())


def pattern_matrix(system: BilinearSystem, pattern: LinearPattern) -> tuple:
    """``M`` with ``eval(pattern, u) = M u``, built top-down along the marked path."""
    m = linalg.identity(system.dim)
    node = pattern.tree
    for step in pattern.mark:
        if not 0 <= node.op < len(system.operators):
            raise StructuralError(f"operator index {node.op} out of range")
        op = system.operators[node.op]
        if step == 0:
            factor = op.left_matrix(eval_tree(system, node.right))
            node = node.left
        else:
            factor = op.right_matrix(eval_tree(system, node.left))
            node = node.right
        m = linalg.mat_mul(m, factor)
    return m


def eval_pattern(system: BilinearSystem, pattern: LinearPattern, u) -> tuple:
    """Evaluate the pattern tree with ``u`` at the marked leaf (no matrices)."""

    def go(node, path):
        if path == pattern.mark:
            return tuple(u)
        if isinstance(node, Leaf):
            return eval_tree(system, node)
        op = system.operators[node.op]
        return op.apply(go(node.left, path + (0,)), go(node.right, path + (1,)))

    return go(pattern.tree, ())


def compose(p: LinearPattern, q: LinearPattern) -> LinearPattern:
    return LinearPattern(p.fill(q.tree), p.mark + q.mark)


def pattern_power(p: LinearPattern, m: int) -> LinearPattern:
    if m < 1:
        raise MisuseError("pattern powers start at 1")
    out = p
    for _ in range(m - 1):
        out = compose(out, p)
    return out


def enumerate_patterns(system: BilinearSystem, n: int):
    """Yield every pattern with ``|P| = n`` exactly once.

    The root splits into a marked child pattern of size ``k`` and an unmarked
    sibling tree of ``n - k`` leaves, on either side, under each operator.
    """
    if n < 1:
        raise MisuseError("patterns have at least one unmarked leaf")
    yield from _patterns(n, len(system.seeds), len(system.operators))


def _patterns(n, num_seeds, num_ops):
    if n == 0:
        yield HOLE
        return
    for k in range(n):
        subs = list(_patterns(k, num_seeds, num_ops))
        sibs = list(enumerate_trees(n - k, num_seeds, num_ops))
        for op in range(num_ops):
            for sub in subs:
                for sib in sibs:
                    yield LinearPattern(Node(sub.tree, sib, op), (0,) + sub.mark)
                    yield LinearPattern(Node(sib, sub.tree, op), (1,) + sub.mark)


def count_patterns(n: int, num_seeds: int = 1, num_ops: int = 1) -> int:
    from .core import catalan

    return catalan(n) * (n + 1) * num_ops ** n * num_seeds ** n


# --- fronts of pattern matrices ----------------------------------------------

@dataclass(frozen=True)
class PatternEntry:
    matrix: tuple
    pattern: LinearPattern


class PatternFronts:
    """Pareto fronts (entrywise) of pattern matrices for ``|P| = 0, 1, ...``.

    For nonnegative systems the matrix of a pattern is entrywise monotone in
    every sibling vector and in the child pattern's matrix, so dominated
    siblings and dominated matrices can be dropped without losing any
    maximal diagonal entry or spectral radius.  ``fronts[0]`` holds the bare
    marked leaf (identity matrix).
    """

    def __init__(self, system: BilinearSystem, table=None):
        require_nonnegative(system, "pattern_fronts")
        self.system = system
        self.table = table if table is not None else growth_table(system, 1)
        self.fronts = [[PatternEntry(linalg.identity(system.dim), HOLE)]]
        # diagonal entries only bound the growth rate at live dimensions
        self.live = tuple(sorted(liveness_witnesses(system)))
        self._factors = {}
        self.work = 0  # candidate matrices generated so far

    def __getitem__(self, n):
        return self.fronts[n]

    def __len__(self):
        return len(self.fronts)

    def _factors_for(self, m):
        if m not in self._factors:
            self.table.extend(m)
            facs = []
            for e in self.table.front(m):
                for op_idx, op in enumerate(self.system.operators):
                    facs.append((op.left_matrix(e.vector), 0, op_idx, e.witness))
                    facs.append((op.right_matrix(e.vector), 1, op_idx, e.witness))
            self._factors[m] = facs
        return self._factors[m]

    def extend(self, N: int) -> "PatternFronts":
        for n in range(len(self.fronts), N + 1):
            level = []
            for k in range(n):
                for factor, side, op_idx, sib in self._factors_for(n - k):
                    for entry in self.fronts[k]:
                        sub = entry.pattern
                        if side == 0:
                            pat = LinearPattern(Node(sub.tree, sib, op_idx), (0,) + sub.mark)
                        else:
                            pat = LinearPattern(Node(sib, sub.tree, op_idx), (1,) + sub.mark)
                        level.append(PatternEntry(linalg.mat_mul(factor, entry.matrix), pat))
            self.work += len(level)
            self.fronts.append(_prune_keyed(level, key=lambda e: linalg.flat(e.matrix)))
        return self


def pattern_fronts(system: BilinearSystem, N: int, table=None) -> PatternFronts:
    return PatternFronts(system, table).extend(N)


@dataclass(frozen=True)
class LowerBoundStep:
    n: int
    x: object  # exact max diagonal entry over patterns of size n
    pattern: LinearPattern | None
    index: int | None
    root: float  # x^(1/n), rounded down


def lower_bound_sequence(system: BilinearSystem, N: int, fronts=None) -> list:
    """``x_n = max_i max_{|P|=n} M(P)_ii`` for ``n = 1..N`` with witnesses.

    Only live ``i`` count: a dimension that is never positive cannot be
    pumped.  Each ``x_n^(1/n)`` is then a lower bound on the growth rate.
    """
    require_nonnegative(system, "lower_bound_sequence")
    fronts = pattern_fronts(system, N) if fronts is None else fronts.extend(N)
    out = []
    for n in range(1, N + 1):
        best, wit, idx = best_diagonal(fronts[n], fronts.live)
        out.append(LowerBoundStep(n, best, wit, idx, root_down(best, n)))
    return out


def best_diagonal(entries, indices):
    """``(x, pattern, i)`` maximising ``M(P)_ii`` over ``indices``; ties go to the smallest ``i``."""
    best, wit, idx = 0, None, None
    for i in sorted(indices):
        for e in entries:
            if e.matrix[i][i] > best:
                best, wit, idx = e.matrix[i][i], e.pattern, i
    return best, wit, idx


def live_submatrix(m, live) -> tuple:
    return tuple(tuple(m[i][j] for j in live) for i in live)


def pattern_rate(system: BilinearSystem, pattern: LinearPattern, tol: float = 1e-6,
                 matrix=None, live=None) -> Enclosure:
    """Enclosure of ``rho(M(P))^(1/|P|)``, with ``M`` restricted to live dimensions."""
    if pattern.leaf_count < 1:
        raise MisuseError("the rate needs |P| >= 1")
    m = matrix if matrix is not None else pattern_matrix(system, pattern)
    live = tuple(sorted(liveness_witnesses(system))) if live is None else live
    if not live:
        return Enclosure(0.0, 0.0)
    return spectral_radius(live_submatrix(m, live), tol=tol).root(pattern.leaf_count)


def best_pattern_rate(system: BilinearSystem, N: int, fronts=None, tol: float = 1e-6,
                      certify: int = 3):
    """Best certified pattern rate over fronts up to size ``N``.

    Candidates are ranked by a floating-point eigenvalue estimate and the top
    ``certify`` are enclosed exactly.  Returns ``(enclosure, pattern)`` or
    ``(None, None)`` when every pattern matrix is nilpotent.
    """
    import numpy as np

    fronts = pattern_fronts(system, N) if fronts is None else fronts.extend(N)
    live = fronts.live
    if not live:
        return None, None
    ranked = []
    for n in range(1, N + 1):
        for e in fronts[n]:
            sub = linalg.to_float_array(live_submatrix(e.matrix, live))
            rho = float(max(abs(np.linalg.eigvals(sub))))
            if rho > 0:
                ranked.append((rho ** (1.0 / n), n, e))
    ranked.sort(key=lambda t: (-round(t[0], 9), t[1]))
    best, best_pat = None, None
    for _, _, e in ranked[:certify]:
        enc = pattern_rate(system, e.pattern, tol=tol, matrix=e.matrix, live=live)
        if best is None or enc.lo > best.lo + tol:
            best, best_pat = enc, e.pattern
    return best, best_pat


# --- dependency graph and connectors ------------------------------------------

def dependency_graph(system: BilinearSystem):
    """Digraph on dimensions with ``k -> i`` when ``c[k,i,j]`` or ``c[k,j,i]`` is nonzero."""
    import networkx as nx

    g = nx.DiGraph()
    g.add_nodes_from(range(system.dim))
    for op in system.operators:
        for k, i, j, _ in op.terms:
            g.add_edge(k, i)
            g.add_edge(k, j)
    return g


def dependency_components(system: BilinearSystem) -> list:
    import networkx as nx

    return [frozenset(c) for c in nx.strongly_connected_components(dependency_graph(system))]


def connector_pattern(system: BilinearSystem, i: int, j: int) -> LinearPattern | None:
    """A pattern with ``M(P)[i][j] > 0`` built edge by edge, or ``None``.

    An edge ``k -> a`` from ``c[k,a,b] > 0`` is realised by marking the left
    leaf of one operator node whose right sibling is a tree positive at ``b``
    (mirror image for ``c[k,b,a]``).  Only edges with a live partner count.
    """
    require_nonnegative(system, "connector_pattern")
    wit = liveness_witnesses(system)
    for t in (i, j):
        if t not in wit:
            raise LivenessError(f"dimension {t + 1} is never positive")
    edges = {}
    for op_idx, op in enumerate(system.operators):
        for k, a, b, _ in op.terms:
            if b in wit:
                edges.setdefault(k, {}).setdefault(a, LinearPattern(Node(Leaf(0), wit[b], op_idx), (0,)))
            if a in wit:
                edges.setdefault(k, {}).setdefault(b, LinearPattern(Node(wit[a], Leaf(0), op_idx), (1,)))
    # BFS over paths of length >= 1 so that i == j asks for a cycle
    parent = {}
    queue = deque()
    for nxt, pat in sorted(edges.get(i, {}).items()):
        if nxt not in parent:
            parent[nxt] = (i, pat)
            queue.append(nxt)
    while queue and j not in parent:
        cur = queue.popleft()
        for nxt, pat in sorted(edges.get(cur, {}).items()):
            if nxt not in parent:
                parent[nxt] = (cur, pat)
                queue.append(nxt)
    if j not in parent:
        return None
    steps = []
    node = j
    while True:
        prev, pat = parent[node]
        steps.append(pat)
        if prev == i:
            break
        node = prev
    result = steps[-1]
    for pat in reversed(steps[:-1]):
        result = compose(result, pat)
    return result
