"""Cycle bases, the tropical period matrix, Abel-Jacobi images and the
fundamental cycle of the box-ball dynamics.

Paths are lists of segments ``(edge_id, start, end)`` on edge copies of a
:class:`~tropbbs.curve.MetricGraph`, with ``start``/``end`` lattice
distances from the edge's ``u`` end.  A full traversal from u to v is
``(e, 0, length)``; the reverse is ``(e, length, 0)``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import DisconnectedPoints, SingularPeriodMatrix
from .curve import GPoint, MetricGraph

Segment = tuple  # (edge_id, start, end)


def pairing(p1: Sequence[Segment], p2: Sequence[Segment]) -> Fraction:
    """Signed length of the common support of two oriented paths."""
    total = Fraction(0)
    for e1, a1, b1 in p1:
        s1 = 1 if b1 > a1 else -1
        lo1, hi1 = min(a1, b1), max(a1, b1)
        for e2, a2, b2 in p2:
            if e1 != e2:
                continue
            lo, hi = max(lo1, min(a2, b2)), min(hi1, max(a2, b2))
            if hi > lo:
                total += (hi - lo) * s1 * (1 if b2 > a2 else -1)
    return total


def reverse(path):
    return [(e, b, a) for e, a, b in reversed(path)]


@dataclass
class SpanningTree:
    graph: MetricGraph
    parent: dict  # vertex -> (parent vertex, edge id) or None at roots
    depth: dict
    non_tree: list  # edge ids

    def path(self, a: int, b: int) -> list:
        """Tree path from vertex a to vertex b as full-edge segments."""
        if self._root(a) != self._root(b):
            raise DisconnectedPoints(f"vertices {a} and {b} lie in different components")
        up_a, up_b = [], []
        while self.depth[a] > self.depth[b]:
            a = self._step(a, up_a)
        while self.depth[b] > self.depth[a]:
            b = self._step(b, up_b)
        while a != b:
            a = self._step(a, up_a)
            b = self._step(b, up_b)
        return up_a + reverse(up_b)

    def _step(self, v, acc):
        pv, eid = self.parent[v]
        e = self.graph.edges[eid]
        acc.append((eid, Fraction(0), e.length) if e.u == v else (eid, e.length, Fraction(0)))
        return pv

    def _root(self, v):
        while self.parent[v] is not None:
            v = self.parent[v][0]
        return v


def spanning_tree(g: MetricGraph, order: Sequence[int] | None = None) -> SpanningTree:
    """BFS spanning forest; edges are tried in ``order`` (default: edge ids,
    which follow the lexicographic vertex order, then the copy index)."""
    order = list(range(len(g.edges))) if order is None else list(order)
    rank = {eid: k for k, eid in enumerate(order)}
    adj = {v: [] for v in range(len(g.vertices))}
    for eid in order:
        e = g.edges[eid]
        adj[e.u].append((e.v, eid))
        adj[e.v].append((e.u, eid))
    parent, depth, used = {}, {}, set()
    for root in range(len(g.vertices)):
        if root in parent:
            continue
        parent[root], depth[root] = None, 0
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w, eid in sorted(adj[v], key=lambda t: rank[t[1]]):
                if w not in parent:
                    parent[w] = (v, eid)
                    depth[w] = depth[v] + 1
                    used.add(eid)
                    queue.append(w)
    non_tree = [eid for eid in order if eid not in used]
    return SpanningTree(g, parent, depth, non_tree)


@dataclass
class PeriodData:
    graph: MetricGraph
    basis: list  # list of paths
    B: list  # g x g Fractions
    tree: SpanningTree

    @property
    def genus(self) -> int:
        return len(self.basis)


def fundamental_cycles(tree: SpanningTree) -> list:
    g = tree.graph
    out = []
    for eid in tree.non_tree:
        e = g.edges[eid]
        out.append([(eid, Fraction(0), e.length)] + tree.path(e.v, e.u))
    return out


def gram(basis) -> list:
    return [[pairing(a, b) for b in basis] for a in basis]


def period_matrix(g: MetricGraph, basis: Sequence | None = None, order=None) -> PeriodData:
    """B = ((beta_i, beta_j)) on the spanning-tree basis, or on ``basis``."""
    tree = spanning_tree(g, order)
    if basis is None:
        basis = fundamental_cycles(tree)
    basis = [list(b) for b in basis]
    return PeriodData(g, basis, gram(basis), tree)


# ---------------------------------------------------------------------------
# Abel-Jacobi


def route(pd: PeriodData, a: GPoint, b: GPoint) -> list:
    """Path from a to b: along a's edge to its anchor, through the tree, then
    out along b's edge.  Ray stubs enter at their origin (the unbounded part
    pairs to zero)."""
    g = pd.graph
    if a.kind == "edge" and b.kind == "edge" and a.index == b.index:
        return [(a.index, a.t, b.t)] if a.t != b.t else []
    out = []
    if a.kind == "edge":
        out.append((a.index, a.t, Fraction(0)))
    out += pd.tree.path(a.anchor(g), b.anchor(g))
    if b.kind == "edge":
        out.append((b.index, Fraction(0), b.t))
    return [s for s in out if s[1] != s[2]]


def abel_jacobi(pd: PeriodData, src: GPoint, dst: GPoint, path=None) -> tuple:
    """((gamma, beta_i))_i for a path gamma from src to dst (``path`` may be
    given explicitly; otherwise :func:`route`)."""
    if path is None:
        path = route(pd, src, dst)
    return tuple(pairing(path, b) for b in pd.basis)


@dataclass
class TranslationVectors:
    T: tuple
    N: tuple
    M: list
    paths: dict = field(default_factory=dict)


def translation_vectors(pd: PeriodData, sp, paths: dict | None = None) -> TranslationVectors:
    """T = F_{P1}(P0), N = F_{P2}(P0), M[m] = F_{P3[m]}(P0), each the pairing
    vector of a path from the base point to P0.

    ``paths`` may override routes with keys "T", "N" and ("M", m)."""
    paths = dict(paths or {})
    used = {}

    def vec(key, base):
        p = paths.get(key)
        if p is None:
            p = route(pd, base, sp.P0)
        used[key] = p
        return abel_jacobi(pd, base, sp.P0, p)

    T = vec("T", sp.P1)
    N = vec("N", sp.P2)
    M = [vec(("M", m), p3) for m, p3 in enumerate(sp.P3)]
    return TranslationVectors(T, N, M, used)


# ---------------------------------------------------------------------------
# exact linear algebra


def solve(B, v) -> list:
    """Exact solution of B x = v by Gaussian elimination over Q."""
    n = len(B)
    A = [[Fraction(x) for x in row] + [Fraction(v[i])] for i, row in enumerate(B)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            raise SingularPeriodMatrix("period matrix is singular")
        A[c], A[piv] = A[piv], A[c]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c] / A[c][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [A[i][n] / A[i][i] for i in range(n)]


def det(B) -> Fraction:
    n = len(B)
    A = [[Fraction(x) for x in row] for row in B]
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        d *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return d


def is_positive_definite(B) -> bool:
    """Sylvester: all leading principal minors positive."""
    return all(det([row[:k] for row in B[:k]]) > 0 for k in range(1, len(B) + 1))


def lattice_coords(B, v):
    """k with B k = v, or None when v is not in B Z^g."""
    if not B:
        return []
    k = solve(B, v)
    return k if all(x.denominator == 1 for x in k) else None


def in_lattice(B, v) -> bool:
    return lattice_coords(B, v) is not None


def fundamental_cycle(pd_or_B, T, d: int) -> tuple:
    """(F'', F'): F'' the order of T in R^g / B Z^g, F' = lcm(F'', d)."""
    B = pd_or_B.B if isinstance(pd_or_B, PeriodData) else pd_or_B
    if not B:
        Fpp = 1
    else:
        Fpp = 1
        for x in solve(B, T):
            Fpp = lcm(Fpp, x.denominator)
    return Fpp, lcm(Fpp, d)


# ---------------------------------------------------------------------------
# basis changes


def edge_vector(path, n_edges) -> list:
    """Net signed traversal count of each edge copy (closed paths only use
    full edges, so counts are integers)."""
    g = [Fraction(0)] * n_edges
    for e, a, b in path:
        g[e] += b - a
    return g


def basis_change(pd: PeriodData, other_basis) -> list:
    """Integer matrix U with other_basis[j] = sum_i U[i][j] basis[i] in
    homology; requires pd.basis to be the fundamental cycles of pd.tree."""
    g = pd.graph
    lengths = [e.length for e in g.edges]
    U = []
    for eid in pd.tree.non_tree:
        row = []
        for cyc in other_basis:
            row.append(edge_vector(cyc, len(lengths))[eid] / lengths[eid])
        U.append(row)
    return U


def congruent(B1, B2, U) -> bool:
    """B2 == U^T B1 U."""
    n = len(U)
    m = len(U[0]) if U else 0
    for i in range(m):
        for j in range(m):
            s = sum(U[a][i] * B1[a][b] * U[b][j] for a in range(n) for b in range(n))
            if s != B2[i][j]:
                return False
    return True
