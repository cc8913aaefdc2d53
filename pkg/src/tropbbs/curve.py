"""Plane tropical curves: corner locus from the regular subdivision, the
multiplicity-split metric graph and the special points used by the
Abel-Jacobi computations.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional

from .errors import DegenerateSupport, PointNotOnCurve
from .trop import TropPoly2, fmt_rational, restrict_y, trop_roots

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    weight: int
    length: Fraction
    direction: tuple  # primitive, from u toward v


@dataclass(frozen=True)
class Ray:
    origin: int
    direction: tuple  # primitive
    weight: int


@dataclass
class CornerLocus:
    vertices: list  # (Fraction, Fraction)
    edges: list
    rays: list
    diagnostics: list = field(default_factory=list)
    dual_cells: list = field(default_factory=list)  # support points of the cell dual to each vertex

    def balancing(self) -> dict:
        """Vertex index -> sum of weight * primitive outgoing direction."""
        acc = {i: [0, 0] for i in range(len(self.vertices))}
        for e in self.edges:
            dx, dy = e.direction
            acc[e.u][0] += e.weight * dx
            acc[e.u][1] += e.weight * dy
            acc[e.v][0] -= e.weight * dx
            acc[e.v][1] -= e.weight * dy
        for r in self.rays:
            acc[r.origin][0] += r.weight * r.direction[0]
            acc[r.origin][1] += r.weight * r.direction[1]
        return {i: tuple(v) for i, v in acc.items()}

    def is_balanced(self) -> bool:
        return all(v == (0, 0) for v in self.balancing().values())


def _primitive(dx, dy):
    g = gcd(dx, dy)
    return (dx // g, dy // g) if g else (0, 0)


def _hull2d(pts):
    """Strict convex hull (counter-clockwise, no collinear points)."""
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _lower_facets(lifted):
    """Lower-hull facets of integer points (i, j, c) as (normal, cell) pairs.

    A facet normal (nx, ny, nz) has nz > 0 and every point on or above it.
    """
    n = len(lifted)
    seen = {}
    for a in range(n):
        p = lifted[a]
        for b in range(a + 1, n):
            q = lifted[b]
            u = (q[0] - p[0], q[1] - p[1], q[2] - p[2])
            for c in range(b + 1, n):
                r = lifted[c]
                v = (r[0] - p[0], r[1] - p[1], r[2] - p[2])
                nx = u[1] * v[2] - u[2] * v[1]
                ny = u[2] * v[0] - u[0] * v[2]
                nz = u[0] * v[1] - u[1] * v[0]
                if nz == 0:
                    continue  # collinear in the plane of exponents
                if nz < 0:
                    nx, ny, nz = -nx, -ny, -nz
                g = gcd(gcd(nx, ny), nz)
                key = (nx // g, ny // g, nz // g)
                off = key[0] * p[0] + key[1] * p[1] + key[2] * p[2]
                if (key, off) in seen:
                    continue
                if all(key[0] * s[0] + key[1] * s[1] + key[2] * s[2] >= off for s in lifted):
                    cell = [s[:2] for s in lifted if key[0] * s[0] + key[1] * s[1] + key[2] * s[2] == off]
                    seen[(key, off)] = cell
    return seen


def corner_locus(p: TropPoly2) -> CornerLocus:
    """Vertices, weighted bounded edges and weighted rays of the curve of p."""
    support = p.support
    if len(support) < 2:
        raise DegenerateSupport("need at least two support points")
    scale = 1
    for c in p.coeffs.values():
        scale = scale * c.denominator // gcd(scale, c.denominator)
    lifted = [(i, j, int(p.coeffs[(i, j)] * scale)) for (i, j) in support]
    facets = _lower_facets(lifted)
    if not facets:
        raise DegenerateSupport("support is collinear: the curve is a family of parallel lines")

    cells = []
    for (nvec, _), cell in facets.items():
        nx, ny, nz = nvec
        vertex = (Fraction(nx, nz * scale), Fraction(ny, nz * scale))
        cells.append((vertex, cell))
    cells.sort()
    vertices = [c[0] for c in cells]
    diagnostics = []
    edge_cells = {}
    for idx, (_, cell) in enumerate(cells):
        hull = _hull2d(cell)
        if len(hull) > 3 or len(cell) > len(hull):
            diagnostics.append(f"non-simplicial cell at vertex {idx} with {len(cell)} support points")
        for k in range(len(hull)):
            a, b = hull[k], hull[(k + 1) % len(hull)]
            edge_cells.setdefault(frozenset((a, b)), []).append((idx, (a, b), hull))

    edges, rays = [], []
    for key, owners in sorted(edge_cells.items(), key=lambda kv: sorted(kv[0])):
        (idx, (a, b), hull) = owners[0]
        ex, ey = b[0] - a[0], b[1] - a[1]
        w = gcd(ex, ey)
        if len(owners) == 2:
            i1, i2 = sorted((owners[0][0], owners[1][0]))
            dx = vertices[i2][0] - vertices[i1][0]
            dy = vertices[i2][1] - vertices[i1][1]
            u = _primitive(-ey, ex)
            if u[0] * dx + u[1] * dy < 0:
                u = (-u[0], -u[1])
            length = (u[0] * dx + u[1] * dy) / (u[0] ** 2 + u[1] ** 2)
            edges.append(Edge(i1, i2, w, Fraction(length), u))
        elif len(owners) == 1:
            # ray along the normal of the boundary edge pointing into the cell
            u = _primitive(-ey, ex)
            cx = sum(h[0] for h in hull) - len(hull) * a[0]
            cy = sum(h[1] for h in hull) - len(hull) * a[1]
            if u[0] * cx + u[1] * cy < 0:
                u = (-u[0], -u[1])
            rays.append(Ray(idx, u, w))
        else:
            raise DegenerateSupport("subdivision edge shared by more than two cells")
    edges.sort(key=lambda e: (vertices[e.u], vertices[e.v]))
    rays.sort(key=lambda r: (vertices[r.origin], r.direction))
    return CornerLocus(vertices, edges, rays, diagnostics, [sorted(c[1]) for c in cells])


# ---------------------------------------------------------------------------
# metric graph


@dataclass(frozen=True)
class EdgeCopy:
    id: int
    u: int
    v: int
    length: Fraction
    parent: int  # index into CornerLocus.edges
    copy: int


@dataclass(frozen=True)
class Stub:
    id: int
    origin: int
    direction: tuple
    parent: int  # index into CornerLocus.rays
    copy: int


@dataclass
class MetricGraph:
    locus: CornerLocus
    edges: list
    stubs: list

    @property
    def vertices(self):
        return self.locus.vertices

    @property
    def components(self) -> int:
        parent = list(range(len(self.vertices)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e in self.edges:
            parent[find(e.u)] = find(e.v)
        return len({find(i) for i in range(len(parent))})

    @property
    def genus(self) -> int:
        return len(self.edges) - len(self.vertices) + self.components

    def copies_of(self, parent: int) -> list:
        return [e for e in self.edges if e.parent == parent]


def split_multiplicity(g0: CornerLocus) -> MetricGraph:
    """Replace each weight-w edge or ray by w parallel unit copies."""
    edges, stubs = [], []
    for k, e in enumerate(g0.edges):
        for c in range(e.weight):
            edges.append(EdgeCopy(len(edges), e.u, e.v, e.length, k, c))
    for k, r in enumerate(g0.rays):
        for c in range(r.weight):
            stubs.append(Stub(len(stubs), r.origin, r.direction, k, c))
    return MetricGraph(g0, edges, stubs)


# ---------------------------------------------------------------------------
# points on the graph


@dataclass(frozen=True)
class GPoint:
    """A point of the metric graph: a vertex, a point at lattice distance t
    from ``u`` along an edge copy, or a point on a ray stub (t from the
    origin, possibly infinite)."""

    kind: str  # "vertex" | "edge" | "stub"
    index: int
    t: Fraction = Fraction(0)

    def anchor(self, g: MetricGraph) -> int:
        if self.kind == "vertex":
            return self.index
        if self.kind == "edge":
            return g.edges[self.index].u
        return g.stubs[self.index].origin

    def coords(self, g: MetricGraph):
        if self.kind == "vertex":
            return g.vertices[self.index]
        if self.kind == "edge":
            e = g.edges[self.index]
            d = g.locus.edges[e.parent].direction
            x, y = g.vertices[e.u]
            return (x + self.t * d[0], y + self.t * d[1])
        s = g.stubs[self.index]
        x, y = g.vertices[s.origin]
        return (x + self.t * s.direction[0], y + self.t * s.direction[1])

    def to_json(self, g: MetricGraph) -> dict:
        out = {"kind": self.kind, "index": self.index}
        if self.kind == "edge":
            e = g.edges[self.index]
            out["t"] = fmt_rational(self.t)
            out["coords"] = [fmt_rational(c) for c in self.coords(g)]
            out["edge"] = [e.u, e.v, e.copy]
        elif self.kind == "vertex":
            out["coords"] = [fmt_rational(c) for c in self.coords(g)]
        else:
            s = g.stubs[self.index]
            out["origin"] = [fmt_rational(c) for c in g.vertices[s.origin]]
            out["direction"] = list(s.direction)
            out["copy"] = s.copy
        return out


def locate(g: MetricGraph, X, Y, copy: int = 0) -> GPoint:
    """Place the finite point (X, Y) on the graph (copy ``copy`` of a
    multiple edge)."""
    X, Y = Fraction(X), Fraction(Y)
    for i, v in enumerate(g.vertices):
        if v == (X, Y):
            return GPoint("vertex", i)
    for k, e in enumerate(g.locus.edges):
        t = _param_on(g.vertices[e.u], e.direction, X, Y)
        if t is not None and 0 < t < e.length:
            copies = g.copies_of(k)
            return GPoint("edge", copies[min(copy, len(copies) - 1)].id, t)
    for s in g.stubs:
        t = _param_on(g.vertices[s.origin], s.direction, X, Y)
        if t is not None and t > 0:
            return GPoint("stub", s.id, t)
    raise PointNotOnCurve(f"({fmt_rational(X)}, {fmt_rational(Y)}) is not on the curve")


def _param_on(origin, d, X, Y):
    dx, dy = X - origin[0], Y - origin[1]
    if dx * d[1] != dy * d[0]:
        return None
    t = dx / d[0] if d[0] else dy / d[1]
    return t


@dataclass
class SpecialPoints:
    G: Fraction
    P0: GPoint
    P1: GPoint
    P2: GPoint
    P3: list
    flags: list = field(default_factory=list)

    def to_json(self, g: MetricGraph) -> dict:
        return {
            "G": fmt_rational(self.G),
            "P0": self.P0.to_json(g),
            "P1": self.P1.to_json(g),
            "P2": self.P2.to_json(g),
            "P3": [p.to_json(g) for p in self.P3],
            "flags": list(self.flags),
        }


def locate_special_points(s, sd, g: MetricGraph) -> SpecialPoints:
    """P0 toward (-inf, -inf), P1 = (G, A), P2 toward (+inf, B) and
    P3[m] toward (H_m, +inf)."""
    flags = []
    roots = trop_roots(restrict_y(sd.charpoly_trop, s.A))
    if not roots:
        raise PointNotOnCurve(f"no point of the curve at height {fmt_rational(s.A)}")
    G = roots[-1][0]
    P1 = locate(g, G, s.A)

    N1, M1 = s.N // sd.d, s.M // sd.d
    down = [st for st in g.stubs if st.direction[0] < 0 and st.direction[1] < 0]
    if not down:
        raise PointNotOnCurve("no ray toward (-inf, -inf)")
    preferred = [st for st in down if st.direction == (-N1, -M1)] or down
    if len({st.origin for st in preferred}) > 1:
        flags.append("P0 ambiguous: several rays toward (-inf, -inf)")
    P0 = GPoint("stub", preferred[0].id)

    right = [st for st in g.stubs if st.direction == (1, 0) and g.vertices[st.origin][1] == s.B]
    if not right:
        raise PointNotOnCurve(f"no horizontal ray at height {fmt_rational(s.B)}")
    if len({st.origin for st in right}) > 1:
        flags.append("P2 ambiguous")
    P2 = GPoint("stub", right[0].id)

    P3, used = [], set()
    for m, h in enumerate(s.H):
        up = [st for st in g.stubs if st.direction == (0, 1) and g.vertices[st.origin][0] == h]
        free = [st for st in up if st.id not in used]
        if not up:
            raise PointNotOnCurve(f"no vertical ray at abscissa {fmt_rational(h)} (m={m + 1})")
        pick = free[0] if free else up[0]
        used.add(pick.id)
        P3.append(GPoint("stub", pick.id))
    return SpecialPoints(G, P0, P1, P2, P3, flags)


def curve_to_json(g: MetricGraph, sp: Optional[SpecialPoints] = None) -> dict:
    loc = g.locus
    pt = lambda v: [fmt_rational(v[0]), fmt_rational(v[1])]
    doc = {
        "vertices": [pt(v) for v in loc.vertices],
        "edges": [
            {"from": pt(loc.vertices[e.u]), "to": pt(loc.vertices[e.v]), "weight": e.weight, "length": fmt_rational(e.length)}
            for e in loc.edges
        ],
        "rays": [{"origin": pt(loc.vertices[r.origin]), "direction": list(r.direction), "weight": r.weight} for r in loc.rays],
        "genus": g.genus,
    }
    doc["special_points"] = sp.to_json(g) if sp is not None else None
    return doc
