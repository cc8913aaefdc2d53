"""Min-plus scalars, matrices and bivariate tropical polynomials.

Values are exact: finite entries are :class:`fractions.Fraction` and the
tropical zero is ``INF`` (``math.inf``).  ``INF`` is never used as a number
in sums; every operation tests for it explicitly.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import Acyclic, NegativeCycle, NoFiniteEigenvector, SizeMismatch

INF = math.inf


def rational(x) -> Fraction:
    """Coerce ``x`` (int, Fraction, decimal or ``"p/q"`` string) to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"not a finite rational: {x!r}")
        return Fraction(x).limit_denominator()
    return Fraction(x)


def tval(x):
    """Coerce a tropical scalar: ``INF``/``None``/``"inf"`` or a rational."""
    if x is None or x == INF or (isinstance(x, str) and x.strip().lower() in ("inf", "+inf", "oo")):
        return INF
    return rational(x)


def tadd(a, b):
    """Tropical multiplication (ordinary addition with absorbing ``INF``)."""
    if a == INF or b == INF:
        return INF
    return a + b


def fmt_rational(x) -> str:
    if x == INF:
        return "inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# matrices


class TropMatrix:
    """Square matrix over the min-plus semiring."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(tval(v) for v in r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise SizeMismatch("tropical matrix must be square and non-empty")
        self.rows = rows

    @classmethod
    def identity(cls, n: int) -> "TropMatrix":
        return cls([[Fraction(0) if i == j else INF for j in range(n)] for i in range(n)])

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, TropMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __matmul__(self, other: "TropMatrix") -> "TropMatrix":
        return tmat_mul(self, other)

    def __repr__(self):
        body = "; ".join(" ".join(fmt_rational(v) for v in r) for r in self.rows)
        return f"TropMatrix([{body}])"

    def shifted(self, c) -> "TropMatrix":
        """Subtract the scalar ``c`` from every finite entry."""
        return TropMatrix([[v if v == INF else v - c for v in r] for r in self.rows])


def tmat_mul(a: TropMatrix, b: TropMatrix) -> TropMatrix:
    if a.size != b.size:
        raise SizeMismatch(f"cannot multiply {a.size}x{a.size} by {b.size}x{b.size}")
    n = a.size
    cols = list(zip(*b.rows))
    out = []
    for r in a.rows:
        row = []
        for c in cols:
            best = INF
            for x, y in zip(r, c):
                if x != INF and y != INF and x + y < best:
                    best = x + y
            row.append(best)
        out.append(row)
    return TropMatrix(out)


def tmat_prod(mats: Sequence[TropMatrix]) -> TropMatrix:
    out = mats[0]
    for m in mats[1:]:
        out = tmat_mul(out, m)
    return out


def _closure(a: TropMatrix) -> list[list]:
    """Floyd-Warshall least walk weights (paths of length >= 1)."""
    n = a.size
    d = [list(r) for r in a.rows]
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == INF:
                continue
            di = d[i]
            for j in range(n):
                dkj = dk[j]
                if dkj != INF and dik + dkj < di[j]:
                    di[j] = dik + dkj
        if any(d[i][i] != INF and d[i][i] < 0 for i in range(n)):
            raise NegativeCycle("weighted digraph has a cycle of negative weight")
    return d


def kleene_star(a: TropMatrix) -> TropMatrix:
    """Least walk weights including the empty walk: E ⊕ a ⊕ a² ⊕ ..."""
    d = _closure(a)
    for i in range(a.size):
        if d[i][i] == INF or d[i][i] > 0:
            d[i][i] = Fraction(0)
    return TropMatrix(d)


def kleene_plus(a: TropMatrix) -> TropMatrix:
    """a ⊕ a² ⊕ ...  (walks of length at least one)."""
    return TropMatrix(_closure(a))


def min_cycle_mean(a: TropMatrix) -> Fraction:
    """Minimum mean weight over directed cycles (Karp's recurrence).

    Entry ``a[i, j]`` is the weight of the arc i -> j.
    """
    n = a.size
    # D[k][v]: least weight of a k-arc walk ending at v, starting anywhere
    D = [[Fraction(0)] * n]
    for _ in range(n):
        prev = D[-1]
        cur = []
        for v in range(n):
            best = INF
            for u in range(n):
                w = a.rows[u][v]
                if w != INF and prev[u] != INF and prev[u] + w < best:
                    best = prev[u] + w
            cur.append(best)
        D.append(cur)
    best = None
    for v in range(n):
        if D[n][v] == INF:
            continue
        worst = None
        for k in range(n):
            if D[k][v] == INF:
                continue
            r = Fraction(D[n][v] - D[k][v], n - k)
            if worst is None or r > worst:
                worst = r
        if best is None or worst < best:
            best = worst
    if best is None:
        raise Acyclic("digraph of finite entries has no cycle")
    return best


class Eigen(NamedTuple):
    vector: tuple
    critical_classes: tuple  # tuple of tuples of node indices

    @property
    def ambiguous(self) -> bool:
        return len(self.critical_classes) > 1


def critical_classes(a: TropMatrix, lam) -> tuple:
    """Strongly connected classes of the critical graph of ``a`` at ``lam``."""
    plus = kleene_plus(a.shifted(lam))
    n = a.size
    crit = [i for i in range(n) if plus[i, i] == 0]
    classes, seen = [], set()
    for i in crit:
        if i in seen:
            continue
        cls = tuple(j for j in crit if j == i or (plus[i, j] != INF and plus[j, i] != INF and plus[i, j] + plus[j, i] == 0))
        seen.update(cls)
        classes.append(cls)
    return tuple(classes)


def critical_columns(a: TropMatrix, lam) -> list[tuple]:
    """One eigenvector per critical class: the class representative's column
    of (a - lam)*, shifted so its first finite entry is 0."""
    star = kleene_star(a.shifted(lam))
    cols = []
    for cls in critical_classes(a, lam):
        j = cls[0]
        col = [star[i, j] for i in range(a.size)]
        ref = next((v for v in col if v != INF), 0)
        cols.append(tuple(v if v == INF else v - ref for v in col))
    return cols


def trop_eigenvector(a: TropMatrix, lam) -> Eigen:
    """Finite vector m with min_j(a[i, j] + m[j]) = lam + m[i], normalized m[0] = 0.

    Built as the entrywise minimum of the normalized critical columns of
    (a - lam)*.  When there are several critical classes the eigenspace is
    not a single ray; ``Eigen.ambiguous`` is then set and callers should
    validate the choice downstream.
    """
    lam = rational(lam)
    classes = critical_classes(a, lam)
    cols = critical_columns(a, lam)
    if not cols:
        raise NoFiniteEigenvector("no critical node at the given eigenvalue")
    m = [min(c[i] for c in cols) for i in range(a.size)]
    if any(v == INF for v in m):
        raise NoFiniteEigenvector("critical columns do not reach every node")
    m0 = m[0]
    return Eigen(tuple(v - m0 for v in m), classes)


def eigen_residual(a: TropMatrix, m: Sequence) -> list:
    """Per-row value of min_j(a[i, j] + m[j]) - m[i]."""
    out = []
    for i, r in enumerate(a.rows):
        best = min((x + y for x, y in zip(r, m) if x != INF), default=INF)
        out.append(best if best == INF else best - m[i])
    return out


# ---------------------------------------------------------------------------
# polynomials


class TropPoly1(dict):
    """Univariate min-plus polynomial ``X -> min_i(c_i + i X)``: maps i to c_i."""

    def __call__(self, x):
        return min(c + i * x for i, c in self.items())


def trop_roots(p: Mapping[int, Fraction]) -> list[tuple[Fraction, int]]:
    """Corner points of ``X -> min_i(c_i + i X)`` with their multiplicities,
    sorted by increasing root."""
    pts = sorted((i, c) for i, c in p.items() if c != INF)
    if len(pts) < 2:
        return []
    hull: list = []
    for pt in pts:
        # keep the lower hull: successive slopes strictly increasing
        while len(hull) >= 2:
            (i0, c0), (i1, c1) = hull[-2], hull[-1]
            if (c1 - c0) * (pt[0] - i1) >= (pt[1] - c1) * (i1 - i0):
                hull.pop()
            else:
                break
        hull.append(pt)
    roots = []
    for (i0, c0), (i1, c1) in zip(hull, hull[1:]):
        roots.append((Fraction(c0 - c1, i1 - i0), i1 - i0))
    roots.sort()
    return roots


class TropPoly2:
    """Bivariate min-plus polynomial ``(X, Y) -> min c(i, j) + i X + j Y``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[tuple[int, int], object]):
        self.coeffs = {(int(i), int(j)): rational(c) for (i, j), c in coeffs.items() if tval(c) != INF}

    def __eq__(self, other):
        return isinstance(other, TropPoly2) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        return f"TropPoly2({ {k: fmt_rational(v) for k, v in sorted(self.coeffs.items())} })"

    def __getitem__(self, ij):
        return self.coeffs.get(ij, INF)

    def __contains__(self, ij):
        return ij in self.coeffs

    def __len__(self):
        return len(self.coeffs)

    @property
    def support(self) -> list[tuple[int, int]]:
        return sorted(self.coeffs)

    def __call__(self, X, Y):
        return min(c + i * X + j * Y for (i, j), c in self.coeffs.items())

    def active(self, X, Y) -> list[tuple[int, int]]:
        """Support points attaining the minimum at (X, Y)."""
        v = self(X, Y)
        return sorted(w for w, c in self.coeffs.items() if c + w[0] * X + w[1] * Y == v)

    def restrict_y(self, A) -> TropPoly1:
        return restrict_y(self, A)

    def to_text(self) -> str:
        return "".join(f"{i} {j} {fmt_rational(c)}\n" for (i, j), c in sorted(self.coeffs.items()))

    @classmethod
    def from_text(cls, text: str) -> "TropPoly2":
        coeffs = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            i, j, c = line.split()
            coeffs[int(i), int(j)] = rational(c)
        return cls(coeffs)


def restrict_y(p: TropPoly2, A) -> TropPoly1:
    """Univariate polynomial X -> p(X, A)."""
    A = rational(A)
    out = TropPoly1()
    for (i, j), c in p.coeffs.items():
        v = c + j * A
        if i not in out or v < out[i]:
            out[i] = v
    return out
