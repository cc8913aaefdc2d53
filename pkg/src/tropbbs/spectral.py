"""Lax matrices, the exact characteristic polynomial over a formal parameter
q (standing for exp(-1/eps)) and its tropicalization.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import NamedTuple

from .errors import CancellationDetected, NonIntegerState
from .trop import TropPoly2, fmt_rational


class FormalPoly:
    """Polynomial in x, y, q with integer coefficients.

    ``terms`` maps exponent triples ``(i, j, k)`` of ``x^i y^j q^k`` to nonzero
    ints.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, c):
        return cls({(0, 0, 0): c})

    @classmethod
    def monomial(cls, i=0, j=0, k=0, c=1):
        return cls({(i, j, k): c})

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return FormalPoly(out)

    def __neg__(self):
        return FormalPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self.terms or not other.terms:
            return FormalPoly()
        out = {}
        for (a, b, c), u in self.terms.items():
            for (d, e, f), v in other.terms.items():
                key = (a + d, b + e, c + f)
                out[key] = out.get(key, 0) + u * v
        return FormalPoly(out)

    def __eq__(self, other):
        return isinstance(other, FormalPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"FormalPoly({self.to_text()!r})"

    def coefficient(self, i, j) -> dict:
        """Coefficient of x^i y^j as a map q-degree -> int."""
        return {k: c for (a, b, k), c in self.terms.items() if a == i and b == j}

    def degree(self, var: int) -> int:
        return max((e[var] for e in self.terms), default=-1)

    def to_text(self) -> str:
        """Sorted monomial list, one "c x^i y^j q^k" term per line."""
        lines = []
        for (i, j, k), c in sorted(self.terms.items(), key=lambda t: (-t[0][0], -t[0][1], t[0][2])):
            lines.append(f"{c} x^{i} y^{j} q^{k}")
        return "\n".join(lines)


@dataclass
class SpectralData:
    charpoly_exact: FormalPoly
    charpoly_trop: TropPoly2
    N: int
    M: int
    scale: int = 1  # q-degrees are in units of 1/scale
    d: int = field(init=False)

    def __post_init__(self):
        self.d = gcd(self.N, self.M)


def _lcd(s):
    den = s.A.denominator
    for row in s.W:
        for v in row:
            den = den * v.denominator // gcd(den, v.denominator)
    return den


def build_lax(s, scale=None) -> list:
    """L_n = diag(q^W[n][m]) + S with S = superdiagonal ones plus y at (M, 1).

    Rational states are scaled by ``scale`` (default: the common denominator)
    so that every exponent is an integer.  Negative W (which evolution can
    produce) gives negative q exponents; the entries are Laurent in q.
    """
    if scale is None:
        scale = _lcd(s)
    M = s.M
    out = []
    for row in s.W:
        L = [[FormalPoly() for _ in range(M)] for _ in range(M)]
        for m, w in enumerate(row):
            e = w * scale
            if e.denominator != 1:
                raise NonIntegerState(f"W value {fmt_rational(w)} is not a multiple of 1/{scale}")
            L[m][m] = FormalPoly.monomial(k=int(e))
        for i in range(M - 1):
            L[i][i + 1] = L[i][i + 1] + FormalPoly.const(1)
        L[M - 1][0] = L[M - 1][0] + FormalPoly.monomial(j=1)
        out.append(L)
    return out


def _matmul(a, b):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for k in range(n):
            acc = FormalPoly()
            for j in range(n):
                if a[i][j] and b[j][k]:
                    acc = acc + a[i][j] * b[j][k]
            row.append(acc)
        out.append(row)
    return out


def monodromy(s, scale=None):
    """X_1 = L_N ... L_2 L_1."""
    Ls = build_lax(s, scale)
    X = Ls[0]
    for L in Ls[1:]:
        X = _matmul(L, X)
    return X


def _det(mat):
    """Laplace expansion along rows, memoized over the remaining columns."""
    n = len(mat)
    memo = {}

    def sub(r, cols):
        if r == n:
            return FormalPoly.const(1)
        key = cols
        if key in memo:
            return memo[key]
        acc = FormalPoly()
        sign = 1
        for idx, c in enumerate(cols):
            entry = mat[r][c]
            if entry:
                minor = sub(r + 1, cols[:idx] + cols[idx + 1:])
                if minor:
                    term = entry * minor
                    acc = acc + (term if sign > 0 else -term)
            sign = -sign
        memo[key] = acc
        return acc

    return sub(0, tuple(range(n)))


def char_poly_exact(s, scale=None) -> FormalPoly:
    """det(X_1(y) - x E) with exponents of q in units of 1/scale."""
    X = monodromy(s, scale)
    M = len(X)
    for i in range(M):
        X[i][i] = X[i][i] - FormalPoly.monomial(i=1)
    return _det(X)


def tropicalize(p: FormalPoly, scale=1) -> TropPoly2:
    """c(i, j) = least q-degree in the coefficient of x^i y^j (over scale).

    The coefficient of each x^i y^j is, up to one overall sign, a positive
    polynomial in the V's; a sign change inside one coefficient therefore
    means a term cancelled somewhere and is reported.
    """
    by_ij = {}
    for (i, j, k), c in p.terms.items():
        by_ij.setdefault((i, j), []).append((k, c))
    coeffs = {}
    for ij, terms in by_ij.items():
        signs = {c > 0 for _, c in terms}
        if len(signs) > 1:
            raise CancellationDetected(f"mixed signs in the coefficient of x^{ij[0]} y^{ij[1]}")
        coeffs[ij] = Fraction(min(k for k, _ in terms), scale)
    return TropPoly2(coeffs)


def spectral_data(s) -> SpectralData:
    scale = _lcd(s)
    phi = char_poly_exact(s, scale)
    return SpectralData(phi, tropicalize(phi, scale), s.N, s.M, scale)


# ---------------------------------------------------------------------------
# fast lower bound


def _trop_entries(X):
    """Each entry of X - xE as a map (i, j) -> least q-degree."""
    M = len(X)
    out = []
    for r in range(M):
        row = []
        for c in range(M):
            d = {}
            for (i, j, k), _ in X[r][c].terms.items():
                if (i, j) not in d or k < d[(i, j)]:
                    d[(i, j)] = k
            if r == c:
                d[(1, 0)] = min(d.get((1, 0), 0), 0)
            row.append(d)
        out.append(row)
    return out


def _conv(a, b):
    out = {}
    for (i, j), u in a.items():
        for (k, l), v in b.items():
            key = (i + k, j + l)
            if key not in out or u + v < out[key]:
                out[key] = u + v
    return out


def permanent_bound(s, scale=None) -> TropPoly2:
    """Min-plus permanent of X - xE tracking bidegrees; ignores signs, so each
    coefficient is a lower bound of the exact valuation."""
    if scale is None:
        scale = _lcd(s)
    T = _trop_entries(monodromy(s, scale))
    n = len(T)
    memo = {}

    def sub(r, cols):
        if r == n:
            return {(0, 0): 0}
        if cols in memo:
            return memo[cols]
        acc = {}
        for idx, c in enumerate(cols):
            if not T[r][c]:
                continue
            part = _conv(T[r][c], sub(r + 1, cols[:idx] + cols[idx + 1:]))
            for key, v in part.items():
                if key not in acc or v < acc[key]:
                    acc[key] = v
        memo[cols] = acc
        return acc

    return TropPoly2({k: Fraction(v, scale) for k, v in sub(0, tuple(range(n))).items()})


# ---------------------------------------------------------------------------
# Newton polygon


class NewtonReport(NamedTuple):
    ok: bool
    problems: tuple
    boundary: tuple

    def __bool__(self):
        return self.ok


def boundary_points(N, M):
    """Lattice points on the segment (M, 0)-(0, N), top x-degree first."""
    d = gcd(N, M)
    M1, N1 = M // d, N // d
    return tuple((M - p * M1, p * N1) for p in range(d + 1))


def newton_check(sd: SpectralData) -> NewtonReport:
    """Support inside N a + M b <= N M; the boundary segment carries exactly
    the d + 1 points of (x^{M1} - (-1)^? y^{N1})^d with valuation 0 and
    binomial leading coefficients."""
    N, M = sd.N, sd.M
    problems = []
    for (a, b) in sorted(sd.charpoly_trop.support):
        if a < 0 or b < 0 or N * a + M * b > N * M:
            problems.append(f"support point ({a}, {b}) outside the triangle")
    bd = boundary_points(N, M)
    d = len(bd) - 1
    on_edge = {(a, b) for (a, b) in sd.charpoly_trop.support if N * a + M * b == N * M}
    for (a, b) in sorted(on_edge - set(bd)):
        problems.append(f"unexpected boundary point ({a}, {b})")
    for p, (a, b) in enumerate(bd):
        c = sd.charpoly_trop.coeffs.get((a, b))
        if c is None:
            problems.append(f"boundary point ({a}, {b}) missing")
            continue
        if c != 0:
            problems.append(f"boundary point ({a}, {b}) has valuation {fmt_rational(c)}")
            continue
        lead = sd.charpoly_exact.coefficient(a, b).get(0, 0)
        if abs(lead) != comb(d, p):
            problems.append(f"boundary point ({a}, {b}) has leading coefficient {lead}, expected +-{comb(d, p)}")
    return NewtonReport(not problems, tuple(problems), bd)
