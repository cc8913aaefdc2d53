"""Tropical limit of a Perron eigenvector when the critical graph splits.

For a positive matrix whose entries are polynomials in q = exp(-1/eps) the
Perron eigenvector has components ~ q^m_i as eps -> 0.  When the min-plus
image has a single critical class, m is that class's column of the Kleene
star.  With several classes the exponents alone do not decide, and the
limit depends on:

* the leading coefficients: only classes whose critical arcs carry the
  largest Perron root of coefficients survive;
* the couplings between the surviving classes, which form a smaller min-plus
  eigenproblem.  Its diagonal is the cheapest positive-cost return to a
  class, either along a detour through the graph or through the second
  exponent of a critical entry.

The reduced problem is solved the same way, recursively.  Coefficients of
the reduced problem are taken as 1.
"""
from __future__ import annotations

from fractions import Fraction

import mpmath

from .trop import INF, TropMatrix, critical_classes, kleene_star, min_cycle_mean

_TIE_DPS = 50


# ---------------------------------------------------------------------------
# q-polynomial matrices: entries are dicts exponent -> positive coefficient


def _trim(d):
    # positive coefficients never cancel, so the two lowest terms of a sum or
    # product only depend on the two lowest terms of the operands
    if len(d) <= 2:
        return d
    a, b = sorted(d)[:2]
    return {a: d[a], b: d[b]}


def _pmul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return _trim(out)


def _padd(a, b):
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
    return _trim(out)


def _mmul(a, b):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for k in range(n):
            acc = {}
            for j in range(n):
                x, y = ai[j], b[j][k]
                if x and y:
                    for e1, c1 in x.items():
                        for e2, c2 in y.items():
                            acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
            row.append(_trim(acc))
        out.append(row)
    return out


def inverse_lax_exact(W, A, wrap=Fraction(1)):
    """Two lowest terms of each entry of P X_alpha^{-1} P (up to a positive
    scalar) for row n = 1, as q-polynomials.  ``wrap`` is the coefficient of
    1/alpha."""
    M = len(W[0])
    one = 1
    if wrap != 1:
        one = Fraction(1)
    elif all(Fraction(v).denominator == 1 for r in W for v in r) and Fraction(A).denominator == 1:
        W = [[int(v) for v in r] for r in W]
        A, wrap = int(A), 1
    S = [[{} for _ in range(M)] for _ in range(M)]
    for i in range(M - 1):
        S[i + 1][i] = {0: one}
    S[0][M - 1] = {-A: wrap if wrap == 1 else Fraction(wrap)}
    E = [[{0: one} if i == j else {} for j in range(M)] for i in range(M)]
    out = None
    for w in W:
        K = [[{e + w[j]: c for e, c in S[i][j].items()} for j in range(M)] for i in range(M)]
        # (E + K)^{-1} is a finite geometric series: K^M is scalar
        tot, P = E, E
        for _ in range(M - 1):
            P = _mmul(P, K)
            tot = [[_padd(x, y) for x, y in zip(r1, r2)] for r1, r2 in zip(tot, P)]
        f = _mmul(tot, S)
        out = f if out is None else _mmul(out, f)
    return out


def jets(X):
    """(leading exponents, leading coefficients, gap to the next exponent)."""
    lead, coef, gap = [], [], []
    for row in X:
        lr, cr, gr = [], [], []
        for e in row:
            if not e:
                lr.append(INF)
                cr.append(None)
                gr.append(INF)
                continue
            ks = sorted(e)
            lr.append(Fraction(ks[0]))
            cr.append(e[ks[0]])
            gr.append(Fraction(ks[1] - ks[0]) if len(ks) > 1 else INF)
        lead.append(lr)
        coef.append(cr)
        gap.append(gr)
    return TropMatrix(lead), coef, gap


# ---------------------------------------------------------------------------


def _kappa(coef, cls, A0, star):
    """Perron root of the coefficients on the critical arcs of one class."""
    idx = list(cls)
    with mpmath.workdps(_TIE_DPS):
        m = mpmath.matrix(len(idx), len(idx))
        for a, i in enumerate(idx):
            for b, j in enumerate(idx):
                if A0[i, j] != INF and A0[i, j] + star[j, i] == 0:
                    m[a, b] = mpmath.mpf(Fraction(coef[i][j]).numerator) / Fraction(coef[i][j]).denominator
        ev = mpmath.eig(m, left=False, right=False)
        if isinstance(ev, tuple):
            ev = ev[0]
        return max(abs(x) for x in ev)


def limit_eigenvector(lead: TropMatrix, coef, gap) -> list:
    """Exponents m (with m_0 = 0) of the Perron eigenvector, for the
    convention min_j(lead[i, j] + m_j) = lambda + m_i."""
    lam = min_cycle_mean(lead)
    A0 = lead.shifted(lam)
    star = kleene_star(A0)
    n = lead.size
    classes = critical_classes(lead, lam)
    if len(classes) > 1:
        ks = [_kappa(coef, c, A0, star) for c in classes]
        top = max(ks)
        with mpmath.workdps(_TIE_DPS):
            tol = top * mpmath.mpf(10) ** (-(_TIE_DPS * 2 // 3))
        classes = tuple(c for c, k in zip(classes, ks) if top - k <= tol)
    reps = [c[0] for c in classes]
    if len(classes) == 1:
        m = [star[i, reps[0]] for i in range(n)]
    else:
        r = len(classes)
        R = [[INF] * r for _ in range(r)]
        for a in range(r):
            for b in range(r):
                if a != b:
                    R[a][b] = star[reps[a], reps[b]]
            best = INF
            for i in classes[a]:
                for k in range(n):
                    if A0[i, k] == INF or star[k, i] == INF:
                        continue
                    v = A0[i, k] + star[k, i]
                    if v > 0:
                        best = min(best, v)
                    elif gap[i][k] < best:  # critical arc: its second term
                        best = gap[i][k]
            R[a][a] = best
        w = limit_eigenvector(TropMatrix(R), [[1] * r for _ in range(r)], [[INF] * r for _ in range(r)])
        m = [min(star[i, reps[a]] + w[a] for a in range(r)) for i in range(n)]
    return [v - m[0] for v in m]


def limit_row(W, A, wrap=Fraction(1)) -> list:
    """Row 1 of Q (as Fractions, in the unit of the integer inputs)."""
    lead, coef, gap = jets(inverse_lax_exact(W, A, wrap))
    m = limit_eigenvector(lead, coef, gap)
    M = len(m)
    return [m[i + 1] - m[i] for i in range(M - 1)] + [m[0] + A - m[M - 1]]
