"""Pure-Python hot kernels on integer data.

These operate on lists of Python ints with ``None`` as the tropical zero and
mirror the compiled ``_ckernels`` module function for function.  Rational
inputs are brought to a common denominator by the callers.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

BACKEND = "python"


def minplus_matmul(a, b):
    n = len(a)
    out = []
    for i in range(n):
        ai = a[i]
        row = []
        for k in range(n):
            best = None
            for j in range(n):
                x = ai[j]
                if x is None:
                    continue
                y = b[j][k]
                if y is None:
                    continue
                if best is None or x + y < best:
                    best = x + y
            row.append(best)
        out.append(row)
    return out


def minplus_closure(a):
    """Floyd-Warshall closure (walks of length >= 1); returns None on a
    negative cycle."""
    n = len(a)
    d = [list(r) for r in a]
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik is None:
                continue
            di = d[i]
            for j in range(n):
                dkj = dk[j]
                if dkj is not None and (di[j] is None or dik + dkj < di[j]):
                    di[j] = dik + dkj
        for i in range(n):
            if d[i][i] is not None and d[i][i] < 0:
                return None
    return d


def minplus_star(a):
    d = minplus_closure(a)
    if d is None:
        return None
    for i in range(len(d)):
        if d[i][i] is None or d[i][i] > 0:
            d[i][i] = 0
    return d


def karp_mean(a):
    """Minimum cycle mean as a reduced pair (num, den); None if acyclic."""
    n = len(a)
    D = [[0] * n]
    for _ in range(n):
        prev = D[-1]
        cur = []
        for v in range(n):
            best = None
            for u in range(n):
                w = a[u][v]
                if w is None or prev[u] is None:
                    continue
                if best is None or prev[u] + w < best:
                    best = prev[u] + w
            cur.append(best)
        D.append(cur)
    bn = bd = None
    for v in range(n):
        dn = D[n][v]
        if dn is None:
            continue
        wn = wd = None
        for k in range(n):
            dk = D[k][v]
            if dk is None:
                continue
            num, den = dn - dk, n - k
            if wn is None or num * wd > wn * den:
                wn, wd = num, den
        if bn is None or wn * bd < bn * wd:
            bn, bd = wn, wd
    if bn is None:
        return None
    g = gcd(bn, bd)
    return bn // g, bd // g


# ---------------------------------------------------------------------------
# box-ball kernels (all values integers in a common unit)


def sweep_row(q_next, w):
    """Row n of Q from row n + 1:  Q = W + min(0, X),
    X[m] = max_k sum_{l<=k} (Q_next[m-l-1] - W[m-l])."""
    M = len(w)
    out = []
    for m in range(M):
        acc = 0
        best = None
        for l in range(M):
            acc += q_next[(m - l - 1) % M] - w[(m - l) % M]
            if best is None or acc > best:
                best = acc
        out.append(w[m] + (best if best < 0 else 0))
    return out


def sweep(W, q_first):
    """All rows of Q from a candidate row 1, sweeping n = N, ..., 1.

    Returns the grid (rows 0..N-1) and the re-derived row 0."""
    N = len(W)
    rows = [None] * N
    nxt = q_first
    for n in range(N - 1, 0, -1):
        nxt = sweep_row(nxt, W[n])
        rows[n] = nxt
    rows[0] = list(q_first)
    return rows, sweep_row(nxt, W[0])


def inverse_lax_matrix(W, A):
    """Min-plus image of P X_alpha^{-1} P for row n = 1 (integer entries)."""
    N, M = len(W), len(W[0])
    S = [[None] * M for _ in range(M)]
    for i in range(M - 1):
        S[i + 1][i] = 0
    S[0][M - 1] = -A
    out = None
    for n in range(N):
        w = W[n]
        K = [[None if S[i][j] is None else S[i][j] + w[j] for j in range(M)] for i in range(M)]
        star = minplus_star(K)
        if star is None:
            return None
        f = minplus_matmul(star, S)
        out = f if out is None else minplus_matmul(out, f)
    return out


def _critical_data(Mq, p):
    """Star of (Mq - p) and the critical classes."""
    M = len(Mq)
    sh = [[None if v is None else v - p for v in r] for r in Mq]
    plus = minplus_closure(sh)
    star = [list(r) for r in plus]
    for i in range(M):
        if star[i][i] is None or star[i][i] > 0:
            star[i][i] = 0
    crit = [i for i in range(M) if plus[i][i] == 0]
    classes, seen = [], set()
    for i in crit:
        if i in seen:
            continue
        cls = [j for j in crit if j == i or (plus[i][j] is not None and plus[j][i] is not None and plus[i][j] + plus[j][i] == 0)]
        seen.update(cls)
        classes.append(cls)
    return star, classes


def _row_from_eigen(m, A):
    M = len(m)
    return [m[i + 1] - m[i] for i in range(M - 1)] + [m[0] + A - m[M - 1]]


def solve_q(W, A):
    """Q grid for an integer state.

    Returns ``(Q, den, nclasses)``: Q is integral in units of ``1/den`` of the
    input unit, ``nclasses`` the number of critical classes behind row 1.
    """
    from .errors import InconsistentFixedPoint, NegativeCycle

    Mx = inverse_lax_matrix(W, A)
    if Mx is None:
        raise NegativeCycle("level exceeds the row content")
    p, q = karp_mean(Mx)
    N, M = len(W), len(W[0])
    Mq = [[None if v is None else v * q for v in r] for r in Mx]
    Wq = [[v * q for v in r] for r in W]
    Aq = A * q
    star, classes = _critical_data(Mq, p)
    if len(classes) == 1:
        j = classes[0][0]
        m = [star[i][j] - star[0][j] for i in range(M)]
        row1 = _row_from_eigen(m, Aq)
    else:
        # several critical classes: the exponents alone do not fix the limit
        from .perron import limit_row

        frac = limit_row(W, A, Fraction(1, 2) if A == sum(W[0]) else 1)
        q = lcm(*(x.denominator for x in frac))
        row1 = [int(x * q) for x in frac]
        Wq = [[v * q for v in r] for r in W]
    rows, back = sweep(Wq, row1)
    if back != row1:
        raise InconsistentFixedPoint(f"row 1 re-derived as {back}, eigenvector gave {row1} (classes {classes})")
    return rows, q, len(classes)


def _reduce(W, A, den):
    g = den
    for r in W:
        for v in r:
            g = gcd(g, v)
    g = gcd(g, A)
    if g > 1:
        W = [[v // g for v in r] for r in W]
        A //= g
        den //= g
    return W, A, den


def evolve_scaled(W, A, den):
    """One time step on a state given as integers over ``den``."""
    Q, q, _ = solve_q(W, A)
    N = len(W)
    new = [[Q[(n + 1) % N][m] + W[n][m] * q - Q[n][m] for m in range(len(W[0]))] for n in range(N)]
    return _reduce(new, A * q, den * q)


def find_period(W, A, t_max):
    """Least F <= t_max returning the state to itself, else None."""
    start = _reduce([list(r) for r in W], A, 1)
    cur = start
    for t in range(1, t_max + 1):
        cur = evolve_scaled(*cur)
        if cur == start:
            return t
    return None
