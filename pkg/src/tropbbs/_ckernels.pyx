# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled min-plus and box-ball kernels.

Same interface as ``_pykernels``.  Values live in int64 with a sentinel for
the tropical zero that is tested explicitly and never added.  Inputs whose
magnitude could overflow are handed to the pure-Python module instead.
"""
from libc.stdlib cimport malloc, free
from libc.limits cimport LLONG_MAX

from . import _pykernels as _py
from .errors import InconsistentFixedPoint, NegativeCycle

BACKEND = "cython"

DEF LIMIT = 1 << 40

cdef long long INF = LLONG_MAX


# ---------------------------------------------------------------------------
# conversions


cdef long long* _alloc(Py_ssize_t n) except NULL:
    cdef long long* p = <long long*> malloc(n * sizeof(long long))
    if p == NULL:
        raise MemoryError()
    return p


cdef bint _fits(object rows):
    for r in rows:
        for v in r:
            if v is not None and (v > LIMIT or v < -LIMIT):
                return False
    return True


cdef long long* _load(object rows, int n, int m) except NULL:
    cdef long long* p = _alloc(n * m)
    cdef int i, j
    for i in range(n):
        r = rows[i]
        for j in range(m):
            v = r[j]
            p[i * m + j] = INF if v is None else <long long> v
    return p


cdef list _dump(long long* p, int n, int m):
    cdef int i, j
    out = []
    for i in range(n):
        out.append([None if p[i * m + j] == INF else p[i * m + j] for j in range(m)])
    return out


# ---------------------------------------------------------------------------
# min-plus core


cdef void _mm(const long long* a, const long long* b, long long* out, int n) nogil:
    cdef int i, j, k
    cdef long long best, x, y
    for i in range(n):
        for k in range(n):
            best = INF
            for j in range(n):
                x = a[i * n + j]
                if x == INF:
                    continue
                y = b[j * n + k]
                if y == INF:
                    continue
                if x + y < best:
                    best = x + y
            out[i * n + k] = best


cdef int _closure(long long* d, int n) nogil:
    """In-place Floyd-Warshall; -1 on a negative cycle."""
    cdef int i, j, k
    cdef long long dik, dkj
    for k in range(n):
        for i in range(n):
            dik = d[i * n + k]
            if dik == INF:
                continue
            for j in range(n):
                dkj = d[k * n + j]
                if dkj != INF and (d[i * n + j] == INF or dik + dkj < d[i * n + j]):
                    d[i * n + j] = dik + dkj
        for i in range(n):
            if d[i * n + i] != INF and d[i * n + i] < 0:
                return -1
    return 0


cdef void _to_star(long long* d, int n) nogil:
    cdef int i
    for i in range(n):
        if d[i * n + i] == INF or d[i * n + i] > 0:
            d[i * n + i] = 0


cdef long long _gcd(long long a, long long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef int _karp(const long long* a, int n, long long* num, long long* den) nogil:
    """Minimum cycle mean as num/den (reduced); 1 if acyclic."""
    cdef long long* D = <long long*> malloc((n + 1) * n * sizeof(long long))
    cdef int k, u, v
    cdef long long best, w, p, dn, dk, wn, wd, bn = 0, bd = 0, g
    cdef bint have_b = False, have_w
    if D == NULL:
        return 2
    for v in range(n):
        D[v] = 0
    for k in range(1, n + 1):
        for v in range(n):
            best = INF
            for u in range(n):
                w = a[u * n + v]
                p = D[(k - 1) * n + u]
                if w == INF or p == INF:
                    continue
                if p + w < best:
                    best = p + w
            D[k * n + v] = best
    for v in range(n):
        dn = D[n * n + v]
        if dn == INF:
            continue
        have_w = False
        wn = 0
        wd = 1
        for k in range(n):
            dk = D[k * n + v]
            if dk == INF:
                continue
            if not have_w or (dn - dk) * wd > wn * (n - k):
                wn = dn - dk
                wd = n - k
                have_w = True
        if not have_b or wn * bd < bn * wd:
            bn = wn
            bd = wd
            have_b = True
    free(D)
    if not have_b:
        return 1
    g = _gcd(bn, bd)
    num[0] = bn / g
    den[0] = bd / g
    return 0


# ---------------------------------------------------------------------------
# box-ball core


cdef void _sweep_row(const long long* qn, const long long* w, long long* out, int M) nogil:
    cdef int m, l
    cdef long long acc, best
    for m in range(M):
        acc = 0
        best = 0
        for l in range(M):
            acc += qn[((m - l - 1) % M + M) % M] - w[((m - l) % M + M) % M]
            if l == 0 or acc > best:
                best = acc
        out[m] = w[m] + (best if best < 0 else 0)


cdef int _inverse_lax(const long long* W, int N, int M, long long A, long long* out) nogil:
    """Min-plus image of P X_alpha^{-1} P into out (M x M); -1 on divergence."""
    cdef long long* S = <long long*> malloc(M * M * sizeof(long long))
    cdef long long* K = <long long*> malloc(M * M * sizeof(long long))
    cdef long long* F = <long long*> malloc(M * M * sizeof(long long))
    cdef long long* T = <long long*> malloc(M * M * sizeof(long long))
    cdef int i, j, n, status = 0
    for i in range(M * M):
        S[i] = INF
    for i in range(M - 1):
        S[(i + 1) * M + i] = 0
    S[M - 1] = -A
    for n in range(N):
        for i in range(M):
            for j in range(M):
                K[i * M + j] = INF if S[i * M + j] == INF else S[i * M + j] + W[n * M + j]
        if _closure(K, M) < 0:
            status = -1
            break
        _to_star(K, M)
        _mm(K, S, F, M)
        if n == 0:
            for i in range(M * M):
                out[i] = F[i]
        else:
            _mm(out, F, T, M)
            for i in range(M * M):
                out[i] = T[i]
    free(S)
    free(K)
    free(F)
    free(T)
    return status


cdef int _solve_q(const long long* W, int N, int M, long long A, long long* Q,
                  long long* qden, int* ncls) nogil:
    """0 ok, 1 divergent star, 2 inconsistent wrap-around, 3 acyclic,
    4 several critical classes."""
    cdef long long* Mx = <long long*> malloc(M * M * sizeof(long long))
    cdef long long* plus = <long long*> malloc(M * M * sizeof(long long))
    cdef long long* Wq = <long long*> malloc(N * M * sizeof(long long))
    cdef long long* m = <long long*> malloc(M * sizeof(long long))
    cdef long long* back = <long long*> malloc(M * sizeof(long long))
    cdef int* cls_of = <int*> malloc(M * sizeof(int))
    cdef long long p, q, v
    cdef int i, j, n, k, status = 0, nc = 0
    if _inverse_lax(W, N, M, A, Mx) < 0:
        status = 1
    elif _karp(Mx, M, &p, &q) != 0:
        status = 3
    else:
        for i in range(M * M):
            plus[i] = INF if Mx[i] == INF else Mx[i] * q - p
        _closure(plus, M)
        for i in range(M):
            cls_of[i] = -1
        for i in range(M):
            m[i] = INF
        for j in range(M):
            if plus[j * M + j] != 0 or cls_of[j] >= 0:
                continue
            # new critical class led by j
            for k in range(j, M):
                if k == j or (plus[k * M + k] == 0 and plus[j * M + k] != INF and plus[k * M + j] != INF
                              and plus[j * M + k] + plus[k * M + j] == 0):
                    cls_of[k] = nc
            nc += 1
            # critical column j of the star, shifted so that its first entry is 0
            for i in range(M):
                v = plus[i * M + j]
                if v != INF and plus[j] != INF:
                    v = v - plus[j]
                    if v < m[i]:
                        m[i] = v
        ncls[0] = nc
        qden[0] = q
        if nc > 1:
            status = 4  # several critical classes: handled in Python
        else:
            for n in range(N):
                for i in range(M):
                    Wq[n * M + i] = W[n * M + i] * q
            # row 0 from the eigenvector
            for i in range(M - 1):
                Q[i] = m[i + 1] - m[i]
            Q[M - 1] = m[0] + A * q - m[M - 1]
            # rows N-1 .. 1, then row 0 again
            if N > 1:
                _sweep_row(Q, &Wq[(N - 1) * M], &Q[(N - 1) * M], M)
                for n in range(N - 2, 0, -1):
                    _sweep_row(&Q[(n + 1) * M], &Wq[n * M], &Q[n * M], M)
                _sweep_row(&Q[M], Wq, back, M)
            else:
                _sweep_row(Q, Wq, back, M)
            for i in range(M):
                if back[i] != Q[i]:
                    status = 2
    free(Mx)
    free(plus)
    free(Wq)
    free(m)
    free(back)
    free(cls_of)
    return status


# ---------------------------------------------------------------------------
# Python entry points


def minplus_matmul(a, b):
    n = len(a)
    if n == 0 or not (_fits(a) and _fits(b)):
        return _py.minplus_matmul(a, b)
    cdef long long* pa = _load(a, n, n)
    cdef long long* pb = _load(b, n, n)
    cdef long long* po = _alloc(n * n)
    _mm(pa, pb, po, n)
    out = _dump(po, n, n)
    free(pa)
    free(pb)
    free(po)
    return out


def minplus_closure(a):
    n = len(a)
    if n == 0 or not _fits(a):
        return _py.minplus_closure(a)
    cdef long long* d = _load(a, n, n)
    cdef int st = _closure(d, n)
    out = None if st < 0 else _dump(d, n, n)
    free(d)
    return out


def minplus_star(a):
    d = minplus_closure(a)
    if d is None:
        return None
    for i in range(len(d)):
        if d[i][i] is None or d[i][i] > 0:
            d[i][i] = 0
    return d


def karp_mean(a):
    n = len(a)
    if n == 0 or not _fits(a):
        return _py.karp_mean(a)
    cdef long long* pa = _load(a, n, n)
    cdef long long num = 0, den = 1
    cdef int st = _karp(pa, n, &num, &den)
    free(pa)
    if st == 2:
        raise MemoryError()
    return None if st else (num, den)


def sweep_row(q_next, w):
    M = len(w)
    if not (_fits([q_next]) and _fits([w])):
        return _py.sweep_row(q_next, w)
    cdef long long* pq = _load([q_next], 1, M)
    cdef long long* pw = _load([w], 1, M)
    cdef long long* po = _alloc(M)
    _sweep_row(pq, pw, po, M)
    out = _dump(po, 1, M)[0]
    free(pq)
    free(pw)
    free(po)
    return out


def sweep(W, q_first):
    return _py.sweep(W, q_first)


def inverse_lax_matrix(W, A):
    N, M = len(W), len(W[0])
    if not (_fits(W) and -LIMIT <= A <= LIMIT):
        return _py.inverse_lax_matrix(W, A)
    cdef long long* pw = _load(W, N, M)
    cdef long long* po = _alloc(M * M)
    cdef int st = _inverse_lax(pw, N, M, A, po)
    out = None if st < 0 else _dump(po, M, M)
    free(pw)
    free(po)
    return out


def solve_q(W, A):
    N, M = len(W), len(W[0])
    if not (_fits(W) and -LIMIT <= A <= LIMIT):
        return _py.solve_q(W, A)
    cdef long long* pw = _load(W, N, M)
    cdef long long* pq = _alloc(N * M)
    cdef long long qden = 1
    cdef int ncls = 0
    cdef int st = _solve_q(pw, N, M, A, pq, &qden, &ncls)
    out = _dump(pq, N, M)
    free(pw)
    free(pq)
    if st == 1:
        raise NegativeCycle("level exceeds the row content")
    if st:
        return _py.solve_q(W, A)  # several classes, or raise the detailed error
    return out, qden, ncls


def evolve_scaled(W, A, den):
    return _py.evolve_scaled(W, A, den)


def find_period(W, A, t_max):
    """Least F <= t_max returning the state to itself, else None."""
    N, M = len(W), len(W[0])
    if not (_fits(W) and -LIMIT <= A <= LIMIT):
        return _py.find_period(W, A, t_max)
    start_W, start_A, start_den = _py._reduce([list(r) for r in W], A, 1)
    cdef long long* cur = _load(start_W, N, M)
    cdef long long* ref = _load(start_W, N, M)
    cdef long long* Q = _alloc(N * M)
    cdef long long a = start_A, den = start_den, q = 1, g
    cdef long long a0 = start_A, den0 = start_den
    cdef int ncls = 0, st, n, i, t, found = -1
    cdef bint same, big
    try:
        for t in range(1, t_max + 1):
            st = _solve_q(cur, N, M, a, Q, &q, &ncls)
            if st == 4:
                # several critical classes: take this step in Python
                nxt, pa, pden = _py.evolve_scaled(_dump(cur, N, M), a, den)
                if not (_fits(nxt) and -LIMIT <= pa <= LIMIT and pden <= LIMIT):
                    return _py.find_period(W, A, t_max)
                for n in range(N):
                    for i in range(M):
                        cur[n * M + i] = nxt[n][i]
                a, den = pa, pden
            elif st != 0:
                return _py.find_period(W, A, t_max)  # raises the precise error
            else:
                _step(cur, Q, N, M, q)
                a = a * q
                den = den * q
                g = den
                for i in range(N * M):
                    g = _gcd(g, cur[i])
                g = _gcd(g, a)
                if g > 1:
                    for i in range(N * M):
                        cur[i] = cur[i] / g
                    a = a / g
                    den = den / g
                big = 0
                for i in range(N * M):
                    if cur[i] > LIMIT or cur[i] < -LIMIT:
                        big = 1
                if big or a > LIMIT or a < -LIMIT or den > LIMIT:
                    return _py.find_period(W, A, t_max)
            if a == a0 and den == den0:
                same = True
                for i in range(N * M):
                    if cur[i] != ref[i]:
                        same = False
                        break
                if same:
                    found = t
                    break
    finally:
        free(cur)
        free(ref)
        free(Q)
    return None if found < 0 else found


cdef void _step(long long* W, const long long* Q, int N, int M, long long q) nogil:
    cdef int n, i
    for n in range(N):
        for i in range(M):
            W[n * M + i] = Q[((n + 1) % N) * M + i] + W[n * M + i] * q - Q[n * M + i]
