"""Discrete periodic KP engine used as an independent ground truth.

Everything here is floating point (``mpmath``, arbitrary exponent range so
that ``exp(-W/eps)`` never underflows).  The positive time evolution is the
Perron-Frobenius solution of the refactorization ``X' R = R X``; its
``-eps log`` limit is compared against the tropical dynamics.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath

from .errors import AequalsB, NonConvergence, NonPositiveMatrix, NonPositiveSample

DEFAULT_DPS = 80


@dataclass
class DiscreteState:
    V: list  # N rows of M positive mpf
    alpha: mpmath.mpf
    beta: mpmath.mpf
    eps: float
    I: list | None = None  # filled by solve_all_rows

    @property
    def N(self):
        return len(self.V)

    @property
    def M(self):
        return len(self.V[0])


def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def lift_state(s, eps, k1=None, k2=1) -> DiscreteState:
    """V = exp(-W/eps), alpha = k1 exp(-A/eps), beta = k2 exp(-B/eps).

    ``k1`` defaults to 1, which is only admissible when A < B; pass
    ``k1 > k2`` to lift a state with A = B.
    """
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    if k1 is None:
        if s.A == s.B:
            raise AequalsB("A = B needs a prefactor k1 > k2 to keep alpha > beta")
        k1 = 1
    e = _mpf(eps)
    V = [[k2 ** (mpmath.mpf(1) / s.M) * mpmath.exp(-_mpf(w) / e) for w in row] for row in s.W]
    alpha = k1 * mpmath.exp(-_mpf(s.A) / e)
    beta = mpmath.fprod(V[0])
    return DiscreteState(V, alpha, beta, eps)


# ---------------------------------------------------------------------------
# Perron solution of the time evolution


def _shift_inv(M, alpha):
    """S_alpha^{-1}: ones at (i+1, i), 1/((-1)^M alpha) at (1, M)."""
    Si = mpmath.zeros(M)
    for i in range(M - 1):
        Si[i + 1, i] = 1
    Si[0, M - 1] = 1 / ((-1) ** M * alpha)
    return Si


def _factor_inverse(v_row, alpha):
    """(E + S_alpha^{-1} V)^{-1} as the finite geometric series
    sum_{j<M} (-K)^j / (1 - beta/alpha) with K = S_alpha^{-1} V."""
    M = len(v_row)
    K = _shift_inv(M, alpha) * mpmath.diag(v_row)
    beta = mpmath.fprod(v_row)
    term = mpmath.eye(M)
    acc = mpmath.eye(M)
    for _ in range(M - 1):
        term = -term * K
        acc += term
    return acc / (1 - beta / alpha)


def inverse_monodromy(v_rows: Sequence, alpha):
    """X_alpha^{-1} for X = L_{last} ... L_{first}, via the factored form."""
    M = len(v_rows[0])
    Si = _shift_inv(M, alpha)
    out = mpmath.eye(M)
    for row in v_rows:
        out = out * _factor_inverse(row, alpha) * Si
    return out


def perron(A, tol=None, max_squarings=2000):
    """Dominant eigenpair of an entrywise positive matrix.

    Repeated squaring of the normalized matrix until it is numerically rank
    one (every 2x2 minor negligible against its diagonal product).  Testing
    the eigenvalue alone is not enough: with a nearly degenerate modulus the
    value settles long before the vector does.  Returns (value, vector with
    sum 1).
    """
    n = A.rows
    for i in range(n):
        for j in range(n):
            if not A[i, j] > 0:
                raise NonPositiveMatrix(f"entry ({i}, {j}) = {A[i, j]} is not positive")
    if tol is None:
        tol = mpmath.mpf(10) ** (-(mpmath.mp.dps * 2 // 3))
    P = A / mpmath.norm(A, 1)
    for _ in range(max_squarings):
        if _rank_one(P, tol):
            v = P * mpmath.matrix([1] * n)
            w = A * v
            lam = sum(w) / sum(v)
            return lam, w / sum(w)
        P = P * P
        P = P / mpmath.norm(P, 1)
    raise NonConvergence("power iteration did not converge")


def _rank_one(P, tol):
    n = P.rows
    for i in range(n):
        for k in range(i + 1, n):
            for j in range(n):
                for l in range(j + 1, n):
                    d = P[i, j] * P[k, l]
                    if abs(d - P[i, l] * P[k, j]) > tol * d:
                        return False
    return True


@dataclass
class RSolution:
    I: list
    kappa: mpmath.mpf
    mu: list

    @property
    def R(self):
        M = len(self.I)
        out = mpmath.diag(self.I)
        for i in range(M - 1):
            out[i, i + 1] = 1
        return out


def discrete_solve_R(v_rows: Sequence, alpha) -> RSolution:
    """Unique positive R = diag(I) + S with X' R = R X for X = L_last ... L_first.

    ``v_rows`` lists the diagonals of L_n, L_{n+1}, ..., L_{n+N-1}.
    """
    M = len(v_rows[0])
    N = len(v_rows)
    if any(not v > 0 for row in v_rows for v in row) or not alpha > 0:
        raise NonPositiveMatrix("V and alpha must be positive")
    Xinv = inverse_monodromy(v_rows, alpha)
    P = mpmath.diag([(-1) ** i for i in range(M)])
    rho, v = perron((-1) ** N * P * Xinv * P)
    mu = [(-1) ** i * v[i] for i in range(M)]
    kappa = (-1) ** N / rho
    mu_next = list(mu[1:]) + [(-1) ** M * alpha * mu[0]]
    I = [-mu_next[i] / mu[i] for i in range(M)]
    return RSolution(I, kappa, mu)


def solve_all_rows(ds: DiscreteState) -> list:
    """I grid from one Perron problem per row n (cyclic products)."""
    N = ds.N
    out = []
    for n in range(N):
        rows = [ds.V[(n + k) % N] for k in range(N)]
        out.append(discrete_solve_R(rows, ds.alpha).I)
    ds.I = out
    return out


def discrete_row_sweep(I_next: Sequence, V_row: Sequence, alpha, beta) -> list:
    """Row n of I from row n + 1 by the explicit finite-sum formula."""
    M = len(V_row)
    out = []
    for m in range(M):
        D = mpmath.mpf(0)
        term = mpmath.mpf(1)
        for l in range(M):
            term = term * V_row[(m - l) % M] / I_next[(m - l - 1) % M]
            D += term
        if D == 0:
            raise ZeroDivisionError("degenerate row sweep")
        out.append(V_row[m] * (1 + (1 - beta / alpha) / D))
    return out


def evolve_discrete(ds: DiscreteState) -> DiscreteState:
    """V'_{n,m} = I_{n+1,m} V_{n,m} / I_{n,m}."""
    I = ds.I if ds.I is not None else solve_all_rows(ds)
    N, M = ds.N, ds.M
    V = [[I[(n + 1) % N][m] * ds.V[n][m] / I[n][m] for m in range(M)] for n in range(N)]
    return DiscreteState(V, ds.alpha, mpmath.fprod(V[0]), ds.eps)


# ---------------------------------------------------------------------------
# matrices in y


def _pmul(a, b):
    if not a or not b:
        return []
    out = [mpmath.mpf(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _padd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def lax_y(v_row):
    """L(y) as an M x M table of coefficient lists in y."""
    M = len(v_row)
    L = [[[] for _ in range(M)] for _ in range(M)]
    for i in range(M):
        L[i][i] = [mpmath.mpf(v_row[i])]
    for i in range(M - 1):
        L[i][i + 1] = _padd(L[i][i + 1], [mpmath.mpf(1)])
    L[M - 1][0] = _padd(L[M - 1][0], [mpmath.mpf(0), mpmath.mpf(1)])
    return L


def _matmul_y(A, B):
    n = len(A)
    return [[_reduce_sum(_pmul(A[i][k], B[k][j]) for k in range(n)) for j in range(n)] for i in range(n)]


def _reduce_sum(polys):
    acc = []
    for p in polys:
        acc = _padd(acc, p)
    return acc


def monodromy_y(v_rows: Sequence):
    """X(y) = L_last ... L_first, entries as coefficient lists in y."""
    X = None
    for row in v_rows:
        L = lax_y(row)
        X = L if X is None else _matmul_y(L, X)
    return X


def eval_y(X, y):
    n = len(X)
    out = mpmath.zeros(n)
    for i in range(n):
        for j in range(n):
            out[i, j] = mpmath.polyval(list(reversed(X[i][j])), y) if X[i][j] else 0
    return out


@dataclass
class PeriodicReduction:
    z: dict  # (i, j) -> coefficient, 1 <= i <= M, i <= j < i + N (1-based)
    M: int
    N: int

    def reconstruct(self, i, j):
        """Coefficient list in y of entry (i, j) of X (1-based), including the
        S^N contribution."""
        coeffs = []
        k = 0
        while True:
            jj = j + k * self.M
            if jj >= i + self.N + self.M:
                break
            c = self.z.get((i, jj), 0)
            if jj - i == self.N:
                c = c + 1
            if c != 0 or k < len(coeffs):
                coeffs.extend([0] * (k - len(coeffs)))
                coeffs.append(c)
            k += 1
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return coeffs


def periodic_reduction(X) -> PeriodicReduction:
    """z-table of the M-periodic form X~ = S~^N + Z~."""
    M = len(X)
    N = max(len(p) for r in X for p in r) - 1  # y-degree bound
    # the true N is recovered from the shape: entries j - i ranges over 0..N
    z = {}
    for i in range(1, M + 1):
        for j in range(1, M + 1):
            for k, c in enumerate(X[i - 1][j - 1]):
                jj = j + k * M
                if jj < i:
                    continue
                z[(i, jj)] = c
    Nn = max(jj - i for (i, jj) in z)  # position of the S^N unit entries
    for i in range(1, M + 1):
        z[(i, i + Nn)] = z.get((i, i + Nn), 0) - 1
        if z[(i, i + Nn)] == 0:
            del z[(i, i + Nn)]
    z = {k: v for k, v in z.items() if v != 0}
    return PeriodicReduction(z, M, Nn)


def companion_U(pr: PeriodicReduction, m: int, x):
    """U_m: ones on the superdiagonal, last row (x - z_{m,m}, -z_{m,m+1}, ...)."""
    N = pr.N
    U = mpmath.zeros(N)
    for i in range(N - 1):
        U[i, i + 1] = 1
    for k in range(N):
        U[N - 1, k] = -pr.z.get((m, m + k), 0)
    U[N - 1, 0] += x
    return U


def lax_H(pr, v_row, x):
    N, M = pr.N, len(v_row)
    return mpmath.diag([v_row[k % M] for k in range(N)]) + companion_U(pr, 1, x)


def lax_Mn(pr, i_row, x):
    N, M = pr.N, len(i_row)
    return mpmath.diag([i_row[k % M] for k in range(N)]) + companion_U(pr, 1, x)


def det_identities_check(s, eps, samples=20, seed=0, rtol=1e-9, k1=None, dps=DEFAULT_DPS) -> dict:
    """Evaluate the closed-form determinants of R, L, S, H, U_m and M_n at
    random points and report the worst relative errors."""
    with mpmath.workdps(dps):
        if k1 is None and s.A == s.B:
            k1 = 2
        ds = lift_state(s, eps, k1=k1)
        N, M = ds.N, ds.M
        sol = discrete_solve_R(ds.V, ds.alpha)
        X = monodromy_y(ds.V)
        pr = periodic_reduction(X)
        rng = random.Random(seed)
        errs = {k: mpmath.mpf(0) for k in ("R", "L", "S", "H", "U", "M")}

        def rel(a, b):
            return abs(a - b) / max(abs(b), mpmath.mpf(10) ** (-dps // 2))

        def draw():
            return mpmath.mpf(rng.choice((-1, 1)) * rng.uniform(0.5, 2.0))

        S_y = lambda y: _shift(M, y)
        for _ in range(samples):
            x, y = draw(), draw()
            R = mpmath.diag(sol.I) + S_y(y)
            errs["R"] = max(errs["R"], rel(mpmath.det(R), ds.alpha - (-1) ** M * y))
            L = mpmath.diag(ds.V[0]) + S_y(y)
            errs["L"] = max(errs["L"], rel(mpmath.det(L), ds.beta - (-1) ** M * y))
            errs["S"] = max(errs["S"], rel(mpmath.det(S_y(y)), (-1) ** (M + 1) * y))
            errs["H"] = max(errs["H"], rel(mpmath.det(lax_H(pr, ds.V[0], x)), (-1) ** (N + 1) * x))
            for m in range(1, M + 1):
                gamma = mpmath.fprod(ds.V[n][m - 1] for n in range(N))
                pr_m = _reduction_at(ds, m)
                got = mpmath.det(companion_U(pr_m, 1, x))
                errs["U"] = max(errs["U"], rel(got, (-1) ** (N + 1) * (x - gamma)))
            got = mpmath.det(lax_Mn(pr, sol.I, x))
            errs["M"] = max(errs["M"], rel(got, (-1) ** (N + 1) * (x - sol.kappa)))
        return {
            "eps": eps,
            "samples": samples,
            "kappa": float(sol.kappa),
            "max_rel_error": {k: float(v) for k, v in errs.items()},
            "failures": sorted(k for k, v in errs.items() if v > rtol),
        }


def _shift(M, y):
    S = mpmath.zeros(M)
    for i in range(M - 1):
        S[i, i + 1] = 1
    S[M - 1, 0] += y
    return S


def _reduction_at(ds, m):
    """Periodic reduction of X_{1,m} = S^{m-1} X_1 S^{-m+1}, i.e. the state
    relabelled so that column m comes first."""
    k = m - 1
    rows = [list(r[k:]) + list(r[:k]) for r in ds.V]
    return periodic_reduction(monodromy_y(rows))


# ---------------------------------------------------------------------------
# valuations


def ud_estimate(f: Callable, eps_list: Sequence[float]) -> float:
    """Extrapolate -eps log f(eps) to eps = 0 by a least-squares line in eps."""
    if len(eps_list) < 2:
        raise ValueError("need at least two eps values")
    pts = []
    for e in eps_list:
        v = f(e)
        if not v > 0:
            raise NonPositiveSample(f"f({e}) = {v} is not positive")
        pts.append((float(e), float(-mpmath.mpf(e) * mpmath.log(v))))
    n = len(pts)
    mx = sum(p[0] for p in pts) / n
    my = sum(p[1] for p in pts) / n
    sxx = sum((p[0] - mx) ** 2 for p in pts)
    slope = sum((p[0] - mx) * (p[1] - my) for p in pts) / sxx
    return my - slope * mx


def valuation_grid(s, eps_list=(0.05, 0.02), k1=None, dps=DEFAULT_DPS) -> list:
    """Extrapolated -eps log I_{n,m} for every (n, m)."""
    if k1 is None:
        k1 = 2 if s.A == s.B else 1
    with mpmath.workdps(dps):
        grids = {}
        for e in eps_list:
            grids[e] = solve_all_rows(lift_state(s, e, k1=k1))
        return [
            [ud_estimate(lambda e, n=n, m=m: grids[e][n][m], eps_list) for m in range(s.M)]
            for n in range(s.N)
        ]


def refactorization_residual(ds: DiscreteState) -> float:
    """max |X' - R X R^{-1}| / max |X'| with X' rebuilt from the evolved V."""
    I = ds.I if ds.I is not None else solve_all_rows(ds)
    new = evolve_discrete(ds)
    y = mpmath.mpf("0.7")
    X = eval_y(monodromy_y(ds.V), y)
    Xn = eval_y(monodromy_y(new.V), y)
    R = mpmath.diag(I[0]) + _shift(ds.M, y)
    lhs = R * X * R ** -1
    scale = max(abs(v) for v in Xn)
    return float(max(abs(a - b) for a, b in zip(lhs, Xn)) / scale)
