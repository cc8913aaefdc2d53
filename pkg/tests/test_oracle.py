from fractions import Fraction

import mpmath
import pytest

from tropbbs import fixtures
from tropbbs.bbs import BBSState, solve_Q
from tropbbs.errors import AequalsB, NonPositiveMatrix, NonPositiveSample
from tropbbs.oracle import (
    det_identities_check,
    discrete_row_sweep,
    discrete_solve_R,
    eval_y,
    evolve_discrete,
    lift_state,
    monodromy_y,
    periodic_reduction,
    refactorization_residual,
    solve_all_rows,
    ud_estimate,
    valuation_grid,
)


def test_lift_examples():
    s = fixtures.load("example2")
    eps = 0.1
    ds = lift_state(s, eps)
    q = mpmath.exp(-1 / mpmath.mpf(eps))
    # diag(q^2, 1, 1), diag(q, q, 1), diag(1, q, q), diag(q, 1, q) for n = 4..1
    expect = [[q, 1, q], [1, q, q], [q, q, 1], [q ** 2, 1, 1]]
    for got, want in zip(ds.V, expect):
        assert all(abs(a - b) < 1e-40 for a, b in zip(got, want))
    assert abs(ds.alpha - q) < 1e-40 and abs(ds.beta - q ** 2) < 1e-40
    flat = lift_state(BBSState(2, 2, [[0, 0], [0, 0]], 0), 0.3, k1=2)
    assert all(v == 1 for r in flat.V for v in r)


def test_lift_rejects_a_equal_b():
    with pytest.raises(AequalsB):
        lift_state(fixtures.load("example1"), 0.1)
    with pytest.raises(ValueError):
        lift_state(fixtures.load("example2"), 0)


def test_uniform_lift_has_uniform_I():
    with mpmath.workdps(40):
        v = mpmath.mpf("0.3")
        alpha = mpmath.mpf("0.5")
        sol = discrete_solve_R([[v] * 3] * 2, alpha)
        for x in sol.I:
            assert abs(x - alpha ** (mpmath.mpf(1) / 3)) < 1e-30


def test_solve_R_rejects_nonpositive():
    with pytest.raises(NonPositiveMatrix):
        discrete_solve_R([[1, 0]], mpmath.mpf(2))


def test_example2_first_row_valuation():
    s = fixtures.load("example2")
    with mpmath.workdps(60):
        sol = discrete_solve_R(lift_state(s, 0.05).V, mpmath.exp(-1 / mpmath.mpf("0.05")))
        got = [float(-0.05 * mpmath.log(x)) for x in sol.I]
    # a single eps carries an O(eps log(MN)) prefactor error
    bound = 0.05 * float(mpmath.log(s.M * s.N))
    assert all(abs(g - w) < bound for g, w in zip(got, (1, 0, 0)))


def test_kappa_valuation_is_G():
    s = fixtures.load("example2")
    kap = {}
    for e in (0.05, 0.02):
        with mpmath.workdps(80):
            ds = lift_state(s, e)
            kap[e] = abs(discrete_solve_R(ds.V, ds.alpha).kappa)
    assert abs(ud_estimate(lambda e: kap[e], (0.05, 0.02)) - 2) < 0.1


@pytest.mark.parametrize("name", ["example1", "example2"])
def test_valuations_match_solve_Q(name):
    s = fixtures.load(name)
    grid = valuation_grid(s)
    Q = solve_Q(s)
    for gr, qr in zip(grid, Q):
        assert all(abs(g - float(q)) < 0.05 for g, q in zip(gr, qr))


def test_valuations_on_ambiguous_state():
    s = BBSState(2, 4, [[0, 4, 2, 0], [0, 3, 3, 0]], 2)
    grid = valuation_grid(s, eps_list=(0.02, 0.01), dps=120)
    for gr, qr in zip(grid, solve_Q(s)):
        assert all(abs(g - float(q)) < 0.05 for g, q in zip(gr, qr))


def test_row_sweep_closes_the_ring():
    with mpmath.workdps(60):
        ds = lift_state(fixtures.load("example2"), 0.1)
        I = solve_all_rows(ds)
        N = ds.N
        for n in range(N):
            again = discrete_row_sweep(I[(n + 1) % N], ds.V[n], ds.alpha, ds.beta)
            assert all(abs(a - b) <= 1e-30 * b for a, b in zip(again, I[n]))


def test_evolution_keeps_beta_and_spectrum():
    with mpmath.workdps(60):
        ds = lift_state(fixtures.load("example2"), 0.2)
        new = evolve_discrete(ds)
        for row in new.V:
            assert abs(mpmath.fprod(row) - ds.beta) < 1e-40 * ds.beta
        y = mpmath.mpf("0.37")
        for x in (mpmath.mpf("0.2"), mpmath.mpf("1.7")):
            a = mpmath.det(eval_y(monodromy_y(ds.V), y) - x * mpmath.eye(3))
            b = mpmath.det(eval_y(monodromy_y(new.V), y) - x * mpmath.eye(3))
            assert abs(a - b) < 1e-40 * max(1, abs(a))
        assert refactorization_residual(ds) < 1e-40


def test_periodic_reduction_reconstructs():
    with mpmath.workdps(40):
        ds = lift_state(fixtures.load("example2"), 0.3)
        X = monodromy_y(ds.V)
        pr = periodic_reduction(X)
        assert pr.N == 4
        for i in range(3):
            for j in range(3):
                want = list(X[i][j])
                while want and want[-1] == 0:
                    want.pop()
                got = pr.reconstruct(i + 1, j + 1)
                assert len(got) == len(want)
                assert all(abs(a - b) < 1e-30 for a, b in zip(got, want))


@pytest.mark.parametrize("name", ["example1", "example2"])
def test_determinant_identities(name):
    rep = det_identities_check(fixtures.load(name), 0.1, samples=20, seed=1)
    assert rep["failures"] == []
    assert all(v < 1e-9 for v in rep["max_rel_error"].values())


def test_ud_estimate():
    assert abs(ud_estimate(lambda e: mpmath.exp(-3 / mpmath.mpf(e)), (0.1, 0.05)) - 3) < 1e-12
    assert abs(ud_estimate(lambda e: 5 * mpmath.exp(-2 / mpmath.mpf(e)), (0.05, 0.02)) - 2) < 0.02 * float(mpmath.log(5))
    with pytest.raises(NonPositiveSample):
        ud_estimate(lambda e: 0, (0.1, 0.05))
    with pytest.raises(ValueError):
        ud_estimate(lambda e: 1, (0.1,))


def test_rational_state_valuations():
    s = BBSState(2, 2, [[Fraction(1, 2), Fraction(3, 2)], [1, 1]], Fraction(1, 3))
    grid = valuation_grid(s)
    for gr, qr in zip(grid, solve_Q(s)):
        assert all(abs(g - float(q)) < 0.05 for g, q in zip(gr, qr))
