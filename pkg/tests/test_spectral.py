from fractions import Fraction
from math import comb

import mpmath
import pytest

from conftest import random_states
from tropbbs import fixtures
from tropbbs.bbs import BBSState, evolve, shift_m, shift_n
from tropbbs.errors import CancellationDetected
from tropbbs.spectral import (
    FormalPoly,
    SpectralData,
    boundary_points,
    build_lax,
    char_poly_exact,
    newton_check,
    permanent_bound,
    spectral_data,
    tropicalize,
)
from tropbbs.trop import TropPoly2


def numeric_charpoly(s, q, y, x):
    """det(X(y) - x E) straight from floating Lax matrices."""
    M = s.M
    X = mpmath.eye(M)
    for row in s.W:
        L = mpmath.zeros(M)
        for m, w in enumerate(row):
            L[m, m] = mpmath.mpf(q) ** (mpmath.mpf(w.numerator) / w.denominator)
        for i in range(M - 1):
            L[i, i + 1] += 1
        L[M - 1, 0] += y
        X = L * X
    return mpmath.det(X - x * mpmath.eye(M))


def evaluate(p: FormalPoly, q, y, x, scale=1):
    qq = mpmath.mpf(q) ** (mpmath.mpf(1) / scale)
    return mpmath.fsum(c * mpmath.mpf(x) ** i * mpmath.mpf(y) ** j * qq ** k for (i, j, k), c in p.terms.items())


def test_example1_exact():
    phi = char_poly_exact(fixtures.load("example1"))
    expect = {
        (3, 0, 0): -1,
        (2, 1, 0): 3,
        (2, 0, 1): 3,
        (1, 2, 0): -3,
        (1, 1, 1): 21,
        (1, 0, 2): -3,
        (0, 3, 0): 1,
        (0, 2, 1): 3,
        (0, 1, 2): 3,
        (0, 0, 3): 1,
    }
    assert phi.terms == expect


def test_example2_tropical_coefficients():
    c = spectral_data(fixtures.load("example2")).charpoly_trop.coeffs
    expect = {(3, 0): 0, (2, 1): 0, (2, 0): 2, (1, 2): 0, (1, 1): 2, (1, 0): 4, (0, 4): 0, (0, 3): 2, (0, 2): 4, (0, 1): 6, (0, 0): 8}
    assert c == expect


def test_example2_leading_terms():
    phi = char_poly_exact(fixtures.load("example2"))
    # -x^3 + x^2(5y + 2q^2) - x(y^2 - 7q^2 y + q^4) + (y + q^2)^4 + higher order
    assert phi.coefficient(3, 0) == {0: -1}
    assert phi.coefficient(2, 1)[0] == 5 and phi.coefficient(2, 0)[2] == 2
    assert phi.coefficient(1, 2)[0] == -1 and phi.coefficient(1, 1)[2] == 7 and phi.coefficient(1, 0)[4] == -1
    for j in range(5):
        assert phi.coefficient(0, j) == {2 * (4 - j): comb(4, j)}


@pytest.mark.parametrize("name", ["example1", "example2"])
def test_exact_matches_numeric_determinant(name):
    s = fixtures.load(name)
    phi = char_poly_exact(s)
    with mpmath.workdps(40):
        for q, y, x in [(0.3, 0.7, 1.3), (0.11, 2.0, -0.4), (0.9, -1.5, 0.25)]:
            a, b = evaluate(phi, q, y, x), numeric_charpoly(s, q, y, x)
            assert abs(a - b) <= mpmath.mpf(10) ** -30 * max(1, abs(b))


def test_rational_state_scaled():
    s = BBSState(2, 2, [[Fraction(1, 2), Fraction(3, 2)], [1, 1]], Fraction(1, 3))
    sd = spectral_data(s)
    assert sd.scale == 6
    with mpmath.workdps(40):
        a = evaluate(sd.charpoly_exact, 0.4, 0.6, 0.8, scale=6)
        b = numeric_charpoly(s, 0.4, 0.6, 0.8)
    assert abs(a - b) < 1e-30
    assert newton_check(sd)


def test_negative_w_gives_laurent_entries():
    s = BBSState(2, 2, [[-1, 3], [1, 1]], 0)
    L = build_lax(s)
    assert L[0][0][0].terms == {(0, 0, -1): 1}
    with mpmath.workdps(40):
        a = evaluate(char_poly_exact(s), 0.5, 0.3, 0.2)
        b = numeric_charpoly(s, 0.5, 0.3, 0.2)
    assert abs(a - b) < 1e-30


def test_isospectral_under_dynamics():
    for s in random_states(3, 25, nmax=3, mmax=3):
        trop = spectral_data(s).charpoly_trop
        assert spectral_data(evolve(s)).charpoly_trop == trop
        assert spectral_data(shift_m(s)).charpoly_trop == trop
        # cyclic conjugation of the monodromy: exact
        assert char_poly_exact(shift_n(s)) == char_poly_exact(s)


def test_newton_examples():
    for name, bd in [("example1", ((3, 0), (2, 1), (1, 2), (0, 3))), ("example2", ((3, 0), (0, 4)))]:
        rep = newton_check(spectral_data(fixtures.load(name)))
        assert rep.ok and rep.boundary == bd
    assert boundary_points(4, 6) == ((6, 0), (3, 2), (0, 4))


def test_newton_random():
    for s in random_states(4, 40):
        assert newton_check(spectral_data(s)), s


def test_newton_flags_corruption():
    sd = spectral_data(fixtures.load("example2"))
    bad = dict(sd.charpoly_trop.coeffs)
    bad[(0, 4)] = Fraction(1)
    bad[(2, 2)] = Fraction(0)
    rep = newton_check(SpectralData(sd.charpoly_exact, TropPoly2(bad), sd.N, sd.M))
    assert not rep.ok
    assert any("(2, 2)" in p for p in rep.problems)
    assert any("(0, 4)" in p for p in rep.problems)


def test_permanent_is_lower_bound():
    for name in ("example1", "example2"):
        s = fixtures.load(name)
        exact = spectral_data(s).charpoly_trop.coeffs
        bound = permanent_bound(s).coeffs
        assert all(bound[k] <= v for k, v in exact.items())
    # strict on example2 where signed terms cancel
    s = fixtures.load("example2")
    exact, bound = spectral_data(s).charpoly_trop.coeffs, permanent_bound(s).coeffs
    assert sorted(k for k in exact if bound[k] < exact[k]) == [(0, 1), (0, 2), (0, 3)]


def test_mixed_signs_are_reported():
    p = FormalPoly({(1, 0, 0): 1, (1, 0, 1): -2})
    with pytest.raises(CancellationDetected):
        tropicalize(p)
    assert tropicalize(FormalPoly({(0, 1, 3): -2, (0, 1, 5): -1}), scale=2).coeffs == {(0, 1): Fraction(3, 2)}
