from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import brute
from tropbbs.errors import Acyclic, NegativeCycle, NoFiniteEigenvector, SizeMismatch
from tropbbs.trop import (
    INF,
    TropMatrix,
    TropPoly2,
    eigen_residual,
    fmt_rational,
    kleene_star,
    min_cycle_mean,
    rational,
    restrict_y,
    tadd,
    tmat_mul,
    tmat_prod,
    trop_eigenvector,
    trop_roots,
)

inf = INF


def M(rows):
    return TropMatrix(rows)


# --- scalars -------------------------------------------------------------


def test_tropical_product_absorbs_infinity():
    assert tadd(3, 5) == 8
    assert tadd(inf, 2) == inf
    assert tadd(Fraction(-1, 2), 2) == Fraction(3, 2)


def test_rational_parsing_and_format():
    assert rational("3/6") == Fraction(1, 2)
    assert fmt_rational(Fraction(-3, 4)) == "-3/4"
    assert fmt_rational(Fraction(2)) == "2"


# --- matrices ------------------------------------------------------------


def test_identity_is_neutral(rng):
    a = brute.random_matrix(rng, 4)
    E = TropMatrix.identity(4)
    assert tmat_mul(E, a) == a
    assert tmat_mul(a, E) == a


def test_mul_small_example():
    assert tmat_mul(M([[0, 1], [inf, 0]]), M([[0, inf], [2, 0]])) == M([[0, 1], [2, 0]])


def test_mul_size_mismatch():
    with pytest.raises(SizeMismatch):
        tmat_mul(TropMatrix.identity(2), TropMatrix.identity(3))
    with pytest.raises(SizeMismatch):
        TropMatrix([[1, 2]])


def test_mul_matches_triple_loop(rng):
    for _ in range(30):
        a, b = brute.random_matrix(rng, 4), brute.random_matrix(rng, 4)
        assert tmat_mul(a, b) == M(brute.mul(a, b))


def test_prod_is_left_to_right(rng):
    a, b, c = (brute.random_matrix(rng, 3) for _ in range(3))
    assert tmat_prod([a, b, c]) == a @ b @ c


def test_star_examples():
    assert kleene_star(M([[3]])) == M([[0]])
    assert kleene_star(M([[inf, 1], [2, inf]])) == M([[0, 1], [2, 0]])
    with pytest.raises(NegativeCycle):
        kleene_star(M([[-1]]))


def test_star_matches_path_enumeration(rng):
    for _ in range(30):
        a = brute.nonneg_cycle_matrix(rng, 4)
        assert kleene_star(a) == M(brute.star(a))


def test_cycle_mean_examples():
    assert min_cycle_mean(M([[5]])) == 5
    assert min_cycle_mean(M([[inf, 1], [3, inf]])) == 2
    with pytest.raises(Acyclic):
        min_cycle_mean(M([[inf, 1], [inf, inf]]))


def test_cycle_mean_matches_enumeration(rng):
    for _ in range(30):
        a = brute.cyclic_matrix(rng, 5)
        assert min_cycle_mean(a) == brute.cycle_mean(a)


# --- eigenvectors ----------------------------------------------------------


def test_eigenvector_examples():
    assert trop_eigenvector(M([[5]]), 5).vector == (0,)
    e = trop_eigenvector(M([[inf, 1], [3, inf]]), 2)
    # row 1: 1 + m2 = 2 + m1, so m2 - m1 = +1
    assert e.vector == (0, 1)
    assert not e.ambiguous


def test_eigenvector_residual_random(rng):
    done = 0
    while done < 20:
        a = brute.random_matrix(rng, 4, p_inf=0.1)
        lam = min_cycle_mean(a)
        try:
            e = trop_eigenvector(a, lam)
        except NoFiniteEigenvector:
            continue
        assert eigen_residual(a, e.vector) == [lam] * 4
        done += 1


def test_two_critical_classes_flagged():
    e = trop_eigenvector(M([[0, 5], [5, 0]]), 0)
    assert e.ambiguous
    assert eigen_residual(M([[0, 5], [5, 0]]), e.vector) == [0, 0]


# --- polynomials -----------------------------------------------------------


def test_restrict_y():
    p = TropPoly2({(1, 0): 0, (0, 1): 0})
    assert restrict_y(p, 7) == {1: 0, 0: 7}
    q = TropPoly2({(0, 0): 3, (0, 2): 1, (1, 1): 4})
    assert restrict_y(q, 0) == {0: 1, 1: 4}


def test_roots_examples():
    assert trop_roots({2: 0, 1: 1, 0: 3}) == [(1, 1), (2, 1)]
    assert trop_roots({1: 0, 0: 5}) == [(5, 1)]
    assert trop_roots({3: 0}) == []


def test_roots_of_tripled_line_at_y1():
    # (X + Y + 1)^3 in min-plus: c(i, j) = 3 - i - j
    p = TropPoly2({(i, j): 3 - i - j for i in range(4) for j in range(4) if i + j <= 3})
    assert trop_roots(restrict_y(p, 1)) == [(1, 3)]


def test_poly_text_round_trip():
    p = TropPoly2({(0, 1): Fraction(1, 2), (2, 0): 0, (0, 0): -3})
    assert p.to_text() == "0 0 -3\n0 1 1/2\n2 0 0\n"
    assert TropPoly2.from_text("# comment\n" + p.to_text()) == p


# --- properties ------------------------------------------------------------

entry = st.one_of(st.just(inf), st.integers(-5, 9).map(Fraction))


def matrices(n):
    return st.lists(st.lists(entry, min_size=n, max_size=n), min_size=n, max_size=n).map(TropMatrix)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(matrices(n), matrices(n), matrices(n))))
def test_mul_associative(abc):
    a, b, c = abc
    assert (a @ b) @ c == a @ (b @ c)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(matrices))
def test_star_idempotent(a):
    try:
        s = kleene_star(a)
    except NegativeCycle:
        return
    assert s @ s == s


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.integers(0, 6), st.integers(-6, 6).map(Fraction), min_size=2, max_size=6))
def test_roots_slope_change(p):
    roots = trop_roots(p)
    assert sum(m for _, m in roots) == max(p) - min(p)
    d = Fraction(1, 1000)
    for r, mult in roots:
        f = lambda x: min(c + i * x for i, c in p.items())  # noqa: E731
        left = (f(r) - f(r - d)) / d
        right = (f(r + d) - f(r)) / d
        assert left - right == mult
