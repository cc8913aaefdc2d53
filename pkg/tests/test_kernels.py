import os
import random
import subprocess
import sys

import pytest

from conftest import random_states
from tropbbs import _pykernels as py
from tropbbs import kernels

cy = pytest.importorskip("tropbbs._ckernels")


def int_matrix(rng, n, p_none=0.3, lo=-3, hi=9):
    return [[None if rng.random() < p_none else rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]


def grid(s):
    return [[int(v) for v in r] for r in s.W], int(s.A)


def test_backend_selection():
    assert kernels.BACKEND in ("cython", "python")
    env = dict(os.environ, TROPBBS_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from tropbbs import kernels; print(kernels.BACKEND)"],
        capture_output=True, text=True, env=env,
    )
    assert out.stdout.strip() == "python"


def test_minplus_kernels_agree():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(1, 5)
        a, b = int_matrix(rng, n), int_matrix(rng, n)
        assert cy.minplus_matmul(a, b) == py.minplus_matmul(a, b)
        assert cy.minplus_closure(a) == py.minplus_closure(a)
        assert cy.minplus_star(a) == py.minplus_star(a)
        assert cy.karp_mean(a) == py.karp_mean(a)


def test_sweeps_agree():
    rng = random.Random(4)
    for _ in range(100):
        M = rng.randint(1, 5)
        q = [rng.randint(-4, 6) for _ in range(M)]
        w = [rng.randint(0, 6) for _ in range(M)]
        assert cy.sweep_row(q, w) == py.sweep_row(q, w)


def test_solve_q_agrees():
    for s in random_states(9, 150):
        W, A = grid(s)
        assert cy.inverse_lax_matrix(W, A) == py.inverse_lax_matrix(W, A)
        assert cy.solve_q(W, A) == py.solve_q(W, A)


def test_ambiguous_state_agrees():
    W, A = [[0, 4, 2, 0], [0, 3, 3, 0]], 2
    res = cy.solve_q(W, A)
    assert res == py.solve_q(W, A)
    assert res[2] == 2


def test_find_period_agrees():
    for s in random_states(10, 60):
        W, A = grid(s)
        assert cy.find_period(W, A, 60) == py.find_period(W, A, 60)


def test_large_values_fall_back():
    big = 2 ** 45
    W, A = [[big, 0], [0, big]], big - 1
    assert cy.solve_q(W, A) == py.solve_q(W, A)
    assert cy.find_period(W, A, 10) == py.find_period(W, A, 10)
