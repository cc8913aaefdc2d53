from fractions import Fraction

from conftest import random_states
from tropbbs.bbs import BBSState, critical_class_count, solve_Q
from tropbbs.oracle import valuation_grid
from tropbbs.perron import inverse_lax_exact, jets, limit_row


def full_inverse(W, A):
    """Same product as inverse_lax_exact but keeping every term."""
    M = len(W[0])

    def mul(a, b):
        out = [[{} for _ in range(M)] for _ in range(M)]
        for i in range(M):
            for j in range(M):
                for k in range(M):
                    for e1, c1 in a[i][j].items():
                        for e2, c2 in b[j][k].items():
                            out[i][k][e1 + e2] = out[i][k].get(e1 + e2, 0) + c1 * c2
        return out

    S = [[{} for _ in range(M)] for _ in range(M)]
    for i in range(M - 1):
        S[i + 1][i] = {0: 1}
    S[0][M - 1] = {-A: 1}
    E = [[{0: 1} if i == j else {} for j in range(M)] for i in range(M)]
    out = None
    for w in W:
        K = [[{e + w[j]: c for e, c in S[i][j].items()} for j in range(M)] for i in range(M)]
        tot, P = E, E
        for _ in range(M - 1):
            P = mul(P, K)
            tot = [[{e: x.get(e, 0) + y.get(e, 0) for e in set(x) | set(y)} for x, y in zip(r1, r2)] for r1, r2 in zip(tot, P)]
        f = mul(tot, S)
        out = f if out is None else mul(out, f)
    return out


def test_truncation_keeps_two_lowest_terms():
    for s in random_states(13, 30, nmax=3, mmax=4):
        W = [[int(v) for v in r] for r in s.W]
        A = int(s.A)
        assert jets(inverse_lax_exact(W, A)) == jets(full_inverse(W, A))


def test_single_class_matches_kleene_column():
    for s in random_states(14, 40):
        if critical_class_count(s) != 1:
            continue
        W = [[int(v) for v in r] for r in s.W]
        assert tuple(limit_row(W, int(s.A), Fraction(1, 2) if s.A == s.B else 1)) == solve_Q(s)[0]


def test_ambiguous_states_follow_the_discrete_limit():
    done = 0
    for s in random_states(15, 200):
        if critical_class_count(s) < 2:
            continue
        grid = valuation_grid(s, eps_list=(0.02, 0.01), dps=120)
        Q = solve_Q(s)
        assert max(abs(grid[n][m] - float(Q[n][m])) for n in range(s.N) for m in range(s.M)) < 0.02
        done += 1
        if done == 6:
            break
    assert done == 6


def test_known_ambiguous_state():
    s = BBSState(2, 4, [[0, 4, 2, 0], [0, 3, 3, 0]], 2)
    row = limit_row([[0, 4, 2, 0], [0, 3, 3, 0]], 2)
    assert sum(row) == 2
    assert tuple(row) == solve_Q(s)[0]
