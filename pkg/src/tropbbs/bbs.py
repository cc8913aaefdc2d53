"""Periodic two-dimensional box-ball system.

State layout: ``W[n][m]`` with 0-based ``n < N`` and ``m < M``; text formats
and error messages use 1-based labels.  The level ``A`` fixes the carrier content of every column of Q.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import kernels
from .errors import InvariantViolation, LevelTooHigh, NotFound, ParseError
from .trop import fmt_rational, rational


@dataclass(frozen=True)
class BBSState:
    N: int
    M: int
    W: tuple  # N rows of M Fractions
    A: Fraction

    def __post_init__(self):
        W = tuple(tuple(rational(v) for v in row) for row in self.W)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "A", rational(self.A))
        if self.N < 1 or self.M < 1:
            raise InvariantViolation("N and M must be positive")
        if len(W) != self.N or any(len(r) != self.M for r in W):
            raise InvariantViolation(f"W must be {self.N}x{self.M}")
        sums = [sum(r) for r in W]
        for n, s in enumerate(sums):
            if s != sums[0]:
                raise InvariantViolation(
                    f"row sum over m differs at n={n + 1}: {fmt_rational(s)} != {fmt_rational(sums[0])}"
                )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], A) -> "BBSState":
        """Build from M rows ``columns[m][n]`` as in the text format."""
        M = len(columns)
        N = len(columns[0])
        return cls(N, M, tuple(tuple(columns[m][n] for m in range(M)) for n in range(N)), A)

    @property
    def B(self) -> Fraction:
        return sum(self.W[0])

    @property
    def H(self) -> tuple:
        return tuple(sum(self.W[n][m] for n in range(self.N)) for m in range(self.M))

    def is_integral(self) -> bool:
        return self.A.denominator == 1 and all(v.denominator == 1 for r in self.W for v in r)


def conserved(s: BBSState):
    """``(A, B, H)`` with ``H[m]`` the total of column m over n."""
    return s.A, s.B, s.H


# ---------------------------------------------------------------------------
# scaled-integer bridge: the kernels run on integers sharing one denominator


def _scaled(s: BBSState):
    den = lcm(s.A.denominator, *(v.denominator for r in s.W for v in r))
    W = [[int(v * den) for v in r] for r in s.W]
    return W, int(s.A * den), den


def solve_Q(s: BBSState) -> tuple:
    """The unique Q grid (``Q[n][m]``, same layout as W) for the state.

    Row 1 comes from the tropical eigenvector of the min-plus image of
    ``P X_alpha^{-1} P``; the other rows from the explicit sweep, and row 1 is
    re-derived from row 2 as a consistency check.  When that eigenvector is
    not unique, the one picked is the limit of the positive Perron vector
    (see :mod:`tropbbs.perron`).
    """
    if s.A > s.B:
        raise LevelTooHigh(f"A={fmt_rational(s.A)} exceeds B={fmt_rational(s.B)}")
    W, A, den = _scaled(s)
    Q, qden, _ = kernels.solve_q(W, A)
    scale = den * qden
    return tuple(tuple(Fraction(v, scale) for v in row) for row in Q)


def critical_class_count(s: BBSState) -> int:
    """Number of critical classes behind row 1 of Q.

    With more than one class the tropical eigenvector is not unique and
    :func:`solve_Q` falls back on the slower exact limit computation.
    """
    W, A, _ = _scaled(s)
    return kernels.solve_q(W, A)[2]


def evolve(s: BBSState) -> BBSState:
    """One time step: W'[n][m] = Q[n+1][m] + W[n][m] - Q[n][m]."""
    Q = solve_Q(s)
    N = s.N
    W = tuple(
        tuple(Q[(n + 1) % N][m] + s.W[n][m] - Q[n][m] for m in range(s.M)) for n in range(N)
    )
    return BBSState(N, s.M, W, s.A)


def shift_n(s: BBSState) -> BBSState:
    """Relabel n -> n + 1 (the new row n is the old row n + 1)."""
    return BBSState(s.N, s.M, s.W[1:] + s.W[:1], s.A)


def shift_m(s: BBSState) -> BBSState:
    """Relabel m -> m + 1 (the new column m is the old column m + 1)."""
    return BBSState(s.N, s.M, tuple(r[1:] + r[:1] for r in s.W), s.A)


def find_period(s: BBSState, t_max: int) -> int:
    """Least F <= t_max with evolve^F(s) == s."""
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    if s.A > s.B:
        raise LevelTooHigh(f"A={fmt_rational(s.A)} exceeds B={fmt_rational(s.B)}")
    W, A, den = _scaled(s)
    F = kernels.find_period(W, A, t_max)
    if F is None:
        raise NotFound(f"no recurrence within {t_max} steps")
    return F


def trajectory(s: BBSState, steps: int) -> list[BBSState]:
    out = [s]
    for _ in range(steps):
        out.append(evolve(out[-1]))
    return out


# ---------------------------------------------------------------------------
# text I/O


def _cell(v: Fraction) -> str:
    if v == 0:
        return "."
    if v.denominator == 1 and 0 < v <= 9:
        return str(v.numerator)
    return f"[{fmt_rational(v)}]"


def render(s: BBSState, Q: tuple | None = None) -> str:
    """ASCII picture: rows m = M..1, each ``Q[1][m]|W[N][m]...W[1][m]``."""
    if Q is None:
        Q = solve_Q(s)
    lines = []
    for m in reversed(range(s.M)):
        lines.append(_cell(Q[0][m]) + "|" + "".join(_cell(s.W[n][m]) for n in reversed(range(s.N))))
    return "\n".join(lines)


def format_state(s: BBSState) -> str:
    lines = [f"{s.N} {s.M}", f"A {fmt_rational(s.A)}"]
    for m in range(s.M):
        lines.append(" ".join(fmt_rational(s.W[n][m]) for n in range(s.N)))
    return "\n".join(lines) + "\n"


def parse_state(text: str) -> BBSState:
    """Read the text format written by :func:`format_state`.

    Blank lines and ``#`` comments are ignored.  Errors carry 1-based line
    numbers of the source text.
    """
    lines = []
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((no, body.split()))
    if len(lines) < 2:
        raise ParseError("expected 'N M' and 'A <rational>' header lines")
    no, head = lines[0]
    if len(head) != 2:
        raise ParseError(f"line {no}: expected 'N M'")
    try:
        N, M = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError(f"line {no}: N and M must be integers") from None
    if N < 1 or M < 1:
        raise ParseError(f"line {no}: N and M must be positive")
    no, lvl = lines[1]
    if len(lvl) != 2 or lvl[0] != "A":
        raise ParseError(f"line {no}: expected 'A <rational>'")
    A = _parse_rational(lvl[1], no)
    if len(lines) - 2 != M:
        raise ParseError(f"expected {M} rows of W after the header, found {len(lines) - 2}")
    columns = []
    for no, row in lines[2:]:
        if len(row) != N:
            raise ParseError(f"line {no}: expected {N} values, found {len(row)}")
        columns.append([_parse_rational(tok, no) for tok in row])
    W = [[columns[m][n] for m in range(M)] for n in range(N)]
    B = sum(W[0])
    for n in range(1, N):
        if sum(W[n]) != B:
            # column n of the file spans the W rows, one per line
            raise InvariantViolation(
                f"lines {lines[2][0]}-{lines[-1][0]}: sum over m at n={n + 1} is "
                f"{fmt_rational(sum(W[n]))}, expected {fmt_rational(B)} (from n=1)"
            )
    if A > B:
        raise InvariantViolation(f"line {lines[1][0]}: A={fmt_rational(A)} exceeds B={fmt_rational(B)}")
    return BBSState(N, M, W, A)


def _parse_rational(tok: str, no: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"line {no}: not a rational number: {tok!r}") from None
