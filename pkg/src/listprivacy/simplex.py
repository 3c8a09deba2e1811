"""Exact two-phase simplex over rationals.

Dense tableau, minimization form, variables implicitly nonnegative. Pivoting
is exact: entries are gmpy2.mpq when that package is installed (same
semantics, much faster) and fractions.Fraction otherwise. The entering rule is
steepest Dantzig descent until the objective stalls on degenerate pivots, at
which point Bland's rule takes over so cycling is impossible; the leaving rule
always breaks ratio ties toward the smallest basis index. Everything is
index-deterministic, so repeated solves are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

try:
    from gmpy2 import mpq as _Q  # type: ignore[import-not-found]
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _Q = Fraction

LESS, EQUAL, GREATER = "<=", "=", ">="

# Consecutive zero-progress pivots tolerated before switching to Bland's rule.
_STALL_LIMIT = 12


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    objective: Fraction | None
    x: tuple[Fraction, ...] | None


def _to_fraction(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


def _pivot(T: list, basis: list, red: list, row: int, col: int):
    prow = T[row]
    piv = prow[col]
    if piv != 1:
        prow = [v / piv for v in prow]
        T[row] = prow
    for i in range(len(T)):
        if i == row:
            continue
        f = T[i][col]
        if f != 0:
            T[i] = [a - f * p for a, p in zip(T[i], prow)]
    f = red[col]
    if f != 0:
        red[:] = [a - f * p for a, p in zip(red, prow)]
    basis[row] = col


def _reduced_costs(T: list, basis: list, cost: list) -> list:
    red = list(cost) + [cost[0] * 0]
    for i, bi in enumerate(basis):
        cb = cost[bi]
        if cb != 0:
            Ti = T[i]
            red = [a - cb * t for a, t in zip(red, Ti)]
    return red


def _run(T: list, basis: list, cost: list) -> tuple[str, list]:
    """Minimize cost over the current basic feasible solution, in place."""
    rhs = len(cost)
    red = _reduced_costs(T, basis, cost)
    stall = 0
    bland = False
    while True:
        enter = -1
        if bland:
            for j in range(rhs):
                if red[j] < 0:
                    enter = j
                    break
        else:
            best = red[rhs] * 0
            for j in range(rhs):
                if red[j] < best:
                    best = red[j]
                    enter = j
        if enter < 0:
            return "optimal", red
        leave = -1
        best_ratio = None
        for i in range(len(T)):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][rhs] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave < 0:
            return "unbounded", red
        if best_ratio == 0:
            stall += 1
            if stall >= _STALL_LIMIT:
                bland = True
        else:
            stall = 0
            bland = False
        _pivot(T, basis, red, leave, enter)


def solve_lp(
    costs: Sequence,
    rows: Sequence[Sequence],
    senses: Sequence[str],
    rhs: Sequence,
    maximize: bool = False,
) -> LpSolution:
    """Solve min (or max) costs.x subject to rows op rhs and x >= 0, exactly.

    `senses[i]` is one of "<=", "=", ">=". Returns exact Fractions for the
    objective and the structural variables.
    """
    m, n = len(rows), len(costs)
    if len(senses) != m or len(rhs) != m:
        raise ValueError("rows, senses, rhs must have equal length")
    for s in senses:
        if s not in (LESS, EQUAL, GREATER):
            raise ValueError(f"unknown sense {s!r}")
    sign = -1 if maximize else 1
    c_struct = [_Q(v) * sign for v in costs]

    A: list[list] = []
    b: list = []
    sense: list[str] = []
    flip = {LESS: GREATER, GREATER: LESS, EQUAL: EQUAL}
    for row, s, bv in zip(rows, senses, rhs):
        if len(row) != n:
            raise ValueError("row width does not match the cost vector")
        rq = [_Q(v) for v in row]
        bq = _Q(bv)
        if bq < 0:
            rq = [-v for v in rq]
            bq = -bq
            s = flip[s]
        A.append(rq)
        b.append(bq)
        sense.append(s)

    zero = _Q(0)
    one = _Q(1)
    slack_col: dict[int, int] = {}
    ncol = n
    for i, s in enumerate(sense):
        if s != EQUAL:
            slack_col[i] = ncol
            ncol += 1
    art_start = ncol
    art_col: dict[int, int] = {}
    for i, s in enumerate(sense):
        if s != LESS:
            art_col[i] = ncol
            ncol += 1

    T: list[list] = []
    basis: list[int] = []
    for i in range(m):
        row = A[i] + [zero] * (ncol - n) + [b[i]]
        if i in slack_col:
            row[slack_col[i]] = one if sense[i] == LESS else -one
        if i in art_col:
            row[art_col[i]] = one
            basis.append(art_col[i])
        else:
            basis.append(slack_col[i])
        T.append(row)

    if art_col:
        pcost = [zero] * ncol
        for col in art_col.values():
            pcost[col] = one
        status, red = _run(T, basis, pcost)
        if status != "optimal":
            raise AssertionError("phase one is bounded below by zero")
        if -red[ncol] != 0:
            return LpSolution(status=LpStatus.INFEASIBLE, objective=None, x=None)
        # Clear leftover degenerate artificials from the basis, dropping rows
        # that turn out redundant, then discard the artificial columns.
        arts = set(art_col.values())
        for i in range(len(T) - 1, -1, -1):
            if basis[i] not in arts:
                continue
            pivot_col = next(
                (j for j in range(art_start) if T[i][j] != 0),
                None,
            )
            if pivot_col is None:
                del T[i]
                del basis[i]
            else:
                _pivot(T, basis, red, i, pivot_col)
        T = [row[:art_start] + [row[ncol]] for row in T]
        ncol = art_start

    cost = c_struct + [zero] * (ncol - n)
    status, red = _run(T, basis, cost)
    if status == "unbounded":
        return LpSolution(status=LpStatus.UNBOUNDED, objective=None, x=None)
    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        if bi < n:
            x[bi] = _to_fraction(T[i][ncol])
    objective = _to_fraction(-red[ncol]) * sign
    return LpSolution(status=LpStatus.OPTIMAL, objective=objective, x=tuple(x))
