"""Independent LP oracle for the exact best achievable list privacy.

Maximizing privacy over admissible mechanisms is a linear program once the
adversary's best-list mass per output is replaced by an epigraph variable
bounded below by every candidate list. The program is solved with the exact
rational simplex, entirely independent of the analytic bound machinery, so the
two routes can be compared at face value. The optimal matrix comes back as a
certified witness: it is re-evaluated against the optimal adversary and must
reproduce the optimum exactly.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .adversary import list_privacy
from .core import Instance, StochasticMatrix, ensure_rho, format_rational
from .errors import InstanceTooLarge
from .simplex import EQUAL, GREATER, LESS, LpStatus, solve_lp

# Override the default size cap (on outputs times candidate lists) through
# this environment variable.
ORACLE_CAP_ENV = "LISTPRIVACY_ORACLE_CAP"
DEFAULT_ORACLE_CAP = 100_000


@dataclass(frozen=True)
class OracleResult:
    """Exact optimum with a certified witness mechanism.

    `active_lists[i]` holds every l-list attaining the adversary's best mass on
    output i under the witness. `witness_is_add_noise` records whether the
    witness rows agree inside each preimage, i.e. whether the LP happened to
    return a mechanism that only looks at the function value.
    """

    optimum: Fraction
    witness: StochasticMatrix
    active_lists: tuple[tuple[tuple[int, ...], ...], ...]
    witness_is_add_noise: bool


def _constraint_budget(inst: Instance) -> int:
    return inst.k * math.comb(inst.r, inst.l)


def _resolve_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    raw = os.environ.get(ORACLE_CAP_ENV)
    if raw is None:
        return DEFAULT_ORACLE_CAP
    try:
        return int(raw)
    except ValueError:
        raise InstanceTooLarge(
            f"{ORACLE_CAP_ENV} must be an integer, got {raw!r}"
        ) from None


def _ensure_within_cap(inst: Instance, cap: int | None):
    cap = _resolve_cap(cap)
    budget = _constraint_budget(inst)
    if budget > cap:
        raise InstanceTooLarge(
            f"{budget} list constraints exceeds the oracle cap of {cap}"
        )


def _lp_parts(inst: Instance, rho: Fraction):
    """Cost vector and constraint rows; variables are w(x,i) then t(i)."""
    r, k, l = inst.r, inst.k, inst.l
    nw = r * k
    n = nw + k

    def w(x: int, i: int) -> int:
        return x * k + i

    costs = [Fraction(0)] * nw + [Fraction(1)] * k
    rows: list[list[Fraction]] = []
    senses: list[str] = []
    rhs: list[Fraction] = []
    names: list[str] = []
    for i in range(k):
        for lst in combinations(range(r), l):
            row = [Fraction(0)] * n
            for x in lst:
                row[w(x, i)] = inst.pmf[x]
            row[nw + i] = Fraction(-1)
            rows.append(row)
            senses.append(LESS)
            rhs.append(Fraction(0))
            names.append(f"list_{i}_" + "_".join(str(x) for x in lst))
    for x in range(r):
        row = [Fraction(0)] * n
        for i in range(k):
            row[w(x, i)] = Fraction(1)
        rows.append(row)
        senses.append(EQUAL)
        rhs.append(Fraction(1))
        names.append(f"row_{x}")
    if rho > 0:
        for x in range(r):
            row = [Fraction(0)] * n
            row[w(x, inst.f[x])] = Fraction(1)
            rows.append(row)
            senses.append(GREATER)
            rhs.append(rho)
            names.append(f"recover_{x}")
    return costs, rows, senses, rhs, names


def exact_privacy(inst: Instance, rho, cap: int | None = None) -> OracleResult:
    """Best achievable list privacy at level rho, solved exactly.

    Raises InstanceTooLarge when outputs times candidate lists exceeds the cap
    (default 100000, see ORACLE_CAP_ENV).
    """
    rho = ensure_rho(rho)
    _ensure_within_cap(inst, cap)
    costs, rows, senses, rhs, _ = _lp_parts(inst, rho)
    sol = solve_lp(costs, rows, senses, rhs)
    if sol.status is not LpStatus.OPTIMAL:
        raise AssertionError(f"privacy program should always solve, got {sol.status}")
    r, k = inst.r, inst.k
    witness = StochasticMatrix(
        rows=tuple(tuple(sol.x[x * k + i] for i in range(k)) for x in range(r))
    )
    optimum = 1 - sol.objective
    report = list_privacy(inst, witness)
    if report.privacy != optimum:
        raise AssertionError(
            f"witness certifies {report.privacy}, program claims {optimum}"
        )
    active = []
    for i in range(k):
        best = report.per_output_mass[i]
        attaining = tuple(
            lst
            for lst in combinations(range(r), inst.l)
            if sum((inst.pmf[x] * witness.rows[x][i] for x in lst), Fraction(0)) == best
        )
        active.append(attaining)
    within = all(
        witness.rows[x] == witness.rows[block[0]]
        for block in inst.preimages
        for x in block
    )
    return OracleResult(
        optimum=optimum,
        witness=witness,
        active_lists=tuple(active),
        witness_is_add_noise=within,
    )


def exact_privacy_curve(
    inst: Instance, grid: Sequence, cap: int | None = None
) -> tuple[tuple[Fraction, OracleResult], ...]:
    """Oracle values over a grid of levels, checked to be nonincreasing in rho."""
    levels = [ensure_rho(rho) for rho in grid]
    results = [(rho, exact_privacy(inst, rho, cap)) for rho in levels]
    ordered = sorted(results, key=lambda pair: pair[0])
    for (_, left), (_, right) in zip(ordered, ordered[1:]):
        if right.optimum > left.optimum:
            raise AssertionError("oracle curve increased with rho")
    return tuple(results)


def lp_text(inst: Instance, rho) -> str:
    """The privacy program in LP interchange text, for external solvers.

    Coefficients are shortest-repr decimals of the exact rationals; external
    floating-point solvers should be compared at a small tolerance.
    """
    rho = ensure_rho(rho)
    r, k = inst.r, inst.k
    nw = r * k

    def var(j: int) -> str:
        if j < nw:
            return f"w_{j // k}_{j % k}"
        return f"t_{j - nw}"

    costs, rows, senses, rhs, names = _lp_parts(inst, rho)
    out = [
        f"\\ list privacy program, rho = {format_rational(rho)}",
        "Minimize",
        " obj: " + " + ".join(var(nw + i) for i in range(k)),
        "Subject To",
    ]
    for name, row, sense, bound in zip(names, rows, senses, rhs):
        terms = []
        for j, coef in enumerate(row):
            if coef == 0:
                continue
            lead = "-" if coef < 0 else ("+" if terms else "")
            mag = abs(coef)
            piece = var(j) if mag == 1 else f"{float(mag)!r} {var(j)}"
            terms.append(f"{lead} {piece}".strip())
        out.append(f" {name}: " + " ".join(terms) + f" {sense} {float(bound)!r}")
    out.append("End")
    return "\n".join(out) + "\n"
