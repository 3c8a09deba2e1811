"""The list adversary: optimal estimators and exact privacy evaluation.

Given the response, the best l-list collects the symbols with the largest
joint mass pmf[x] * W(i|x). Privacy is the chance the true symbol misses the
list; ties in the scores never change the value, only which witness list is
reported.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .core import Instance, ListEstimator, StochasticMatrix, format_rational
from .errors import DimensionMismatch


@dataclass(frozen=True)
class PrivacyReport:
    """Exact evaluation of one mechanism: privacy, witness estimator, per-output mass."""

    privacy: Fraction
    estimator: ListEstimator
    per_output_mass: tuple[Fraction, ...]


def _check_dims(inst: Instance, mech: StochasticMatrix):
    if mech.r != inst.r or mech.k != inst.k:
        raise DimensionMismatch(
            f"matrix is {mech.r}x{mech.k}, instance needs {inst.r}x{inst.k}"
        )


def map_list_estimator(inst: Instance, mech: StochasticMatrix) -> ListEstimator:
    """Optimal estimator: per output, the l symbols of largest posterior mass.

    Ties break by score descending then index ascending, so the witness is
    deterministic; any other tie-break attains the same privacy.
    """
    _check_dims(inst, mech)
    lists = []
    for i in range(inst.k):
        ranked = sorted(
            range(inst.r), key=lambda x: (-inst.pmf[x] * mech.rows[x][i], x)
        )
        lists.append(tuple(sorted(ranked[: inst.l])))
    return ListEstimator(lists=tuple(lists))


def list_privacy(inst: Instance, mech: StochasticMatrix) -> PrivacyReport:
    """Exact privacy of a mechanism against the optimal list adversary.

    The miss probability is one minus the sum over outputs of their heaviest
    l-list mass.
    """
    _check_dims(inst, mech)
    lists = []
    masses = []
    for i in range(inst.k):
        scores = [(inst.pmf[x] * mech.rows[x][i], x) for x in range(inst.r)]
        scores.sort(key=lambda sv: (-sv[0], sv[1]))
        picked = scores[: inst.l]
        masses.append(sum((s for s, _ in picked), Fraction(0)))
        lists.append(tuple(sorted(x for _, x in picked)))
    privacy = 1 - sum(masses)
    if not 0 <= privacy <= 1:
        raise AssertionError(f"privacy {privacy} escaped [0, 1]")
    return PrivacyReport(
        privacy=privacy,
        estimator=ListEstimator(lists=tuple(lists)),
        per_output_mass=tuple(masses),
    )


def report_to_jsonable(report: PrivacyReport, inst: Instance | None = None) -> dict:
    """Structured form with exact strings, a decimal, and labeled lists when known."""
    if inst is not None:
        lists = [[inst.label_of(x) for x in lst] for lst in report.estimator.lists]
    else:
        lists = [list(lst) for lst in report.estimator.lists]
    return {
        "privacy": format_rational(report.privacy),
        "privacy_decimal": float(report.privacy),
        "per_output_mass": [format_rational(m) for m in report.per_output_mass],
        "estimator": lists,
    }


def report_to_text(report: PrivacyReport, inst: Instance | None = None) -> str:
    return json.dumps(report_to_jsonable(report, inst), indent=2) + "\n"
