"""Piecewise-affine upper bound on list privacy as a function of recoverability.

Every candidate anchor set (a subset of at most l symbols the adversary would
put on every list, whatever the response) contributes one affine function of
rho. The pointwise best anchor gives the bound at one rho; the upper envelope
of all the lines gives the whole curve, its kinks, and the staircase of anchor
cardinalities. For binary functions the bound is known to be attained, which
the optimal-mechanism constructor and the LP oracle both exercise.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .core import Instance, ensure_rho, format_rational, top_elements
from .errors import InstanceTooLarge

# Exhaustive anchor enumeration is the reference algorithm; refuse instances
# where sum_{t<=l} C(r,t) would exceed this.
SUBSET_ENUMERATION_CAP = 2_000_000


def subset_count(r: int, l: int) -> int:
    """Number of subsets of size at most l in an r-element alphabet."""
    return sum(math.comb(r, t) for t in range(l + 1))


def _ensure_enumerable(inst: Instance):
    n = subset_count(inst.r, inst.l)
    if n > SUBSET_ENUMERATION_CAP:
        raise InstanceTooLarge(
            f"{n} candidate anchors exceeds the cap of {SUBSET_ENUMERATION_CAP}"
        )


@dataclass(frozen=True)
class EnvelopeLine:
    """Affine contribution of one anchor set: value(rho) = intercept + slope * rho.

    The intercept is the anchor's own mass; the slope is the mass the
    remaining per-preimage top picks contribute once the response is trusted.
    """

    anchor: tuple[int, ...]
    intercept: Fraction
    slope: Fraction

    @property
    def cardinality(self) -> int:
        return len(self.anchor)

    def value_at(self, rho: Fraction) -> Fraction:
        return self.intercept + self.slope * rho


@dataclass(frozen=True)
class AnchorSet:
    """Optimal anchor at one recoverability level, with its per-preimage split.

    `objective` is the covered mass: anchor mass plus rho times the mass of the
    per-preimage top picks outside the anchor. The privacy bound is one minus it.
    """

    members: tuple[int, ...]
    per_class_counts: tuple[int, ...]
    objective: Fraction


@dataclass(frozen=True)
class CurveSegment:
    """One affine piece of the bound: value(rho) = intercept + slope * rho on [rho_lo, rho_hi]."""

    rho_lo: Fraction
    rho_hi: Fraction
    slope: Fraction
    intercept: Fraction

    def value_at(self, rho: Fraction) -> Fraction:
        return self.intercept + self.slope * rho


@dataclass(frozen=True)
class PrivacyCurve:
    """The full bound on [0, 1]: contiguous segments, kink abscissas, anchor sizes.

    `breakpoints` has exactly l entries, nondecreasing; entry j-1 is where the
    optimal anchor cardinality drops below l-j+1. Transitions that never
    happen before rho = 1 are recorded at 1, and a kink where the cardinality
    drops by more than one repeats its abscissa. `lambda_sizes` gives the
    anchor cardinality on each segment.
    """

    segments: tuple[CurveSegment, ...]
    breakpoints: tuple[Fraction, ...]
    lambda_sizes: tuple[int, ...]

    def value_at(self, rho) -> Fraction:
        rho = ensure_rho(rho)
        for seg in self.segments:
            if seg.rho_lo <= rho <= seg.rho_hi:
                return seg.value_at(rho)
        raise AssertionError("segments do not cover [0, 1]")

    def samples(self, n: int) -> list[tuple[Fraction, Fraction]]:
        """n+1 equispaced exact samples of the bound on [0, 1]."""
        if n < 1:
            raise ValueError("need at least one sampling interval")
        return [(Fraction(j, n), self.value_at(Fraction(j, n))) for j in range(n + 1)]


def _class_orders(inst: Instance) -> list[list[int]]:
    # Heaviest-first canonical order inside each preimage (ties to lower index).
    return [
        sorted(block, key=lambda x: (-inst.pmf[x], x)) for block in inst.preimages
    ]


def _line_for(inst: Instance, members: tuple[int, ...], orders) -> EnvelopeLine:
    chosen = set(members)
    take = inst.l - len(members)
    intercept = inst.mass(members)
    slope = Fraction(0)
    for order in orders:
        left = take
        for x in order:
            if left == 0:
                break
            if x not in chosen:
                slope += inst.pmf[x]
                left -= 1
    return EnvelopeLine(anchor=members, intercept=intercept, slope=slope)


def enumerate_lines(inst: Instance) -> list[EnvelopeLine]:
    """One line per candidate anchor (all subsets of size at most l)."""
    _ensure_enumerable(inst)
    orders = _class_orders(inst)
    lines = []
    for t in range(inst.l + 1):
        for members in combinations(range(inst.r), t):
            lines.append(_line_for(inst, members, orders))
    return lines


def _per_class_counts(inst: Instance, members: Iterable[int]) -> tuple[int, ...]:
    counts = [0] * inst.k
    for x in members:
        counts[inst.f[x]] += 1
    return tuple(counts)


def _canonical_members(inst: Instance, members: tuple[int, ...]) -> tuple[int, ...]:
    # Replace the selection inside each preimage by that preimage's top pick of
    # the same size. Never lowers the objective, so an optimal anchor stays
    # optimal and gains the canonical per-preimage form.
    counts = _per_class_counts(inst, members)
    out: list[int] = []
    for i, block in enumerate(inst.preimages):
        out.extend(top_elements(block, counts[i], inst.pmf))
    return tuple(sorted(out))


def anchor_set(inst: Instance, rho) -> AnchorSet:
    """Best anchor at one recoverability level, by exhaustive enumeration.

    Ties are resolved after a full scan: largest cardinality first, then the
    per-preimage canonical form, then the lexicographically smallest index
    tuple. The result always decomposes as per-preimage top picks.
    """
    rho = ensure_rho(rho)
    _ensure_enumerable(inst)
    lines = enumerate_lines(inst)
    best = max(line.value_at(rho) for line in lines)
    winners = [line for line in lines if line.value_at(rho) == best]
    top_card = max(line.cardinality for line in winners)
    candidates = set()
    for line in winners:
        if line.cardinality == top_card:
            canon = _canonical_members(inst, line.anchor)
            candidates.add(canon)
    members = min(candidates)
    counts = _per_class_counts(inst, members)
    objective = _line_for(inst, members, _class_orders(inst)).value_at(rho)
    if objective != best:
        raise AssertionError("canonical anchor lost objective mass")
    return AnchorSet(members=members, per_class_counts=counts, objective=best)


def privacy_bound(inst: Instance, rho) -> Fraction:
    """Upper bound on achievable list privacy at recoverability rho.

    Tight for binary functions; never exceeded by any admissible mechanism.
    """
    return 1 - anchor_set(inst, rho).objective


def privacy_at_zero(inst: Instance) -> Fraction:
    """Exact privacy in the uninformative regime: one minus the top-l mass.

    Valid for every rho up to 1/k, where the response can be ignored.
    """
    return 1 - inst.mass(top_elements(range(inst.r), inst.l, inst.pmf))


def privacy_at_one(inst: Instance) -> Fraction:
    """Exact privacy at full recoverability: guessing inside the revealed preimage."""
    covered = Fraction(0)
    for block in inst.preimages:
        covered += inst.mass(top_elements(block, min(inst.l, len(block)), inst.pmf))
    return 1 - covered


def privacy_curve(inst: Instance) -> PrivacyCurve:
    """The whole bound as a piecewise-affine curve on [0, 1].

    Builds the upper envelope of all anchor lines by slope order with exact
    intersection arithmetic, then reads kinks and anchor sizes off the
    surviving pieces.
    """
    _ensure_enumerable(inst)
    # Deduplicate identical lines, remembering the preferred witness: largest
    # cardinality, then lexicographically smallest member tuple.
    witness: dict[tuple[Fraction, Fraction], tuple[int, tuple[int, ...]]] = {}
    for line in enumerate_lines(inst):
        key = (line.slope, line.intercept)
        cand = (-line.cardinality, line.anchor)
        if key not in witness or cand < witness[key]:
            witness[key] = cand
    # For equal slopes only the highest intercept can ever win.
    by_slope: dict[Fraction, Fraction] = {}
    for slope, intercept in witness:
        if slope not in by_slope or intercept > by_slope[slope]:
            by_slope[slope] = intercept
    lines = sorted(
        (
            EnvelopeLine(
                anchor=witness[(s, b)][1],
                intercept=b,
                slope=s,
            )
            for s, b in by_slope.items()
        ),
        key=lambda ln: ln.slope,
    )
    # Left-to-right sweep: keep (line, start) pairs where each line begins to
    # lead. A newcomer with a steeper slope evicts every line it overtakes at
    # or before that line's own start.
    hull: list[tuple[EnvelopeLine, Fraction]] = []
    for line in lines:
        start = Fraction(0)
        while hull:
            leader, led_from = hull[-1]
            cross = (leader.intercept - line.intercept) / (line.slope - leader.slope)
            if cross <= led_from:
                hull.pop()
                continue
            start = cross
            break
        if not hull:
            start = Fraction(0)
        if start < 1:
            hull.append((line, start))
    segments = []
    sizes = []
    for idx, (line, start) in enumerate(hull):
        end = hull[idx + 1][1] if idx + 1 < len(hull) else Fraction(1)
        segments.append(
            CurveSegment(
                rho_lo=start,
                rho_hi=end,
                slope=-line.slope,
                intercept=1 - line.intercept,
            )
        )
        sizes.append(line.cardinality)
    if sizes[0] != inst.l:
        raise AssertionError("curve does not start at full anchor cardinality")
    if any(sizes[i] < sizes[i + 1] for i in range(len(sizes) - 1)):
        raise AssertionError("anchor cardinality increased along the curve")
    # Kinks where the anchor cardinality drops give the breakpoints; a drop by
    # d emits the same abscissa d times, and drops that never happen before
    # rho = 1 are recorded at 1.
    breakpoints: list[Fraction] = []
    for idx in range(1, len(hull)):
        drop = sizes[idx - 1] - sizes[idx]
        breakpoints.extend([hull[idx][1]] * drop)
    breakpoints.extend([Fraction(1)] * sizes[-1])
    if len(breakpoints) != inst.l:
        raise AssertionError("breakpoint count does not match the list size")
    return PrivacyCurve(
        segments=tuple(segments),
        breakpoints=tuple(breakpoints),
        lambda_sizes=tuple(sizes),
    )


def first_breakpoint(inst: Instance) -> Fraction:
    """Recoverability level where the bound first starts to decrease.

    Below it the best mechanism reveals nothing useful; the value is never
    smaller than 1/k.
    """
    return privacy_curve(inst).breakpoints[0]


# --- exports -----------------------------------------------------------------

def curve_to_jsonable(curve: PrivacyCurve) -> dict:
    return {
        "breakpoints": [format_rational(b) for b in curve.breakpoints],
        "segments": [
            {
                "rho_lo": format_rational(seg.rho_lo),
                "rho_hi": format_rational(seg.rho_hi),
                "slope": format_rational(seg.slope),
                "intercept": format_rational(seg.intercept),
                "anchor_size": size,
            }
            for seg, size in zip(curve.segments, curve.lambda_sizes)
        ],
    }


def curve_to_text(curve: PrivacyCurve) -> str:
    return json.dumps(curve_to_jsonable(curve), indent=2) + "\n"


def curve_segments_csv(curve: PrivacyCurve) -> str:
    """Segment table with exact rational strings."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["rho_lo", "rho_hi", "slope", "intercept", "anchor_size"])
    for seg, size in zip(curve.segments, curve.lambda_sizes):
        writer.writerow(
            [
                format_rational(seg.rho_lo),
                format_rational(seg.rho_hi),
                format_rational(seg.slope),
                format_rational(seg.intercept),
                size,
            ]
        )
    return buf.getvalue()


def curve_samples_csv(curve: PrivacyCurve, n: int) -> str:
    """Sampled table for plotting: decimals carry 12 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["rho", "privacy_bound"])
    for rho, val in curve.samples(n):
        writer.writerow([f"{float(rho):.12g}", f"{float(val):.12g}"])
    return buf.getvalue()
