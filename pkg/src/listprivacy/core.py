"""Exact domain types: problem instances, row-stochastic mechanisms, list estimators.

All probabilities are `fractions.Fraction` values end to end. Nothing in this
package ever rounds; serialization keeps the exact numerator/denominator form
so a round trip is bit-identical.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadFunctionRange,
    DimensionMismatch,
    EmptyPreimage,
    InstanceFormatError,
    ListSizeOutOfRange,
    NotRowStochastic,
    PmfNotNormalized,
    RhoOutOfRange,
    TooManyRequested,
    ZeroMassSymbol,
)

# Exact carrier for every probability and recoverability level in the package.
Rational = Fraction

ONE = Fraction(1)
ZERO = Fraction(0)


def parse_rational(value) -> Fraction:
    """Parse an exact rational from "p/q", a decimal literal, or an int.

    Decimal strings are exact: "0.3" becomes 3/10, never a float. Floats are
    accepted for convenience and go through their shortest decimal repr.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InstanceFormatError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        value = repr(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InstanceFormatError(f"not a rational: {value!r}") from exc
    raise InstanceFormatError(f"not a rational: {value!r}")


def format_rational(value: Fraction) -> str:
    """Canonical exact string, e.g. 3/10, 1, 0."""
    return str(Fraction(value))


def ensure_rho(rho) -> Fraction:
    """Parse a recoverability level and require it to lie in [0, 1]."""
    rho = parse_rational(rho)
    if not 0 <= rho <= 1:
        raise RhoOutOfRange(f"recoverability level {rho} outside [0, 1]")
    return rho


@dataclass(frozen=True)
class Instance:
    """A finite estimation problem: pmf on {0..r-1}, function f into {0..k-1}, list size l.

    Validation runs on construction, so an Instance in hand is always sound:
    positive pmf summing to one, surjective f onto {0..k-1} with 2 <= k <= r,
    and 1 <= l < r. `labels` is optional display metadata and plays no role in
    any computation.
    """

    pmf: tuple[Fraction, ...]
    f: tuple[int, ...]
    l: int
    k: int = None  # type: ignore[assignment]  # derived from f when omitted
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        pmf = tuple(parse_rational(p) for p in self.pmf)
        object.__setattr__(self, "pmf", pmf)
        f = tuple(self.f)
        object.__setattr__(self, "f", f)
        r = len(pmf)
        if r == 0:
            raise InstanceFormatError("pmf is empty")
        if len(f) != r:
            raise InstanceFormatError(f"pmf has {r} entries but f has {len(f)}")
        for v in f:
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise BadFunctionRange(f"function value {v!r} is not a nonnegative integer")
        k = self.k if self.k is not None else max(f) + 1
        if not isinstance(k, int) or isinstance(k, bool):
            raise InstanceFormatError(f"k must be an integer, got {self.k!r}")
        object.__setattr__(self, "k", k)
        if k < 2 or k > r:
            raise BadFunctionRange(f"need 2 <= k <= r, got k={k} with r={r}")
        for x, v in enumerate(f):
            if v >= k:
                raise BadFunctionRange(f"f({x})={v} outside {{0..{k - 1}}}")
        for x, p in enumerate(pmf):
            if p <= 0:
                raise ZeroMassSymbol(f"pmf entry {x} is {p}; every symbol needs positive mass")
        total = sum(pmf)
        if total != 1:
            raise PmfNotNormalized(f"pmf sums to {total}")
        seen = set(f)
        for i in range(k):
            if i not in seen:
                raise EmptyPreimage(f"output symbol {i} is never taken")
        if not isinstance(self.l, int) or isinstance(self.l, bool) or not 1 <= self.l < r:
            raise ListSizeOutOfRange(f"need 1 <= l < r, got l={self.l!r} with r={r}")
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != r:
                raise InstanceFormatError(f"{len(labels)} labels for {r} symbols")
            object.__setattr__(self, "labels", labels)

    @property
    def r(self) -> int:
        """Alphabet size."""
        return len(self.pmf)

    @cached_property
    def preimages(self) -> tuple[tuple[int, ...], ...]:
        """Index sets f^-1(i) for i = 0..k-1, each sorted ascending."""
        buckets: list[list[int]] = [[] for _ in range(self.k)]
        for x, v in enumerate(self.f):
            buckets[v].append(x)
        return tuple(tuple(b) for b in buckets)

    def preimage(self, i: int) -> tuple[int, ...]:
        return self.preimages[i]

    def mass(self, members: Iterable[int]) -> Fraction:
        """Total pmf mass of a set of symbols."""
        return sum((self.pmf[x] for x in members), ZERO)

    def with_list_size(self, l: int) -> "Instance":
        """Same pmf and function, different list size."""
        return Instance(self.pmf, self.f, l, self.k, self.labels)

    def label_of(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)


@dataclass(frozen=True)
class StochasticMatrix:
    """Row-stochastic r x k matrix; rows[x][i] is the chance of output i given x.

    Entries are exact rationals, each row sums to exactly one.
    """

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(parse_rational(v) for v in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows or not rows[0]:
            raise NotRowStochastic("matrix has no entries")
        width = len(rows[0])
        for x, row in enumerate(rows):
            if len(row) != width:
                raise NotRowStochastic(f"row {x} has {len(row)} entries, expected {width}")
            for v in row:
                if v < 0:
                    raise NotRowStochastic(f"row {x} has negative entry {v}")
            if sum(row) != 1:
                raise NotRowStochastic(f"row {x} sums to {sum(row)}")

    @property
    def r(self) -> int:
        return len(self.rows)

    @property
    def k(self) -> int:
        return len(self.rows[0])

    def entry(self, x: int, i: int) -> Fraction:
        return self.rows[x][i]


@dataclass(frozen=True)
class ListEstimator:
    """One candidate list per output symbol; lists[i] is the guess set for output i."""

    lists: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        lists = tuple(tuple(sorted(int(x) for x in lst)) for lst in self.lists)
        object.__setattr__(self, "lists", lists)
        if not lists:
            raise ValueError("estimator has no lists")
        size = len(lists[0])
        for i, lst in enumerate(lists):
            if len(lst) != size:
                raise ValueError(f"list {i} has {len(lst)} entries, expected {size}")
            if len(set(lst)) != len(lst):
                raise ValueError(f"list {i} repeats an element")
            if lst and lst[0] < 0:
                raise ValueError(f"list {i} has a negative element")
        if size < 1:
            raise ValueError("lists must be nonempty")

    @property
    def list_size(self) -> int:
        return len(self.lists[0])


def top_elements(members: Iterable[int], t: int, pmf: Sequence[Fraction]) -> tuple[int, ...]:
    """The t heaviest symbols of a pool, as an ascending index tuple.

    Ranking is by probability descending with index ascending as the
    tie-break, so the result is unique even under tied masses. t = 0 gives ().
    """
    pool = sorted({int(x) for x in members})
    if not 0 <= t <= len(pool):
        raise TooManyRequested(f"asked for {t} of {len(pool)} elements")
    ranked = sorted(pool, key=lambda x: (-pmf[x], x))
    return tuple(sorted(ranked[:t]))


def is_recoverable(mech: StochasticMatrix, inst: Instance, rho: Fraction) -> bool:
    """True when every symbol reports its own function value with chance >= rho."""
    if mech.r != inst.r or mech.k != inst.k:
        raise DimensionMismatch(
            f"matrix is {mech.r}x{mech.k}, instance needs {inst.r}x{inst.k}"
        )
    rho = parse_rational(rho)
    return all(mech.rows[x][inst.f[x]] >= rho for x in range(inst.r))


def recoverability_level(mech: StochasticMatrix, inst: Instance) -> Fraction:
    """Largest rho at which the mechanism is still rho-recoverable."""
    if mech.r != inst.r or mech.k != inst.k:
        raise DimensionMismatch(
            f"matrix is {mech.r}x{mech.k}, instance needs {inst.r}x{inst.k}"
        )
    return min(mech.rows[x][inst.f[x]] for x in range(inst.r))


# --- serialization -----------------------------------------------------------

def validate_instance(raw: Mapping) -> Instance:
    """Build an Instance from parsed structured text, checking every invariant.

    Expected keys: "pmf" (list of exact rational strings), "f" (list of ints),
    "l" (int). Optional: "k" (declared output alphabet size) and "labels".
    """
    if not isinstance(raw, Mapping):
        raise InstanceFormatError(f"expected a mapping, got {type(raw).__name__}")
    for key in ("pmf", "f", "l"):
        if key not in raw:
            raise InstanceFormatError(f"missing required field {key!r}")
    pmf = raw["pmf"]
    f = raw["f"]
    if not isinstance(pmf, Sequence) or isinstance(pmf, (str, bytes)):
        raise InstanceFormatError("pmf must be a sequence")
    if not isinstance(f, Sequence) or isinstance(f, (str, bytes)):
        raise InstanceFormatError("f must be a sequence")
    fn = []
    for v in f:
        if isinstance(v, bool) or not isinstance(v, int):
            raise BadFunctionRange(f"function value {v!r} is not an integer")
        fn.append(v)
    k = raw.get("k")
    if k is not None and (isinstance(k, bool) or not isinstance(k, int)):
        raise InstanceFormatError(f"k must be an integer, got {k!r}")
    l = raw["l"]
    if isinstance(l, bool) or not isinstance(l, int):
        raise ListSizeOutOfRange(f"l must be an integer, got {l!r}")
    labels = raw.get("labels")
    if labels is not None:
        if not isinstance(labels, Sequence) or isinstance(labels, (str, bytes)):
            raise InstanceFormatError("labels must be a sequence of strings")
        labels = tuple(str(s) for s in labels)
    return Instance(
        pmf=tuple(parse_rational(p) for p in pmf),
        f=tuple(fn),
        l=l,
        k=k,
        labels=labels,
    )


def instance_to_jsonable(inst: Instance) -> dict:
    """JSON-ready dict with exact rational strings; round-trips bit-identically."""
    out = {
        "pmf": [format_rational(p) for p in inst.pmf],
        "f": list(inst.f),
        "l": inst.l,
        "k": inst.k,
    }
    if inst.labels is not None:
        out["labels"] = list(inst.labels)
    return out


def instance_to_text(inst: Instance) -> str:
    return json.dumps(instance_to_jsonable(inst), indent=2) + "\n"


def parse_instance(text: str) -> Instance:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not valid JSON: {exc}") from exc
    return validate_instance(raw)


def instance_digest(inst: Instance) -> str:
    """Short content hash of the mathematical part of an instance.

    Labels are excluded: a mechanism built for a pmf/function/list-size triple
    is valid regardless of display names.
    """
    payload = json.dumps(
        {
            "pmf": [format_rational(p) for p in inst.pmf],
            "f": list(inst.f),
            "l": inst.l,
            "k": inst.k,
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode("ascii")).hexdigest()[:16]
