"""Query-response mechanism constructors and their file format.

A mechanism is a row-stochastic matrix from symbols to output symbols. The
add-noise family applies a channel to the function value itself, so rows agree
inside each preimage. For binary functions the flip channel built from the
curve's first kink is exactly optimal at every recoverability level.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import catalog
from .core import (
    Instance,
    StochasticMatrix,
    ensure_rho,
    format_rational,
    instance_digest,
    parse_rational,
)
from .envelope import first_breakpoint
from .errors import (
    DigestMismatch,
    DimensionMismatch,
    InstanceFormatError,
    NotBinaryFunction,
    NotRowStochastic,
    RhoOutOfRange,
)


@dataclass(frozen=True)
class NoisePmf:
    """A k x k channel on output symbols; row i is the noise pmf given value i."""

    conditional: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(parse_rational(v) for v in row) for row in self.conditional)
        object.__setattr__(self, "conditional", rows)
        if not rows:
            raise NotRowStochastic("noise channel has no rows")
        k = len(rows)
        for i, row in enumerate(rows):
            if len(row) != k:
                raise NotRowStochastic(f"noise row {i} has {len(row)} entries, expected {k}")
            for v in row:
                if v < 0:
                    raise NotRowStochastic(f"noise row {i} has negative entry {v}")
            if sum(row) != 1:
                raise NotRowStochastic(f"noise row {i} sums to {sum(row)}")

    @property
    def k(self) -> int:
        return len(self.conditional)


def uniform_qr(inst: Instance) -> StochasticMatrix:
    """Every output equally likely regardless of the symbol; recoverable at 1/k."""
    row = (Fraction(1, inst.k),) * inst.k
    return StochasticMatrix(rows=(row,) * inst.r)


def deterministic_qr(inst: Instance) -> StochasticMatrix:
    """Reports the function value outright; recoverable at 1."""
    rows = []
    for x in range(inst.r):
        row = [Fraction(0)] * inst.k
        row[inst.f[x]] = Fraction(1)
        rows.append(tuple(row))
    return StochasticMatrix(rows=tuple(rows))


def add_noise_qr(inst: Instance, noise: NoisePmf) -> StochasticMatrix:
    """Pass the function value through a modular additive channel.

    Output j given symbol x has probability noise[f(x)][(j - f(x)) mod k], so
    row i of the noise channel is the offset distribution used by preimage i.
    Rows agree inside every preimage by construction.
    """
    if noise.k != inst.k:
        raise DimensionMismatch(f"noise channel is {noise.k}-ary, instance needs {inst.k}")
    k = inst.k
    rows = []
    for x in range(inst.r):
        base = inst.f[x]
        rows.append(tuple(noise.conditional[base][(j - base) % k] for j in range(k)))
    return StochasticMatrix(rows=tuple(rows))


def optimal_binary_qr(inst: Instance, rho) -> StochasticMatrix:
    """The exactly optimal mechanism for a binary function at level rho.

    Reports the true value with probability max(rho, rho1) where rho1 is the
    curve's first kink, and flips it otherwise. Constant in rho below rho1.
    """
    rho = ensure_rho(rho)
    if inst.k != 2:
        raise NotBinaryFunction(f"function has {inst.k} output symbols")
    keep = max(rho, first_breakpoint(inst))
    noise = NoisePmf(conditional=((keep, 1 - keep), (keep, 1 - keep)))
    return add_noise_qr(inst, noise)


def ternary_example_qr(rho) -> tuple[Instance, StochasticMatrix]:
    """Reference mechanism on the bundled ternary5 instance, for rho in [1/2, 1].

    Not an add-noise construction: the singleton preimage hedges its
    complement mass across both other outputs, yet the mechanism still meets
    the privacy bound 1 - rho on the whole interval.
    """
    rho = parse_rational(rho)
    if not Fraction(1, 2) <= rho <= 1:
        raise RhoOutOfRange(f"this construction needs rho in [1/2, 1], got {rho}")
    inst = catalog.TERNARY5
    comp = 1 - rho
    half = comp / 2
    rows = (
        (rho, comp, Fraction(0)),
        (rho, comp, Fraction(0)),
        (comp, rho, Fraction(0)),
        (comp, rho, Fraction(0)),
        (half, half, rho),
    )
    return inst, StochasticMatrix(rows=rows)


# --- file format --------------------------------------------------------------

def matrix_to_jsonable(mech: StochasticMatrix, inst: Instance | None = None) -> dict:
    """Row-major exact strings, plus the instance digest when one is supplied."""
    out: dict = {
        "rows": [[format_rational(v) for v in row] for row in mech.rows],
    }
    if inst is not None:
        out["instance_digest"] = instance_digest(inst)
    return out


def matrix_to_text(mech: StochasticMatrix, inst: Instance | None = None) -> str:
    return json.dumps(matrix_to_jsonable(mech, inst), indent=2) + "\n"


def parse_matrix(text: str, inst: Instance | None = None) -> StochasticMatrix:
    """Parse a mechanism file; verify its digest when an instance is supplied."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(raw, Mapping) or "rows" not in raw:
        raise InstanceFormatError("mechanism file needs a 'rows' field")
    mech = StochasticMatrix(rows=tuple(tuple(row) for row in raw["rows"]))
    if inst is not None:
        stored = raw.get("instance_digest")
        if stored is not None and stored != instance_digest(inst):
            raise DigestMismatch(
                "mechanism file was written for a different instance "
                f"(digest {stored}, expected {instance_digest(inst)})"
            )
        if mech.r != inst.r or mech.k != inst.k:
            raise DimensionMismatch(
                f"matrix is {mech.r}x{mech.k}, instance needs {inst.r}x{inst.k}"
            )
    return mech


def parse_noise(text: str) -> NoisePmf:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(raw, Mapping) or "rows" not in raw:
        raise InstanceFormatError("noise file needs a 'rows' field")
    return NoisePmf(conditional=tuple(tuple(row) for row in raw["rows"]))
