"""Command line front end.

Instances are JSON files or bundled catalog names (skew7, uniform4,
ternary5). Artifacts go to stdout unless --output names a file. Any library
error prints `error: <Code>: <message>` on stderr and exits nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog
from .adversary import list_privacy, map_list_estimator, report_to_jsonable
from .core import (
    Instance,
    ensure_rho,
    format_rational,
    instance_digest,
    is_recoverable,
    parse_instance,
    parse_rational,
)
from .envelope import (
    curve_samples_csv,
    curve_segments_csv,
    curve_to_text,
    privacy_bound,
    privacy_curve,
)
from .errors import InstanceFormatError, ListPrivacyError
from .mechanisms import (
    deterministic_qr,
    matrix_to_text,
    optimal_binary_qr,
    parse_matrix,
    parse_noise,
    add_noise_qr,
    ternary_example_qr,
    uniform_qr,
)
from .oracle import exact_privacy, lp_text
from .simulate import (
    privacy_sweep,
    report_to_jsonable as sim_report_jsonable,
    simulate_game,
    sweep_to_csv,
)

MECHANISM_KINDS = (
    "uniform",
    "deterministic",
    "optimal-binary",
    "ternary-example",
    "noise-file",
)


def _resolve_instance(name: str) -> Instance:
    if name in catalog.CATALOG:
        return catalog.instance(name)
    path = Path(name)
    if not path.exists():
        raise InstanceFormatError(
            f"{name!r} is neither a catalog name ({', '.join(catalog.names())}) nor a file"
        )
    return parse_instance(path.read_text())


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _build_mechanism(inst: Instance, args):
    kind = args.kind
    if kind == "uniform":
        return uniform_qr(inst)
    if kind == "deterministic":
        return deterministic_qr(inst)
    if kind == "optimal-binary":
        _require(args.rho is not None, "--rho is required for optimal-binary")
        return optimal_binary_qr(inst, parse_rational(args.rho))
    if kind == "ternary-example":
        _require(args.rho is not None, "--rho is required for ternary-example")
        fixed, mech = ternary_example_qr(parse_rational(args.rho))
        if inst != fixed:
            raise InstanceFormatError(
                "the ternary-example construction is defined only for the "
                "bundled ternary5 instance"
            )
        return mech
    if kind == "noise-file":
        _require(args.noise is not None, "--noise is required for noise-file")
        noise = parse_noise(Path(args.noise).read_text())
        return add_noise_qr(inst, noise)
    raise InstanceFormatError(f"unknown mechanism kind {kind!r}")


def _require(cond: bool, message: str):
    if not cond:
        raise InstanceFormatError(message)


def cmd_validate(args) -> int:
    inst = _resolve_instance(args.instance)
    sizes = [len(block) for block in inst.preimages]
    line = f"r={inst.r} k={inst.k} l={inst.l}, preimages [{','.join(map(str, sizes))}]"
    print(line)
    print(f"digest {instance_digest(inst)}")
    return 0


def cmd_curve(args) -> int:
    inst = _resolve_instance(args.instance)
    curve = privacy_curve(inst)
    if args.samples is not None:
        _require(args.samples >= 1, "--samples must be positive")
        text = curve_samples_csv(curve, args.samples)
    elif args.format == "csv":
        text = curve_segments_csv(curve)
    else:
        text = curve_to_text(curve)
    _emit(text, args.output)
    return 0


def cmd_mechanism(args) -> int:
    inst = _resolve_instance(args.instance)
    mech = _build_mechanism(inst, args)
    _emit(matrix_to_text(mech, inst), args.output)
    return 0


def cmd_eval(args) -> int:
    inst = _resolve_instance(args.instance)
    mech = parse_matrix(Path(args.mechanism).read_text(), inst)
    report = list_privacy(inst, mech)
    payload = report_to_jsonable(report, inst)
    if args.rho is not None:
        rho = ensure_rho(parse_rational(args.rho))
        bound = privacy_bound(inst, rho)
        payload["rho"] = format_rational(rho)
        payload["recoverable"] = is_recoverable(mech, inst, rho)
        payload["privacy_bound"] = format_rational(bound)
        payload["gap"] = format_rational(bound - report.privacy)
    _emit(json.dumps(payload, indent=2) + "\n", args.output)
    return 0


def cmd_oracle(args) -> int:
    inst = _resolve_instance(args.instance)
    _require(
        (args.rho is None) != (args.grid is None),
        "exactly one of --rho or --grid is required",
    )
    if args.lp_dump is not None:
        _require(args.rho is not None, "--lp-dump needs --rho")
        Path(args.lp_dump).write_text(lp_text(inst, parse_rational(args.rho)))
    if args.rho is not None:
        result = exact_privacy(inst, parse_rational(args.rho))
        payload = {
            "optimum": format_rational(result.optimum),
            "optimum_decimal": float(result.optimum),
            "witness": [[format_rational(v) for v in row] for row in result.witness.rows],
            "witness_is_add_noise": result.witness_is_add_noise,
            "active_lists": [
                [list(lst) for lst in per_output] for per_output in result.active_lists
            ],
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
        return 0
    _require(args.grid >= 2, "--grid needs at least two points")
    lines = ["rho,oracle,envelope,equal"]
    for j in range(args.grid):
        rho = Fraction(j, args.grid - 1)
        got = exact_privacy(inst, rho).optimum
        want = privacy_bound(inst, rho)
        lines.append(
            f"{format_rational(rho)},{format_rational(got)},"
            f"{format_rational(want)},{str(got == want).lower()}"
        )
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_simulate(args) -> int:
    inst = _resolve_instance(args.instance)
    if args.grid is not None:
        _require(args.kind is not None, "--grid needs --kind")
        _require(args.kind != "noise-file", "--grid does not support noise-file")
        _require(args.grid >= 2, "--grid needs at least two points")
        lo, hi = Fraction(0), Fraction(1)
        if args.kind == "ternary-example":
            lo = Fraction(1, 2)
        step = (hi - lo) / (args.grid - 1)
        rhos = [lo + step * j for j in range(args.grid)]

        def factory(rho):
            shim = argparse.Namespace(kind=args.kind, rho=rho, noise=None)
            return _build_mechanism(inst, shim)

        points = privacy_sweep(inst, factory, rhos, args.trials, args.seed)
        _emit(sweep_to_csv(points), args.output)
        return 0
    _require(args.mechanism is not None, "--mechanism (or --kind with --grid) is required")
    mech = parse_matrix(Path(args.mechanism).read_text(), inst)
    estimator = map_list_estimator(inst, mech)
    report = simulate_game(inst, mech, estimator, args.trials, args.seed)
    payload = sim_report_jsonable(report)
    analytic = list_privacy(inst, mech).privacy
    payload["analytic_privacy"] = format_rational(analytic)
    payload["abs_error"] = abs(report.empirical_privacy - float(analytic))
    _emit(json.dumps(payload, indent=2) + "\n", args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="listprivacy",
        description="Exact list-privacy / recoverability tradeoffs for finite alphabets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an instance and print its shape")
    p.add_argument("instance", help="catalog name or JSON file")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("curve", help="piecewise-affine privacy bound over [0,1]")
    p.add_argument("instance")
    p.add_argument("--format", choices=("exact", "csv"), default="exact")
    p.add_argument("--samples", type=int, default=None, help="emit a sampled CSV instead")
    p.add_argument("--output")
    p.set_defaults(handler=cmd_curve)

    p = sub.add_parser("mechanism", help="construct and export a mechanism")
    p.add_argument("instance")
    p.add_argument("--kind", choices=MECHANISM_KINDS, required=True)
    p.add_argument("--rho", help="recoverability level for parameterized kinds")
    p.add_argument("--noise", help="noise channel JSON for --kind noise-file")
    p.add_argument("--output")
    p.set_defaults(handler=cmd_mechanism)

    p = sub.add_parser("eval", help="exact privacy of a mechanism file")
    p.add_argument("instance")
    p.add_argument("--mechanism", required=True)
    p.add_argument("--rho", help="also report recoverability and bound gap at this level")
    p.add_argument("--output")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("oracle", help="exact optimum by linear programming")
    p.add_argument("instance")
    p.add_argument("--rho")
    p.add_argument("--grid", type=int, help="evaluate at N equispaced levels in [0,1], as CSV")
    p.add_argument("--lp-dump", help="also write the program in LP text form")
    p.add_argument("--output")
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("simulate", help="seeded Monte Carlo against the exact value")
    p.add_argument("instance")
    p.add_argument("--mechanism", help="mechanism JSON file")
    p.add_argument("--kind", choices=MECHANISM_KINDS, help="sweep mechanism for --grid")
    p.add_argument("--grid", type=int, help="sweep rho on a grid, emitting CSV")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output")
    p.set_defaults(handler=cmd_simulate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ListPrivacyError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: IOError: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
