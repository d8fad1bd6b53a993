"""Command-line interface: ``qcorr measure|sweep|classify|verify-decomposition|threshold``.

Exit codes: 0 success, 2 usage or precondition violation, 3 numeric failure.
"""

import argparse
import itertools
import math
import sys
from pathlib import Path

import numpy as np

from qcorr import measures, states
from qcorr.errors import InvalidArgument, NotPositiveSemidefinite, NumericFailure
from qcorr.qlinalg import SX, SY, SZ
from qcorr.report import (
    MEASURES,
    STATE_PARAMS,
    Settings,
    build_state,
    compute_report,
    format_number,
    render_csv,
    render_json,
)

EXIT_USAGE = 2
EXIT_NUMERIC = 3
SWEEP_AXES = ("p", "q", "n", "k", "theta", "phi")
THRESHOLD_TOL = 1e-6
THRESHOLD_AGREEMENT = 1e-5
PAULI_BY_NAME = {"x": SX, "y": SY, "z": SZ}


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[float]:
    """``start:stop:step`` (inclusive of ``stop`` up to rounding) or a single value."""
    parts = text.split(":")
    try:
        nums = [float(x) for x in parts]
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected start:stop:step") from None
    if len(nums) == 1:
        return nums
    if len(nums) != 3:
        raise UsageError(f"bad range {text!r}; expected start:stop:step")
    start, stop, step = nums
    if step <= 0 or start > stop:
        raise UsageError(f"bad range {text!r}; need step > 0 and start <= stop")
    count = math.floor((stop - start) / step + 1e-9) + 1
    return [round(start + i * step, 12) for i in range(count)]


def parse_axis(text: str) -> tuple[str, list[float]]:
    name, sep, rng = text.partition("=")
    if not sep or name not in SWEEP_AXES:
        raise UsageError(f"bad axis {text!r}; expected NAME=start:stop:step with NAME in {SWEEP_AXES}")
    return name, parse_range(rng)


def _settings(args) -> Settings:
    if args.grid < 2 or args.refine_iters < 1 or args.zero_tol < 0 or args.psd_tol < 0:
        raise UsageError("--grid must be >= 2, --refine-iters >= 1, tolerances >= 0")
    return Settings(args.grid, args.refine_iters, args.zero_tol, args.psd_tol)


def _params(args) -> dict:
    return {"p": args.p, "q": args.q, "n": args.n, "k": args.k}


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_measure(args) -> int:
    settings = _settings(args)
    selected = set(MEASURES) - {"discord_function_A", "discord_function_B"}
    if args.theta is not None or args.phi is not None:
        selected |= {"discord_function_A", "discord_function_B"}
    observables = (PAULI_BY_NAME[args.ox], PAULI_BY_NAME[args.oy])
    code = 0
    try:
        report = compute_report(
            args.state, _params(args), selected, settings, args.theta, args.phi, args.path, observables
        )
    except NumericFailure as exc:
        report = exc.report
        print(f"numeric failure: {exc}", file=sys.stderr)
        code = EXIT_NUMERIC
    if args.format == "csv":
        _emit(render_csv([report], settings), args.output)
    else:
        _emit(render_json([report]), args.output)
    return code


def cmd_classify(args) -> int:
    settings = _settings(args)
    rho = build_state(args.state, _params(args), args.path)
    result = measures.classify(rho, settings.zero_tol, settings.psd_tol, settings.grid, settings.refine_iters)
    print(
        f"{result.label} entangled={str(result.is_entangled).lower()} "
        f"discord_A={format_number(result.discord.d_yx)} discord_B={format_number(result.discord.d_xy)}"
    )
    return 0


def cmd_sweep(args) -> int:
    settings = _settings(args)
    if args.state not in STATE_PARAMS:
        raise UsageError(f"unknown state {args.state!r}")
    selected = [m.strip() for m in args.measures.split(",") if m.strip()]
    if not selected:
        raise UsageError("select at least one measure")
    bad = [m for m in selected if m not in MEASURES]
    if bad:
        raise UsageError(f"unknown measures {bad}; choose from {', '.join(MEASURES)}")
    axes = [parse_axis(a) for a in args.axis]
    if not 1 <= len(axes) <= 2 or len({a for a, _ in axes}) != len(axes):
        raise UsageError("sweep needs one or two distinct --axis options")
    uses_angles = {"discord_function_A", "discord_function_B"} & set(selected)
    for name, _ in axes:
        if name in ("theta", "phi"):
            if not uses_angles:
                raise UsageError(f"axis {name} requires a discord_function measure")
        elif name not in STATE_PARAMS[args.state]:
            raise UsageError(f"state {args.state!r} has no parameter {name!r}")

    reports = []
    code = 0
    for point in itertools.product(*(values for _, values in axes)):
        swept = dict(zip((name for name, _ in axes), point))
        params = {**_params(args), **{k: v for k, v in swept.items() if k in ("p", "q", "n", "k")}}
        theta = swept.get("theta", args.theta)
        phi = swept.get("phi", args.phi)
        try:
            reports.append(compute_report(args.state, params, selected, settings, theta, phi, args.path))
        except NumericFailure as exc:
            reports.append(exc.report)
            print(f"numeric failure at {swept}: {exc}", file=sys.stderr)
            code = EXIT_NUMERIC
    if args.format == "csv":
        _emit(render_csv(reports, settings), args.output)
    else:
        _emit(render_json(reports), args.output)
    return code


def cmd_verify_decomposition(args) -> int:
    if not 0 <= args.p <= 1 / 3:
        raise UsageError(
            f"p = {args.p!r}: the separable form is a valid density operator only when p <= 1/3"
        )
    assembled = states.mix(states.werner_separable_decomposition(args.p))
    error = float(np.max(np.abs(assembled - states.werner(args.p))))
    ok = error < 1e-12
    print(f"{'PASS' if ok else 'FAIL'} p={format_number(args.p)} max_abs_error={format_number(error)}")
    return 0 if ok else EXIT_NUMERIC


def _entangled_by_concurrence(k: float):
    return lambda p: measures.concurrence(states.generalized_werner(p, 0.0, k)) > 0


def concurrence_threshold(k: float, tol: float = THRESHOLD_TOL) -> float | None:
    """Bisection estimate of the entanglement onset in p for n = 0, or None without a sign change."""
    predicate = _entangled_by_concurrence(k)
    if not predicate(1.0):
        return None
    return measures.bisect_boundary(predicate, 0.0, 1.0, tol)


def cmd_threshold(args) -> int:
    ks = parse_range(args.k)
    if ks[0] < 0:
        raise UsageError("k range must start at k >= 0")
    print("k,p_formula,p_bisection")
    code = 0
    for k in ks:
        formula = measures.gw_threshold(k)
        found = concurrence_threshold(k)
        if found is None:
            shown = "no sign change in [0, 1]"
            agree = formula >= 1 - THRESHOLD_AGREEMENT
        else:
            shown = format_number(found)
            agree = abs(found - formula) < THRESHOLD_AGREEMENT
        print(f"{format_number(k)},{format_number(formula)},{shown}")
        if not agree:
            print(f"threshold mismatch at k={k}: formula {formula}, bisection {shown}", file=sys.stderr)
            code = EXIT_NUMERIC
    return code


def _add_state_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--state", required=True, choices=sorted(STATE_PARAMS))
    parser.add_argument("--p", type=float)
    parser.add_argument("--q", type=float)
    parser.add_argument("--n", type=complex, help="local superposition parameter (complex allowed)")
    parser.add_argument("--k", type=float)
    parser.add_argument("--path", help="density matrix file for --state file")


def _add_numeric_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--grid", type=int, default=measures.GRID_SIZE)
    parser.add_argument("--refine-iters", type=int, default=measures.REFINE_ITERS)
    parser.add_argument("--zero-tol", type=float, default=measures.DISCORD_ZERO_TOL)
    parser.add_argument("--psd-tol", type=float, default=1e-10)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcorr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="all measures for one state")
    _add_state_args(p)
    _add_numeric_args(p)
    p.add_argument("--theta", type=float, help="also evaluate discord functions at this basis")
    p.add_argument("--phi", type=float)
    p.add_argument("--ox", choices="xyz", default="z", help="Pauli observable on A for the covariance")
    p.add_argument("--oy", choices="xyz", default="z", help="Pauli observable on B for the covariance")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("sweep", help="measures over a one- or two-axis parameter grid")
    _add_state_args(p)
    _add_numeric_args(p)
    p.add_argument("--axis", action="append", default=[], help="NAME=start:stop:step, at most twice")
    p.add_argument("--measures", required=True, help=f"comma-separated subset of {','.join(MEASURES)}")
    p.add_argument("--theta", type=float)
    p.add_argument("--phi", type=float)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("classify", help="entangled / local quantumness only / classical")
    _add_state_args(p)
    _add_numeric_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify-decomposition", help="check the separable Werner decomposition")
    p.add_argument("--p", type=float, required=True)
    p.set_defaults(func=cmd_verify_decomposition)

    p = sub.add_parser("threshold", help="generalized Werner entanglement threshold vs bisection")
    p.add_argument("--k", required=True, help="k value or start:stop:step")
    p.set_defaults(func=cmd_threshold)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InvalidArgument, NotPositiveSemidefinite) as exc:
        print(f"qcorr {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericFailure as exc:
        print(f"qcorr {args.command}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def run() -> None:
    sys.exit(main())
