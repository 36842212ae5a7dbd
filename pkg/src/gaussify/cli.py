"""Command-line front end: single runs, figure-reproducing sweeps, file I/O.

Exit codes: 0 success, 2 usage error, 3 state-file parse error, 4 domain
error (divergence, degenerate input, non-normalizable limit, no click
support).  Floating output is printed with 12 significant digits; CSV
output is comma separated with a header row, LF line endings and ``.`` as
the decimal separator.
"""

import argparse
import math
import sys

import numpy as np

from .errors import GaussifyError, NotNormalizableError, StateFormatError
from . import fixed_point
from .fock import SchmidtDiagonal, norm_sq, purity, read_state, write_state
from .iterate import RunOptions, run_protocol
from .procrustean import (
    PrepConfig,
    best_phase_bell_distance,
    distill_pipeline,
    optimal_t,
    prepare,
    tmsv,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_DOMAIN = 4

ITERATE_COLUMNS = [
    "step",
    "step_prob",
    "cum_prob_product",
    "cum_prob_tree",
    "norm_sq",
    "fidelity",
    "tail_mass",
]


def _fmt(x):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    if isinstance(x, int):
        return str(x)
    return f"{x:.12g}"


def _write_csv(path, header, rows):
    text = ",".join(header) + "\n"
    for row in rows:
        text += ",".join(_fmt(v) for v in row) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)


def _parse_state(spec, cutoff):
    """Inline constructors schmidt:<lambda>, tmsv:<q>, file:<path>, or a path."""
    if spec.startswith("schmidt:"):
        lam = float(spec.split(":", 1)[1])
        if not 0.0 <= lam < 1.0:
            raise argparse.ArgumentTypeError("schmidt parameter must lie in [0, 1)")
        return SchmidtDiagonal([1.0, lam] if lam > 0.0 else [1.0], leading_unit=True)
    if spec.startswith("tmsv:"):
        q = float(spec.split(":", 1)[1])
        return tmsv(q, cutoff)
    path = spec.split(":", 1)[1] if spec.startswith("file:") else spec
    return read_state(path)


def _reports_rows(reports):
    rows = []
    for r in reports:
        rows.append(
            [
                r.step,
                r.step_probability,
                r.cumulative_probability,
                r.cumulative_probability_tree,
                r.norm_sq,
                r.fidelity_to_limit,
                r.tail_mass,
            ]
        )
    return rows


def _cmd_iterate(args):
    state = _parse_state(args.state, args.cutoff)
    options = RunOptions(cutoff_ceiling=args.cutoff, tail_tol=args.tail_tol)
    final, reports = run_protocol(state, args.iters, options)
    _write_csv(args.out, ITERATE_COLUMNS, _reports_rows(reports))
    if args.state_out:
        write_state(final, args.state_out)
    return EXIT_OK


def _sweep_grid(args):
    if args.points < 2:
        raise argparse.ArgumentTypeError("points must be at least 2")
    if not args.start < args.stop:
        raise argparse.ArgumentTypeError("start must be below stop")
    return np.linspace(args.start, args.stop, args.points)


def _cmd_sweep(args):
    if args.figure in (2, 3):
        lo = 0.0 if args.start is None else args.start
        hi = 0.9 if args.stop is None else args.stop
        args.start, args.stop = lo, hi
        grid = _sweep_grid(args)
        if not (0.0 <= lo and hi < 1.0):
            raise argparse.ArgumentTypeError("lambda grid must lie in [0, 1)")
        rows = []
        for lam in grid:
            seed = SchmidtDiagonal([1.0, lam] if lam > 0.0 else [1.0], leading_unit=True)
            _, reports = run_protocol(seed, 3, RunOptions(cutoff_ceiling=args.cutoff))
            if args.figure == 2:
                rows.append([lam] + [r.cumulative_probability for r in reports])
            else:
                rows.append([lam] + [r.fidelity_to_limit for r in reports])
        header = (
            ["lambda", "p1", "p2", "p3"]
            if args.figure == 2
            else ["lambda", "F1", "F2", "F3"]
        )
        _write_csv(args.out, header, rows)
        return EXIT_OK

    lo = 0.01 if args.start is None else args.start
    hi = 0.9 if args.stop is None else args.stop
    args.start, args.stop = lo, hi
    grid = _sweep_grid(args)
    if not (0.0 < lo and hi <= 1.0):
        raise argparse.ArgumentTypeError("transmittivity grid must lie in (0, 1]")
    if not 0.0 < args.q < 1.0:
        raise argparse.ArgumentTypeError("q must lie in (0, 1)")
    rows = []
    for t_val in grid:
        result = distill_pipeline(args.q, t_val, args.iters, args.cutoff)
        rows.append(
            [
                t_val,
                result.entanglement_ratio,
                result.overall_probability,
                result.purity,
                t_val * t_val,
            ]
        )
    # T_squared appended last: the axis convention is ambiguous, emit both
    header = ["T", "entanglement_ratio", "overall_probability", "purity", "T_squared"]
    _write_csv(args.out, header, rows)
    return EXIT_OK


def _cmd_fixed_point(args):
    state = _parse_state(args.state, args.cutoff)
    if isinstance(state, SchmidtDiagonal):
        state = state.to_pure()
    gamma = fixed_point.gamma_from_state(state)
    norm = fixed_point.spectral_norm(gamma)
    print(f"gamma_1  = {_fmt(gamma.g1.real)}{gamma.g1.imag:+.12g}j")
    print(f"gamma_2  = {_fmt(gamma.g2.real)}{gamma.g2.imag:+.12g}j")
    print(f"gamma_12 = {_fmt(gamma.g12.real)}{gamma.g12.imag:+.12g}j")
    print(f"spectral_norm = {_fmt(norm)}")
    if not fixed_point.is_normalizable(gamma):
        print("verdict = not normalizable")
        raise NotNormalizableError(norm)
    print("verdict = normalizable")
    params = fixed_point.squeezing_params(gamma)
    sv = params.singular_values
    print(f"squeezing_singular_values = {_fmt(float(sv[0]))} {_fmt(float(sv[1]))}")
    limit = fixed_point.limit_coefficients(gamma, args.cutoff)
    if args.out:
        write_state(limit, args.out)
    return EXIT_OK


def _cmd_prepare(args):
    if not 0.0 < args.q < 1.0:
        raise argparse.ArgumentTypeError("q must lie in (0, 1)")
    config = PrepConfig.matched(args.q, args.cutoff, args.T)
    result = prepare(config)
    phi, dist = best_phase_bell_distance(result.state)
    t_used = abs(config.splitter_a.transmittance)
    rows = [
        [
            args.q,
            t_used,
            result.success_probability,
            purity(result.state),
            dist,
            phi,
            result.tail_mass,
        ]
    ]
    header = [
        "q",
        "T",
        "click_probability",
        "purity",
        "bell_distance",
        "bell_phase",
        "tail_mass",
    ]
    _write_csv(args.out, header, rows)
    return EXIT_OK


def _cmd_distill(args):
    if not 0.0 < args.q < 1.0:
        raise argparse.ArgumentTypeError("q must lie in (0, 1)")
    t_val = args.T if args.T is not None else optimal_t(args.q)[0]
    result = distill_pipeline(args.q, t_val, args.iters, args.cutoff)
    header = [
        "q",
        "T",
        "iterations",
        "entanglement_ratio",
        "overall_probability",
        "purity",
        "entropy_initial",
        "entropy_final",
        "click_probability",
    ]
    rows = [
        [
            args.q,
            t_val,
            args.iters,
            result.entanglement_ratio,
            result.overall_probability,
            result.purity,
            result.entropy_initial,
            result.entropy_final,
            result.click_probability,
        ]
    ]
    _write_csv(args.out, header, rows)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gaussify",
        description="Iterative vacuum-conditioned driving of two-mode states "
        "toward Gaussian fixed points.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_iter = sub.add_parser("iterate", help="run the iteration on one state")
    p_iter.add_argument("state", help="state file, file:<path>, schmidt:<l>, tmsv:<q>")
    p_iter.add_argument("--iters", type=int, default=3)
    p_iter.add_argument("--cutoff", type=int, default=64)
    p_iter.add_argument("--tail-tol", type=float, default=1e-10)
    p_iter.add_argument("--out", default=None, help="CSV of per-step reports")
    p_iter.add_argument("--state-out", default=None, help="write the final state file")
    p_iter.set_defaults(func=_cmd_iterate)

    p_sweep = sub.add_parser("sweep", help="figure-reproducing parameter sweeps")
    p_sweep.add_argument("--figure", type=int, choices=(2, 3, 4), required=True)
    p_sweep.add_argument("--start", type=float, default=None)
    p_sweep.add_argument("--stop", type=float, default=None)
    p_sweep.add_argument("--points", type=int, default=None)
    p_sweep.add_argument("--iters", type=int, default=3)
    p_sweep.add_argument("--cutoff", type=int, default=None)
    p_sweep.add_argument("--q", type=float, default=0.01)
    p_sweep.add_argument("--out", default=None)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_fixed = sub.add_parser("fixed-point", help="limit-state analysis of a state")
    p_fixed.add_argument("state")
    p_fixed.add_argument("--cutoff", type=int, default=24)
    p_fixed.add_argument("--out", default=None, help="write the limit state file")
    p_fixed.set_defaults(func=_cmd_fixed_point)

    p_prep = sub.add_parser("prepare", help="click-conditioned seed preparation")
    p_prep.add_argument("--q", type=float, required=True)
    p_prep.add_argument("--T", type=float, default=None,
                        help="side-A transmittivity (default: matched to q)")
    p_prep.add_argument("--cutoff", type=int, default=10)
    p_prep.add_argument("--out", default=None)
    p_prep.set_defaults(func=_cmd_prepare)

    p_dist = sub.add_parser("distill", help="preparation plus vacuum iterations")
    p_dist.add_argument("--q", type=float, required=True)
    p_dist.add_argument("--T", type=float, default=None)
    p_dist.add_argument("--iters", type=int, default=3)
    p_dist.add_argument("--cutoff", type=int, default=10)
    p_dist.add_argument("--out", default=None)
    p_dist.set_defaults(func=_cmd_distill)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep":
        if args.points is None:
            args.points = 19 if args.figure in (2, 3) else 30
        if args.cutoff is None:
            args.cutoff = 64 if args.figure in (2, 3) else 10
    try:
        return args.func(args)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    except StateFormatError as exc:
        print(f"gaussify: state file error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (GaussifyError, ValueError) as exc:
        print(f"gaussify: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
