"""Command-line interface: ``ratprony <subcommand> [options]``.

Exit status is 0 on success, 2 for invalid input (including unreadable
files and rank-deficient systems) and 3 when an iteration does not
converge.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import io
from .bernoulli import GBConfig, gb_recover_iterative, with_overrides
from .errors import InvalidInputError, NonConvergenceError, RatPronyError
from .experiments import (
    RKHS_GB_CONFIG,
    DelaySystemSpec,
    REFERENCE_DELAY_SYSTEM,
    RKHSDemoSpec,
    condnum_demo,
    delay_demo,
    rkhs_comparison,
    rkhs_demo,
)
from .hardy import DEFAULT_GRID, GeneratingSequence
from .lifting import INVERSE_MAPS, lift
from .linear import build_tm_triangular, vandermonde_matrix
from .numerics import condition_number_spectral
from .prony import classical_prony, grop_moments, grop_recover, vandermonde_recover

EXIT_OK, EXIT_INVALID, EXIT_NONCONVERGENCE = 0, 2, 3

logger = logging.getLogger("ratprony")


def _global_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, default=None,
                        help=f"circle grid size (default {DEFAULT_GRID}; must match input samplings)")
    common.add_argument("--order", type=int, default=None, help="model order M")
    common.add_argument("--tol", type=float, default=None, help="GB convergence tolerance")
    common.add_argument("--seed", type=int, default=0, help="seed for synthetic generators")
    common.add_argument("--out", default="-", help="output path ('-' for stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    return common


def _gb_flags(p):
    p.add_argument("--gen-seq", help="CSV (re,im) with one period of the generating sequence")
    p.add_argument("--period", type=int, default=None,
                   help="period p; without --gen-seq the sequence is p zeros")
    p.add_argument("--offset", type=int, default=None, help="ladder offset n in [0, p)")
    p.add_argument("--kmax", type=int, default=None, help="maximum ladder length")
    p.add_argument("--count", type=int, default=None, help="number of poles to extract")


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(prog="ratprony", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("grop", parents=[common], help="rational Prony on circle samples")
    p.add_argument("samples", help="circle sampling CSV (re,im)")
    p.add_argument("--rows", type=int, default=None, help="Hankel rows minus one (default 2M-1)")
    p.add_argument("--coefficients", choices=("tm", "vandermonde", "none"), default="tm")
    p.add_argument("--lenient", action="store_true",
                   help="return the minimum-norm solution for rank-deficient Hankel systems")

    p = sub.add_parser("bernoulli", parents=[common], help="generalized Bernoulli pole iteration")
    p.add_argument("samples", help="circle sampling CSV (re,im)")
    _gb_flags(p)

    p = sub.add_parser("classical", parents=[common], help="classical Prony on a moment sequence")
    p.add_argument("moments", help="moment CSV (m,re,im)")
    p.add_argument("--rows", type=int, default=None)
    p.add_argument("--lenient", action="store_true")

    p = sub.add_parser("lift", parents=[common], help="weighted Z-transform of a moment sequence")
    p.add_argument("moments", help="moment CSV (m,re,im)")
    p.add_argument("--weight", type=float, default=None, help="weight w (estimated if omitted)")
    p.add_argument("--truncate", type=int, default=None, help="number of moments K to use")
    p.add_argument("--inverse-map", choices=INVERSE_MAPS, default="identity")
    p.add_argument("--m0", type=float, default=None)
    p.add_argument("--scale", type=float, default=None)
    p.add_argument("--sidecar", default=None, help="sidecar JSON path (default: <out>.json)")

    p = sub.add_parser("recover-linear", parents=[common], help="coefficients for known poles")
    p.add_argument("samples", help="circle sampling CSV (re,im)")
    p.add_argument("--poles", required=True, help="pole CSV (re,im)")

    p = sub.add_parser("condnum", parents=[common], help="Vandermonde vs TM conditioning")
    p.add_argument("--poles", default=None, help="pole CSV; overrides the generator")
    p.add_argument("--generator", choices=("allpass", "clustered"), default="allpass")

    p = sub.add_parser("delay-demo", parents=[common], help="delayed LTI identification")
    p.add_argument("--method", choices=("grop", "gb", "classical"), default="grop")
    p.add_argument("--m0", type=int, default=None, help="sampling step (default: smallest admissible)")
    p.add_argument("--truncate", type=int, default=200, help="number of samples K")
    p.add_argument("--system", default=None,
                   help="CSV (re,im) of poles then coefficients, 2M rows; uses --tau")
    p.add_argument("--tau", type=float, default=None)
    _gb_flags(p)

    p = sub.add_parser("rkhs-demo", parents=[common], help="Legendre RKHS recovery")
    p.add_argument("--method", choices=("gb", "gop", "compare"), default="gb",
                   help="compare runs GB at order 2 and GOP at full order")
    p.add_argument("--degree", type=int, default=512, help="kernel degree N")
    p.add_argument("--atoms", type=int, default=30, help="number of atoms M")
    p.add_argument("--interval", type=float, nargs=2, default=(-0.9, -0.7), metavar=("LO", "HI"))
    p.add_argument("--scale", type=float, default=1.0, help="scale C")
    _gb_flags(p)
    return parser


def _grid(args, default=DEFAULT_GRID):
    return default if args.grid is None else args.grid


def _load_sampling(args):
    H = io.read_sampling_csv(args.samples)
    if args.grid is not None and args.grid != H.n_grid:
        raise InvalidInputError(f"--grid {args.grid} does not match the {H.n_grid} samples given")
    return H


def _gen_seq(args, default=(0.0,)):
    gen = GeneratingSequence(io.read_points_csv(args.gen_seq)) if args.gen_seq else None
    if gen is None:
        gen = GeneratingSequence([0.0] * args.period) if args.period else GeneratingSequence(default)
    elif args.period is not None and args.period != gen.period:
        raise InvalidInputError(f"--period {args.period} disagrees with the {gen.period}-entry sequence")
    return gen


def _gb_config(args, base=GBConfig()):
    return with_overrides(base, tol=args.tol, k_max=args.kmax, offset=args.offset)


def _require_order(args):
    if args.order is None:
        raise InvalidInputError("--order is required")
    return args.order


def _emit_result(args, result, true_poles=None):
    if args.format == "json":
        io.write_json(args.out, result)
        return
    if true_poles is None:
        io.write_points_csv(args.out, result.poles)
        return
    rows = [("true", complex(z)) for z in np.asarray(true_poles, complex)]
    rows += [("recovered", complex(z)) for z in result.poles]
    with io.open_stream(args.out, "w") as fh:
        fh.write("set,re,im\n")
        for name, z in rows:
            fh.write(f"{name},{z.real!r},{z.imag!r}\n")


def _emit_report(args, report):
    if args.format == "json":
        io.write_json(args.out, report)
        return
    flat = {k: v for k, v in io.to_jsonable(report).items() if not isinstance(v, (dict, list))}
    with io.open_stream(args.out, "w") as fh:
        fh.write("key,value\n")
        for k, v in flat.items():
            fh.write(f"{k},{v}\n")


def cmd_grop(args):
    coef = None if args.coefficients == "none" else args.coefficients
    res = grop_recover(_load_sampling(args), _require_order(args), args.rows,
                       coefficients=coef, strict=not args.lenient)
    _emit_result(args, res)
    return EXIT_OK


def cmd_bernoulli(args):
    H = _load_sampling(args)
    count = args.count or args.order or 1
    res = gb_recover_iterative(H, _gen_seq(args), count, _gb_config(args))
    if res.poles.size == 0:
        stage = res.diagnostics["stages"][0]
        raise NonConvergenceError(stage.get("error", "GB did not converge"), stage)
    if res.diagnostics["terminated_early"]:
        logger.warning("found %d of %d requested poles", res.poles.size, count)
    _emit_result(args, res)
    return EXIT_OK


def cmd_classical(args):
    g = io.read_moments_csv(args.moments)
    res = classical_prony(g, _require_order(args), args.rows, strict=not args.lenient)
    _emit_result(args, res)
    return EXIT_OK


def cmd_lift(args):
    g = io.read_moments_csv(args.moments)
    problem = lift(g, w=args.weight, inverse_map=args.inverse_map, K=args.truncate,
                   m0=args.m0, scale=args.scale)
    io.write_sampling_csv(args.out, problem.sampling(_grid(args)))
    sidecar = args.sidecar
    if sidecar is None:
        sidecar = "-" if args.out == "-" else f"{args.out}.json"
    if sidecar == "-" and args.out == "-":
        json.dump(io.to_jsonable(problem.sidecar()), sys.stderr)
        sys.stderr.write("\n")
    else:
        io.write_json(sidecar, problem.sidecar())
    return EXIT_OK


def cmd_recover_linear(args):
    H = _load_sampling(args)
    poles = io.read_points_csv(args.poles)
    system = build_tm_triangular(poles, H)
    c_tm = system.solve()
    c_v = vandermonde_recover(poles, grop_moments(H, poles.size))
    report = {
        "poles": poles,
        "coefficients": c_tm,
        "vandermonde_coefficients": c_v,
        "tm_condition": system.condition(),
        "vandermonde_condition": condition_number_spectral(vandermonde_matrix(poles)),
    }
    if args.format == "csv":
        io.write_points_csv(args.out, c_tm)
    else:
        io.write_json(args.out, report)
    return EXIT_OK


def cmd_condnum(args):
    poles = io.read_points_csv(args.poles) if args.poles else None
    report = condnum_demo(poles, args.generator, M=args.order or 200, seed=args.seed)
    _emit_report(args, report)
    return EXIT_OK


def cmd_delay_demo(args):
    spec = REFERENCE_DELAY_SYSTEM
    if args.system:
        vals = io.read_points_csv(args.system)
        if vals.size % 2 or args.tau is None:
            raise InvalidInputError("--system needs 2M rows (poles, then coefficients) and --tau")
        half = vals.size // 2
        spec = DelaySystemSpec(vals[:half], vals[half:], args.tau)
    elif args.tau is not None:
        spec = DelaySystemSpec(spec.poles, spec.coefficients, args.tau)
    kwargs = {}
    if args.gen_seq or args.period:
        kwargs["gen0"] = _gen_seq(args).entries
    res = delay_demo(spec, args.method, m0=args.m0, K=args.truncate, n_grid=_grid(args),
                     cfg=_gb_config(args), **kwargs)
    _check_demo(res, spec.poles.size)
    _emit_result(args, res, spec.poles)
    return EXIT_OK


def cmd_rkhs_demo(args):
    spec = RKHSDemoSpec(N=args.degree, M=args.atoms, lo=args.interval[0], hi=args.interval[1],
                        C=args.scale)
    kwargs = {"gen0": _gen_seq(args).entries} if (args.gen_seq or args.period) else {}
    order = args.count or args.order
    if args.method == "compare":
        report = rkhs_comparison(spec, gb_order=order or 2, n_grid=_grid(args),
                                 cfg=_gb_config(args, RKHS_GB_CONFIG))
        _emit_report(args, report)
        return EXIT_OK
    res = rkhs_demo(spec, args.method, order=order, n_grid=_grid(args),
                    cfg=_gb_config(args, RKHS_GB_CONFIG), **kwargs)
    _check_demo(res, order or (2 if args.method == "gb" else spec.M))
    _emit_result(args, res, spec.poles)
    return EXIT_OK


def _check_demo(res, expected):
    if res.diagnostics.get("terminated_early") and res.poles.size == 0:
        raise NonConvergenceError("no pole converged", res.diagnostics)
    if res.poles.size < expected:
        logger.warning("recovered %d of %d poles", res.poles.size, expected)


COMMANDS = {
    "grop": cmd_grop,
    "bernoulli": cmd_bernoulli,
    "classical": cmd_classical,
    "lift": cmd_lift,
    "recover-linear": cmd_recover_linear,
    "condnum": cmd_condnum,
    "delay-demo": cmd_delay_demo,
    "rkhs-demo": cmd_rkhs_demo,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except NonConvergenceError as exc:
        print(f"ratprony: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (RatPronyError, OSError) as exc:
        print(f"ratprony: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
