"""Command-line entry point: python -m cylsep"""

import argparse
import dataclasses
import json
import logging
import math
import sys

import numpy as np

from decomposer.search import FAMILIES, max_simulatable_r
from oracle.dense import exact_distribution
from oracle.separability import gated_extremal_operator, min_eigenvalue
from reporter.csv_export import generate_csv, write_table
from reporter.json_export import write_json, write_jsonl
from sampler.engine import Sampler, tv_bound, tv_distance
from shared.config import NumericsConfig, RunConfig, SamplerConfig
from shared.errors import AdmissionRejected, CylsepError, GraphSpecError, ProgramError
from shared.graph_spec import load_graph_spec, load_program
from shared.growth_law import (
    GrowthQuery,
    curve_lambda,
    curve_region,
    is_cyl_separable,
    separability_determinant,
)
from shared.pauli_core import TWO_PI

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_REJECTED = 3


def _phi_grid(parser: argparse.ArgumentParser, args) -> list[float]:
    if args.steps < 1:
        parser.error("--steps must be at least 1")
    if not 0.0 <= args.phi_min <= args.phi_max <= TWO_PI:
        parser.error("need 0 <= --phi-min <= --phi-max <= 2*pi")
    if args.steps == 1:
        return [args.phi_min]
    return np.linspace(args.phi_min, args.phi_max, args.steps).tolist()


def _emit_table(columns, rows, out, config) -> None:
    if out is None:
        write_table(sys.stdout, columns, rows, config)
    else:
        generate_csv(columns, rows, out, config)
        logger.info(f"Wrote {len(rows)} rows to {out}")


def _run_config(args, knobs: dict) -> RunConfig:
    sampler = SamplerConfig()
    overrides = {
        "eta": getattr(args, "eta", None),
        "n_angles": getattr(args, "n_angles", None),
        "threads": getattr(args, "threads", None),
        "lp_eps": getattr(args, "eps", None),
    }
    sampler = dataclasses.replace(sampler, **{k: v for k, v in overrides.items() if v is not None})
    if getattr(args, "debug", False):
        sampler = dataclasses.replace(sampler, debug=True)
    return RunConfig(command=args.command, sampler=sampler, knobs=knobs)


def cmd_lambda(parser, args) -> int:
    grid = _phi_grid(parser, args)
    config = RunConfig(
        command="lambda",
        knobs={"phi_min": args.phi_min, "phi_max": args.phi_max, "steps": args.steps},
    )
    _emit_table(["phi", "lambda"], curve_lambda(grid), args.out, config.as_dict())
    return EXIT_OK


def cmd_region(parser, args) -> int:
    if args.D < 1:
        parser.error("--D must be a positive integer")
    if args.T is not None and args.T < 0:
        parser.error("--T must be non-negative")
    grid = _phi_grid(parser, args)
    config = RunConfig(
        command="region",
        knobs={"D": args.D, "T": args.T, "phi_min": args.phi_min, "phi_max": args.phi_max, "steps": args.steps},
    )
    rows = curve_region(args.D, grid, args.T)
    if not any(saturated for _, _, saturated in rows):
        _emit_table(["phi", "theta_max"], [(phi, theta) for phi, theta, _ in rows], args.out, config.as_dict())
    else:
        _emit_table(["phi", "theta_max", "saturated"], rows, args.out, config.as_dict())
    return EXIT_OK


def cmd_check_sep(parser, args) -> int:
    if args.fa <= 0 or args.fb <= 0:
        parser.error("--fa and --fb must be positive")
    query = GrowthQuery(args.fa, args.fb, args.phi)
    tol = args.tol if args.tol is not None else NumericsConfig().sep_tol
    result = {
        "fa": args.fa,
        "fb": args.fb,
        "phi": args.phi,
        "determinant": separability_determinant(query),
        "separable": is_cyl_separable(query, tol),
    }
    if args.oracle:
        result["min_eigenvalue"] = min_eigenvalue(gated_extremal_operator(args.fa, args.fb, args.phi))
    print(json.dumps(result, indent=2))
    return EXIT_OK


def _load_instance(args):
    graph = load_graph_spec(args.graph)
    program = load_program(args.program)
    program.check_against(graph)
    return graph, program


def _print_rejection(err: AdmissionRejected) -> int:
    print(json.dumps(err.report.as_dict(), indent=2))
    logger.error(str(err))
    return EXIT_REJECTED


def cmd_simulate(parser, args) -> int:
    if args.shots < 0:
        parser.error("--shots must be non-negative")
    graph, program = _load_instance(args)
    config = _run_config(args, {"graph": args.graph, "program": args.program, "shots": args.shots, "seed": args.seed})
    try:
        sampler = Sampler(graph, program, config.sampler)
    except AdmissionRejected as e:
        return _print_rejection(e)
    batch = sampler.run_batch(args.shots, args.seed)
    knobs = {**config.knobs, "n_angles_used": sampler.n_angles}
    write_jsonl(
        [r.as_dict() for r in batch.records],
        args.out,
        dataclasses.replace(config, knobs=knobs).as_dict(),
    )
    return EXIT_OK


def cmd_verify(parser, args) -> int:
    if args.shots < 1:
        parser.error("--shots must be positive")
    graph, program = _load_instance(args)
    config = _run_config(args, {"graph": args.graph, "program": args.program, "shots": args.shots, "seed": args.seed})
    try:
        sampler = Sampler(graph, program, config.sampler)
    except AdmissionRejected as e:
        return _print_rejection(e)
    exact = exact_distribution(graph, program, config.oracle)
    batch = sampler.run_batch(args.shots, args.seed)
    tv = tv_distance(batch.distribution, exact.probabilities)
    threshold = args.tv_max
    if threshold is None:
        threshold = tv_bound(len(program.steps), args.shots, config.sampler.eta)
    passed = tv <= threshold
    logger.info(f"TV distance {tv:.5f} against threshold {threshold:.5f}: {'pass' if passed else 'FAIL'}")
    payload = {
        "instance": {"graph": args.graph, "program": args.program, "qubits": len(graph.nodes)},
        "tv_distance": tv,
        "tv_threshold": threshold,
        "n_shots": args.shots,
        "oracle_support_size": exact.support_size,
        "pass": passed,
        "empirical": batch.distribution,
        "exact": exact.probabilities,
    }
    write_json(payload, args.out, config.as_dict())
    return EXIT_OK if passed else EXIT_FAILED


def cmd_explore(parser, args) -> int:
    if args.D < 1:
        parser.error("--D must be a positive integer")
    numerics = NumericsConfig()
    n_angles = args.n_angles or numerics.n_angles
    if n_angles < 3:
        parser.error("--n-angles must be at least 3")
    if args.eta < 0:
        parser.error("--eta must be non-negative")
    result = max_simulatable_r(
        args.family,
        args.phi,
        args.D,
        n_angles=n_angles,
        eta=args.eta,
        eps=numerics.lp_eps,
        precision=numerics.r_precision,
        use_lp=args.use_lp,
    )
    config = RunConfig(command="explore", numerics=numerics, knobs={"use_lp": args.use_lp})
    write_json(result.as_dict(), args.out, config.as_dict())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cylsep", description=__doc__)
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def phi_range(p):
        p.add_argument("--phi-min", type=float, default=0.0)
        p.add_argument("--phi-max", type=float, default=TWO_PI)
        p.add_argument("--steps", type=int, default=181)
        p.add_argument("--out", default=None, help="CSV path (stdout if omitted)")

    p = sub.add_parser("lambda", help="tabulate the growth rate lambda(phi)")
    phi_range(p)
    p.set_defaults(handler=cmd_lambda)

    p = sub.add_parser("region", help="tabulate the simulatable polar angle")
    p.add_argument("--D", type=int, default=3)
    p.add_argument("--T", type=float, default=None)
    phi_range(p)
    p.set_defaults(handler=cmd_region)

    p = sub.add_parser("check-sep", help="cylinder separability of one gate output")
    p.add_argument("--fa", type=float, required=True)
    p.add_argument("--fb", type=float, required=True)
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--oracle", action="store_true", help="also report the quantum minimum eigenvalue")
    p.set_defaults(handler=cmd_check_sep)

    def instance(p, shots):
        p.add_argument("--graph", required=True)
        p.add_argument("--program", required=True)
        p.add_argument("--shots", type=int, default=shots)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--eta", type=float, default=None)
        p.add_argument("--n-angles", type=int, default=None)
        p.add_argument("--eps", type=float, default=None)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--debug", action="store_true", help="check budgets on every branch")
        p.add_argument("--out", default=None)

    p = sub.add_parser("simulate", help="sample measurement outcomes")
    instance(p, 1000)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("verify", help="compare sampled outcomes with the exact distribution")
    instance(p, 100_000)
    p.add_argument("--tv-max", type=float, default=None)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("explore", help="largest simulatable input radius for a state space family")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--phi", type=float, default=math.pi)
    p.add_argument("--D", type=int, default=3)
    p.add_argument("--n-angles", type=int, default=None)
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--use-lp", action="store_true", help="solve the cylinder family numerically too")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_explore)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.handler(parser, args)
    except AdmissionRejected as e:
        return _print_rejection(e)
    except (GraphSpecError, ProgramError, FileNotFoundError) as e:
        logger.error(str(e))
        return EXIT_USAGE
    except CylsepError as e:
        logger.error(str(e))
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
