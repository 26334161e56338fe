"""Command-line harness: ``gen``, ``lift``, ``solve``, ``eval``, ``resolve``.

Results go to stdout as ``key=value`` lines. Failures print a single
``error=<kind> message=<json string>`` line to stderr and exit with 1
(usage) or 2 (data). Output files are written atomically.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import io
from .lifting import (
    add_lifted,
    lift_class_repulsion,
    lift_components,
    lift_dense,
    lift_paths,
)
from .graph import graph_distance_pairs
from .metrics import evaluate
from .pipeline import resolve
from .solvers import HierarchicalConfig, SolverConfig, solve, solve_hierarchical
from .synthgen import PlantedConfig, gen_planted

EXIT_USAGE = 1
EXIT_DATA = 2
FLAT = ["exact", "gaec", "gaec-ls", "gaec-kl"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _triple(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected z,y,x, got {text!r}")
    return tuple(int(p) for p in parts)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="liftedmc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="write a planted instance")
    p.add_argument("--config", required=True, help="JSON file with generator settings")
    p.add_argument("--out", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--attribution", help="also write the sampled attribution")

    p = sub.add_parser("lift", help="add lifted edges to a problem")
    p.add_argument("--problem", required=True)
    p.add_argument("--mode", required=True, choices=["class", "components", "paths", "dense"])
    p.add_argument("--out", required=True)
    p.add_argument("--attribution", help="class / component attribution file")
    p.add_argument("--weight", type=float, default=1.0, help="class repulsion strength")
    p.add_argument("--attractive", type=float, default=1.0)
    p.add_argument("--repulsive", type=float, default=1.0)
    p.add_argument("--budget", type=int, default=8, help="max sparse lifted edges per node")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--paths", help="path evidence file")
    p.add_argument("--labeling", help="object labeling that owns the paths")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--max-distance", type=int, default=3)
    p.add_argument("--weights", help="dense mode: one weight per candidate pair")
    p.add_argument("--constant", type=float, help="dense mode: same weight for every pair")

    p = sub.add_parser("solve", help="partition a problem")
    p.add_argument("--problem", required=True)
    p.add_argument("--solver", default="gaec-ls", choices=["exact", "gaec", "gaec-ls", "gaec-kl", "hier"])
    p.add_argument("--levels", type=int, default=2)
    p.add_argument("--block", type=_triple, help="initial block shape z,y,x")
    p.add_argument("--inner", default="gaec-ls", choices=FLAT)
    p.add_argument("--final", choices=FLAT, help="solver for the residual problem (default: --inner)")
    p.add_argument("--exclude-boundary", action="store_true",
                   help="only contract block merges between interior nodes")
    p.add_argument("--polish", choices=["ls", "kl"], help="refine the projected labeling")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-sweeps", type=int, default=100)
    p.add_argument("--out", required=True)

    p = sub.add_parser("eval", help="compare a segmentation to ground truth")
    p.add_argument("--gt", required=True)
    p.add_argument("--seg", required=True)
    p.add_argument("--log-base", choices=["e", "2"], default="e")

    p = sub.add_parser("resolve", help="re-solve objects flagged by path evidence")
    p.add_argument("--problem", required=True)
    p.add_argument("--labeling", required=True)
    p.add_argument("--paths", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--scope", choices=["object", "global"], default="object")
    p.add_argument("--solver", default="gaec-ls", choices=FLAT)
    p.add_argument("--max-sweeps", type=int, default=100)
    p.add_argument("--out", required=True)
    return parser


def _emit(**values):
    for key, value in values.items():
        print(f"{key}={value}")


def _metric(x: float) -> str:
    return io.fmt_float(x + 0.0)  # +0.0 turns -0.0 into 0


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for this mode")


def cmd_gen(args):
    settings = json.loads(io.read_text(args.config))
    if "grid_shape" in settings:
        settings["grid_shape"] = tuple(settings["grid_shape"])
    inst = gen_planted(PlantedConfig(**settings))
    io.write_atomic(args.out, io.serialize_problem(inst.problem))
    io.write_atomic(args.gt, io.serialize_labeling(inst.ground_truth))
    if args.attribution:
        io.write_atomic(args.attribution, io.serialize_attribution(inst.attribution))
    _emit(nodes=inst.problem.node_count, edges=inst.problem.graph.n_edges,
          objects=max(inst.ground_truth) + 1, attributed=len(inst.attribution))


def cmd_lift(args):
    problem = io.parse_problem(io.read_text(args.problem))
    g = problem.graph
    if args.mode == "class":
        _require(args, "attribution")
        attribution = io.parse_attribution(io.read_text(args.attribution))
        edges = lift_class_repulsion(g, attribution, args.weight, args.budget, args.seed)
    elif args.mode == "components":
        _require(args, "attribution")
        attribution = io.parse_attribution(io.read_text(args.attribution))
        edges = lift_components(g, attribution, args.attractive, args.repulsive, args.budget, args.seed)
    elif args.mode == "paths":
        _require(args, "paths", "labeling")
        evidence = io.parse_paths(io.read_text(args.paths))
        labels = io.parse_labeling(io.read_text(args.labeling))
        edges = lift_paths(evidence, args.threshold, labels, graph=g)
    else:
        n_cand = len(graph_distance_pairs(g, args.max_distance))
        if args.weights is not None:
            weights = [float(t) for t in io.read_text(args.weights).split()]
        elif args.constant is not None:
            weights = [args.constant] * n_cand
        else:
            raise UsageError("dense mode needs --weights or --constant")
        edges = lift_dense(g, args.max_distance, weights)
    out = add_lifted(problem, edges)
    io.write_atomic(args.out, io.serialize_problem(out))
    _emit(added=len(edges), lifted=out.n_lifted)


def cmd_solve(args):
    problem = io.parse_problem(io.read_text(args.problem))
    if args.solver == "hier":
        config = HierarchicalConfig(
            n_levels=args.levels,
            initial_block_shape=args.block,
            inner_solver=args.inner,
            final_solver=args.final,
            n_jobs=args.jobs,
            exclude_boundary=args.exclude_boundary,
            local_search_max_sweeps=args.max_sweeps,
            polish=args.polish,
        )
        result = solve_hierarchical(problem, config)
    else:
        result = solve(problem, SolverConfig(args.solver, local_search_max_sweeps=args.max_sweeps,
                                             seed=args.seed))
    io.write_atomic(args.out, io.serialize_labeling(result.labeling))
    _emit(energy=f"{result.energy:.9f}", components=result.n_components)
    for level in result.diagnostics.get("levels", []):
        k = level["level"]
        _emit(**{f"level{k}_nodes": level["nodes"], f"level{k}_edges": level["edges"],
                 f"level{k}_lifted": level["lifted"], f"level{k}_blocks": level["n_blocks"]})


def cmd_eval(args):
    gt = io.parse_labeling(io.read_text(args.gt))
    seg = io.parse_labeling(io.read_text(args.seg))
    report = evaluate(gt, seg, base=math.e if args.log_base == "e" else 2.0)
    _emit(vi_split=_metric(report.vi_split), vi_merge=_metric(report.vi_merge),
          rand_error=_metric(report.rand_error))


def cmd_resolve(args):
    problem = io.parse_problem(io.read_text(args.problem))
    labels = io.parse_labeling(io.read_text(args.labeling))
    evidence = io.parse_paths(io.read_text(args.paths))
    result = resolve(problem, labels, evidence, args.threshold, args.scope,
                     SolverConfig(args.solver, local_search_max_sweeps=args.max_sweeps))
    io.write_atomic(args.out, io.serialize_labeling(result.labeling))
    _emit(flagged=len(result.flagged), components=max(result.labeling) + 1)


COMMANDS = {"gen": cmd_gen, "lift": cmd_lift, "solve": cmd_solve, "eval": cmd_eval,
            "resolve": cmd_resolve}


def _fail(kind: str, message: str, code: int) -> int:
    print(f"error={kind} message={json.dumps(message)}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail("usage", str(exc), EXIT_USAGE)
    except (OSError, ValueError, TypeError, KeyError) as exc:
        return _fail("data", str(exc), EXIT_DATA)
    return 0


if __name__ == "__main__":
    sys.exit(main())
