#!/usr/bin/env python3
"""
wardrop-kit - Main Entry Point

Exit status: 0 success (and verifier pass), 2 verifier fail, 1 error.
"""

import argparse
import logging
import os
import sys

# Add src directory to Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from core.errors import NotStrictlyIncreasingError, StructuralError, WardropKitError
from core.game import DemandVector
from composer.algebra import product, union
from composer.routing import check_equivalence, check_routing_conditions, embed_common_od, embed_sp, identity_witness
from diagnostics.sweeps import SweepPlan, parse_box, parse_chain
from diagnostics.verifiers import comonotone_representation, region_sweep, verify_comonotone, verify_mes
from formats import numbers
from formats.crg_format import load_crg
from formats.game_format import load_game
from singleton.regions import (
    RegimeLabel,
    class_break_points,
    classify_region,
    restricted_equilibrium_check,
    subregion_boundaries,
)
from solver.beckmann import SolverConfig, solve_beckmann
from solver.certificates import beckmann_gradient_check
from solver.mes import solve_mes
from utils import console, settings
from utils.task_manager import TaskManager
from utils.workspace_manager import WorkspaceManager

logger = logging.getLogger("wardrop_kit")

EXIT_OK, EXIT_ERROR, EXIT_FAIL = 0, 1, 2


def parse_demand(text):
    """'60,30,6' -> [60.0, 30.0, 6.0]"""
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise StructuralError(f"demand {text!r} must be a comma-separated list of numbers")


def _require(args, name):
    if getattr(args, name) in (None, []):
        raise StructuralError(f"--{name.replace('_', '-')} is required for {args.command}")
    return getattr(args, name)


def _single_game(args):
    games = _require(args, "game")
    if len(games) != 1:
        raise StructuralError(f"{args.command} takes exactly one --game")
    return load_game(games[0])


def _demand(args, game, required=True):
    if not args.demand:
        if required:
            raise StructuralError(f"--demand is required for {args.command}")
        return None
    return DemandVector.for_game(game, parse_demand(args.demand[0]))


def _solver_config(args):
    return SolverConfig.from_settings(gap_tol=args.gap_tol, max_iter=args.max_iter, variant=args.variant)


def emit(args, data, name):
    """Write the JSON artefact to --out (file or workspace directory) or stdout."""
    if not args.out:
        sys.stdout.write(numbers.dumps(data))
        return
    if args.out.endswith(".json"):
        numbers.dump(data, args.out)
        console.info(f"Saved {args.out}")
    else:
        path = WorkspaceManager(args.out).save_report(name, data)
        console.info(f"Saved {path}")


def _workspace(args):
    """WorkspaceManager for --out DIR, None for file or stdout output."""
    if not args.out or args.out.endswith((".json", ".csv")):
        return None
    return WorkspaceManager(args.out)


def save_task_log(workspace, manager, name):
    """Persist sweep tasks as logs/<name>_tasks.json plus a readable logs/<name>.log."""
    manager.save(str(workspace.logs_dir / f"{name}_tasks.json"))
    lines = []
    for run in manager.runs.values():
        summary = manager.summary(run)
        lines.append(f"{run.run_id} {run.name} [{run.description}]: {summary['completed']}/{summary['total']} "
                     f"completed, {summary['failed']} failed")
        for task in manager.failed_tasks(run):
            lines.append(f"  {task.name}: {task.metadata.get('error', '')}")
    return workspace.save_log(name, "\n".join(lines) + "\n")


def cmd_solve(args):
    game = _single_game(args)
    demand = _demand(args, game)
    report = solve_beckmann(game, demand, _solver_config(args), initial_flow=args.initial, seed=args.seed)
    emit(args, report.to_dict(), "solve")
    return EXIT_OK


def cmd_mes(args):
    game = _single_game(args)
    report = solve_mes(game, _demand(args, game), _solver_config(args))
    for warning in report.warnings:
        console.warning(warning)
    emit(args, report.to_dict(), "mes")
    return EXIT_OK


def cmd_regions(args):
    game = _single_game(args)
    config = _solver_config(args)
    if args.box:
        base = _demand(args, game, required=False)
        plan = SweepPlan(parse_box(args.box, game, base.values if base else None), args.grid,
                         seed=args.seed, jitter=args.jitter)
        manager = TaskManager()
        sweep = region_sweep(game, plan, config, tie_tol=args.tol, manager=manager)
        console.info(f"{len(sweep.rows)} points, {sweep.distinct_orders} orders, {sweep.distinct_regimes} regimes")
        if args.out and args.out.endswith(".csv"):
            sweep.write_csv(args.out)
            numbers.dump(sweep.legend, args.out[:-4] + "_legend.json")
            console.info(f"Saved {args.out}")
        elif args.out:
            workspace = WorkspaceManager(args.out)
            workspace.save_csv("regions", sweep.header, sweep.rows)
            workspace.save_legend("regions", sweep.legend)
            save_task_log(workspace, manager, "regions")
            console.info(f"Saved sweep to {workspace.sweeps_dir}")
        else:
            sys.stdout.write(",".join(sweep.header) + "\n")
            for row in sweep.rows:
                sys.stdout.write(",".join(row) + "\n")
        return EXIT_OK

    demand = _demand(args, game)
    report = solve_beckmann(game, demand, config)
    tie_tol = args.tol if args.tol is not None else settings.get_value("singleton", "tie_tol", 1e-6)
    label = classify_region(game, demand, report, tie_tol)
    data = {
        "order": label.to_dict(),
        "regime": RegimeLabel.from_report(report).to_dict(),
        "lambda": dict(zip(report.commodity_ids, report.commodity_costs)),
    }
    try:
        data["restricted"] = restricted_equilibrium_check(game, demand, label, report).by_class()
    except NotStrictlyIncreasingError as e:
        console.warning(f"no restricted check: {e}")
    try:
        data["boundaries"] = [h.to_dict() for h in subregion_boundaries(game, label)]
    except StructuralError as e:
        console.warning(f"no sub-region boundaries: {e}")
    emit(args, data, "regions")
    return EXIT_OK


def cmd_breakpoints(args):
    game = _single_game(args)
    commodities = _require(args, "commodity_class").split(",")
    emit(args, class_break_points(game, commodities), "breakpoints")
    return EXIT_OK


def _plan_for_verification(args, game):
    base = _demand(args, game, required=False)
    base_values = base.values if base else None
    if args.chain:
        return parse_chain(args.chain, game, base_values)
    if args.box:
        box = parse_box(args.box, game, base_values)
        return SweepPlan(box, args.grid, axes=tuple(range(game.n_commodities)), seed=args.seed, jitter=args.jitter)
    raise StructuralError(f"{args.command} needs --chain or --box")


def cmd_verify_mes(args):
    game = _single_game(args)
    manager = TaskManager()
    verdict = verify_mes(game, _plan_for_verification(args, game), args.tol, _solver_config(args), manager=manager)
    for point, message in verdict.inconclusive:
        console.warning(f"inconclusive at {list(point)}: {message}")
    emit(args, verdict.to_dict(), "verify_mes")
    workspace = _workspace(args)
    if workspace:
        save_task_log(workspace, manager, "verify_mes")
    if verdict.passed:
        console.success("loads are monotone along every chain")
        return EXIT_OK
    console.error(f"loads decrease on {', '.join(verdict.resources())}")
    return EXIT_FAIL


def cmd_verify_comonotone(args):
    game = _single_game(args)
    config = _solver_config(args)
    if args.box or args.chain:
        points = _plan_for_verification(args, game).points()
    else:
        points = [parse_demand(d) for d in _require(args, "demand")]
    subset = _require(args, "resources").split(",")
    reports = [solve_mes(game, DemandVector.for_game(game, mu), config) for mu in points]
    verdict = verify_comonotone(reports, subset, args.tol)
    data = verdict.to_dict()
    if verdict.passed and args.representation:
        data["representation"] = comonotone_representation(reports, subset, args.tol).to_dict()
    emit(args, data, "verify_comonotone")
    if verdict.passed:
        return EXIT_OK
    console.error(f"loads of {' and '.join(verdict.resources)} move in opposite directions")
    return EXIT_FAIL


def cmd_combine(args):
    paths = _require(args, "game")
    if len(paths) != 2:
        raise StructuralError("combine takes exactly two --game files")
    left, right = load_game(paths[0]), load_game(paths[1])
    combined = product(left, right) if args.op == "product" else union(left, right)
    emit(args, combined.to_dict(), "combined")
    return EXIT_OK


def cmd_embed(args):
    if args.kind == "sp":
        game = _single_game(args)
        crg, witness = embed_sp(game)
        data = {"crg": crg.to_dict(), "witness": witness.to_dict()}
    else:
        crg = load_crg(_require(args, "crg"))
        embedded = embed_common_od(crg, args.mode)
        data = {"crg": embedded.to_dict(),
                "witness": identity_witness(embedded.to_congestion_game()).to_dict()}
    emit(args, data, "embedding")
    return EXIT_OK


def cmd_check_crg(args):
    crg = load_crg(_require(args, "crg"))
    if not crg.is_common_od:
        crg = embed_common_od(crg, args.mode)
        console.info("input has several origins; checked its common-OD embedding")
    conditions = check_routing_conditions(crg)
    data = {"conditions": conditions.to_dict()}
    status = EXIT_OK
    if args.game:
        game = _single_game(args)
        demands = [parse_demand(d) for d in args.demand] if args.demand else []
        verdict = check_equivalence(game, crg, identity_witness(game), demands, _solver_config(args),
                                    seed=args.seed or 0)
        data["equivalence"] = verdict.to_dict()
        if not verdict.passed:
            console.error("games are not equivalent under the identity witness")
            status = EXIT_FAIL
    emit(args, data, "check_crg")
    return status


def cmd_gradient_check(args):
    game = _single_game(args)
    residuals = beckmann_gradient_check(game, _demand(args, game), args.step, _solver_config(args))
    tol = args.tol if args.tol is not None else 1e-2
    emit(args, {"step": args.step, "tolerance": tol, "residuals": residuals}, "gradient_check")
    worst = max(residuals.values(), default=0.0)
    if worst > tol:
        console.error(f"largest residual {worst:.3e} exceeds {tol:.1e}")
        return EXIT_FAIL
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "mes": cmd_mes,
    "regions": cmd_regions,
    "breakpoints": cmd_breakpoints,
    "verify-mes": cmd_verify_mes,
    "verify-comonotone": cmd_verify_comonotone,
    "combine": cmd_combine,
    "embed": cmd_embed,
    "check-crg": cmd_check_crg,
    "gradient-check": cmd_gradient_check,
}


class CliParser(argparse.ArgumentParser):
    """Usage errors exit with EXIT_ERROR; EXIT_FAIL is kept for verifier failures."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = CliParser(prog="wardrop-kit",
                       description="Wardrop equilibria, monotone selections and region maps")
    parser.add_argument("command", choices=sorted(COMMANDS), help="Operation to run")
    parser.add_argument("--game", action="append", help="Game definition file (repeat for combine)")
    parser.add_argument("--crg", help="Constrained routing game file")
    parser.add_argument("--demand", action="append",
                        help="Comma-separated demand vector (repeat for verify-comonotone/check-crg)")
    parser.add_argument("--box", help="Demand box h:lo:hi,... for sweeps")
    parser.add_argument("--grid", type=int, default=2, help="Grid points per axis")
    parser.add_argument("--chain", help="Axis chain h:lo:hi:steps")
    parser.add_argument("--jitter", type=float, default=0.0, help="Grid jitter as a fraction of the step")
    parser.add_argument("--class", dest="commodity_class", help="Comma-separated commodity class")
    parser.add_argument("--resources", help="Comma-separated resource subset")
    parser.add_argument("--representation", action="store_true",
                        help="Also emit the aggregate-load tables of a comonotone family")
    parser.add_argument("--op", choices=["product", "union"], default="product", help="Composition for combine")
    parser.add_argument("--kind", choices=["sp", "common-od"], default="sp", help="Embedding for embed")
    parser.add_argument("--mode", choices=["auto", "bypass", "super-terminal"], help="Common-OD embedding mode")
    parser.add_argument("--initial", choices=["aon", "random"], default="aon", help="Starting flow")
    parser.add_argument("--step", type=float, default=1e-3, help="Finite-difference step for gradient-check")
    parser.add_argument("--out", "-o", help="Output file (.json/.csv) or workspace directory")
    parser.add_argument("--gap-tol", type=float, help="Relative duality-gap tolerance")
    parser.add_argument("--max-iter", type=int, help="Frank-Wolfe iteration budget")
    parser.add_argument("--variant", choices=["pairwise", "classic"], help="Frank-Wolfe variant")
    parser.add_argument("--seed", type=int, help="Seed for random starts, jitter and equivalence samples")
    parser.add_argument("--tol", type=float, help="Verifier slack / tie tolerance override")
    parser.add_argument("--config", help="JSON or YAML configuration overrides")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_ERROR

    try:
        if args.config:
            settings.use_config_file(args.config)
    except (OSError, ValueError) as e:
        console.error(f"cannot read config {args.config}: {e}")
        return EXIT_ERROR

    configured = str(settings.get_value("runtime", "log_level", "WARNING")).upper()
    level = logging.DEBUG if args.verbose else getattr(logging, configured, logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    try:
        return COMMANDS[args.command](args)
    except WardropKitError as e:
        console.error(str(e))
        return EXIT_ERROR
    except OSError as e:
        console.error(str(e))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
