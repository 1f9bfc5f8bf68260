#!/usr/bin/env python3
"""
Property verifiers over demand sweeps.

verify_mes                 loads of the selected equilibrium never decrease
                           along an axis chain
verify_comonotone          pairwise increments of a resource family never
                           have opposite signs
comonotone_representation  loads of a comonotone family as nondecreasing
                           tables over their aggregate
verify_monotone_operator   <lambda(mu1) - lambda(mu2), mu1 - mu2> >= 0
region_sweep               order and regime labels over a grid, as CSV rows
                           plus a legend

Solver failures at sweep points are reported as inconclusive, never as
violations.
"""

import csv
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import RepresentationError, StructuralError
from core.game import CongestionGame, DemandVector, LoadProfile
from diagnostics.sweeps import Point, SweepPlan
from formats.numbers import format_float
from mapping.region_mapper import RegionMapper
from singleton.regions import RegimeLabel, classify_region
from solver.beckmann import SolverConfig, solve_beckmann
from solver.mes import solve_mes
from solver.report import EquilibriumReport
from utils import settings
from utils.task_manager import TaskManager

logger = logging.getLogger(__name__)


def _slack(name: str, value: Optional[float]) -> float:
    if value is not None:
        return float(value)
    return float(settings.get_value("diagnostics", name, 1e-6))


def _solve_points(game: CongestionGame, points: Sequence[Point], solver, label: str,
                  config: SolverConfig, threads: Optional[int], manager: Optional[TaskManager] = None):
    """Solve every point once; returns (point -> report, point -> error text)."""
    manager = manager if manager is not None else TaskManager()
    run = manager.create_run(label, game.name)
    named = [(f"mu={list(p)}", p) for p in points]
    results = manager.run_tasks(run, named, lambda mu: solver(game, DemandVector.for_game(game, mu), config),
                                threads)
    reports: Dict[Point, EquilibriumReport] = {}
    errors: Dict[Point, str] = {}
    for task_id, point in zip(run.tasks, points):
        task = manager.tasks[task_id]
        if task_id in results:
            reports[point] = results[task_id]
        else:
            errors[point] = task.metadata.get("error", "")
    summary = manager.summary(run)
    logger.info("%s: %d points solved, %d failed", label, summary["completed"], summary["failed"])
    return reports, errors


@dataclass(frozen=True)
class LoadViolation:
    mu_from: Point
    mu_to: Point
    resource: str
    x_from: float
    x_to: float
    slack: float

    def to_dict(self):
        return {"mu_from": list(self.mu_from), "mu_to": list(self.mu_to), "resource": self.resource,
                "x_from": self.x_from, "x_to": self.x_to}


@dataclass(frozen=True)
class MonotonicityVerdict:
    violations: Tuple[LoadViolation, ...] = field(default_factory=tuple)
    inconclusive: Tuple[Tuple[Point, str], ...] = field(default_factory=tuple)
    tolerances: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def resources(self) -> List[str]:
        return sorted({v.resource for v in self.violations})

    def to_dict(self):
        return {
            "pass": self.passed,
            "violations": [v.to_dict() for v in self.violations],
            "inconclusive": [{"mu": list(p), "error": msg} for p, msg in self.inconclusive],
            "tolerances": dict(self.tolerances),
        }


def verify_mes(game: CongestionGame, plan: SweepPlan, slack: Optional[float] = None,
               config: Optional[SolverConfig] = None, threads: Optional[int] = None,
               manager: Optional[TaskManager] = None) -> MonotonicityVerdict:
    """
    Along every chain mu_0 < mu_1 < ... check x_r(mu_{i+1}) >= x_r(mu_i) - slack*(1 + max load)
    with solve_mes loads. Each distinct demand point is solved once.
    """
    if not plan.chain_mode:
        raise StructuralError("verify_mes needs an axis-chain sweep plan")
    if len(plan.box) != game.n_commodities:
        raise StructuralError(f"plan has {len(plan.box)} axes for {game.n_commodities} commodities")
    slack = _slack("monotonicity_slack", slack)
    config = config or SolverConfig.from_settings()
    reports, errors = _solve_points(game, plan.points(), solve_mes, "verify-mes", config, threads, manager)

    violations: List[LoadViolation] = []
    for chain in plan.chains():
        for a, b in zip(chain.points, chain.points[1:]):
            if a not in reports or b not in reports:
                continue
            xa, xb = reports[a].loads.values, reports[b].loads.values
            tol = slack * (1.0 + max(max(xa, default=0.0), max(xb, default=0.0)))
            for rid, before, after in zip(game.resource_ids, xa, xb):
                if after < before - tol:
                    violations.append(LoadViolation(a, b, rid, before, after, tol))
    for v in violations:
        logger.info("load of %s drops from %.9g to %.9g between %s and %s",
                    v.resource, v.x_from, v.x_to, list(v.mu_from), list(v.mu_to))
    return MonotonicityVerdict(tuple(violations), tuple(errors.items()),
                               {"monotonicity_slack": slack, "gap_tol": config.gap_tol})


def _as_samples(samples) -> List[Tuple[Tuple[float, ...], LoadProfile]]:
    out = []
    for sample in samples:
        if isinstance(sample, EquilibriumReport):
            demand = sample.demand.values if sample.demand is not None else ()
            out.append((tuple(demand), sample.loads))
        else:
            demand, loads = sample
            values = demand.values if isinstance(demand, DemandVector) else tuple(demand)
            out.append((tuple(float(v) for v in values), loads))
    return out


def _subset_values(loads: LoadProfile, subset: Sequence[str]) -> List[float]:
    try:
        return [loads[rid] for rid in subset]
    except KeyError as e:
        raise StructuralError(f"unknown resource id in subset: {e.args[0]}")


@dataclass(frozen=True)
class ComonotoneVerdict:
    passed: bool
    resources: Optional[Tuple[str, str]] = None
    samples: Optional[Tuple[int, int]] = None
    product: float = 0.0

    def to_dict(self):
        data: Dict[str, Any] = {"pass": self.passed}
        if not self.passed:
            data["violation"] = {"resources": list(self.resources), "samples": list(self.samples),
                                 "product": self.product}
        return data


def verify_comonotone(samples, subset: Sequence[str], slack: Optional[float] = None) -> ComonotoneVerdict:
    """
    (x_i(w1) - x_i(w2)) * (x_j(w1) - x_j(w2)) >= -slack for every resource pair
    of `subset` and every sample pair; reports the most negative product.
    """
    slack = _slack("comonotone_slack", slack)
    subset = list(subset)
    rows = [_subset_values(loads, subset) for _, loads in _as_samples(samples)]
    worst = None
    for (a, xa), (b, xb) in itertools.combinations(list(enumerate(rows)), 2):
        delta = [u - v for u, v in zip(xa, xb)]
        for i, j in itertools.combinations(range(len(subset)), 2):
            product = delta[i] * delta[j]
            if product < -slack and (worst is None or product < worst[0]):
                worst = (product, (subset[i], subset[j]), (a, b))
    if worst is None:
        return ComonotoneVerdict(True)
    return ComonotoneVerdict(False, worst[1], worst[2], worst[0])


@dataclass(frozen=True)
class ComonotoneRepresentation:
    """Loads of a comonotone family tabulated over their sum s."""

    aggregate: Tuple[float, ...]
    tables: Dict[str, Tuple[float, ...]]

    def evaluate(self, rid: str, s: float) -> float:
        return float(np.interp(s, self.aggregate, self.tables[rid]))

    def to_dict(self):
        return {"s": list(self.aggregate), "tables": {rid: list(v) for rid, v in self.tables.items()}}


def comonotone_representation(samples, subset: Sequence[str], slack: Optional[float] = None) -> ComonotoneRepresentation:
    """
    Sort samples by s = sum of the subset's loads and tabulate each load over s.

    Samples with equal s must carry equal loads and every table must be
    nondecreasing; otherwise RepresentationError names the resource and the
    offending pair of (original) sample indices.
    """
    slack = _slack("comonotone_slack", slack)
    subset = list(subset)
    rows = [_subset_values(loads, subset) for _, loads in _as_samples(samples)]
    if not rows:
        raise StructuralError("comonotone representation needs at least one sample")
    order = sorted(range(len(rows)), key=lambda k: (sum(rows[k]), k))

    aggregate: List[float] = []
    kept: List[int] = []
    for k in order:
        s = float(sum(rows[k]))
        if kept and abs(s - aggregate[-1]) <= slack * (1.0 + abs(s)):
            prev = kept[-1]
            for i, rid in enumerate(subset):
                if abs(rows[k][i] - rows[prev][i]) > slack * (1.0 + abs(rows[k][i])):
                    raise RepresentationError(rid, (prev, k), f"resource {rid} takes two values at the same "
                                                              f"aggregate load (samples {prev} and {k})")
            continue
        aggregate.append(s)
        kept.append(k)

    tables = {}
    for i, rid in enumerate(subset):
        values = tuple(float(rows[k][i]) for k in kept)
        for (p, u), (q, v) in zip(zip(kept, values), zip(kept[1:], values[1:])):
            if v < u - slack * (1.0 + abs(u)):
                raise RepresentationError(rid, (p, q))
        tables[rid] = values
    return ComonotoneRepresentation(tuple(aggregate), tables)


@dataclass(frozen=True)
class OperatorViolation:
    mu_a: Point
    mu_b: Point
    inner: float

    def to_dict(self):
        return {"mu_a": list(self.mu_a), "mu_b": list(self.mu_b), "inner_product": self.inner}


@dataclass(frozen=True)
class OperatorVerdict:
    passed: bool
    min_inner: float
    lambdas: Dict[Point, Tuple[float, ...]]
    violations: Tuple[OperatorViolation, ...] = field(default_factory=tuple)
    inconclusive: Tuple[Tuple[Point, str], ...] = field(default_factory=tuple)

    def to_dict(self):
        return {"pass": self.passed, "min_inner_product": self.min_inner,
                "lambda": [{"mu": list(mu), "lambda": list(lam)} for mu, lam in self.lambdas.items()],
                "violations": [v.to_dict() for v in self.violations],
                "inconclusive": [{"mu": list(p), "error": msg} for p, msg in self.inconclusive]}


def verify_monotone_operator(game: CongestionGame, samples: Sequence, slack: Optional[float] = None,
                             config: Optional[SolverConfig] = None,
                             threads: Optional[int] = None) -> OperatorVerdict:
    """
    <lambda(mu_a) - lambda(mu_b), mu_a - mu_b> >= -slack*(1 + |mu|*|lambda|) over all
    sample pairs, with |mu|*|lambda| the larger of the two samples' products.
    """
    slack = _slack("operator_slack", slack)
    config = config or SolverConfig.from_settings()
    points = list(dict.fromkeys(
        tuple(s.values) if isinstance(s, DemandVector) else DemandVector.for_game(game, s).values
        for s in samples))
    if len(points) < 2:
        raise StructuralError("the monotone operator check needs at least two distinct samples")
    reports, errors = _solve_points(game, points, solve_beckmann, "monotone-operator", config, threads)
    lambdas = {p: tuple(reports[p].commodity_costs) for p in points if p in reports}

    violations = []
    worst = float("inf")
    for a, b in itertools.combinations([p for p in points if p in lambdas], 2):
        mu_a, mu_b = np.array(a), np.array(b)
        lam_a, lam_b = np.array(lambdas[a]), np.array(lambdas[b])
        inner = float(np.dot(lam_a - lam_b, mu_a - mu_b))
        scale = max(np.linalg.norm(mu_a) * np.linalg.norm(lam_a), np.linalg.norm(mu_b) * np.linalg.norm(lam_b))
        worst = min(worst, inner)
        if inner < -slack * (1.0 + scale):
            violations.append(OperatorViolation(a, b, inner))
    if worst == float("inf"):
        worst = 0.0
    return OperatorVerdict(not violations, worst, lambdas, tuple(violations), tuple(errors.items()))


@dataclass
class RegionSweep:
    header: List[str]
    rows: List[List[str]]
    legend: Dict[str, Any]

    @property
    def distinct_orders(self) -> int:
        return len(self.legend["orders"])

    @property
    def distinct_regimes(self) -> int:
        return len(self.legend["regimes"])

    def order_signatures(self) -> List[str]:
        return [entry["signature"] for entry in self.legend["orders"]]

    def write_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(self.header)
            writer.writerows(self.rows)


def region_sweep(game: CongestionGame, plan: SweepPlan, config: Optional[SolverConfig] = None,
                 tie_tol: Optional[float] = None, threads: Optional[int] = None,
                 manager: Optional[TaskManager] = None) -> RegionSweep:
    """
    Solve every plan point and label it with its cost order and active regime.

    Columns: mu_<h>..., lambda_<h>..., order_label, regime_label, x_<r>...
    """
    if not game.singleton:
        raise StructuralError("region sweeps need a singleton game")
    if len(plan.box) != game.n_commodities:
        raise StructuralError(f"plan has {len(plan.box)} axes for {game.n_commodities} commodities")
    config = config or SolverConfig.from_settings()
    tie_tol = tie_tol if tie_tol is not None else float(settings.get_value("singleton", "tie_tol", 1e-6))
    points = plan.points()
    reports, errors = _solve_points(game, points, solve_beckmann, "region-sweep", config, threads, manager)

    header = ([f"mu_{h}" for h in game.commodity_ids] + [f"lambda_{h}" for h in game.commodity_ids]
              + ["order_label", "regime_label"] + [f"x_{r}" for r in game.resource_ids])
    mapper = RegionMapper()
    rows = []
    for index, point in enumerate(points):
        if point not in reports:
            mapper.add_failure(index, point, errors.get(point, ""))
            continue
        report = reports[point]
        order = classify_region(game, point, report, tie_tol)
        regime = RegimeLabel.from_report(report)
        order_id, regime_id = mapper.add_point(index, point, order, regime)
        rows.append([format_float(v) for v in point]
                    + [format_float(v) for v in report.commodity_costs]
                    + [order_id, regime_id]
                    + [format_float(v) for v in report.loads.values])
    legend = mapper.legend(game.name, {"tie_tol": tie_tol, "gap_tol": config.gap_tol,
                                       "tol_active": config.tol_active})
    return RegionSweep(header, rows, legend)
