#!/usr/bin/env python3
"""
Optimality certificates: the dual program, Wardrop residuals and the
finite-difference check that the potential's demand gradient is lambda.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from core.errors import StructuralError
from core.game import FEAS_TOL, CongestionGame, load_from_flow
from solver.beckmann import SolverConfig, as_demand, solve_beckmann
from solver.report import EquilibriumReport, strategy_costs
from utils import settings

logger = logging.getLogger(__name__)


def dual_value(game: CongestionGame, demand, tau: Sequence[float]) -> float:
    """
    D(tau) = sum_r C*_r(tau_r) - sum_h mu^h * min_{s in S^h} sum_{r in s} tau_r

    At the equilibrium prices D(tau*) = -V(mu); everywhere else D >= -V.
    """
    demand = as_demand(game, demand)
    tau = [float(t) for t in tau]
    if len(tau) != game.n_resources:
        raise StructuralError(f"tau has {len(tau)} entries for {game.n_resources} resources")
    value = sum(c.conjugate(t) for c, t in zip(game.costs, tau))
    if math.isinf(value):
        return value
    for mu, costs in zip(demand.values, strategy_costs(game, tau)):
        value -= mu * min(costs)
    return value


@dataclass(frozen=True)
class WardropViolation:
    commodity: str
    strategy: int
    resources: Tuple[str, ...]
    cost: float
    level: float
    flow: float
    reason: str

    def to_dict(self):
        return {"commodity": self.commodity, "strategy": self.strategy, "resources": list(self.resources),
                "cost": self.cost, "lambda": self.level, "flow": self.flow, "reason": self.reason}


@dataclass(frozen=True)
class WardropVerdict:
    passed: bool
    max_residual: float
    violations: Tuple[WardropViolation, ...] = field(default_factory=tuple)

    def to_dict(self):
        return {"pass": self.passed, "max_residual": self.max_residual,
                "violations": [v.to_dict() for v in self.violations]}


def verify_wardrop(game: CongestionGame, demand, report: EquilibriumReport,
                   tol: Optional[float] = None) -> WardropVerdict:
    """
    Check the report's flow against the Wardrop conditions.

    Strategy costs are recomputed from the flow. A strategy carrying more than
    1e-9*(1+mu) must cost lambda within tol*(1+lambda); no strategy may cost
    less than lambda - tol*(1+lambda).
    """
    tol = float(settings.get_value("diagnostics", "wardrop_tol", 1e-6)) if tol is None else float(tol)
    demand = as_demand(game, demand)
    if report.flow.keys != game.commodity_ids or len(report.commodity_costs) != game.n_commodities:
        raise StructuralError("report does not match the game")
    loads = load_from_flow(game, report.flow)
    tau = [c(x) for c, x in zip(game.costs, loads.values)]

    violations: List[WardropViolation] = []
    worst = 0.0
    for h, com in enumerate(game.commodities):
        mu = demand.values[h]
        row = report.flow.flows[h]
        level = report.commodity_costs[h]
        scale = 1.0 + abs(level)
        if abs(sum(row) - mu) > FEAS_TOL * (1.0 + mu) or min(row) < -FEAS_TOL * (1.0 + mu):
            violations.append(WardropViolation(com.id, -1, (), sum(row), level, sum(row), "infeasible flow"))
            worst = max(worst, abs(sum(row) - mu) / (1.0 + mu))
        costs = strategy_costs(game, tau)[h]
        for k, (cost, flow) in enumerate(zip(costs, row)):
            if flow > FEAS_TOL * (1.0 + mu):
                residual = abs(cost - level) / scale
                if residual > tol:
                    violations.append(WardropViolation(
                        com.id, k, com.strategies[k].resources, cost, level, flow, "used strategy not cheapest"))
                worst = max(worst, residual)
            shortfall = (level - cost) / scale
            if shortfall > tol:
                violations.append(WardropViolation(
                    com.id, k, com.strategies[k].resources, cost, level, flow, "strategy cheaper than lambda"))
            worst = max(worst, shortfall)
    return WardropVerdict(not violations, worst, tuple(violations))


def beckmann_gradient_check(game: CongestionGame, demand, step: float = 1e-3,
                            config: Optional[SolverConfig] = None) -> Dict[str, float]:
    """
    |(V(mu + step*e_h) - V(mu - step*e_h)) / (2*step) - lambda^h(mu)| per commodity.
    """
    if not step > 0.0:
        raise StructuralError("step must be positive")
    demand = as_demand(game, demand)
    for hid, mu in zip(demand.keys, demand.values):
        if mu - step < 0.0:
            raise StructuralError(f"demand of {hid} must exceed the step {step}")
    config = config or SolverConfig.from_settings()
    # potential values are differenced, so solve well below the default gap
    config = config.replace(gap_tol=min(config.gap_tol, 1e-13))

    center = solve_beckmann(game, demand, config)
    residuals = {}
    for h, hid in enumerate(demand.keys):
        up = solve_beckmann(game, demand.with_component(h, demand.values[h] + step), config)
        down = solve_beckmann(game, demand.with_component(h, demand.values[h] - step), config)
        slope = (up.beckmann_value - down.beckmann_value) / (2.0 * step)
        residuals[hid] = abs(slope - center.commodity_costs[h])
        logger.debug("gradient check %s: dV/dmu=%.10g lambda=%.10g", hid, slope, center.commodity_costs[h])
    return residuals
