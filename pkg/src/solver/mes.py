#!/usr/bin/env python3
"""
Monotone equilibrium selection through a Tikhonov ladder.

Each rung solves the equilibrium problem with costs c_r(x) + 2*eps*x, i.e.
minimizes V(x) + eps*|x|^2, warm-started from the previous rung. As eps
shrinks the loads converge to the minimal-norm equilibrium; the ladder stops
once two successive rungs agree within load_tol in the max norm.
"""

import logging
from typing import Optional

import numpy as np

from core.costs import RegularizedCost
from core.errors import ConvergenceError
from core.game import CongestionGame, FlowProfile
from solver.beckmann import SolverConfig, as_demand, equilibrate
from solver.report import EquilibriumReport, build_report

logger = logging.getLogger(__name__)

LADDER_WARNING = "ladder-not-stable"
# rung gap targets never go below this
_MIN_RUNG_GAP = 1e-14


def _loads(game: CongestionGame, flows) -> np.ndarray:
    x = np.zeros(game.n_resources)
    for strategies, row in zip(game.strategy_indices, flows):
        for members, f in zip(strategies, row):
            for r in members:
                x[r] += f
    return x


def solve_mes(game: CongestionGame, demand, config: Optional[SolverConfig] = None,
              initial_flow=None) -> EquilibriumReport:
    """
    Minimal-norm equilibrium of `game` at `demand`, flagged selection="mes".

    When the ladder does not settle within max_rungs the last rung is returned
    with the "ladder-not-stable" warning.
    """
    config = config or SolverConfig.from_settings()
    demand = as_demand(game, demand)

    if demand.total == 0.0:
        flows = [[0.0] * len(s) for s in game.strategy_indices]
        return build_report(game, demand, flows, 0.0, 0, config.tol_active,
                            selection="mes", epsilon=0.0, ladder_rungs=0)

    eps = config.eps0
    flows = initial_flow
    previous = None
    total_iterations = 0
    stable = False
    rung = 0
    gap = 0.0
    for rung in range(1, config.max_rungs + 1):
        costs = [RegularizedCost(c, eps) for c in game.costs]
        rung_config = config.replace(gap_tol=max(config.gap_tol * eps, _MIN_RUNG_GAP))
        start = FlowProfile.from_lists(game, flows) if isinstance(flows, list) else flows
        flows, iterations, gap, converged = equilibrate(game, costs, demand.values, rung_config, initial=start)
        total_iterations += iterations
        if not converged:
            report = build_report(game, demand, flows, gap, total_iterations, config.tol_active,
                                  selection="mes", epsilon=eps, ladder_rungs=rung)
            raise ConvergenceError(f"regularized rung eps={eps:.3e} did not converge (gap {gap:.3e})", report)

        loads = _loads(game, flows)
        if previous is not None:
            change = float(np.max(np.abs(loads - previous))) if loads.size else 0.0
            logger.debug("rung %d eps=%.3e load change %.3e", rung, eps, change)
            if change < config.load_tol:
                stable = True
                break
        previous = loads
        if rung < config.max_rungs:
            eps *= config.decay

    warnings = () if stable else (LADDER_WARNING,)
    if not stable:
        logger.warning("Tikhonov ladder did not stabilise within %d rungs (eps=%.3e)", config.max_rungs, eps)
    return build_report(game, demand, flows, gap, total_iterations, config.tol_active,
                        selection="mes", epsilon=eps, ladder_rungs=rung, warnings=warnings)
