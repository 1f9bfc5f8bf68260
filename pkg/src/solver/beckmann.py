#!/usr/bin/env python3
"""
Wardrop equilibria by Frank-Wolfe minimization of the Beckmann potential

    V(x) = sum_r int_0^{x_r} c_r(z) dz

over the flows that route every commodity's demand on its strategies.

Two variants share the linear oracle (cheapest strategy at current loads,
lowest index on ties), the duality-gap certificate and an exact line search
on the monotone directional derivative:

  pairwise  per commodity, shift flow from the most expensive used strategy
            to the cheapest one (default)
  classic   move all commodities toward the all-or-nothing assignment
"""

import logging
import math
from dataclasses import asdict, dataclass, replace
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from core.costs import CostFunction
from core.errors import ConfigurationError, ConvergenceError, StructuralError
from core.game import CongestionGame, DemandVector, FlowProfile
from solver.report import EquilibriumReport, build_report
from utils import settings

logger = logging.getLogger(__name__)

VARIANTS = ("pairwise", "classic")
_MACHINE_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class SolverConfig:
    gap_tol: float = 1e-8
    max_iter: int = 200000
    eps0: float = 1e-2
    decay: float = 0.25
    load_tol: float = 1e-7
    tol_active: float = 1e-6
    max_rungs: int = 12
    variant: str = "pairwise"
    stall_sweeps: int = 50
    floor_gap: float = 1e-10
    line_search_iter: int = 60

    def __post_init__(self):
        for name in ("gap_tol", "eps0", "load_tol", "tol_active", "floor_gap"):
            if not getattr(self, name) > 0.0:
                raise ConfigurationError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0.0 < self.decay < 1.0:
            raise ConfigurationError(f"decay must lie in (0, 1), got {self.decay}")
        for name in ("max_iter", "max_rungs", "stall_sweeps", "line_search_iter"):
            if int(getattr(self, name)) < 1:
                raise ConfigurationError(f"{name} must be at least 1")
        if self.variant not in VARIANTS:
            raise ConfigurationError(f"unknown solver variant {self.variant!r}; expected one of {VARIANTS}")

    @classmethod
    def from_settings(cls, **overrides) -> "SolverConfig":
        """Build from the `solver` config section; None-valued overrides are ignored."""
        known = set(cls.__dataclass_fields__)
        values = {k: v for k, v in settings.get_section("solver").items() if k in known}
        values.update({k: v for k, v in overrides.items() if v is not None and k in known})
        return cls(**values)

    def replace(self, **changes) -> "SolverConfig":
        return replace(self, **changes)

    def to_dict(self):
        return asdict(self)


def as_demand(game: CongestionGame, demand: Union[DemandVector, Sequence[float], dict]) -> DemandVector:
    if isinstance(demand, DemandVector):
        if demand.keys != game.commodity_ids:
            raise StructuralError("demand vector does not match the game's commodities")
        return demand
    return DemandVector.for_game(game, demand)


class _Iterate:
    """Mutable Frank-Wolfe state: flows, loads and resource prices."""

    def __init__(self, game: CongestionGame, costs: Sequence[CostFunction], mu: Sequence[float], flows):
        self.strategies = game.strategy_indices
        self.costs = list(costs)
        self.mu = list(mu)
        self.f = [list(row) for row in flows]
        self.x = [0.0] * len(self.costs)
        self.tau = [0.0] * len(self.costs)
        self.refresh()

    def refresh(self):
        x = [0.0] * len(self.costs)
        for strategies, row in zip(self.strategies, self.f):
            for members, flow in zip(strategies, row):
                if flow:
                    for r in members:
                        x[r] += flow
        self.x = x
        self.tau = [c(v) for c, v in zip(self.costs, x)]

    def strategy_costs(self, h: int) -> List[float]:
        tau = self.tau
        return [sum(tau[r] for r in members) for members in self.strategies[h]]

    def gap(self) -> Tuple[float, float]:
        """(relative gap, absolute gap) of the current flow."""
        used_total = 0.0
        absolute = 0.0
        for h, row in enumerate(self.f):
            costs = self.strategy_costs(h)
            used = sum(flow * cost for flow, cost in zip(row, costs))
            absolute += used - self.mu[h] * min(costs)
            used_total += used
        absolute = max(absolute, 0.0)
        relative = absolute / used_total if used_total > 0.0 else absolute
        return relative, absolute

    def snapshot(self) -> List[List[float]]:
        return [list(row) for row in self.f]


def _cheapest(costs: Sequence[float]) -> int:
    best = 0
    for k in range(1, len(costs)):
        if costs[k] < costs[best]:
            best = k
    return best


def _initial_flows(game: CongestionGame, costs, mu, initial, seed) -> List[List[float]]:
    if isinstance(initial, FlowProfile):
        if initial.keys != game.commodity_ids or any(
                len(row) != len(com.strategies) for row, com in zip(initial.flows, game.commodities)):
            raise StructuralError("initial flow does not match the game")
        if not initial.is_feasible(DemandVector(game.commodity_ids, tuple(mu))):
            raise StructuralError("initial flow is not feasible for the demand")
        return [[max(v, 0.0) for v in row] for row in initial.flows]
    if initial == "random":
        rng = np.random.default_rng(seed)
        flows = []
        for strategies, m in zip(game.strategy_indices, mu):
            weights = rng.dirichlet(np.ones(len(strategies)))
            flows.append([float(m * w) for w in weights])
        return flows
    if initial not in (None, "aon"):
        raise ConfigurationError(f"unknown initial flow {initial!r}; use 'aon', 'random' or a FlowProfile")
    zero_prices = [c(0.0) for c in costs]
    flows = []
    for strategies, m in zip(game.strategy_indices, mu):
        row = [0.0] * len(strategies)
        row[_cheapest([sum(zero_prices[r] for r in s) for s in strategies])] = m
        flows.append(row)
    return flows


def _pairwise_shift(state: _Iterate, h: int, k_to: int, k_from: int, line_search_iter: int) -> float:
    """Exact line search for moving flow of commodity h from strategy k_from to k_to."""
    target = set(state.strategies[h][k_to])
    source = set(state.strategies[h][k_from])
    gain = sorted(target - source)
    lose = sorted(source - target)
    x, costs = state.x, state.costs
    limit = state.f[h][k_from]

    def slope(t):
        up = sum(costs[r](x[r] + t) for r in gain)
        down = sum(costs[r](max(x[r] - t, 0.0)) for r in lose)
        return up - down

    if slope(0.0) >= 0.0:
        return 0.0
    if slope(limit) <= 0.0:
        step = limit
    else:
        step = brentq(slope, 0.0, limit, maxiter=line_search_iter, disp=False)
    if step <= 0.0:
        return 0.0

    row = state.f[h]
    row[k_to] += step
    row[k_from] = 0.0 if step >= limit else row[k_from] - step
    for r in gain:
        x[r] += step
        state.tau[r] = costs[r](x[r])
    for r in lose:
        x[r] = max(x[r] - step, 0.0)
        state.tau[r] = costs[r](x[r])
    return step


def _pairwise_sweep(state: _Iterate, config: SolverConfig) -> bool:
    moved = False
    for h, strategies in enumerate(state.strategies):
        if state.mu[h] <= 0.0 or len(strategies) < 2:
            continue
        for _ in range(2 * len(strategies)):
            costs = state.strategy_costs(h)
            best = _cheapest(costs)
            worst, worst_cost = None, -math.inf
            for k, flow in enumerate(state.f[h]):
                if flow > 0.0 and costs[k] > worst_cost:
                    worst, worst_cost = k, costs[k]
            if worst is None or worst == best:
                break
            # differences at rounding level are not worth a move
            if worst_cost - costs[best] <= 16.0 * _MACHINE_EPS * (1.0 + abs(worst_cost)):
                break
            if _pairwise_shift(state, h, best, worst, config.line_search_iter) <= 0.0:
                break
            moved = True
    return moved


def _classic_step(state: _Iterate, config: SolverConfig) -> bool:
    target = []
    for h, strategies in enumerate(state.strategies):
        row = [0.0] * len(strategies)
        row[_cheapest(state.strategy_costs(h))] = state.mu[h]
        target.append(row)

    direction = [0.0] * len(state.costs)
    for strategies, row, goal in zip(state.strategies, state.f, target):
        for members, now, then in zip(strategies, row, goal):
            delta = then - now
            if delta:
                for r in members:
                    direction[r] += delta
    support = [r for r, d in enumerate(direction) if d != 0.0]
    if not support:
        return False
    x, costs = state.x, state.costs

    def slope(t):
        return sum(costs[r](max(x[r] + t * direction[r], 0.0)) * direction[r] for r in support)

    if slope(0.0) >= 0.0:
        return False
    step = 1.0 if slope(1.0) <= 0.0 else brentq(slope, 0.0, 1.0, maxiter=config.line_search_iter, disp=False)
    if step <= 0.0:
        return False
    state.f = [[now + step * (then - now) for now, then in zip(row, goal)]
               for row, goal in zip(state.f, target)]
    state.refresh()
    return True


def equilibrate(game: CongestionGame, costs: Sequence[CostFunction], mu: Sequence[float],
                config: SolverConfig, initial=None, seed: Optional[int] = None):
    """
    Run Frank-Wolfe on `game`'s strategy structure with the given costs.

    Returns (flows, iterations, relative gap, converged).
    """
    mu = [float(m) for m in mu]
    if sum(mu) == 0.0:
        return [[0.0] * len(s) for s in game.strategy_indices], 0, 0.0, True

    state = _Iterate(game, costs, mu, _initial_flows(game, costs, mu, initial, seed))
    sweep = _pairwise_sweep if config.variant == "pairwise" else _classic_step

    best_gap, best_flows, stalled = math.inf, state.snapshot(), 0
    iterations = 0
    while True:
        state.refresh()
        rel, _ = state.gap()
        if rel < best_gap:
            best_gap, best_flows, stalled = rel, state.snapshot(), 0
        else:
            stalled += 1
        if rel <= config.gap_tol:
            return state.snapshot(), iterations, rel, True
        if stalled >= config.stall_sweeps:
            logger.debug("gap stalled at %.3e after %d sweeps", best_gap, iterations)
            return best_flows, iterations, best_gap, best_gap <= config.floor_gap
        if iterations >= config.max_iter:
            return best_flows, iterations, best_gap, False
        moved = sweep(state, config)
        iterations += 1
        if not moved:
            # nothing left to shift: equilibrium up to rounding
            state.refresh()
            rel, _ = state.gap()
            return state.snapshot(), iterations, rel, True


def solve_beckmann(game: CongestionGame, demand, config: Optional[SolverConfig] = None,
                   initial_flow=None, seed: Optional[int] = None) -> EquilibriumReport:
    """
    Wardrop equilibrium of `game` at `demand`.

    `initial_flow` is "aon" (default: all-or-nothing at zero load), "random"
    (seeded Dirichlet split) or a feasible FlowProfile used as a warm start.
    Raises ConvergenceError carrying the best iterate when the budget runs out.
    """
    config = config or SolverConfig.from_settings()
    demand = as_demand(game, demand)
    flows, iterations, gap, converged = equilibrate(
        game, game.costs, demand.values, config, initial=initial_flow, seed=seed)
    report = build_report(game, demand, flows, gap, iterations, config.tol_active)
    if not converged:
        raise ConvergenceError(
            f"Frank-Wolfe stopped after {iterations} sweeps with relative gap {gap:.3e} "
            f"(target {config.gap_tol:.1e})", report)
    logger.debug("solved %s at %s in %d sweeps, gap %.2e", game.name or "game",
                 list(demand.values), iterations, gap)
    return report
