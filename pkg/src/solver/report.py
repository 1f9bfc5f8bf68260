#!/usr/bin/env python3
"""
Equilibrium reports
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

from core.game import CongestionGame, DemandVector, FlowProfile, LoadProfile, load_from_flow


@dataclass(frozen=True)
class EquilibriumReport:
    loads: LoadProfile
    flow: FlowProfile
    tau: Tuple[float, ...]
    commodity_costs: Tuple[float, ...]
    active_regime: Tuple[Tuple[str, ...], ...]
    beckmann_value: float
    gap: float
    iterations: int
    demand: Optional[DemandVector] = None
    selection: str = "beckmann"
    epsilon: float = 0.0
    ladder_rungs: int = 0
    warnings: Tuple[str, ...] = ()

    @property
    def resource_ids(self) -> Tuple[str, ...]:
        return self.loads.keys

    @property
    def commodity_ids(self) -> Tuple[str, ...]:
        return self.flow.keys

    @property
    def lam(self) -> Tuple[float, ...]:
        return self.commodity_costs

    def lambda_of(self, hid: str) -> float:
        return self.commodity_costs[self.commodity_ids.index(hid)]

    def tau_of(self, rid: str) -> float:
        return self.tau[self.resource_ids.index(rid)]

    def regime_of(self, hid: str) -> Tuple[str, ...]:
        return self.active_regime[self.commodity_ids.index(hid)]

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "loads": self.loads.to_dict(),
            "flows": self.flow.to_dict(),
            "tau": dict(zip(self.resource_ids, self.tau)),
            "lambda": dict(zip(self.commodity_ids, self.commodity_costs)),
            "active_regime": {hid: list(reg) for hid, reg in zip(self.commodity_ids, self.active_regime)},
            "beckmann_value": self.beckmann_value,
            "gap": self.gap,
            "iterations": self.iterations,
            "selection": self.selection,
        }
        if self.selection == "mes":
            data["epsilon"] = self.epsilon
            data["ladder_rungs"] = self.ladder_rungs
        if self.demand is not None:
            data["demand"] = self.demand.to_dict()
        data["warnings"] = list(self.warnings)
        return data


def strategy_costs(game: CongestionGame, tau: Sequence[float]):
    """Per commodity, the list of strategy costs at resource prices tau."""
    return [[sum(tau[r] for r in members) for members in strategies]
            for strategies in game.strategy_indices]


def build_report(game: CongestionGame, demand: DemandVector, flows, gap: float, iterations: int,
                 tol_active: float, **extra) -> EquilibriumReport:
    """Evaluate loads, prices and active regimes of `flows` under the game's own costs."""
    flow = flows if isinstance(flows, FlowProfile) else FlowProfile.from_lists(game, flows)
    loads = load_from_flow(game, flow)
    tau = tuple(c(x) for c, x in zip(game.costs, loads.values))

    levels = []
    regimes = []
    for strategies, costs in zip(game.strategy_indices, strategy_costs(game, tau)):
        level = min(costs)
        active = set()
        for members, cost in zip(strategies, costs):
            if abs(cost - level) <= tol_active * (1.0 + abs(level)):
                active.update(members)
        levels.append(level)
        regimes.append(tuple(rid for i, rid in enumerate(game.resource_ids) if i in active))

    value = sum(c.integral(x) for c, x in zip(game.costs, loads.values))
    return EquilibriumReport(
        loads=loads,
        flow=flow,
        tau=tau,
        commodity_costs=tuple(levels),
        active_regime=tuple(regimes),
        beckmann_value=value,
        gap=gap,
        iterations=iterations,
        demand=demand,
        **extra,
    )
