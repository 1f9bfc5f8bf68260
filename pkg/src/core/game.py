#!/usr/bin/env python3
"""
Congestion game structures, demands, flows and loads.

A game holds resources (each with a cost) and commodities (each with an
explicit list of strategies, a strategy being a set of resource ids). Flows
are stored per commodity and per strategy; loads per resource.
"""

from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .costs import CostFunction
from .errors import StructuralError

# Feasibility tolerance factor: |sum_s f_s - mu| <= FEAS_TOL * (1 + mu)
FEAS_TOL = 1e-9


@dataclass(frozen=True)
class Resource:
    id: str
    cost: CostFunction


@dataclass(frozen=True, init=False)
class Strategy:
    resources: Tuple[str, ...]

    def __init__(self, resources: Iterable[str]):
        object.__setattr__(self, "resources", tuple(str(r) for r in resources))

    def __len__(self):
        return len(self.resources)

    def __iter__(self):
        return iter(self.resources)

    def __contains__(self, rid):
        return rid in self.resources

    def as_set(self):
        return frozenset(self.resources)


@dataclass(frozen=True, init=False)
class Commodity:
    id: str
    strategies: Tuple[Strategy, ...]

    def __init__(self, id: str, strategies: Iterable[Union[Strategy, Sequence[str]]]):
        object.__setattr__(self, "id", str(id))
        object.__setattr__(self, "strategies", tuple(
            s if isinstance(s, Strategy) else Strategy(s) for s in strategies))

    def resource_ids(self) -> Tuple[str, ...]:
        """Union of the strategies' resources in first-seen order (R^h)."""
        seen = []
        for s in self.strategies:
            for rid in s:
                if rid not in seen:
                    seen.append(rid)
        return tuple(seen)


class CongestionGame:
    """
    Immutable congestion game (R, c, S).

    Construction checks the structural invariants and raises StructuralError on
    the first batch of violations; pass validate=False to build a possibly
    broken game for validate_game to inspect.
    """

    def __init__(self, resources: Sequence[Resource], commodities: Sequence[Commodity],
                 name: str = "", provenance: Optional[Dict[str, Any]] = None,
                 validate: bool = True):
        self.resources: Tuple[Resource, ...] = tuple(resources)
        self.commodities: Tuple[Commodity, ...] = tuple(commodities)
        self.name = name
        self.provenance = provenance

        self.resource_ids: Tuple[str, ...] = tuple(r.id for r in self.resources)
        self.commodity_ids: Tuple[str, ...] = tuple(c.id for c in self.commodities)
        self.resource_index: Dict[str, int] = {rid: i for i, rid in enumerate(self.resource_ids)}
        self.commodity_index: Dict[str, int] = {hid: i for i, hid in enumerate(self.commodity_ids)}
        self.costs: Tuple[CostFunction, ...] = tuple(r.cost for r in self.resources)

        # Strategy incidence as resource indices; unknown ids are dropped here
        # and reported by validate_game.
        self.strategy_indices: Tuple[Tuple[Tuple[int, ...], ...], ...] = tuple(
            tuple(tuple(self.resource_index[rid] for rid in s if rid in self.resource_index)
                  for s in com.strategies)
            for com in self.commodities
        )

        if validate:
            issues = validate_game(self)
            if issues:
                raise StructuralError("invalid game: " + "; ".join(issues))

    @property
    def n_resources(self) -> int:
        return len(self.resources)

    @property
    def n_commodities(self) -> int:
        return len(self.commodities)

    @property
    def singleton(self) -> bool:
        return all(len(s) == 1 for com in self.commodities for s in com.strategies)

    def commodity(self, hid: str) -> Commodity:
        try:
            return self.commodities[self.commodity_index[hid]]
        except KeyError:
            raise StructuralError(f"unknown commodity id: {hid}")

    def resource(self, rid: str) -> Resource:
        try:
            return self.resources[self.resource_index[rid]]
        except KeyError:
            raise StructuralError(f"unknown resource id: {rid}")

    def feasible_resources(self, hid: str) -> Tuple[str, ...]:
        """R^h in game resource order."""
        used = set(self.commodity(hid).resource_ids())
        return tuple(rid for rid in self.resource_ids if rid in used)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {}
        if self.name:
            data["name"] = self.name
        data["resources"] = [{"id": r.id, "cost": r.cost.to_dict()} for r in self.resources]
        data["commodities"] = [
            {"id": c.id, "strategies": [list(s.resources) for s in c.strategies]}
            for c in self.commodities
        ]
        if self.provenance is not None:
            data["provenance"] = self.provenance
        return data

    def __eq__(self, other):
        return isinstance(other, CongestionGame) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return (f"CongestionGame(name={self.name!r}, resources={len(self.resources)}, "
                f"commodities={len(self.commodities)}, singleton={self.singleton})")


class _Keyed:
    """Shared behaviour of the id-keyed value vectors below."""

    keys: Tuple[str, ...]
    values: Tuple[float, ...]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, key):
        if isinstance(key, str):
            try:
                return self.values[self.keys.index(key)]
            except ValueError:
                raise KeyError(key)
        return self.values[key]

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    def to_dict(self) -> Dict[str, float]:
        return dict(zip(self.keys, self.values))


@dataclass(frozen=True)
class DemandVector(_Keyed):
    keys: Tuple[str, ...]
    values: Tuple[float, ...]

    @classmethod
    def for_game(cls, game: CongestionGame, values: Union[Sequence[float], Dict[str, float]]) -> "DemandVector":
        if isinstance(values, dict):
            unknown = set(values) - set(game.commodity_ids)
            if unknown:
                raise StructuralError(f"unknown commodity ids in demand: {sorted(unknown)}")
            values = [values.get(hid, 0.0) for hid in game.commodity_ids]
        values = tuple(float(v) for v in values)
        if len(values) != game.n_commodities:
            raise StructuralError(
                f"demand has {len(values)} entries but the game has {game.n_commodities} commodities")
        for hid, v in zip(game.commodity_ids, values):
            if not np.isfinite(v) or v < 0.0:
                raise StructuralError(f"demand for commodity {hid} must be a finite nonnegative number, got {v}")
        return cls(game.commodity_ids, values)

    @property
    def total(self) -> float:
        return float(sum(self.values))

    def with_component(self, key: Union[int, str], value: float) -> "DemandVector":
        idx = self.keys.index(key) if isinstance(key, str) else key
        values = list(self.values)
        values[idx] = float(value)
        return DemandVector(self.keys, tuple(values))


@dataclass(frozen=True)
class LoadProfile(_Keyed):
    keys: Tuple[str, ...]
    values: Tuple[float, ...]

    def max_abs_difference(self, other: "LoadProfile") -> float:
        if self.keys != other.keys:
            raise StructuralError("load profiles refer to different resources")
        if not self.values:
            return 0.0
        return float(np.max(np.abs(self.as_array() - other.as_array())))


@dataclass(frozen=True)
class FlowProfile:
    """Per-commodity, per-strategy flows f_s^h."""

    keys: Tuple[str, ...]
    flows: Tuple[Tuple[float, ...], ...]

    @classmethod
    def from_lists(cls, game: CongestionGame, flows: Sequence[Sequence[float]]) -> "FlowProfile":
        return cls(game.commodity_ids, tuple(tuple(float(v) for v in row) for row in flows))

    @classmethod
    def zeros(cls, game: CongestionGame) -> "FlowProfile":
        return cls(game.commodity_ids, tuple(tuple(0.0 for _ in c.strategies) for c in game.commodities))

    def __getitem__(self, key):
        if isinstance(key, str):
            return self.flows[self.keys.index(key)]
        return self.flows[key]

    def commodity_totals(self) -> Tuple[float, ...]:
        return tuple(float(sum(row)) for row in self.flows)

    def as_lists(self) -> List[List[float]]:
        return [list(row) for row in self.flows]

    def moved(self, commodity: Union[int, str], source: int, target: int, amount: float) -> "FlowProfile":
        """Copy with `amount` moved from strategy `source` to strategy `target` of one commodity."""
        h = self.keys.index(commodity) if isinstance(commodity, str) else commodity
        rows = self.as_lists()
        rows[h][source] -= amount
        rows[h][target] += amount
        return FlowProfile(self.keys, tuple(tuple(r) for r in rows))

    def is_feasible(self, demand: DemandVector) -> bool:
        if len(self.flows) != len(demand):
            return False
        for row, mu in zip(self.flows, demand.values):
            if any(v < -FEAS_TOL * (1.0 + mu) for v in row):
                return False
            if abs(sum(row) - mu) > FEAS_TOL * (1.0 + mu):
                return False
        return True

    def to_dict(self) -> Dict[str, List[float]]:
        return {hid: list(row) for hid, row in zip(self.keys, self.flows)}


def _check_flow_shape(game: CongestionGame, flow: FlowProfile):
    if len(flow.flows) != game.n_commodities:
        raise StructuralError(
            f"flow has {len(flow.flows)} commodities but the game has {game.n_commodities}")
    for com, row in zip(game.commodities, flow.flows):
        if len(row) != len(com.strategies):
            raise StructuralError(
                f"commodity {com.id}: flow has {len(row)} entries for {len(com.strategies)} strategies")


def load_from_flow(game: CongestionGame, flow: FlowProfile) -> LoadProfile:
    """x_r = sum over commodities h and strategies s containing r of f_s^h."""
    _check_flow_shape(game, flow)
    loads = [0.0] * game.n_resources
    for strategies, row in zip(game.strategy_indices, flow.flows):
        for members, f in zip(strategies, row):
            if f == 0.0:
                continue
            for r in members:
                loads[r] += f
    return LoadProfile(game.resource_ids, tuple(loads))


def resource_costs(game: CongestionGame, loads: LoadProfile) -> Tuple[float, ...]:
    """tau_r = c_r(x_r)."""
    if len(loads) != game.n_resources:
        raise StructuralError(f"load profile has {len(loads)} entries for {game.n_resources} resources")
    return tuple(c(x) for c, x in zip(game.costs, loads.values))


def strategy_cost(game: CongestionGame, loads: LoadProfile,
                  strategy: Union[Strategy, Sequence[str]]) -> float:
    """c_s = sum_{r in s} c_r(x_r)."""
    if len(loads) != game.n_resources:
        raise StructuralError(f"load profile has {len(loads)} entries for {game.n_resources} resources")
    total = 0.0
    for rid in strategy:
        idx = game.resource_index.get(rid)
        if idx is None:
            raise StructuralError(f"strategy references unknown resource id: {rid}")
        total += game.costs[idx](loads.values[idx])
    return total


def validate_game(game: CongestionGame) -> List[str]:
    """Return one message per violated structural invariant (empty if well formed)."""
    violations: List[str] = []

    seen = set()
    for rid in game.resource_ids:
        if rid in seen:
            violations.append(f"duplicate resource id {rid}")
        seen.add(rid)
    seen = set()
    for hid in game.commodity_ids:
        if hid in seen:
            violations.append(f"duplicate commodity id {hid}")
        seen.add(hid)

    for res in game.resources:
        if not isinstance(res.cost, CostFunction):
            violations.append(f"resource {res.id}: cost is not a CostFunction")
            continue
        issues = res.cost.parameter_violations()
        if not issues:
            sampled = res.cost.sampled_monotonicity_violation()
            if sampled:
                issues = [f"cost {sampled}"]
        violations.extend(f"resource {res.id}: {msg}" for msg in issues)

    if not game.commodities:
        violations.append("game has no commodities")
    for com in game.commodities:
        if not com.strategies:
            violations.append(f"commodity {com.id} has no strategies")
        distinct = set()
        for k, s in enumerate(com.strategies):
            label = f"commodity {com.id} strategy {k} {{{', '.join(s.resources)}}}"
            if not s.resources:
                violations.append(f"{label} is empty")
            unknown = [rid for rid in s if rid not in game.resource_index]
            if unknown:
                violations.append(f"{label} references unknown resources {', '.join(unknown)}")
            if len(set(s.resources)) != len(s.resources):
                violations.append(f"{label} repeats a resource")
            if s.as_set() in distinct:
                violations.append(f"{label} duplicates an earlier strategy")
            distinct.add(s.as_set())
    return violations
