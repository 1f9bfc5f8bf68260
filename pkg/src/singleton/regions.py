#!/usr/bin/env python3
"""
Cost-order regions and active-regime sub-regions of singleton games.

At a demand mu the commodities are ranked by their equilibrium costs; ties
form cost classes C_1 < C_2 < ... Each class C owns the resources

    R_C = (union of R^h, h in C) minus (resources feasible for higher classes)

and, inside a region with fixed ranking, behaves like the single-commodity
game on R_C with demand mu_C = sum_{h in C} mu^h. Sub-regions with a fixed
active regime are separated by the hyperplanes sum_{h in C} mu^h = mu_bar
for the break points mu_bar of R_C.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from core.errors import NotStrictlyIncreasingError, StructuralError
from core.game import CongestionGame
from solver.beckmann import as_demand
from solver.report import EquilibriumReport
from singleton.water_filling import break_points, water_fill

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CostClass:
    commodities: Tuple[str, ...]
    resources: Tuple[str, ...]
    demand: float
    level: float

    @property
    def signature(self) -> str:
        return "=".join(self.commodities)


@dataclass(frozen=True)
class WeakOrderLabel:
    """Cost classes in increasing order of equilibrium cost."""

    classes: Tuple[CostClass, ...]

    @property
    def signature(self) -> str:
        return "<".join(c.signature for c in self.classes)

    def class_of(self, hid: str) -> CostClass:
        for cls in self.classes:
            if hid in cls.commodities:
                return cls
        raise KeyError(hid)

    def resource_class(self, rid: str) -> Optional[CostClass]:
        for cls in self.classes:
            if rid in cls.resources:
                return cls
        return None

    def to_dict(self):
        return {
            "signature": self.signature,
            "classes": [{"commodities": list(c.commodities), "resources": list(c.resources),
                         "demand": c.demand, "lambda": c.level} for c in self.classes],
        }


@dataclass(frozen=True)
class RegimeLabel:
    """Active resource set per commodity."""

    regimes: Tuple[Tuple[str, Tuple[str, ...]], ...]

    @classmethod
    def from_report(cls, report: EquilibriumReport, commodities: Optional[Sequence[str]] = None) -> "RegimeLabel":
        keep = commodities or report.commodity_ids
        return cls(tuple((hid, report.regime_of(hid)) for hid in keep))

    @property
    def signature(self) -> str:
        return "|".join(f"{hid}:{{{','.join(rs)}}}" for hid, rs in self.regimes)

    def regime(self, hid: str) -> Tuple[str, ...]:
        return dict(self.regimes)[hid]

    def to_dict(self):
        return {"signature": self.signature, "regimes": {hid: list(rs) for hid, rs in self.regimes}}


@dataclass(frozen=True)
class Hyperplane:
    """sum_{h in commodities} mu^h = value"""

    commodities: Tuple[str, ...]
    value: float

    def to_dict(self):
        return {"commodities": list(self.commodities), "value": self.value}


@dataclass(frozen=True)
class ClassCheck:
    commodities: Tuple[str, ...]
    passed: bool
    load_sum: float
    demand: float
    max_load_error: float


@dataclass(frozen=True)
class RestrictedCheck:
    passed: bool
    classes: Tuple[ClassCheck, ...] = field(default_factory=tuple)

    def by_class(self) -> Dict[str, bool]:
        return {"=".join(c.commodities): c.passed for c in self.classes}


def _require_singleton(game: CongestionGame):
    if not game.singleton:
        raise StructuralError(f"{game.name or 'game'} is not a singleton game")


def _require_strictly_increasing(game: CongestionGame, resource_ids: Sequence[str]):
    flat = [rid for rid in resource_ids if not game.resource(rid).cost.strictly_increasing]
    if flat:
        raise NotStrictlyIncreasingError(flat)


def classify_region(game: CongestionGame, demand, report: EquilibriumReport,
                    tie_tol: float = 1e-6) -> WeakOrderLabel:
    """
    Rank commodities by lambda and merge ties into cost classes.

    Two commodities share a class when their costs differ by at most
    tie_tol*(1 + max of the two); a class is compared against its first
    (cheapest) member. Commodities with zero demand join the lowest class.
    """
    _require_singleton(game)
    demand = as_demand(game, demand)
    levels = report.commodity_costs
    idle = [h for h in range(game.n_commodities) if demand.values[h] <= 0.0]
    loaded = [h for h in range(game.n_commodities) if demand.values[h] > 0.0]
    order = sorted(loaded, key=lambda h: (levels[h], h))

    groups: List[List[int]] = []
    for h in order:
        if groups:
            anchor = levels[groups[-1][0]]
            if abs(levels[h] - anchor) <= tie_tol * (1.0 + max(abs(levels[h]), abs(anchor))):
                groups[-1].append(h)
                continue
        groups.append([h])
    if idle:
        if groups:
            groups[0].extend(idle)
        else:
            groups.append(sorted(idle, key=lambda h: (levels[h], h)))

    feasible = [set(game.feasible_resources(hid)) for hid in game.commodity_ids]
    classes = []
    for i, members in enumerate(groups):
        higher = set()
        for later in groups[i + 1:]:
            for h in later:
                higher |= feasible[h]
        owned = set()
        for h in members:
            owned |= feasible[h]
        owned -= higher
        level = float(levels[members[0]])
        members = sorted(members)
        classes.append(CostClass(
            commodities=tuple(game.commodity_ids[h] for h in members),
            resources=tuple(rid for rid in game.resource_ids if rid in owned),
            demand=float(sum(demand.values[h] for h in members)),
            level=level,
        ))
    return WeakOrderLabel(tuple(classes))


def restricted_equilibrium_check(game: CongestionGame, demand, label: WeakOrderLabel,
                                 report: EquilibriumReport, tol: float = 1e-6) -> RestrictedCheck:
    """
    Each class's loads on R_C must carry exactly mu_C and coincide with
    water-filling R_C at mu_C.
    """
    _require_singleton(game)
    demand = as_demand(game, demand)
    checks = []
    for cls in label.classes:
        if not cls.resources:
            passed = cls.demand <= tol
            checks.append(ClassCheck(cls.commodities, passed, 0.0, cls.demand, 0.0))
            continue
        _require_strictly_increasing(game, cls.resources)
        actual = [report.loads[rid] for rid in cls.resources]
        load_sum = float(sum(actual))
        expected, _ = water_fill([game.resource(rid) for rid in cls.resources], cls.demand)
        error = max(abs(a - e) for a, e in zip(actual, expected))
        scale = 1.0 + cls.demand
        passed = abs(load_sum - cls.demand) <= tol * scale and error <= tol * scale
        if not passed:
            logger.debug("class %s fails restricted check: sum %.9g vs %.9g, max error %.3e",
                         cls.signature, load_sum, cls.demand, error)
        checks.append(ClassCheck(cls.commodities, passed, load_sum, cls.demand, error))
    return RestrictedCheck(all(c.passed for c in checks), tuple(checks))


def subregion_boundaries(game: CongestionGame, label: WeakOrderLabel) -> List[Hyperplane]:
    """Hyperplanes sum_{h in C} mu^h = mu_bar for each class C and break point of R_C."""
    _require_singleton(game)
    planes = []
    for cls in label.classes:
        if not cls.resources:
            continue
        _require_strictly_increasing(game, cls.resources)
        for mu_bar in break_points([game.resource(rid) for rid in cls.resources]):
            planes.append(Hyperplane(cls.commodities, mu_bar))
    return planes


def class_break_points(game: CongestionGame, commodities: Sequence[str]) -> List[float]:
    """Break points of the single-commodity game on the union of R^h over `commodities`."""
    owned = set()
    for hid in commodities:
        owned |= set(game.feasible_resources(hid))
    resource_ids = [rid for rid in game.resource_ids if rid in owned]
    _require_strictly_increasing(game, resource_ids)
    return break_points([game.resource(rid) for rid in resource_ids])
