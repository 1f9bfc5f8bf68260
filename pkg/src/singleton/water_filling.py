#!/usr/bin/env python3
"""
Single-commodity water-filling and break points.

For a commodity that may use any resource of a list, the equilibrium level
lam solves sum_r inv_r(lam) = demand and each load is x_r = inv_r(lam).
"""

import logging
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

from scipy.optimize import brentq

from core.costs import CostFunction
from core.errors import NotStrictlyIncreasingError, StructuralError
from core.game import Resource
from utils import settings

logger = logging.getLogger(__name__)

# break points closer than this (relative) are merged
DEDUP_TOL = 1e-12


class WaterLevel(NamedTuple):
    loads: Tuple[float, ...]
    level: float


def _costs(resources: Sequence[Union[Resource, CostFunction]]) -> List[CostFunction]:
    if not resources:
        raise StructuralError("water-filling needs at least one resource")
    costs = [r.cost if isinstance(r, Resource) else r for r in resources]
    flat = [r.id if isinstance(r, Resource) else f"#{i}"
            for i, (r, c) in enumerate(zip(resources, costs)) if not c.strictly_increasing]
    if flat:
        raise NotStrictlyIncreasingError(flat)
    return costs


def water_fill(resources: Sequence[Union[Resource, CostFunction]], demand: float,
               tol: Optional[float] = None) -> WaterLevel:
    """
    Equilibrium loads and level of one commodity spread over `resources`.

    Returns (loads, lam); unpacks as a tuple. `tol` is the level tolerance
    (singleton.water_fill_tol by default).
    """
    costs = _costs(resources)
    demand = float(demand)
    if demand < 0.0:
        raise StructuralError(f"demand must be nonnegative, got {demand}")
    floor = min(c(0.0) for c in costs)
    if demand == 0.0:
        return WaterLevel(tuple(0.0 for _ in costs), floor)
    if tol is None:
        tol = float(settings.get_value("singleton", "water_fill_tol", 1e-12))

    def excess(lam):
        return sum(c.inverse(lam) for c in costs) - demand

    width = 1.0 + abs(floor)
    hi = floor + width
    while excess(hi) < 0.0:
        width *= 2.0
        hi = floor + width
    level = brentq(excess, floor, hi, xtol=tol, rtol=tol, maxiter=500)
    loads = tuple(c.inverse(level) for c in costs)
    return WaterLevel(loads, level)


def break_points(resources: Sequence[Union[Resource, CostFunction]]) -> List[float]:
    """
    Demands at which the active set of a single-commodity game changes.

    Each entry threshold theta = c_r(0) above the cheapest one yields
    mu_bar = sum_r inv_r(theta).
    """
    costs = _costs(resources)
    floor = min(c(0.0) for c in costs)
    thresholds = sorted({c(0.0) for c in costs if c(0.0) > floor})
    points: List[float] = []
    for theta in thresholds:
        mu_bar = sum(c.inverse(theta) for c in costs)
        if points and abs(mu_bar - points[-1]) <= DEDUP_TOL * (1.0 + abs(mu_bar)):
            continue
        points.append(mu_bar)
    return points


def active_set(resources: Sequence[Union[Resource, CostFunction]], demand: float,
               tol: float = 1e-9) -> Tuple[int, ...]:
    """Indices of resources whose cost at the water level equals the level."""
    costs = _costs(resources)
    loads, level = water_fill(resources, demand)
    return tuple(i for i, (c, x) in enumerate(zip(costs, loads))
                 if abs(c(x) - level) <= tol * (1.0 + abs(level)))
