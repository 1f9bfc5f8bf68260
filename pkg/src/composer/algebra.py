#!/usr/bin/env python3
"""
Product and union of congestion games on disjoint resource sets.

product: commodity i(x)j for every pair, strategies s1 U s2 (series-like)
union:   commodities of both games side by side (parallel-like)

Composed games remember how they were built in `provenance`, which
split_demand uses to recover the factor demands of a product.
"""

import logging
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from core.costs import AffineCost
from core.errors import StructuralError
from core.game import Commodity, CongestionGame, DemandVector, Resource, Strategy
from utils import settings

logger = logging.getLogger(__name__)

PRODUCT_SEPARATOR = "⊗"


def _max_strategies() -> int:
    return int(settings.get_value("composer", "max_strategies", 100000))


def _leaf_provenance(game: CongestionGame) -> Dict[str, Any]:
    if game.provenance is not None:
        return game.provenance
    return {"op": "game", "name": game.name, "commodities": list(game.commodity_ids),
            "resources": list(game.resource_ids)}


def _check_disjoint_resources(g1: CongestionGame, g2: CongestionGame):
    shared = set(g1.resource_ids) & set(g2.resource_ids)
    if shared:
        raise StructuralError(f"resource sets overlap: {', '.join(sorted(shared))}")


def product(g1: CongestionGame, g2: CongestionGame, max_strategies: Optional[int] = None) -> CongestionGame:
    _check_disjoint_resources(g1, g2)
    cap = max_strategies or _max_strategies()
    commodities = []
    for c1 in g1.commodities:
        for c2 in g2.commodities:
            count = len(c1.strategies) * len(c2.strategies)
            if count > cap:
                raise StructuralError(
                    f"product commodity {c1.id}{PRODUCT_SEPARATOR}{c2.id} would have {count} strategies "
                    f"(limit {cap})")
            strategies = [Strategy(s1.resources + s2.resources)
                          for s1 in c1.strategies for s2 in c2.strategies]
            commodities.append(Commodity(f"{c1.id}{PRODUCT_SEPARATOR}{c2.id}", strategies))
    provenance = {
        "op": "product",
        "left": _leaf_provenance(g1),
        "right": _leaf_provenance(g2),
        "left_commodities": list(g1.commodity_ids),
        "right_commodities": list(g2.commodity_ids),
    }
    name = f"({g1.name or 'g1'} x {g2.name or 'g2'})"
    return CongestionGame(g1.resources + g2.resources, commodities, name=name, provenance=provenance)


def union(g1: CongestionGame, g2: CongestionGame) -> CongestionGame:
    _check_disjoint_resources(g1, g2)
    shared = set(g1.commodity_ids) & set(g2.commodity_ids)
    if shared:
        raise StructuralError(f"commodity ids collide: {', '.join(sorted(shared))}")
    provenance = {
        "op": "union",
        "left": _leaf_provenance(g1),
        "right": _leaf_provenance(g2),
        "left_commodities": list(g1.commodity_ids),
        "right_commodities": list(g2.commodity_ids),
    }
    name = f"({g1.name or 'g1'} + {g2.name or 'g2'})"
    return CongestionGame(g1.resources + g2.resources, g1.commodities + g2.commodities,
                          name=name, provenance=provenance)


def split_demand(game: CongestionGame, demand) -> Tuple[Tuple[str, ...], Tuple[float, ...],
                                                        Tuple[str, ...], Tuple[float, ...]]:
    """
    Marginal demands of a product game:
    mu1^i = sum_j mu^{i(x)j} and mu2^j = sum_i mu^{i(x)j}.

    Returns (left ids, left demands, right ids, right demands).
    """
    prov = game.provenance or {}
    if prov.get("op") != "product":
        raise StructuralError("split_demand needs a game built by product()")
    values = demand.values if isinstance(demand, DemandVector) else tuple(float(v) for v in demand)
    left, right = prov["left_commodities"], prov["right_commodities"]
    if len(values) != len(left) * len(right):
        raise StructuralError(f"demand has {len(values)} entries, expected {len(left) * len(right)}")
    grid = np.array(values, dtype=float).reshape(len(left), len(right))
    return (tuple(left), tuple(float(v) for v in grid.sum(axis=1)),
            tuple(right), tuple(float(v) for v in grid.sum(axis=0)))


def split_union_demand(game: CongestionGame, demand) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    """Blockwise demands of a union game."""
    prov = game.provenance or {}
    if prov.get("op") != "union":
        raise StructuralError("split_union_demand needs a game built by union()")
    values = demand.values if isinstance(demand, DemandVector) else tuple(float(v) for v in demand)
    n_left = len(prov["left_commodities"])
    return tuple(values[:n_left]), tuple(values[n_left:])


class _Names:
    def __init__(self, prefix: str):
        self.prefix = prefix
        self.count = 0

    def next(self) -> str:
        self.count += 1
        return f"{self.prefix}{self.count}"


def random_singleton_game(rng: np.random.Generator, resource_names: _Names, commodity_names: _Names,
                          max_resources: int = 3, max_commodities: int = 2) -> CongestionGame:
    """Singleton game with strictly increasing affine costs and random feasible sets."""
    n_res = int(rng.integers(1, max_resources + 1))
    resources = [Resource(resource_names.next(),
                          AffineCost(float(rng.uniform(0.2, 2.0)), float(rng.uniform(0.0, 3.0))))
                 for _ in range(n_res)]
    ids = [r.id for r in resources]
    commodities = []
    for _ in range(int(rng.integers(1, max_commodities + 1))):
        mask = rng.random(n_res) < 0.6
        if not mask.any():
            mask[int(rng.integers(n_res))] = True
        commodities.append(Commodity(commodity_names.next(), [[rid] for rid, m in zip(ids, mask) if m]))
    return CongestionGame(resources, commodities, name="singleton")


def random_product_union(rng: np.random.Generator, depth: int = 3, max_commodities: int = 4,
                         max_strategies: int = 12) -> CongestionGame:
    """
    Random composition tree of products and unions over random singleton
    factors. Products that would exceed `max_commodities` commodities or
    `max_strategies` strategies per commodity are replaced by unions.
    """
    resource_names, commodity_names = _Names("r"), _Names("h")

    def build(level: int) -> CongestionGame:
        if level == 0 or rng.random() < 0.25:
            return random_singleton_game(rng, resource_names, commodity_names)
        left, right = build(level - 1), build(level - 1)
        wants_product = rng.random() < 0.5
        if wants_product:
            widest = max(len(c.strategies) for c in left.commodities) * \
                max(len(c.strategies) for c in right.commodities)
            if left.n_commodities * right.n_commodities <= max_commodities and widest <= max_strategies:
                return product(left, right)
        if left.n_commodities + right.n_commodities <= max_commodities:
            return union(left, right)
        return left

    game = build(depth)
    logger.debug("random product-union game: %d resources, %d commodities", game.n_resources, game.n_commodities)
    return game
