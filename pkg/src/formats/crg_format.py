#!/usr/bin/env python3
"""
Constrained routing game files.

{"vertices": ["a", "b", "c"],
 "edges": [{"id": "e1", "tail": "a", "head": "b", "cost": {...}}, ...],
 "commodities": [{"id": "ac", "origin": "a", "destination": "c",
                  "paths": [["e1", "e2"], ["e3"]]}, ...],
 "sp_expression": {"series": [...]}}            (optional)
"""

import logging
from typing import Any, Dict

from core.costs import cost_from_dict
from composer.routing import ConstrainedRoutingGame, RoutingCommodity
from composer.sp_network import Network, NetworkEdge, SPNetwork
from formats import numbers
from formats.game_format import check_schema, read_json
from formats.schemas import CRG_SCHEMA

logger = logging.getLogger(__name__)


def crg_from_dict(data: Dict[str, Any], source: str = "crg") -> ConstrainedRoutingGame:
    check_schema(data, CRG_SCHEMA, source)
    edges = [NetworkEdge(str(e["id"]), str(e["tail"]), str(e["head"]), cost_from_dict(e["cost"]))
             for e in data["edges"]]
    network = Network([str(v) for v in data["vertices"]], edges)
    commodities = [RoutingCommodity(c["id"], c["origin"], c["destination"], c["paths"])
                   for c in data["commodities"]]
    expression = SPNetwork.from_dict(data["sp_expression"]) if "sp_expression" in data else None
    return ConstrainedRoutingGame(network, commodities, name=data.get("name", ""), sp_expression=expression)


def load_crg(path) -> ConstrainedRoutingGame:
    crg = crg_from_dict(read_json(path), source=str(path))
    logger.debug("loaded routing game %s: %d edges, %d commodities",
                 path, len(crg.network.edges), len(crg.commodities))
    return crg


def save_crg(crg: ConstrainedRoutingGame, path) -> None:
    numbers.dump(crg.to_dict(), path)
