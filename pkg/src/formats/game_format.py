#!/usr/bin/env python3
"""
Game definition files.

{"resources": [{"id": "e1", "cost": {"kind": "affine", "a": 1, "b": 0}}, ...],
 "commodities": [{"id": "ab", "strategies": [["e1"], ...]}, ...]}
"""

import json
import logging
from typing import Any, Dict

import jsonschema

from core.costs import cost_from_dict
from core.errors import SchemaError
from core.game import Commodity, CongestionGame, Resource
from formats import numbers
from formats.schemas import GAME_SCHEMA

logger = logging.getLogger(__name__)


def read_json(path) -> Any:
    """Parse a JSON file, turning syntax errors into SchemaError with line/column."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise SchemaError(f"cannot read {path}: {e.strerror or e}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: {e.msg}", line=e.lineno, column=e.colno)


def check_schema(data: Any, schema: Dict[str, Any], source: str = "input") -> None:
    """Raise SchemaError naming the JSON field path of the most relevant error."""
    validator = jsonschema.Draft7Validator(schema)
    error = jsonschema.exceptions.best_match(validator.iter_errors(data))
    if error is not None:
        path = "/".join(str(p) for p in error.absolute_path) or "<root>"
        raise SchemaError(f"{source}: {error.message}", path=path)


def game_from_dict(data: Dict[str, Any], source: str = "game") -> CongestionGame:
    check_schema(data, GAME_SCHEMA, source)
    resources = [Resource(str(r["id"]), cost_from_dict(r["cost"])) for r in data["resources"]]
    commodities = [Commodity(c["id"], c["strategies"]) for c in data["commodities"]]
    return CongestionGame(resources, commodities, name=data.get("name", ""),
                          provenance=data.get("provenance"))


def game_to_dict(game: CongestionGame) -> Dict[str, Any]:
    return game.to_dict()


def load_game(path) -> CongestionGame:
    game = game_from_dict(read_json(path), source=str(path))
    logger.debug("loaded game %s with %d resources and %d commodities",
                 path, game.n_resources, game.n_commodities)
    return game


def save_game(game: CongestionGame, path) -> None:
    numbers.dump(game_to_dict(game), path)
    logger.debug("saved game to %s", path)
