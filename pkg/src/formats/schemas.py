#!/usr/bin/env python3
"""
JSON schemas (draft 7) for game and constrained-routing-game files.
"""

_NUMBER = {"type": "number"}
_ID = {"type": "string", "minLength": 1}


def _kind(name, required):
    return {
        "if": {"properties": {"kind": {"const": name}}},
        "then": {"required": ["kind"] + required},
    }


COST_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["affine", "monomial", "bpr", "piecewise-linear", "constant"]},
        "a": _NUMBER,
        "b": _NUMBER,
        "coeff": _NUMBER,
        "exponent": _NUMBER,
        "constant": _NUMBER,
        "t0": _NUMBER,
        "alpha": _NUMBER,
        "beta": _NUMBER,
        "capacity": _NUMBER,
        "knots": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2},
        },
    },
    "additionalProperties": False,
    "allOf": [
        _kind("affine", ["a"]),
        _kind("monomial", ["coeff", "exponent"]),
        _kind("bpr", ["t0"]),
        _kind("piecewise-linear", ["knots"]),
        _kind("constant", ["b"]),
    ],
}

GAME_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["resources", "commodities"],
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "resources": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "cost"],
                "properties": {"id": _ID, "cost": COST_SCHEMA},
                "additionalProperties": False,
            },
        },
        "commodities": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "strategies"],
                "properties": {
                    "id": _ID,
                    "strategies": {
                        "type": "array",
                        "minItems": 1,
                        "items": {"type": "array", "minItems": 1, "items": _ID},
                    },
                },
                "additionalProperties": False,
            },
        },
        "provenance": {"type": "object"},
    },
    "additionalProperties": False,
}

# one of edge / series / parallel; resolved through CRG_SCHEMA's definitions
_SP_NODE = {
    "type": "object",
    "minProperties": 1,
    "maxProperties": 1,
    "properties": {
        "edge": {
            "type": "object",
            "required": ["id", "cost"],
            "properties": {"id": _ID, "cost": COST_SCHEMA},
        },
        "series": {"type": "array", "minItems": 1, "items": {"$ref": "#/definitions/sp_node"}},
        "parallel": {"type": "array", "minItems": 1, "items": {"$ref": "#/definitions/sp_node"}},
    },
    "additionalProperties": False,
}

CRG_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "definitions": {"sp_node": _SP_NODE},
    "type": "object",
    "required": ["vertices", "edges", "commodities"],
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "vertices": {"type": "array", "minItems": 1, "items": _ID},
        "edges": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "tail", "head", "cost"],
                "properties": {"id": _ID, "tail": _ID, "head": _ID, "cost": COST_SCHEMA},
                "additionalProperties": False,
            },
        },
        "commodities": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "origin", "destination", "paths"],
                "properties": {
                    "id": _ID,
                    "origin": _ID,
                    "destination": _ID,
                    "paths": {
                        "type": "array",
                        "minItems": 1,
                        "items": {"type": "array", "minItems": 1, "items": _ID},
                    },
                },
                "additionalProperties": False,
            },
        },
        "sp_expression": {"$ref": "#/definitions/sp_node"},
    },
    "additionalProperties": False,
}
