#!/usr/bin/env python3
"""
Named fixtures shipped in fixtures/ and the demands they are exercised at.
"""

import os
from typing import Dict, List, Optional

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), '..', '..', 'fixtures')

FIXTURES = [
    {
        "fixture_id": "fisk",
        "file": "fisk.json",
        "kind": "game",
        "description": "Fisk's three-OD triangle; the (b,c) cost falls from 24 to 18 when all demands double",
        "demands": [[60.0, 30.0, 6.0], [120.0, 60.0, 12.0], [80.0, 30.0, 6.0]],
    },
    {
        "fixture_id": "fisk_crg",
        "file": "fisk_crg.json",
        "kind": "crg",
        "description": "Fisk's network with explicit paths and three origins",
        "demands": [[60.0, 30.0, 6.0], [120.0, 60.0, 12.0]],
    },
    {
        "fixture_id": "braess",
        "file": "braess.json",
        "kind": "game",
        "description": "Wheatstone network in strategy form; the zigzag load falls for demand in [1, 2]",
        "demands": [[0.5], [1.5], [3.0]],
    },
    {
        "fixture_id": "braess_crg",
        "file": "braess_crg.json",
        "kind": "crg",
        "description": "Wheatstone network as a single-OD routing game (not series-parallel)",
        "demands": [[0.5], [1.5], [3.0]],
    },
    {
        "fixture_id": "ex41",
        "file": "ex41.json",
        "kind": "game",
        "description": "Two commodities on three affine parallel links; break points 1 and 3",
        "demands": [[1.0, 1.0], [4.0, 0.1], [0.1, 4.0], [2.0, 2.0]],
    },
    {
        "fixture_id": "ex45",
        "file": "ex45.json",
        "kind": "game",
        "description": "Quadratic version of ex41; break points 1 and 1+sqrt(2)",
        "demands": [[1.5, 1.5], [0.1, 4.0]],
    },
    {
        "fixture_id": "ex46_m3",
        "file": "ex46_m3.json",
        "kind": "game",
        "description": "Free commodity attains all 7 nonempty active regimes over three links",
        "demands": [],
    },
    {
        "fixture_id": "flat_costs",
        "file": "flat_costs.json",
        "kind": "game",
        "description": "Flat side links; loads at (2,0) and (0,2) are not comonotone on {r1, r3}",
        "demands": [[2.0, 0.0], [0.0, 2.0]],
    },
]


def fixture_path(fixture_id: str) -> str:
    """Absolute path of a named fixture file."""
    fixture = get_fixture(fixture_id)
    if fixture is None:
        raise KeyError(f"unknown fixture: {fixture_id}")
    return os.path.abspath(os.path.join(FIXTURE_DIR, fixture["file"]))


def get_fixture(fixture_id: str) -> Optional[Dict]:
    for fixture in FIXTURES:
        if fixture["fixture_id"] == fixture_id:
            return fixture
    return None


def get_fixture_demands(fixture_id: str) -> List[List[float]]:
    fixture = get_fixture(fixture_id)
    return [list(d) for d in fixture["demands"]] if fixture else []


def list_fixtures(kind: Optional[str] = None) -> List[Dict]:
    return [f for f in FIXTURES if kind is None or f["kind"] == kind]
