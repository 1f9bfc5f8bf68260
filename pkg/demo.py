#!/usr/bin/env python3
"""
Demo script for wardrop-kit
"""

import sys
import os

# Add src directory to Python path
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from diagnostics.sweeps import SweepPlan
from diagnostics.verifiers import verify_mes
from formats.game_format import load_game
from singleton.regions import class_break_points
from solver.beckmann import solve_beckmann
from utils import console
from utils.fixture_catalog import fixture_path


def demo_fisk():
    """Doubling every demand lowers the (b,c) cost."""
    console.heading("Fisk's network")
    game = load_game(fixture_path("fisk"))
    for demand in ([60, 30, 6], [120, 60, 12]):
        report = solve_beckmann(game, demand)
        print(f"demand {demand}: lambda_bc = {report.lambda_of('bc'):.4f}")
    print()


def demo_wheatstone():
    """The zigzag link gains and then loses load as demand grows."""
    console.heading("Wheatstone network")
    game = load_game(fixture_path("braess"))
    for mu in (0.5, 1.0, 1.5, 2.0, 2.5):
        report = solve_beckmann(game, [mu])
        print(f"mu = {mu}: x_v1v2 = {report.loads['v1v2']:.4f}")
    verdict = verify_mes(game, SweepPlan.chain(game, "h1", 0.5, 2.5, 5))
    if verdict.passed:
        console.success("loads are monotone")
    else:
        console.warning(f"loads decrease on {', '.join(verdict.resources())}")
    print()


def demo_break_points():
    """Break points of both commodities together on the parallel links."""
    console.heading("Break points")
    for fixture_id in ("ex41", "ex45"):
        game = load_game(fixture_path(fixture_id))
        points = class_break_points(game, game.commodity_ids)
        print(f"{game.name}: {', '.join(f'{p:.4f}' for p in points)}")


if __name__ == "__main__":
    demo_fisk()
    demo_wheatstone()
    demo_break_points()
