#!/usr/bin/env python3
"""
Unit tests for game structures, flows and loads
"""

import os
import sys
import unittest

sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from core.costs import AffineCost, PiecewiseLinearCost
from core.errors import StructuralError
from core.game import (
    Commodity,
    CongestionGame,
    DemandVector,
    FlowProfile,
    LoadProfile,
    Resource,
    load_from_flow,
    resource_costs,
    strategy_cost,
    validate_game,
)


def parallel_game():
    resources = [Resource("r1", AffineCost(1, 1)), Resource("r2", AffineCost(1, 0)),
                 Resource("r3", AffineCost(1, 2))]
    commodities = [Commodity("alpha", [["r1"], ["r2"]]), Commodity("beta", [["r2"], ["r3"]])]
    return CongestionGame(resources, commodities, name="parallel")


class TestCongestionGame(unittest.TestCase):
    """Test cases for game construction and validation"""

    def test_structure(self):
        """Test ids, indices and feasible resource sets"""
        game = parallel_game()
        self.assertEqual(game.resource_ids, ("r1", "r2", "r3"))
        self.assertEqual(game.commodity_ids, ("alpha", "beta"))
        self.assertTrue(game.singleton)
        self.assertEqual(game.feasible_resources("beta"), ("r2", "r3"))
        self.assertEqual(game.strategy_indices[1], ((1,), (2,)))

    def test_unknown_resource_rejected(self):
        """Test strategies naming unknown resources are rejected"""
        with self.assertRaises(StructuralError) as ctx:
            CongestionGame([Resource("r1", AffineCost(1, 0))], [Commodity("h", [["r1"], ["r9"]])])
        self.assertIn("r9", str(ctx.exception))

    def test_validate_reports_all_problems(self):
        """Test validate_game lists every violated invariant"""
        game = CongestionGame(
            [Resource("r1", AffineCost(-1, 0)), Resource("r1", PiecewiseLinearCost([[0, 2], [1, 1]]))],
            [Commodity("h", [["r1"], ["r1"], []])],
            validate=False,
        )
        issues = validate_game(game)
        self.assertTrue(any("duplicate resource id" in m for m in issues))
        self.assertTrue(any("negative" in m for m in issues))
        self.assertTrue(any("decreases" in m for m in issues))
        self.assertTrue(any("duplicates an earlier strategy" in m for m in issues))
        self.assertTrue(any("is empty" in m for m in issues))

    def test_equality_and_dict(self):
        """Test games compare equal through their JSON form"""
        self.assertEqual(parallel_game(), parallel_game())
        data = parallel_game().to_dict()
        self.assertEqual(data["commodities"][0]["strategies"], [["r1"], ["r2"]])


class TestDemandsFlowsLoads(unittest.TestCase):
    """Test cases for demand vectors, flows and loads"""

    def setUp(self):
        self.game = parallel_game()

    def test_demand_validation(self):
        """Test demand length and sign checks"""
        with self.assertRaises(StructuralError):
            DemandVector.for_game(self.game, [1.0])
        with self.assertRaises(StructuralError):
            DemandVector.for_game(self.game, [1.0, -0.5])
        demand = DemandVector.for_game(self.game, {"beta": 2.0})
        self.assertEqual(demand.values, (0.0, 2.0))
        self.assertEqual(demand["beta"], 2.0)
        self.assertEqual(demand.with_component("alpha", 3.0).total, 5.0)

    def test_loads_and_costs(self):
        """Test load aggregation and resource/strategy costs"""
        flow = FlowProfile.from_lists(self.game, [[1.0, 0.0], [2.0, 0.0]])
        loads = load_from_flow(self.game, flow)
        self.assertEqual(loads.values, (1.0, 2.0, 0.0))
        self.assertEqual(resource_costs(self.game, loads), (2.0, 2.0, 2.0))
        self.assertEqual(strategy_cost(self.game, loads, ["r3"]), 2.0)
        with self.assertRaises(StructuralError):
            strategy_cost(self.game, loads, ["r7"])

    def test_flow_feasibility(self):
        """Test feasibility against a demand"""
        demand = DemandVector.for_game(self.game, [1.0, 2.0])
        self.assertTrue(FlowProfile.from_lists(self.game, [[0.5, 0.5], [2.0, 0.0]]).is_feasible(demand))
        self.assertFalse(FlowProfile.from_lists(self.game, [[0.5, 0.4], [2.0, 0.0]]).is_feasible(demand))
        self.assertFalse(FlowProfile.from_lists(self.game, [[1.5, -0.5], [2.0, 0.0]]).is_feasible(demand))

    def test_moved(self):
        """Test moving flow between strategies of one commodity"""
        flow = FlowProfile.from_lists(self.game, [[1.0, 0.0], [2.0, 0.0]])
        moved = flow.moved("beta", 0, 1, 0.5)
        self.assertEqual(moved["beta"], (1.5, 0.5))
        self.assertEqual(moved["alpha"], (1.0, 0.0))

    def test_flow_shape_mismatch(self):
        """Test loads reject flows of the wrong shape"""
        with self.assertRaises(StructuralError):
            load_from_flow(self.game, FlowProfile(("alpha",), ((1.0, 0.0),)))

    def test_load_difference(self):
        """Test max-norm difference of load profiles"""
        a = LoadProfile(("r1", "r2"), (1.0, 2.0))
        b = LoadProfile(("r1", "r2"), (1.5, 1.0))
        self.assertEqual(a.max_abs_difference(b), 1.0)


if __name__ == '__main__':
    unittest.main()
