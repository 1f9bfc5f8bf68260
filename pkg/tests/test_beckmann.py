#!/usr/bin/env python3
"""
Unit tests for the Frank-Wolfe equilibrium solver and its certificates
"""

import dataclasses
import os
import sys
import unittest
from unittest import mock

sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from core.errors import ConfigurationError, ConvergenceError, StructuralError
from core.game import FlowProfile
from formats.game_format import load_game
from solver.beckmann import SolverConfig, solve_beckmann
from solver.certificates import beckmann_gradient_check, dual_value, verify_wardrop
from solver.mes import solve_mes
from utils import settings
from utils.fixture_catalog import fixture_path, list_fixtures


class TestSolveBeckmann(unittest.TestCase):
    """Test cases for solve_beckmann on the fixture bundle"""

    @classmethod
    def setUpClass(cls):
        cls.fisk = load_game(fixture_path("fisk"))
        cls.braess = load_game(fixture_path("braess"))
        cls.ex41 = load_game(fixture_path("ex41"))

    def test_fisk_paradox(self):
        """Test the (b,c) cost drops from 24 to 18 when all demands double"""
        report = solve_beckmann(self.fisk, [60, 30, 6])
        self.assertAlmostEqual(report.lambda_of("bc"), 24.0, delta=1e-4)
        self.assertAlmostEqual(report.lambda_of("ac"), 102.0, delta=1e-4)
        for rid, x in zip(("e1", "e2", "e3"), (78.0, 24.0, 12.0)):
            self.assertAlmostEqual(report.loads[rid], x, delta=1e-4)
        doubled = solve_beckmann(self.fisk, [120, 60, 12])
        self.assertAlmostEqual(doubled.lambda_of("bc"), 18.0, delta=1e-4)

    def test_wheatstone_table(self):
        """Test path flows against the Wheatstone table (zigzag, upper, lower)"""
        expected = {0.5: (0.5, 0.0, 0.0), 1.5: (0.5, 0.5, 0.5), 3.0: (0.0, 1.5, 1.5)}
        for mu, flows in expected.items():
            report = solve_beckmann(self.braess, [mu])
            for got, want in zip(report.flow["h1"], flows):
                self.assertAlmostEqual(got, want, delta=1e-5, msg=f"mu={mu}")

    def test_classic_variant_agrees(self):
        """Test the classic variant reaches the same prices"""
        config = SolverConfig.from_settings(variant="classic")
        report = solve_beckmann(self.fisk, [60, 30, 6], config)
        self.assertAlmostEqual(report.lambda_of("ac"), 102.0, delta=1e-4)
        self.assertAlmostEqual(report.lambda_of("bc"), 24.0, delta=1e-4)

    def test_random_start_same_prices(self):
        """Test tau does not depend on the starting flow"""
        a = solve_beckmann(self.fisk, [60, 30, 6])
        b = solve_beckmann(self.fisk, [60, 30, 6], initial_flow="random", seed=7)
        for x, y in zip(a.tau, b.tau):
            self.assertAlmostEqual(x, y, delta=1e-5 * (1 + abs(x)))

    def test_prices_unique_across_fixtures(self):
        """Test tau agrees across starts and the selection ladder on every game fixture"""
        for fixture in list_fixtures("game"):
            game = load_game(fixture_path(fixture["fixture_id"]))
            for mu in fixture["demands"]:
                with self.subTest(fixture=fixture["fixture_id"], mu=mu):
                    base = solve_beckmann(game, mu)
                    others = (solve_beckmann(game, mu, initial_flow="random", seed=11), solve_mes(game, mu))
                    for other in others:
                        for x, y in zip(base.tau, other.tau):
                            self.assertAlmostEqual(x, y, delta=1e-4 * (1 + abs(x)))

    def test_warm_start(self):
        """Test a feasible FlowProfile is accepted as a warm start"""
        start = FlowProfile.from_lists(self.fisk, [[60.0], [15.0, 15.0], [6.0]])
        report = solve_beckmann(self.fisk, [60, 30, 6], initial_flow=start)
        self.assertAlmostEqual(report.flow["ac"][0], 18.0, delta=1e-4)
        with self.assertRaises(StructuralError):
            solve_beckmann(self.fisk, [60, 30, 6],
                           initial_flow=FlowProfile.from_lists(self.fisk, [[1.0], [1.0, 1.0], [1.0]]))

    def test_zero_demand(self):
        """Test zero demand gives zero loads and zero iterations"""
        report = solve_beckmann(self.ex41, [0.0, 0.0])
        self.assertEqual(report.loads.values, (0.0, 0.0, 0.0))
        self.assertEqual(report.iterations, 0)

    def test_budget_exhausted(self):
        """Test ConvergenceError carries the best iterate"""
        config = SolverConfig.from_settings(variant="classic", max_iter=1)
        with self.assertRaises(ConvergenceError) as ctx:
            solve_beckmann(self.ex41, [2.0, 2.0], config)
        self.assertIsNotNone(ctx.exception.report)
        self.assertGreater(ctx.exception.report.gap, config.gap_tol)

    def test_bad_config(self):
        """Test invalid solver settings are rejected"""
        with self.assertRaises(ConfigurationError):
            SolverConfig(gap_tol=0.0)
        with self.assertRaises(ConfigurationError):
            SolverConfig(variant="newton")

    def test_report_dict(self):
        """Test report key order and contents"""
        data = solve_beckmann(self.fisk, [60, 30, 6]).to_dict()
        self.assertEqual(list(data)[:5], ["loads", "flows", "tau", "lambda", "active_regime"])
        self.assertEqual(data["selection"], "beckmann")
        self.assertEqual(data["active_regime"]["ac"], ["e1", "e2", "e3"])


class TestCertificates(unittest.TestCase):
    """Test cases for duality, Wardrop residuals and the gradient check"""

    @classmethod
    def setUpClass(cls):
        cls.fisk = load_game(fixture_path("fisk"))
        cls.report = solve_beckmann(cls.fisk, [60, 30, 6])

    def test_strong_duality(self):
        """Test the dual at equilibrium prices equals minus the potential"""
        self.assertAlmostEqual(self.report.beckmann_value, 4482.0, delta=1e-3)
        value = dual_value(self.fisk, [60, 30, 6], self.report.tau)
        self.assertAlmostEqual(value + self.report.beckmann_value, 0.0, delta=1e-3)

    def test_weak_duality(self):
        """Test other prices give a larger dual value"""
        tau = [t + 1.0 for t in self.report.tau]
        self.assertGreater(dual_value(self.fisk, [60, 30, 6], tau), -self.report.beckmann_value)

    def test_wardrop_passes_at_equilibrium(self):
        """Test the solver's own flow passes verify_wardrop"""
        verdict = verify_wardrop(self.fisk, [60, 30, 6], self.report)
        self.assertTrue(verdict.passed)
        self.assertLess(verdict.max_residual, 1e-6)

    def test_wardrop_flags_manipulated_flow(self):
        """Test shifting 5 units of ac onto e1e2 breaks the conditions on both strategies"""
        flow = self.report.flow.moved("ac", 1, 0, 5.0)
        verdict = verify_wardrop(self.fisk, [60, 30, 6], dataclasses.replace(self.report, flow=flow))
        self.assertFalse(verdict.passed)
        flagged = {(v.commodity, v.strategy) for v in verdict.violations}
        self.assertIn(("ac", 0), flagged)
        self.assertIn(("ac", 1), flagged)
        costs = {v.strategy: v.cost for v in verdict.violations if v.commodity == "ac"}
        self.assertAlmostEqual(costs[0], 112.0, delta=1e-3)
        self.assertAlmostEqual(costs[1], 97.0, delta=1e-3)

    def test_wardrop_tolerance_from_config(self):
        """Test diagnostics.wardrop_tol is the default tolerance"""
        flow = self.report.flow.moved("ac", 1, 0, 5.0)
        manipulated = dataclasses.replace(self.report, flow=flow)
        with mock.patch.dict(settings.config["diagnostics"], {"wardrop_tol": 1.0}):
            self.assertTrue(verify_wardrop(self.fisk, [60, 30, 6], manipulated).passed)
        self.assertFalse(verify_wardrop(self.fisk, [60, 30, 6], manipulated).passed)

    def test_gradient_check(self):
        """Test finite differences of the potential match lambda"""
        residuals = beckmann_gradient_check(self.fisk, [60, 30, 6], step=1e-3)
        self.assertEqual(set(residuals), {"ab", "ac", "bc"})
        for value in residuals.values():
            self.assertLessEqual(value, 1e-2)

    def test_gradient_check_step_too_large(self):
        """Test the step may not push a demand below zero"""
        with self.assertRaises(StructuralError):
            beckmann_gradient_check(self.fisk, [60, 30, 6], step=10.0)


if __name__ == '__main__':
    unittest.main()
