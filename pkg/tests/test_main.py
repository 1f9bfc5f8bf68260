#!/usr/bin/env python3
"""
Tests for the command-line entry point and its exit codes
"""

import io
import json
import os
import shutil
import sys
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from main import EXIT_ERROR, EXIT_FAIL, EXIT_OK, main, parse_demand
from core.errors import StructuralError
from utils.fixture_catalog import fixture_path
from utils.task_manager import TaskManager, TaskStatus


def run_cli(*argv):
    """Run main() capturing stdout and stderr."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        status = main(list(argv))
    return status, out.getvalue(), err.getvalue()


class TestCommandLine(unittest.TestCase):
    """Test cases for wardrop-kit commands"""

    def setUp(self):
        self.test_dir = Path(tempfile.mkdtemp())

    def tearDown(self):
        shutil.rmtree(self.test_dir)

    def test_parse_demand(self):
        """Test demand strings"""
        self.assertEqual(parse_demand("60,30,6"), [60.0, 30.0, 6.0])
        with self.assertRaises(StructuralError):
            parse_demand("1,two")

    def test_solve_to_stdout(self):
        """Test solve prints a JSON report"""
        status, out, _ = run_cli("solve", "--game", fixture_path("fisk"), "--demand", "60,30,6")
        self.assertEqual(status, EXIT_OK)
        report = json.loads(out)
        self.assertAlmostEqual(report["lambda"]["bc"], 24.0, delta=1e-4)

    def test_solve_to_workspace(self):
        """Test --out with a directory writes into results/"""
        status, _, _ = run_cli("solve", "--game", fixture_path("ex41"), "--demand", "2,2",
                               "--out", str(self.test_dir / "ws"))
        self.assertEqual(status, EXIT_OK)
        self.assertTrue((self.test_dir / "ws" / "results" / "solve.json").exists())

    def test_mes_command(self):
        """Test mes reports the selection flag"""
        target = self.test_dir / "mes.json"
        status, _, _ = run_cli("mes", "--game", fixture_path("flat_costs"), "--demand", "1,1",
                               "--out", str(target))
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(json.loads(target.read_text())["selection"], "mes")

    def test_verify_mes_fails_on_wheatstone(self):
        """Test a detected load drop exits with 2"""
        status, out, err = run_cli("verify-mes", "--game", fixture_path("braess"), "--chain", "h1:0.5:2.5:5")
        self.assertEqual(status, EXIT_FAIL)
        self.assertFalse(json.loads(out)["pass"])
        self.assertIn("v1v2", err)

    def test_verify_mes_passes_on_parallel_links(self):
        """Test a monotone chain exits with 0"""
        status, _, _ = run_cli("verify-mes", "--game", fixture_path("ex41"), "--chain", "alpha:0:3:4",
                               "--demand", "0,1")
        self.assertEqual(status, EXIT_OK)

    def test_verify_comonotone(self):
        """Test explicit demand samples on the flat game"""
        status, out, _ = run_cli("verify-comonotone", "--game", fixture_path("flat_costs"),
                                 "--demand", "2,0", "--demand", "0,2", "--resources", "r1,r3")
        self.assertEqual(status, EXIT_FAIL)
        self.assertEqual(json.loads(out)["violation"]["resources"], ["r1", "r3"])

    def test_regions_single_point(self):
        """Test regions at one demand"""
        status, out, _ = run_cli("regions", "--game", fixture_path("ex41"), "--demand", "4,0.1")
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(json.loads(out)["order"]["signature"], "beta<alpha")
        self.assertEqual(json.loads(out)["restricted"], {"beta": True, "alpha": True})

    def test_regions_sweep_csv(self):
        """Test a box sweep writes a CSV and its legend"""
        target = self.test_dir / "regions.csv"
        status, _, _ = run_cli("regions", "--game", fixture_path("ex41"), "--box", "alpha:0.1:4,beta:0.1:4",
                               "--grid", "3", "--out", str(target))
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(len(target.read_text().splitlines()), 10)
        self.assertTrue((self.test_dir / "regions_legend.json").exists())

    def test_breakpoints(self):
        """Test break points of a commodity class"""
        status, out, _ = run_cli("breakpoints", "--game", fixture_path("ex41"), "--class", "alpha,beta")
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(json.loads(out), [1.0, 3.0])

    def test_check_crg(self):
        """Test routing conditions of the multi-origin Fisk game via its embedding"""
        status, out, _ = run_cli("check-crg", "--crg", fixture_path("fisk_crg"),
                                 "--game", fixture_path("fisk"), "--demand", "60,30,6")
        self.assertEqual(status, EXIT_OK)
        data = json.loads(out)
        self.assertEqual(data["conditions"]["same_vertex_sequence"], False)
        self.assertTrue(data["equivalence"]["pass"])

    def test_embed_and_combine(self):
        """Test embed and combine emit structures"""
        status, out, _ = run_cli("embed", "--kind", "sp", "--game", fixture_path("braess"))
        self.assertEqual(status, EXIT_OK)
        self.assertIn("sp_expression", json.loads(out)["crg"])
        status, out, _ = run_cli("combine", "--game", fixture_path("ex41"), "--game", fixture_path("braess"),
                                 "--op", "union")
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(len(json.loads(out)["commodities"]), 3)

    def test_gradient_check(self):
        """Test the finite-difference check passes on Fisk"""
        status, out, _ = run_cli("gradient-check", "--game", fixture_path("fisk"), "--demand", "60,30,6")
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(set(json.loads(out)["residuals"]), {"ab", "ac", "bc"})

    def test_errors_exit_one(self):
        """Test missing inputs and bad demands exit with 1"""
        status, _, err = run_cli("solve", "--game", fixture_path("fisk"))
        self.assertEqual(status, EXIT_ERROR)
        self.assertIn("--demand", err)
        status, _, _ = run_cli("solve", "--game", fixture_path("fisk"), "--demand", "1,2")
        self.assertEqual(status, EXIT_ERROR)
        status, _, _ = run_cli("solve", "--game", str(self.test_dir / "missing.json"), "--demand", "1")
        self.assertEqual(status, EXIT_ERROR)

    def test_usage_errors_exit_one(self):
        """Test argument errors exit with 1, not the verifier-failure code"""
        status, _, err = run_cli("no-such-command")
        self.assertEqual(status, EXIT_ERROR)
        self.assertIn("usage", err)
        status, _, err = run_cli("regions", "--game", fixture_path("ex41"), "--grid", "x")
        self.assertEqual(status, EXIT_ERROR)
        self.assertIn("--grid", err)
        status, _, _ = run_cli("solve", "--variant", "newton")
        self.assertEqual(status, EXIT_ERROR)
        status, out, _ = run_cli("--help")
        self.assertEqual(status, EXIT_OK)
        self.assertIn("wardrop-kit", out)

    def test_workspace_task_logs(self):
        """Test sweeps into a workspace directory leave task logs under logs/"""
        workspace = self.test_dir / "ws"
        status, _, _ = run_cli("regions", "--game", fixture_path("ex41"), "--box", "alpha:0.1:4,beta:0.1:4",
                               "--grid", "3", "--out", str(workspace))
        self.assertEqual(status, EXIT_OK)
        self.assertTrue((workspace / "sweeps" / "regions.csv").exists())
        self.assertIn("9/9 completed", (workspace / "logs" / "regions.log").read_text())
        tasks = TaskManager.load(str(workspace / "logs" / "regions_tasks.json"))
        self.assertEqual(len(tasks.list_tasks(status=TaskStatus.COMPLETED)), 9)
        status, _, _ = run_cli("verify-mes", "--game", fixture_path("braess"), "--chain", "h1:0.5:2.5:5",
                               "--out", str(workspace))
        self.assertEqual(status, EXIT_FAIL)
        self.assertTrue((workspace / "results" / "verify_mes.json").exists())
        self.assertIn("0 failed", (workspace / "logs" / "verify_mes.log").read_text())

    def test_config_override(self):
        """Test a YAML config file is accepted"""
        config = self.test_dir / "overrides.yaml"
        config.write_text("runtime:\n  threads: 1\n")
        status, _, _ = run_cli("solve", "--config", str(config), "--game", fixture_path("ex41"),
                               "--demand", "1,1")
        self.assertEqual(status, EXIT_OK)


if __name__ == '__main__':
    unittest.main()
