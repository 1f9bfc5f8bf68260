#!/usr/bin/env python3
"""
Unit tests for task tracking, workspace layout and configuration
"""

import os
import shutil
import sys
import tempfile
import unittest
from pathlib import Path
from unittest import mock

sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from core.errors import ConvergenceError
from utils import settings
from utils.fixture_catalog import fixture_path, get_fixture_demands, list_fixtures
from utils.task_manager import TaskManager, TaskStatus
from utils.workspace_manager import WorkspaceManager


class TestTaskManager(unittest.TestCase):
    """Test cases for sweep task tracking"""

    def setUp(self):
        self.test_dir = Path(tempfile.mkdtemp())

    def tearDown(self):
        shutil.rmtree(self.test_dir)

    def work(self, demand):
        if demand[0] < 0.0:
            raise ConvergenceError("budget exhausted")
        return sum(demand)

    def test_results_keyed_by_task(self):
        """Test results map task ids to values in point order"""
        manager = TaskManager()
        run = manager.create_run("sum", "demo")
        results = manager.run_tasks(run, [("a", (1.0, 2.0)), ("b", (3.0, 4.0))], self.work, threads=2)
        self.assertEqual([results[t] for t in run.tasks], [3.0, 7.0])
        self.assertEqual(run.status, TaskStatus.COMPLETED)

    def test_failures_are_recorded(self):
        """Test a library error marks the point failed without stopping the run"""
        manager = TaskManager()
        run = manager.create_run("sum")
        results = manager.run_tasks(run, [("ok", (1.0,)), ("bad", (-1.0,))], self.work, threads=1)
        self.assertEqual(len(results), 1)
        failed = manager.failed_tasks(run)
        self.assertEqual([t.name for t in failed], ["bad"])
        self.assertEqual(failed[0].metadata["error"], "budget exhausted")
        self.assertEqual(manager.summary(run), {"total": 2, "completed": 1, "failed": 1})

    def test_save_and_load(self):
        """Test runs and tasks survive a save/load cycle"""
        manager = TaskManager()
        run = manager.create_run("sum")
        manager.run_tasks(run, [("a", (1.0,))], self.work, threads=1)
        path = self.test_dir / "tasks.json"
        manager.save(str(path))
        loaded = TaskManager.load(str(path))
        self.assertEqual(loaded.runs[run.run_id].tasks, run.tasks)
        self.assertEqual(loaded.tasks[run.tasks[0]].status, TaskStatus.COMPLETED)
        self.assertEqual(loaded.tasks[run.tasks[0]].demand, (1.0,))


class TestWorkspaceManager(unittest.TestCase):
    """Test cases for the output directory layout"""

    def setUp(self):
        self.test_dir = Path(tempfile.mkdtemp())

    def tearDown(self):
        shutil.rmtree(self.test_dir)

    def test_layout_and_artefacts(self):
        """Test subdirectories and written files"""
        workspace = WorkspaceManager(self.test_dir / "ws")
        for sub in ("results", "sweeps", "logs"):
            self.assertTrue((self.test_dir / "ws" / sub).is_dir())
        report = workspace.save_report("solve", {"lambda": {"h": 0.5}})
        self.assertIn("0.5", report.read_text())
        table = workspace.save_csv("regions", ["mu_h", "order_label"], [["1.0", "O1"]])
        self.assertEqual(table.read_text(), "mu_h,order_label\n1.0,O1\n")
        self.assertTrue(workspace.save_legend("regions", {"orders": []}).name.endswith("_legend.json"))
        self.assertEqual(workspace.save_log("run", "done").read_text(), "done")


class TestSettings(unittest.TestCase):
    """Test cases for configuration lookup"""

    def test_defaults(self):
        """Test shipped tolerances"""
        self.assertEqual(settings.get_value("solver", "gap_tol"), 1e-8)
        self.assertEqual(settings.get_value("composer", "embed_mode"), "auto")
        self.assertEqual(settings.get_value("nowhere", "nothing", 3), 3)

    def test_thread_override(self):
        """Test the environment variable caps worker threads"""
        with mock.patch.dict(os.environ, {settings.THREADS_ENV: "4"}):
            self.assertEqual(settings.thread_count(), 4)
        with mock.patch.dict(os.environ, {settings.THREADS_ENV: "many"}):
            self.assertGreaterEqual(settings.thread_count(), 1)


class TestFixtureCatalog(unittest.TestCase):
    """Test cases for the fixture catalogue"""

    def test_paths_exist(self):
        """Test every catalogued file is shipped"""
        for fixture in list_fixtures():
            self.assertTrue(os.path.exists(fixture_path(fixture["fixture_id"])))
        self.assertEqual(len(list_fixtures("crg")), 2)
        self.assertEqual(get_fixture_demands("fisk")[0], [60.0, 30.0, 6.0])
        with self.assertRaises(KeyError):
            fixture_path("unknown")


if __name__ == '__main__':
    unittest.main()
