#!/usr/bin/env python3
"""
Unit tests for region mapper module
"""

import unittest
import tempfile
import os
from pathlib import Path

# Add src directory to Python path
import sys
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from mapping.region_mapper import (
    RegionMapper,
    compare_legends,
    create_region_entry,
    load_legend,
    save_legend,
)
from singleton.regions import CostClass, RegimeLabel, WeakOrderLabel


def order_label(*names):
    return WeakOrderLabel(tuple(CostClass((n,), (), 0.0, 0.0) for n in names))


def regime_label(**regimes):
    return RegimeLabel(tuple((hid, tuple(rs)) for hid, rs in regimes.items()))


class TestRegionMapper(unittest.TestCase):
    """Test cases for region mapper functions"""

    def setUp(self):
        """Set up test fixtures before each test method."""
        self.test_dir = Path(tempfile.mkdtemp())
        self.test_file = self.test_dir / "legend.json"

    def tearDown(self):
        """Tear down test fixtures after each test method."""
        if self.test_file.exists():
            self.test_file.unlink()
        self.test_dir.rmdir()

    def test_create_region_entry(self):
        """Test legend entry creation"""
        entry = create_region_entry("O1", "beta<alpha", {"signature": "beta<alpha"}, (4.0, 0.1), 7)
        self.assertEqual(entry["id"], "O1")
        self.assertEqual(entry["frequency"], 1)
        self.assertEqual(entry["first_index"], 7)
        self.assertEqual(entry["demand_bounds"], [[4.0, 4.0], [0.1, 0.1]])

    def test_ids_in_first_seen_order(self):
        """Test repeated labels reuse their id and widen the bounds"""
        mapper = RegionMapper()
        ids = [
            mapper.add_point(0, (4.0, 0.1), order_label("beta", "alpha"), regime_label(alpha=["r1", "r2"], beta=["r3"])),
            mapper.add_point(1, (0.1, 4.0), order_label("alpha", "beta"), regime_label(alpha=["r1"], beta=["r2", "r3"])),
            mapper.add_point(2, (3.0, 0.2), order_label("beta", "alpha"), regime_label(alpha=["r1", "r2"], beta=["r3"])),
        ]
        self.assertEqual(ids, [("O1", "R1"), ("O2", "R2"), ("O1", "R1")])
        entry = mapper.orders["beta<alpha"]
        self.assertEqual(entry["frequency"], 2)
        self.assertEqual(entry["last_index"], 2)
        self.assertEqual(entry["demand_bounds"], [[3.0, 4.0], [0.1, 0.2]])

    def test_legend(self):
        """Test legend metadata and failures"""
        mapper = RegionMapper()
        mapper.add_point(0, (1.0,), order_label("h"), regime_label(h=["r1"]))
        mapper.add_failure(1, (2.0,), "did not converge")
        legend = mapper.legend("demo", {"tie_tol": 1e-6})
        self.assertEqual(legend["metadata"]["points"], 2)
        self.assertEqual(legend["metadata"]["failed"], 1)
        self.assertEqual(legend["metadata"]["order_distribution"], {"O1": 1})
        self.assertEqual(legend["failures"][0]["error"], "did not converge")

    def test_save_and_load_legend(self):
        """Test legend persistence"""
        mapper = RegionMapper()
        mapper.add_point(0, (1.0,), order_label("h"), regime_label(h=["r1"]))
        legend = mapper.legend("demo")
        save_legend(legend, self.test_file)
        loaded = load_legend(self.test_file)
        self.assertEqual(loaded["orders"][0]["signature"], "h")
        self.assertEqual(loaded["regimes"][0]["signature"], "h:{r1}")

    def test_compare_legends(self):
        """Test added and removed signatures"""
        old = {"orders": [{"signature": "alpha<beta"}, {"signature": "alpha=beta"}]}
        new = {"orders": [{"signature": "alpha<beta"}, {"signature": "beta<alpha"}]}
        diff = compare_legends(old, new)
        self.assertEqual(diff["added"], ["beta<alpha"])
        self.assertEqual(diff["removed"], ["alpha=beta"])
        self.assertEqual(diff["summary"]["unchanged_count"], 1)


if __name__ == '__main__':
    unittest.main()
