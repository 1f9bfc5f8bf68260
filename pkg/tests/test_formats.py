#!/usr/bin/env python3
"""
Unit tests for game/CRG files and numeric output
"""

import json
import os
import shutil
import sys
import tempfile
import unittest
from pathlib import Path

sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from core.errors import SchemaError, StructuralError
from composer.routing import embed_sp
from formats import numbers
from formats.crg_format import crg_from_dict, load_crg, save_crg
from formats.game_format import game_from_dict, load_game, save_game
from utils.fixture_catalog import fixture_path, list_fixtures


class TestGameFiles(unittest.TestCase):
    """Test cases for reading and writing definition files"""

    def setUp(self):
        """Set up a scratch directory."""
        self.test_dir = Path(tempfile.mkdtemp())

    def tearDown(self):
        """Remove the scratch directory."""
        shutil.rmtree(self.test_dir)

    def test_every_fixture_parses(self):
        """Test all catalogued fixtures load under their schema"""
        for fixture in list_fixtures():
            path = fixture_path(fixture["fixture_id"])
            loaded = load_game(path) if fixture["kind"] == "game" else load_crg(path)
            self.assertIsNotNone(loaded, fixture["fixture_id"])

    def test_game_round_trip(self):
        """Test a saved game re-parses to an equal structure"""
        game = load_game(fixture_path("ex45"))
        target = self.test_dir / "ex45.json"
        save_game(game, target)
        self.assertEqual(load_game(target), game)

    def test_crg_round_trip(self):
        """Test a saved routing game re-parses to an equal structure"""
        crg = load_crg(fixture_path("fisk_crg"))
        target = self.test_dir / "fisk_crg.json"
        save_crg(crg, target)
        self.assertEqual(load_crg(target), crg)

    def test_sp_expression_checked(self):
        """Test a saved SP embedding re-parses and a malformed expression tree is rejected"""
        crg, _ = embed_sp(load_game(fixture_path("braess")))
        target = self.test_dir / "braess_sp.json"
        save_crg(crg, target)
        self.assertEqual(load_crg(target), crg)
        data = crg.to_dict()
        data["sp_expression"] = {"series": [{"edge": {"id": "e1"}}]}
        with self.assertRaises(SchemaError) as ctx:
            crg_from_dict(data)
        self.assertTrue(ctx.exception.path.startswith("sp_expression/series/0"))

    def test_syntax_error_has_line(self):
        """Test malformed JSON reports line and column"""
        target = self.test_dir / "broken.json"
        target.write_text('{\n  "resources": [\n    {"id": "r1",,}\n  ]\n}\n')
        with self.assertRaises(SchemaError) as ctx:
            load_game(target)
        self.assertEqual(ctx.exception.line, 3)
        self.assertIn("line 3", str(ctx.exception))

    def test_schema_error_has_field_path(self):
        """Test a bad cost kind is reported with its JSON path"""
        data = {"resources": [{"id": "r1", "cost": {"kind": "cubic"}}],
                "commodities": [{"id": "h", "strategies": [["r1"]]}]}
        with self.assertRaises(SchemaError) as ctx:
            game_from_dict(data)
        self.assertTrue(ctx.exception.path.startswith("resources/0/cost"))

    def test_crg_path_must_connect(self):
        """Test a disconnected path is rejected"""
        data = json.loads(Path(fixture_path("fisk_crg")).read_text())
        data["commodities"][1]["paths"] = [["e2", "e1"]]
        with self.assertRaises(StructuralError) as ctx:
            crg_from_dict(data)
        self.assertIn("not connected", str(ctx.exception))


class TestNumbers(unittest.TestCase):
    """Test cases for deterministic numeric output"""

    def test_format_float(self):
        """Test 17 significant digits and special values"""
        self.assertEqual(numbers.format_float(0.1), "0.10000000000000001")
        self.assertEqual(numbers.format_float(24.0), "24.0")
        self.assertEqual(numbers.format_float(0.0), "0.0")
        self.assertEqual(numbers.format_float(float("inf")), "null")

    def test_dumps_is_valid_json(self):
        """Test output re-parses with identical values"""
        data = {"lambda": {"bc": 1.0 / 3.0}, "ids": ("a", "b"), "n": 3, "ok": True}
        parsed = json.loads(numbers.dumps(data))
        self.assertEqual(parsed["lambda"]["bc"], 1.0 / 3.0)
        self.assertEqual(parsed["ids"], ["a", "b"])
        self.assertIs(parsed["ok"], True)


if __name__ == '__main__':
    unittest.main()
