"""Unit tests for engine and run configuration."""

import os
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from pydantic import ValidationError

from src.fnc_galois.config import (
    THREADS_ENV,
    EngineConfig,
    RunConfig,
    load_engine_config,
    resolve_threads,
)
from src.fnc_galois.errors import InvalidParams


class TestEngineConfig(unittest.TestCase):

    def test_defaults(self):
        config = EngineConfig()
        self.assertEqual(config.field_size_cap, 2 ** 16)
        self.assertEqual(config.line_budget, 200)
        self.assertEqual(config.pencil_max_lines, 130)
        self.assertEqual(config.unibranch_policy, "exact")
        self.assertIsNone(config.threads)

    def test_rejects_unknown_keys(self):
        with self.assertRaises(ValidationError):
            EngineConfig(line_budgets=5)

    def test_rejects_bad_policy(self):
        with self.assertRaises(ValidationError):
            EngineConfig(unibranch_policy="guess")

    def test_frozen(self):
        config = EngineConfig()
        with self.assertRaises(ValidationError):
            config.line_budget = 3


class TestLoadEngineConfig(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, text: str) -> Path:
        path = self.dir / "engine.yaml"
        path.write_text(text)
        return path

    def test_missing_path_gives_defaults(self):
        self.assertEqual(load_engine_config(None), EngineConfig())

    def test_reads_yaml(self):
        config = load_engine_config(self.write("line_budget: 25\nunibranch_policy: candidates\n"))
        self.assertEqual(config.line_budget, 25)
        self.assertEqual(config.unibranch_policy, "candidates")

    def test_empty_file(self):
        self.assertEqual(load_engine_config(self.write("")), EngineConfig())

    def test_shipped_config_matches_defaults(self):
        shipped = Path(__file__).resolve().parent.parent / "configs" / "engine.yaml"
        self.assertEqual(load_engine_config(shipped), EngineConfig())

    def test_errors(self):
        for text in ("- 1\n- 2\n", "typo: 1\n", "line_budget: -1\n", "line_budget: [\n"):
            with self.assertRaises(InvalidParams, msg=text):
                load_engine_config(self.write(text))
        with self.assertRaises(InvalidParams):
            load_engine_config(self.dir / "absent.yaml")


class TestResolveThreads(unittest.TestCase):

    def test_precedence(self):
        config = EngineConfig(threads=3)
        with patch.dict(os.environ, {THREADS_ENV: "5"}):
            self.assertEqual(resolve_threads(2, config), 2)
            self.assertEqual(resolve_threads(None, config), 5)
        with patch.dict(os.environ, {}, clear=True):
            self.assertEqual(resolve_threads(None, config), 3)
            self.assertEqual(resolve_threads(None), 1)

    def test_invalid(self):
        with patch.dict(os.environ, {THREADS_ENV: "many"}):
            with self.assertRaises(InvalidParams):
                resolve_threads(None)
        with self.assertRaises(InvalidParams):
            resolve_threads(0)


class TestRunConfig(unittest.TestCase):

    def test_valid(self):
        run = RunConfig(command="galois scan", q=2, n=3, m=1, candidates=["base"])
        self.assertEqual(run.params.degree, 4)
        self.assertEqual(run.format, "json")
        self.assertEqual(run.seed, 0)

    def test_curve_parameters_are_validated(self):
        for q, n, m in [(2, 4, 2), (6, 3, 1), (2, 3, 3)]:
            with self.assertRaises(ValidationError):
                RunConfig(command="curve build", q=q, n=n, m=m)

    def test_bounds(self):
        with self.assertRaises(ValidationError):
            RunConfig(command="sing report", q=2, n=3, m=1, max_ext=0)
        with self.assertRaises(ValidationError):
            RunConfig(command="curve build", q=2, n=3, m=1, format="xml")


if __name__ == "__main__":
    unittest.main()
