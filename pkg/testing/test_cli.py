"""Command Line and Settings Tests."""

import os
import tempfile
import unittest
from unittest import mock

import pandas as pd

import levyheat_cli
from levyheat.config import get_settings

SCENARIO_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "scenarios")


class TestSettings(unittest.TestCase):
    def tearDown(self):
        get_settings.cache_clear()

    def test_environment_override(self):
        with mock.patch.dict(os.environ, {"LEVYHEAT_PASS_REL_TOL": "0.05", "LEVYHEAT_THREADS": "2",
                                          "LEVYHEAT_CACHE_PATH": "/tmp/levyheat-test.db"}):
            get_settings.cache_clear()
            settings = get_settings()
        self.assertEqual(settings.PASS_REL_TOL, 0.05)
        self.assertEqual(settings.THREADS, 2)
        self.assertEqual(settings.CACHE_PATH, "/tmp/levyheat-test.db")

    def test_malformed_value(self):
        with mock.patch.dict(os.environ, {"LEVYHEAT_MASS_TOL": "tiny", "LEVYHEAT_CACHE_PATH": "x.db"}):
            get_settings.cache_clear()
            with self.assertRaises(ValueError):
                get_settings()


class TestCommandLine(unittest.TestCase):
    def test_validate_bundled(self):
        paths = [os.path.join(SCENARIO_DIR, name) for name in ("stable15_interval.yaml", "cp_nested.yaml")]
        self.assertEqual(levyheat_cli.main(["validate", *paths]), levyheat_cli.EXIT_PASS)

    def test_validate_missing_file(self):
        self.assertEqual(levyheat_cli.main(["validate", "does-not-exist.yaml"]), levyheat_cli.EXIT_ERROR)

    def test_threads_must_be_positive(self):
        code = levyheat_cli.main(["--threads", "0", "run", os.path.join(SCENARIO_DIR, "cp_nested.yaml")])
        self.assertEqual(code, levyheat_cli.EXIT_ERROR)

    def test_plotdata(self):
        with tempfile.TemporaryDirectory() as tmp:
            report = os.path.join(tmp, "report.csv")
            pd.DataFrame({"t": [1e-2, 1e-3], "estimator": ["quadrature"] * 2, "scale": [1e2, 1e3],
                          "scaled_value": [0.49, 0.499], "stderr": [0.0, 0.0], "error": [0.02, 0.002],
                          "limit": [0.5, 0.5], "mode": ["relative"] * 2}).to_csv(report, index=False)
            out = os.path.join(tmp, "plot.csv")
            self.assertEqual(levyheat_cli.main(["plotdata", report, "-o", out]), levyheat_cli.EXIT_PASS)
            self.assertEqual(len(pd.read_csv(out)), 4)
            self.assertEqual(levyheat_cli.main(["plotdata", os.path.join(tmp, "missing.csv")]),
                             levyheat_cli.EXIT_ERROR)


if __name__ == "__main__":
    unittest.main()
