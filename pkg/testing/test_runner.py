"""Scenario Runner Tests.

Loading and validating scenario files, the error anchors reported for bad
files, and a complete quadrature run of a small compound Poisson scenario.
"""

import os
import tempfile
import unittest

import pandas as pd
import yaml

from levyheat.errors import ScenarioError
from levyheat.runner import (
    CORPUS_COLUMNS,
    EXIT_ERROR,
    EXIT_FAIL,
    EXIT_PASS,
    build_model,
    emit_plotdata,
    load_scenario,
    run_corpus,
    run_scenario,
    validate_scenario,
)

SCENARIO_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "scenarios")

DISJOINT = {
    "process": {"family": "compound_poisson", "dimension": 1, "drift": [0.0],
                "jumps": {"atoms": [[-2.5], [2.5]], "weights": [1.0, 1.0]}},
    "geometry": {"kind": "box", "center": [0.5], "half_widths": [0.5]},
    "data": {"g": "indicator", "mu": "lebesgue_other",
             "mu_geometry": {"kind": "box", "center": [2.5], "half_widths": [0.5]}},
    "sweep": {"t_max": 1e-1, "t_min": 1e-3, "points": 4, "estimator": "quadrature"},
    "law": {"theorem": "ex2_case1", "beta": 0.0},
}

STABLE_TOO_SMALL = """\
process:
  family: isotropic_stable
  dimension: 1
  alpha: 1.5
  scale: 1.0
geometry:
  kind: box
  center: [0.5]
  half_widths: [0.5]
data:
  g: indicator
  mu: lebesgue
sweep:
  t_max: 1.0e-1
  t_min: 1.0e-3
  estimator: quadrature
law:
  theorem: corollary1
  beta: 1.6
"""


class RunnerTestCase(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write(self, name, content):
        path = os.path.join(self.tmp.name, name)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(content if isinstance(content, str) else yaml.safe_dump(content, sort_keys=False))
        return path


class TestLoading(RunnerTestCase):
    def test_bundled_scenarios_validate(self):
        names = sorted(f for f in os.listdir(SCENARIO_DIR) if f.endswith(".yaml"))
        self.assertGreater(len(names), 0)
        for name in names:
            outcome = validate_scenario(os.path.join(SCENARIO_DIR, name))
            self.assertEqual(outcome.status, EXIT_PASS, f"{name}: {outcome.message}")

    def test_unknown_key_reports_its_line(self):
        text = STABLE_TOO_SMALL.replace("  half_widths: [0.5]\n", "  half_widths: [0.5]\n  colour: red\n", 1)
        path = self.write("bad.yaml", text)
        with self.assertRaises(ScenarioError) as ctx:
            load_scenario(path)
        self.assertEqual(ctx.exception.line, 10)
        self.assertIn("colour", str(ctx.exception))

    def test_yaml_syntax_error(self):
        path = self.write("broken.yaml", "process: [unclosed\n")
        with self.assertRaises(ScenarioError):
            load_scenario(path)

    def test_time_window_order(self):
        path = self.write("order.yaml", STABLE_TOO_SMALL.replace("t_min: 1.0e-3", "t_min: 1.0"))
        with self.assertRaises(ScenarioError) as ctx:
            load_scenario(path)
        self.assertIn("t_min", str(ctx.exception))

    def test_family_fields(self):
        path = self.write("brownian.yaml", STABLE_TOO_SMALL.replace("family: isotropic_stable", "family: brownian"))
        scenario, _ = load_scenario(path)
        with self.assertRaises(ValueError):
            build_model(scenario.process)

    def test_levy_constant_converts_to_scale(self):
        text = STABLE_TOO_SMALL.replace("scale: 1.0", "levy_constant: 1.0")
        scenario, _ = load_scenario(self.write("constant.yaml", text))
        model = build_model(scenario.process)
        self.assertAlmostEqual(model.measure.constant, 1.0, places=12)


class TestRunning(RunnerTestCase):
    def test_index_gate_is_an_error(self):
        path = self.write("gate.yaml", STABLE_TOO_SMALL)
        outcome = run_scenario(path, output_dir=self.tmp.name)
        self.assertEqual(outcome.status, EXIT_ERROR)
        self.assertIn("β", outcome.message)
        self.assertIn(f"{path}:17:", outcome.message)

    def test_validate_reports_gate(self):
        outcome = validate_scenario(self.write("gate.yaml", STABLE_TOO_SMALL))
        self.assertEqual(outcome.status, EXIT_ERROR)

    def test_geometry_error_points_at_geometry(self):
        path = self.write("negative.yaml", STABLE_TOO_SMALL.replace("half_widths: [0.5]", "half_widths: [-0.5]"))
        for outcome in (validate_scenario(path), run_scenario(path, output_dir=self.tmp.name)):
            self.assertEqual(outcome.status, EXIT_ERROR)
            self.assertIn(f"{path}:6:", outcome.message)
            self.assertIn("half-widths", outcome.message)

    def test_dimension_mismatch_points_at_geometry(self):
        text = STABLE_TOO_SMALL.replace("center: [0.5]", "center: [0.5, 0.5]")
        text = text.replace("half_widths: [0.5]", "half_widths: [0.5, 0.5]")
        outcome = validate_scenario(self.write("plane.yaml", text))
        self.assertEqual(outcome.status, EXIT_ERROR)
        self.assertIn(":6:", outcome.message)

    def test_process_error_points_at_process(self):
        path = self.write("brownian.yaml", STABLE_TOO_SMALL.replace("family: isotropic_stable", "family: brownian"))
        outcome = validate_scenario(path)
        self.assertEqual(outcome.status, EXIT_ERROR)
        self.assertIn(f"{path}:1:", outcome.message)

    def test_unwritable_output_is_an_error(self):
        blocker = os.path.join(self.tmp.name, "blocker")
        with open(blocker, "w", encoding="utf-8") as fh:
            fh.write("not a folder")
        outcome = run_scenario(self.write("disjoint.yaml", DISJOINT), output_dir=blocker)
        self.assertEqual(outcome.status, EXIT_ERROR)
        self.assertIn("cannot create results folder", outcome.message)

    def test_disjoint_run_passes(self):
        path = self.write("disjoint.yaml", DISJOINT)
        outcome = run_scenario(path, output_dir=self.tmp.name)
        self.assertEqual(outcome.status, EXIT_PASS, outcome.message)
        self.assertAlmostEqual(outcome.report.limit, 0.5, places=9)
        for artifact in outcome.artifacts.values():
            self.assertTrue(os.path.exists(artifact))
        sweep = pd.read_csv(outcome.artifacts["sweep"])
        self.assertEqual(len(sweep), 4)
        plot = pd.read_csv(outcome.artifacts["plotdata"])
        self.assertEqual(len(plot), 8)
        self.assertEqual(set(plot["series"]), {"log_error", "scaled"})

    def test_tolerance_override_fails(self):
        path = self.write("disjoint.yaml", DISJOINT)
        outcome = run_scenario(path, output_dir=self.tmp.name, tolerance_override=1e-12)
        self.assertEqual(outcome.status, EXIT_FAIL)
        self.assertEqual(outcome.message, "FAIL")

    def test_plotdata_from_report_csv(self):
        outcome = run_scenario(self.write("disjoint.yaml", DISJOINT), output_dir=self.tmp.name)
        target = os.path.join(self.tmp.name, "again.csv")
        emit_plotdata(pd.read_csv(outcome.artifacts["report"]), target)
        self.assertEqual(len(pd.read_csv(target)), 8)


class TestCorpus(RunnerTestCase):
    def test_empty_directory(self):
        empty = os.path.join(self.tmp.name, "empty")
        os.makedirs(empty)
        summary = run_corpus(empty, output_dir=self.tmp.name)
        self.assertEqual(list(summary.columns), CORPUS_COLUMNS)
        self.assertEqual(len(summary), 0)
        self.assertTrue(os.path.exists(os.path.join(self.tmp.name, "corpus_summary.csv")))

    def test_mixed_corpus(self):
        corpus = os.path.join(self.tmp.name, "corpus")
        os.makedirs(corpus)
        with open(os.path.join(corpus, "a_disjoint.yaml"), "w", encoding="utf-8") as fh:
            yaml.safe_dump(DISJOINT, fh, sort_keys=False)
        with open(os.path.join(corpus, "b_gate.yaml"), "w", encoding="utf-8") as fh:
            fh.write(STABLE_TOO_SMALL)
        summary = run_corpus(corpus, threads=2, output_dir=os.path.join(self.tmp.name, "out"))
        self.assertEqual(list(summary["scenario"]), ["a_disjoint.yaml", "b_gate.yaml"])
        self.assertEqual(list(summary["status"]), [EXIT_PASS, EXIT_ERROR])
        self.assertEqual(summary["verdict"].iloc[1], "ERROR")


if __name__ == "__main__":
    unittest.main()
