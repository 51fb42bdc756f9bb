"""Asymptotics Tests.

Closed-form limit constants, the hypothesis gates in front of them and the
convergence report built from a scaled sweep.
"""

import math
import unittest

import numpy as np
import pandas as pd
from scipy import stats

from levyheat.asymptotics import (
    AsymptoticLaw,
    Theorem,
    convergence_report,
    limit_corollary1,
    limit_ex5_radial,
    limit_ex5_rectangle,
    limit_example1,
    limit_example2,
    limit_t1_case1,
    limit_t1_general,
    limit_t1_symmetric,
    limit_t2,
    limit_t3,
    power_scale,
    stable_abs_moment,
    time_scale,
)
from levyheat.errors import ArgumentError, HypothesisViolationError, NumericError
from levyheat.geometry import Ball, Box, GaussianDensity, Indicator, InitialData, LebesgueOnSet, build_r
from levyheat.levy_models import FiniteMeasure, LevyModel, RadialPowerLaw, scaling_limit, stable_constant

GAMMA_THIRD = math.gamma(1.0 / 3.0)


def interval_r():
    box = Box((0.5,), (0.5,))
    return build_r(InitialData(Indicator(box), LebesgueOnSet(box)))


class TestFirstOrder(unittest.TestCase):
    def test_finite_variation(self):
        model = LevyModel.finite_variation(RadialPowerLaw(1, 0.5, 1.0), [0.0])
        self.assertAlmostEqual(limit_t1_case1(model, interval_r()).value, -8.0, places=6)

    def test_symmetric(self):
        model = LevyModel.isotropic_stable(1, 0.8, 2.0 * stable_constant(0.8))
        self.assertAlmostEqual(limit_t1_symmetric(model, interval_r()).value, -12.5, places=6)

    def test_general_with_gaussian_data(self):
        jumps = FiniteMeasure.from_atoms([[0.7], [-0.4]], [1.0, 0.5])
        model = LevyModel.compound_poisson(jumps, [0.3])
        data = InitialData(Indicator(Box((0.0,), (1.0,))), GaussianDensity(1))

        def r(y):
            return stats.norm.cdf(1.0 - y) - stats.norm.cdf(-1.0 - y)

        expected = (r(0.7) - r(0.0)) + 0.5 * (r(-0.4) - r(0.0))
        general = limit_t1_general(model, build_r(data)).value
        self.assertAlmostEqual(general, expected, places=9)
        self.assertAlmostEqual(limit_example1(model, data).value, general, places=9)

    def test_gates(self):
        with self.assertRaises(HypothesisViolationError):
            limit_t1_case1(LevyModel.isotropic_stable(1, 1.5), interval_r())
        with self.assertRaises(HypothesisViolationError):
            limit_t1_case1(LevyModel.brownian(1, 1.0), interval_r())
        drifted = LevyModel.finite_variation(RadialPowerLaw(1, 0.5, 1.0), [0.2])
        with self.assertRaises(HypothesisViolationError):
            limit_t1_case1(drifted, interval_r())

    def test_growth_not_integrated(self):
        with self.assertRaises(HypothesisViolationError):
            limit_t1_symmetric(LevyModel.isotropic_stable(1, 1.5), interval_r())


class TestStableLimits(unittest.TestCase):
    def test_corollary(self):
        self.assertAlmostEqual(limit_corollary1(1, 1.5, 1.0, -2.0).value, -2.0 * GAMMA_THIRD / math.pi, places=12)
        self.assertAlmostEqual(limit_corollary1(1, 2.0, 1.0, -2.0).value, -2.0 / math.sqrt(math.pi), places=12)
        self.assertAlmostEqual(-2.0 / math.sqrt(math.pi), -1.12838, places=5)
        self.assertAlmostEqual(-2.0 * GAMMA_THIRD / math.pi, -1.70549, places=5)

    def test_t2_matches_corollary(self):
        self.assertAlmostEqual(limit_t2(1.0, 1.5, 1.0, -2.0).value, limit_corollary1(1, 1.5, 1.0, -2.0).value,
                               places=8)
        R = lambda th: np.full(len(th), -4.0)
        self.assertAlmostEqual(limit_t2(1.0, 1.5, 1.0, R, dimension=2).value,
                               limit_corollary1(2, 1.5, 1.0, R).value, places=8)
        # the scale is carried by V, so Λ ≡ 1
        limit = scaling_limit(LevyModel.isotropic_stable(1, 1.5, 2.0))
        self.assertAlmostEqual(limit_t2(limit, 1.5, 1.0, -2.0).value,
                               limit_corollary1(1, 1.5, 1.0, -2.0).value, places=8)
        self.assertAlmostEqual(limit_t2(2.0, 1.5, 1.0, -2.0).value,
                               limit_corollary1(1, 1.5, 1.0, -2.0, Lambda=2.0).value, places=8)

    def test_gate(self):
        with self.assertRaises(HypothesisViolationError):
            limit_corollary1(1, 1.5, 1.6, -2.0)
        with self.assertRaises(HypothesisViolationError):
            limit_t2(1.0, 0.8, 1.0, -2.0)
        with self.assertRaises(ArgumentError):
            limit_corollary1(1, 1.5, 2.5, -2.0)

    def test_abs_moment(self):
        self.assertAlmostEqual(stable_abs_moment(1.0, 2.0, 1.0, 1), 2.0 / math.sqrt(math.pi), places=9)
        self.assertAlmostEqual(stable_abs_moment(1.0, 1.5, 1.0, 1), 2.0 * GAMMA_THIRD / math.pi, places=9)

    def test_t3_on_stable_axis_matches_rectangle(self):
        rectangle = Box((0.0, 0.0), (0.5, 1.0))
        eta = scaling_limit(LevyModel.product_of_stables([0.7, 1.5])).eta
        R = lambda th: np.full(len(th), -2.0)
        expected = -2.0 * GAMMA_THIRD / math.pi
        self.assertAlmostEqual(limit_t3(eta, 1.0, R).value, expected, places=8)
        self.assertAlmostEqual(limit_ex5_rectangle(rectangle, 1.5).value, expected, places=12)

    def test_radial_disk(self):
        value = limit_ex5_radial(Ball((0.0, 0.0), 1.0), 1.5).value
        self.assertAlmostEqual(value, -4.0 * GAMMA_THIRD / math.pi, places=8)
        with self.assertRaises(HypothesisViolationError):
            limit_ex5_radial(Ball((0.0, 0.0), 1.0), 0.9)

    def test_power_scale(self):
        scale = power_scale(scaling_limit(LevyModel.isotropic_stable(1, 1.5)), 1.0)
        self.assertAlmostEqual(scale(1e-3), 100.0, places=8)
        self.assertEqual(time_scale(0.25), 4.0)


class TestExampleTwo(unittest.TestCase):
    def setUp(self):
        self.model = LevyModel.compound_poisson(FiniteMeasure.from_atoms([[2.5], [-2.5]], [1.0, 1.0]))
        self.omega = Box((0.5,), (0.5,))

    def test_disjoint(self):
        value = limit_example2(self.model, self.omega, Box((2.5,), (0.5,)), 1).value
        self.assertAlmostEqual(value, 0.5, places=9)

    def test_nested(self):
        value = limit_example2(self.model, self.omega, Box((0.5,), (2.5,)), 2).value
        self.assertAlmostEqual(value, -1.0, places=9)

    def test_case_hypotheses(self):
        with self.assertRaises(HypothesisViolationError):
            limit_example2(self.model, self.omega, Box((1.0,), (0.5,)), 1)
        with self.assertRaises(HypothesisViolationError):
            limit_example2(self.model, self.omega, Box((2.5,), (0.5,)), 2)
        with self.assertRaises(ArgumentError):
            limit_example2(self.model, self.omega, Box((2.5,), (0.5,)), 3)


def sweep_table(values, stderr=0.0):
    ts = [1e-1, 1e-2, 1e-3]
    return pd.DataFrame({"t": ts, "estimator": ["quadrature"] * 3, "scale": [1.0 / t for t in ts],
                         "scaled_value": values, "stderr": [stderr] * 3})


class TestConvergenceReport(unittest.TestCase):
    def setUp(self):
        self.law = AsymptoticLaw(Theorem.COROLLARY1, time_scale, 1.0, -2.0)

    def test_pass(self):
        report = convergence_report(sweep_table([-2.0 + t for t in (1e-1, 1e-2, 1e-3)]), self.law)
        self.assertTrue(report.passed)
        self.assertTrue(report.converging)
        self.assertEqual(report.mode, "relative")
        self.assertAlmostEqual(report.slope, 1.0, places=6)
        self.assertIn("verdict: PASS", report.summary())
        self.assertEqual(list(report.export_table()["limit"]), [-2.0] * 3)

    def test_fail(self):
        report = convergence_report(sweep_table([-2.5, -2.5, -2.5]), self.law)
        self.assertFalse(report.passed)
        self.assertEqual(report.verdict, "FAIL")

    def test_explicit_tolerance(self):
        report = convergence_report(sweep_table([-2.5, -2.5, -2.5]), self.law, tolerance=0.3)
        self.assertTrue(report.passed)

    def test_zero_limit_is_absolute(self):
        law = AsymptoticLaw(Theorem.EX2_CASE1, time_scale, 1.0, 0.0)
        report = convergence_report(sweep_table([1e-1, 1e-2, 1e-3]), law)
        self.assertEqual(report.mode, "absolute")
        self.assertTrue(report.passed)

    def test_non_finite_limit(self):
        with self.assertRaises(NumericError):
            AsymptoticLaw(Theorem.T2, time_scale, 1.0, math.nan)


if __name__ == "__main__":
    unittest.main()
