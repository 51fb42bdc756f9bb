"""Geometry Tests.

Overlap volumes, directional derivatives, the perimeter functional and the
convolution r = g∗μ̌ for the supported sets.
"""

import dataclasses
import math
import os
import tempfile
import unittest

import numpy as np

from levyheat.errors import ArgumentError
from levyheat.geometry import (
    Annulus,
    Ball,
    Box,
    DisjointUnion,
    GaussianDensity,
    Indicator,
    InitialData,
    LebesgueOnSet,
    build_r,
    covariance,
    cross_covariance,
    directional_derivative,
    gradient_at_zero,
    perimeter,
    second_difference,
)


class TestSets(unittest.TestCase):
    def test_invalid_sets(self):
        with self.assertRaises(ArgumentError):
            Ball((0.0,), 0.0)
        with self.assertRaises(ArgumentError):
            Box((0.0, 0.0), (1.0,))
        with self.assertRaises(ArgumentError):
            Annulus((0.0, 0.0), 2.0, 1.0)
        with self.assertRaises(ArgumentError):
            DisjointUnion((Box((0.0,), (1.0,)), Box((1.5,), (1.0,))))

    def test_measures(self):
        self.assertAlmostEqual(Ball((0.0, 0.0), 1.0).measure(), math.pi, places=12)
        self.assertAlmostEqual(Box((0.0, 0.0), (0.5, 1.0)).measure(), 2.0, places=14)
        self.assertAlmostEqual(Annulus((0.0, 0.0), 1.0, 2.0).measure(), 3.0 * math.pi, places=12)
        union = DisjointUnion((Box((0.0,), (0.5,)), Box((3.0,), (1.0,))))
        self.assertAlmostEqual(union.measure(), 3.0, places=14)
        self.assertAlmostEqual(union.min_gap, 1.5, places=14)

    def test_contains_is_open(self):
        box = Box((0.5,), (0.5,))
        np.testing.assert_array_equal(box.contains(np.array([[0.0], [0.5], [1.0]])), [False, True, False])


class TestCovariance(unittest.TestCase):
    def test_interval(self):
        box = Box((0.5,), (0.5,))
        np.testing.assert_allclose(covariance(box, np.array([[0.0], [0.25], [-0.25], [2.0]])),
                                   [1.0, 0.75, 0.75, 0.0], atol=1e-14)

    def test_lens(self):
        disk = Ball((0.0, 0.0), 1.0)
        lens = 2.0 * math.pi / 3.0 - math.sqrt(3.0) / 2.0
        self.assertAlmostEqual(covariance(disk, np.array([1.0, 0.0])), lens, places=9)
        self.assertAlmostEqual(lens, 1.2284, places=4)

    def test_symmetry_and_domination(self):
        rng = np.random.default_rng(5)
        for omega in (Ball((0.2, -0.1), 0.8), Box((0.0, 0.0), (0.5, 1.0)), Annulus((0.0, 0.0), 0.5, 1.0)):
            x = rng.uniform(-1.5, 1.5, size=(1000, 2))
            forward, backward = covariance(omega, x), covariance(omega, -x)
            np.testing.assert_allclose(forward, backward, atol=1e-9)
            self.assertTrue(np.all(forward <= omega.measure() + 1e-12))

    def test_cross_covariance_of_disjoint_intervals(self):
        a, b = Box((0.0,), (0.5,)), Box((2.5,), (0.5,))
        self.assertEqual(cross_covariance(a, b, np.array([0.0])), 0.0)
        self.assertAlmostEqual(cross_covariance(a, b, np.array([-2.5])), 1.0, places=14)

    def test_dimension_mismatch(self):
        with self.assertRaises(ArgumentError):
            cross_covariance(Box((0.0,), (1.0,)), Ball((0.0, 0.0), 1.0), np.zeros(2))


class TestDirectionalDerivative(unittest.TestCase):
    def test_box(self):
        box = Box((0.0, 0.0), (0.5, 1.0))
        self.assertAlmostEqual(directional_derivative(box, [1.0, 0.0]), 4.0, places=12)
        self.assertAlmostEqual(directional_derivative(box, [0.0, 1.0]), 2.0, places=12)
        theta = np.array([0.6, 0.8])
        self.assertAlmostEqual(directional_derivative(box, theta), 2.0 * (0.6 * 2.0 + 0.8 * 1.0), places=12)

    def test_ball_does_not_depend_on_direction(self):
        disk = Ball((0.0, 0.0), 1.0)
        self.assertAlmostEqual(directional_derivative(disk, [1.0, 0.0]), 4.0, places=12)
        self.assertAlmostEqual(directional_derivative(disk, [0.6, -0.8]), 4.0, places=12)

    def test_rejects_non_unit_direction(self):
        with self.assertRaises(ArgumentError):
            directional_derivative(Box((0.0,), (1.0,)), [2.0])


class TestPerimeter(unittest.TestCase):
    def test_interval(self):
        report = perimeter(Box((0.5,), (0.5,)))
        self.assertAlmostEqual(report.functional, 4.0, places=12)
        self.assertEqual(report.classical, 2.0)
        self.assertAlmostEqual(report.ratio, 2.0, places=12)

    def test_disk(self):
        report = perimeter(Ball((0.0, 0.0), 1.0))
        self.assertAlmostEqual(report.functional, 4.0 * math.pi, places=9)
        self.assertAlmostEqual(report.classical, 2.0 * math.pi, places=12)

    def test_square_ratio(self):
        report = perimeter(Box((0.0, 0.0), (0.5, 0.5)), rel_tol=1e-6)
        self.assertAlmostEqual(report.ratio, 2.0, delta=1e-4)


class TestBuildR(unittest.TestCase):
    def test_interval_covariance(self):
        box = Box((0.5,), (0.5,))
        rf = build_r(InitialData(Indicator(box), LebesgueOnSet(box)))
        self.assertAlmostEqual(rf.r0, 1.0, places=14)
        self.assertTrue(rf.analytic)
        self.assertIs(rf.geometry, box)
        np.testing.assert_allclose(rf.R_beta(np.array([[1.0], [-1.0]])), [-2.0, -2.0], atol=1e-12)
        self.assertAlmostEqual(rf(np.array([0.3])), 0.7, places=14)

    def test_r0_is_set_at_construction(self):
        box = Box((0.0, 0.0), (0.5, 1.0))
        for mu in (LebesgueOnSet(box), GaussianDensity(2)):
            rf = build_r(InitialData(Indicator(box), mu))
            self.assertEqual(rf.r0, rf(np.zeros(2)))
            with self.assertRaises(dataclasses.FrozenInstanceError):
                rf.r0 = 0.0

    def test_second_difference_of_interval(self):
        box = Box((0.5,), (0.5,))
        rf = build_r(InitialData(Indicator(box), LebesgueOnSet(box)))
        self.assertAlmostEqual(second_difference(rf, [1.0]).value, -2.0, places=9)

    def test_multiplier(self):
        box = Box((0.0,), (1.0,))
        rf = build_r(InitialData(Indicator(box), LebesgueOnSet(box), g_scale=3.0))
        self.assertAlmostEqual(rf.r0, 6.0, places=12)

    def test_gaussian_data(self):
        box = Box((0.0,), (1.0,))
        rf = build_r(InitialData(Indicator(box), GaussianDensity(1)))
        self.assertAlmostEqual(rf.r0, math.erf(1.0 / math.sqrt(2.0)), places=12)
        np.testing.assert_allclose(gradient_at_zero(rf), [0.0], atol=1e-12)

    def test_factors_multiply_to_r(self):
        box = Box((0.0, 0.0), (0.5, 1.0))
        rf = build_r(InitialData(Indicator(box), LebesgueOnSet(box)))
        x = np.array([[0.2, -0.3], [0.9, 1.5]])
        product = rf.factors[0](x[:, :1]) * rf.factors[1](x[:, 1:])
        np.testing.assert_allclose(product, rf(x), atol=1e-12)

    def test_dimension_mismatch(self):
        with self.assertRaises(ArgumentError):
            InitialData(Indicator(Box((0.0,), (1.0,))), GaussianDensity(2))

    def test_export_csv(self):
        box = Box((0.5,), (0.5,))
        rf = build_r(InitialData(Indicator(box), LebesgueOnSet(box)))
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "r.csv")
            rf.export_csv(np.linspace(-1.0, 1.0, 5)[:, None], path)
            with open(path) as handle:
                lines = handle.read().splitlines()
        self.assertEqual(lines[0], "x,r")
        self.assertEqual(len(lines), 6)


if __name__ == "__main__":
    unittest.main()
