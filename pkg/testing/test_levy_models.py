"""Lévy Model Tests.

Characteristic exponents, generalized inverses, ψ*, the Pruitt function and
scaling limits of the supported families.
"""

import math
import unittest

import numpy as np

from levyheat.errors import ArgumentError, HypothesisViolationError, RangeError, UnsupportedOperationError
from levyheat.levy_models import (
    FiniteMeasure,
    LevyModel,
    PowerFunction,
    RadialPowerLaw,
    RadialProfile,
    SphereMeasure,
    SphericalDecomposition,
    characteristic_length,
    estimate_rv_index,
    gamma0,
    generalized_inverse,
    psi,
    psi_star,
    psi_star_ratio_diagnostic,
    pruitt_h,
    scaling_limit,
    sphere_area,
    sphere_power_moment,
    stable_constant,
)


class TestConstants(unittest.TestCase):
    def test_stable_constant(self):
        self.assertAlmostEqual(stable_constant(1.0), math.pi / 2.0, places=14)
        self.assertAlmostEqual(stable_constant(0.5), math.sqrt(2.0 * math.pi), places=12)

    def test_sphere_area(self):
        self.assertEqual(sphere_area(1), 2.0)
        self.assertAlmostEqual(sphere_area(2), 2.0 * math.pi, places=12)
        self.assertAlmostEqual(sphere_area(3), 4.0 * math.pi, places=12)

    def test_sphere_power_moment_on_the_line(self):
        for alpha in (0.3, 1.0, 1.7):
            self.assertAlmostEqual(sphere_power_moment(1, alpha), 2.0, places=12)


class TestPsi(unittest.TestCase):
    def test_isotropic_stable(self):
        model = LevyModel.isotropic_stable(1, 1.5, 1.0)
        self.assertAlmostEqual(psi(model, 2.0).real, 2.0 ** 1.5, places=10)
        self.assertEqual(psi(model, 2.0).imag, 0.0)

    def test_isotropic_stable_plane(self):
        model = LevyModel.isotropic_stable(2, 1.2, 0.7)
        value = psi(model, np.array([[3.0, 4.0]]))
        self.assertAlmostEqual(float(value[0].real), 0.7 * 5.0 ** 1.2, places=9)

    def test_brownian(self):
        model = LevyModel.brownian(2, 0.5)
        self.assertAlmostEqual(psi(model, np.array([1.0, 2.0])).real, 2.5, places=14)

    def test_product_of_stables(self):
        model = LevyModel.product_of_stables([0.7, 1.5], [1.0, 2.0])
        self.assertAlmostEqual(psi(model, np.array([1.0, 2.0])).real, 1.0 + 2.0 * 2.0 ** 1.5, places=10)

    def test_symmetric_compound_poisson(self):
        jumps = FiniteMeasure.from_atoms([[1.0], [-1.0]], [1.0, 1.0])
        model = LevyModel.compound_poisson(jumps)
        for xi in (0.3, 1.0, 2.5):
            self.assertAlmostEqual(psi(model, xi).real, 2.0 * (1.0 - math.cos(xi)), places=12)

    def test_symmetric_models_are_exactly_real(self):
        rng = np.random.default_rng(11)
        models = (
            LevyModel.isotropic_stable(2, 1.2, 0.7),
            LevyModel.brownian(2, 0.5),
            LevyModel.product_of_stables([0.7, 1.5], [1.0, 2.0]),
            LevyModel.compound_poisson(FiniteMeasure.from_atoms([[1.0, 0.5], [-1.0, -0.5]], [1.0, 1.0])),
        )
        xi = rng.normal(scale=5.0, size=(1000, 2))
        for model in models:
            values = psi(model, xi)
            self.assertTrue(np.all(values.imag == 0.0))
            self.assertTrue(np.all(values.real >= -1e-12))
            np.testing.assert_allclose(psi(model, -xi).real, values.real, rtol=1e-10, atol=1e-12)

    def test_drift_enters_imaginary_part(self):
        jumps = FiniteMeasure.from_atoms([[2.0], [-2.0]], [1.0, 1.0])
        model = LevyModel.compound_poisson(jumps, [0.5])
        self.assertAlmostEqual(psi(model, 1.0).imag, -0.5, places=12)

    def test_dimension_mismatch(self):
        model = LevyModel.isotropic_stable(2, 1.5)
        with self.assertRaises(ArgumentError):
            psi(model, np.array([1.0, 2.0, 3.0]))


class TestFamilies(unittest.TestCase):
    def test_index_out_of_range(self):
        with self.assertRaises(ArgumentError):
            LevyModel.isotropic_stable(1, 2.5)
        with self.assertRaises(ArgumentError):
            LevyModel.product_of_stables([0.5, 2.0])

    def test_atom_at_origin(self):
        with self.assertRaises(ArgumentError):
            FiniteMeasure.from_atoms([[0.0]], [1.0])

    def test_finite_variation_needs_small_index(self):
        with self.assertRaises(ArgumentError):
            LevyModel.finite_variation(RadialPowerLaw(1, 1.5, 1.0), [0.0])

    def test_admits_beta(self):
        model = LevyModel.isotropic_stable(1, 1.5)
        self.assertTrue(model.admits_beta(1.6))
        self.assertFalse(model.admits_beta(1.4))
        self.assertTrue(LevyModel.finite_variation(RadialPowerLaw(1, 0.5, 1.0), [0.0]).admits_beta(1.0))

    def test_gamma0(self):
        jumps = FiniteMeasure.from_atoms([[0.5], [3.0]], [2.0, 1.0])
        model = LevyModel.compound_poisson(jumps, [0.3])
        np.testing.assert_allclose(gamma0(model), [0.7], atol=1e-14)

    def test_fingerprint(self):
        a = LevyModel.isotropic_stable(1, 1.5, 1.0)
        self.assertEqual(a.fingerprint(), LevyModel.isotropic_stable(1, 1.5, 1.0).fingerprint())
        self.assertNotEqual(a.fingerprint(), LevyModel.isotropic_stable(1, 1.5, 2.0).fingerprint())

    def test_measure_density(self):
        np.testing.assert_allclose(RadialPowerLaw(1, 1.5, 2.0).density(np.array([[2.0]])), [2.0 * 2.0 ** -2.5])
        one_sided = SphericalDecomposition(SphereMeasure.atoms([[1.0], [-1.0]], [1.0, 3.0]), RadialProfile(0.5))
        np.testing.assert_allclose(one_sided.density(np.array([[2.0], [-2.0]])),
                                   [2.0 ** -1.5, 3.0 * 2.0 ** -1.5])
        self.assertIsNone(LevyModel.product_of_stables([1.5, 1.5]).measure.density(np.ones((1, 2))))


class TestGeneralizedInverse(unittest.TestCase):
    def test_power(self):
        self.assertAlmostEqual(generalized_inverse(lambda x: x * x, 4.0), 2.0, places=9)
        self.assertEqual(generalized_inverse(PowerFunction(2.0, 3.0), 16.0), 2.0)

    def test_tail_function(self):
        V = lambda x: (2.0 / 1.5) * x ** 1.5
        self.assertAlmostEqual(generalized_inverse(V, 3.0), 2.25 ** (2.0 / 3.0), places=9)

    def test_left_end_of_flat_stretch(self):
        V = lambda x: min(x, 1.0) if x < 2.0 else x - 1.0
        self.assertAlmostEqual(generalized_inverse(V, 1.0), 1.0, places=9)

    def test_bounded_function(self):
        with self.assertRaises(RangeError):
            generalized_inverse(lambda x: 1.0 - math.exp(-x), 2.0)

    def test_inverse_laws(self):
        rng = np.random.default_rng(3)
        V = lambda x: x ** 1.3 * math.log(math.e + x)
        for u in rng.uniform(0.1, 100.0, 1000):
            x = generalized_inverse(V, u)
            self.assertGreaterEqual(V(x), u * (1.0 - 1e-9))
            self.assertLess(V(x * (1.0 - 1e-6)), u)


class TestPsiStar(unittest.TestCase):
    def test_radial(self):
        model = LevyModel.isotropic_stable(3, 1.2, 2.0)
        self.assertAlmostEqual(psi_star(model, 2.0), 2.0 * 2.0 ** 1.2, places=9)

    def test_monotone_and_dominates_psi(self):
        model = LevyModel.product_of_stables([0.7, 1.5])
        values = [psi_star(model, u) for u in np.geomspace(0.1, 100.0, 12)]
        self.assertTrue(all(b >= a for a, b in zip(values, values[1:])))
        for u in (0.5, 5.0, 50.0):
            self.assertGreaterEqual(psi_star(model, u), psi(model, np.array([0.0, u])).real * (1.0 - 1e-9))
            self.assertGreaterEqual(psi_star(model, u), psi(model, np.array([u, 0.0])).real * (1.0 - 1e-9))

    def test_asymmetric_model(self):
        model = LevyModel.compound_poisson(FiniteMeasure.from_atoms([[1.0]], [1.0]))
        with self.assertRaises(UnsupportedOperationError):
            psi_star(model, 1.0)

    def test_ratio_diagnostic_for_radial_model(self):
        report = psi_star_ratio_diagnostic(LevyModel.isotropic_stable(2, 1.5))
        self.assertAlmostEqual(report.min_ratio, 1.0, places=9)
        self.assertAlmostEqual(report.max_ratio, 1.0, places=9)


class TestPruitt(unittest.TestCase):
    def test_closed_forms(self):
        unit_density = LevyModel.isotropic_stable(1, 1.5, 2.0 * stable_constant(1.5))
        self.assertAlmostEqual(pruitt_h(unit_density, 1.0), 16.0 / 3.0, places=9)
        self.assertAlmostEqual(pruitt_h(LevyModel.brownian(1, 1.0), 2.0), 0.25, places=14)

    def test_sandwich(self):
        for model in (LevyModel.isotropic_stable(1, 1.5), LevyModel.isotropic_stable(2, 0.8),
                      LevyModel.brownian(3, 2.0), LevyModel.product_of_stables([0.7, 1.5], [1.0, 2.0])):
            d = model.dimension
            for r in np.geomspace(1e-3, 1e3, 13):
                star = psi_star(model, 1.0 / r)
                self.assertLessEqual(0.5 * star, pruitt_h(model, r))
                self.assertLessEqual(pruitt_h(model, r), 8.0 * (1 + 2 * d) * star)

    def test_characteristic_length(self):
        model = LevyModel.isotropic_stable(1, 1.5, 1.0)
        self.assertAlmostEqual(characteristic_length(model, 1e-3), 0.01, places=12)


class TestScalingLimit(unittest.TestCase):
    def test_isotropic(self):
        limit = scaling_limit(LevyModel.isotropic_stable(2, 1.5, 2.0))
        self.assertEqual(limit.alpha, 1.5)
        self.assertAlmostEqual(limit.inverse(10.0), 5.0 ** (1.0 / 1.5), places=12)
        np.testing.assert_allclose(limit.Lambda(np.array([[1.0, 0.0], [0.0, 1.0]])), [1.0, 1.0])

    def test_product_keeps_dominant_axis(self):
        limit = scaling_limit(LevyModel.product_of_stables([0.7, 1.5]))
        self.assertEqual(limit.alpha, 1.5)
        self.assertIsNone(limit.Lambda)
        self.assertEqual(limit.eta.support_axes(), [1])

    def test_tail_normalization(self):
        limit = scaling_limit(LevyModel.isotropic_stable(1, 1.5), normalization="tail")
        self.assertAlmostEqual(limit.eta.tail_mass(1.0), 1.0, places=12)

    def test_regular_variation_index(self):
        limit = scaling_limit(LevyModel.spherical_stable_like(SphereMeasure.uniform(2, 1.0), 1.3, 2.0))
        self.assertEqual(limit.alpha, 1.3)
        # the log factor adds about 2/log(x) to the local slope
        secant = math.log(limit.V(1e9) / limit.V(1e6)) / math.log(1e3)
        self.assertAlmostEqual(estimate_rv_index(limit.V, 1e6, 1e9), secant, delta=0.01)
        self.assertGreater(secant, 1.3)
        self.assertAlmostEqual(estimate_rv_index(lambda x: 3.0 * x ** 1.7, 1.0, 1e3), 1.7, places=9)

    def test_slowly_varying_factor(self):
        V = lambda x: x * x * math.log1p(x)
        self.assertAlmostEqual(estimate_rv_index(V, 1e3, 1e6), 2.0, delta=0.1)

    def test_unknown_normalization(self):
        with self.assertRaises(ArgumentError):
            scaling_limit(LevyModel.isotropic_stable(1, 1.5), normalization="bogus")

    def test_gate(self):
        with self.assertRaises(HypothesisViolationError):
            scaling_limit(LevyModel.isotropic_stable(1, 1.5)).check(beta=1.6)

    def test_finite_measure_has_no_limit(self):
        model = LevyModel.compound_poisson(FiniteMeasure.from_atoms([[1.0], [-1.0]], [1.0, 1.0]))
        with self.assertRaises(UnsupportedOperationError):
            scaling_limit(model)


if __name__ == "__main__":
    unittest.main()
