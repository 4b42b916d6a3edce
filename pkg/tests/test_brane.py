import math
import unittest
from dataclasses import replace

import numpy as np
from hypothesis import assume, given, settings as hyp_settings
import hypothesis.strategies as st

from config import settings
from src.brane import (
    MBraneKind,
    SuperpositionConfig,
    TauMap,
    assemble_solution,
    build_metric,
    build_torsion,
    convergence_order,
    eom_residual,
    flux_charge,
    flux_integral,
    hkt_coupling,
    hkt_residual,
    kernel_frame,
    m_brane,
    normalize_config,
    normalize_tau,
    observed_order,
    ns5_base,
    ns5_harmonic,
    ns5_solution,
    ns5_torsion_at,
)
from src.brane.solution import CommonSectorSolution
from src.calib import calibration_by_name, evaluate_on_plane
from src.errors import DegenerateTauError, DimensionMismatchError, SingularLocusError
from src.exterior import FormField, ScalarField, constant_metric, exterior_derivative, zero_form_field
from src.geom import algebra_membership, curvature_samples
from src.quat import ParameterClass, Quaternion, left_triple, right_triple
from static.constants import (
    CLASS_CALIBRATION,
    CLASS_CONFIGS,
    EOM_ORDER,
    EOM_ORDER_TOLERANCE,
    EOM_THRESHOLD,
    HOLONOMY_TABLE,
    MEMBER_THRESHOLD,
    NONMEMBER_THRESHOLD,
    SAMPLE_POINTS,
    SINGLE_MAP_CONFIG,
    THREE_MAP_CONFIG,
)

NS5_POINT = np.array([0.8, 0.3, -0.2, 0.5])


def hermitian_defect(gamma: np.ndarray, J: np.ndarray) -> float:
    return float(np.max(np.abs(J.T @ gamma @ J - gamma)))


class TestTauMap(unittest.TestCase):
    """Test affine quaternionic maps and their kernels."""

    def test_degenerate(self):
        with self.assertRaises(DegenerateTauError) as ctx:
            TauMap(Quaternion(), Quaternion())
        self.assertIn("degenerate tau", str(ctx.exception))

    def test_non_positive_weight(self):
        with self.assertRaises(ValueError):
            TauMap(Quaternion.one(), Quaternion(), r=0.0)

    def test_normalize(self):
        t = normalize_tau(TauMap(Quaternion.i(), Quaternion.j()))
        np.testing.assert_allclose(t.p1.as_array(), [1.0, 0.0, 0.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(t.p2.as_array(), [0.0, 0.0, 0.0, -1.0], atol=1e-15)

    def test_normalize_idempotent(self):
        t = TauMap.from_arrays([0.3, -0.2, 0.5, 0.1], [0.4, 0.0, -0.7, 0.2], [0.1, 0.2, 0.3, 0.4], 0.9)
        once = normalize_tau(t)
        twice = normalize_tau(once)
        for a, b in ((once.p1, twice.p1), (once.p2, twice.p2), (once.a, twice.a)):
            np.testing.assert_allclose(a.as_array(), b.as_array(), atol=1e-14)
        self.assertEqual(once.r, t.r)

    def test_normalize_with_zero_first_coefficient(self):
        t = normalize_tau(TauMap(Quaternion(), Quaternion.k(), Quaternion.i()))
        np.testing.assert_allclose(t.p2.as_array(), [1.0, 0.0, 0.0, 0.0], atol=1e-15)

    def test_kernel_lies_in_kernel(self):
        t = TauMap.from_arrays([0.8, 0.0, 0.3, 0.0], [-0.2, 0.1, 0.6, -0.5], [0.0] * 4, 1.0)
        plane = kernel_frame(t)
        self.assertEqual(plane.degree, 4)
        np.testing.assert_allclose(t.jacobian() @ plane.frame, 0.0, atol=1e-12)

    def test_kernel_when_second_coefficient_vanishes(self):
        plane = kernel_frame(TauMap(Quaternion.one(), Quaternion()))
        np.testing.assert_allclose(plane.frame[:4], 0.0)

    def test_distance(self):
        t = TauMap(Quaternion.one(), Quaternion())
        x = np.array([0.0, 3.0, 0.0, 4.0, 7.0, 7.0, 7.0, 7.0])
        self.assertAlmostEqual(t.distance(x), 5.0)
        self.assertEqual(TauMap(Quaternion.one(), Quaternion.one()).scale(), math.sqrt(2.0))

    def test_parameter_class(self):
        t = TauMap(Quaternion.one(), Quaternion.i())
        self.assertIs(t.parameter_class(), ParameterClass.COMPLEX)


class TestSuperposition(unittest.TestCase):
    """Test the superposed metric and torsion on Q^2."""

    def setUp(self):
        self.single = SuperpositionConfig.from_tuples(SINGLE_MAP_CONFIG)
        self.generic = SuperpositionConfig.from_tuples(CLASS_CONFIGS["quaternion"])
        self.point = np.array(SAMPLE_POINTS[0])

    def test_empty_config_is_flat(self):
        empty = SuperpositionConfig()
        np.testing.assert_array_equal(build_metric(empty, self.point), np.eye(8))
        self.assertEqual(build_torsion(empty, self.point).max_norm(), 0.0)

    def test_single_map_metric(self):
        u = self.point[:4]
        gamma = build_metric(self.single, self.point)
        np.testing.assert_allclose(gamma[:4, :4], ns5_harmonic(u) * np.eye(4), atol=1e-14)
        np.testing.assert_allclose(gamma[4:, 4:], np.eye(4), atol=1e-14)
        np.testing.assert_allclose(gamma[:4, 4:], 0.0, atol=1e-14)

    def test_single_map_torsion(self):
        H = build_torsion(self.single, self.point)
        H0 = ns5_torsion_at(self.point[:4])
        for indices, value in H0.items():
            self.assertAlmostEqual(H.component(indices), value, places=12)
        self.assertAlmostEqual(H.component((0, 1, 4)), 0.0, places=14)

    def test_metric_hermitian_for_right_triple(self):
        gamma = build_metric(self.generic, self.point)
        for J in right_triple(8):
            self.assertLess(hermitian_defect(gamma, J), 1e-10)

    def test_metric_not_hermitian_for_left_triple(self):
        gamma = build_metric(self.generic, self.point)
        self.assertGreater(max(hermitian_defect(gamma, I) for I in left_triple(8)), 1e-3)

    def test_torsion_closed(self):
        for point in SAMPLE_POINTS:
            dH = exterior_derivative(self.generic.torsion_field(), point, richardson=True)
            self.assertLess(dH.max_norm(), 1e-6)

    def test_singular_locus(self):
        x = np.zeros(8)
        x[4] = 1.0
        with self.assertRaises(SingularLocusError):
            build_metric(self.single, x)

    def test_wrong_dimension(self):
        with self.assertRaises(DimensionMismatchError):
            build_metric(self.single, np.ones(4))

    @hyp_settings(max_examples=10, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_equivalent_maps_give_same_fields(self, seed):
        rng = np.random.default_rng(seed)
        u = Quaternion.from_array(rng.normal(size=4))
        assume(u.norm() > 0.1)
        original = SuperpositionConfig.from_tuples(CLASS_CONFIGS["quaternion"])
        rotated = SuperpositionConfig(tuple(t.left_multiply(u) for t in original.taus))
        points = [x for x in rng.uniform(-2.0, 2.0, size=(100, 8)) if original.distance(x) > 0.3]
        for x in points:
            np.testing.assert_allclose(build_metric(rotated, x), build_metric(original, x), rtol=1e-9, atol=1e-10)
            np.testing.assert_allclose(
                build_torsion(rotated, x).coefficients,
                build_torsion(original, x).coefficients,
                rtol=1e-8,
                atol=1e-10,
            )

    def test_scaling_covariance(self):
        factor = 2.5
        scaled = self.generic.scaled(factor)
        np.testing.assert_allclose(
            build_metric(scaled, factor * self.point), build_metric(self.generic, self.point), atol=1e-12
        )
        np.testing.assert_allclose(
            build_torsion(scaled, factor * self.point).coefficients,
            build_torsion(self.generic, self.point).coefficients / factor,
            atol=1e-12,
        )

    def test_normalize_merges_equivalent_maps(self):
        cfg = SuperpositionConfig.from_tuples([
            ([1.0, 0.0, 0.0, 0.0], [0.5, 0.2, 0.0, 0.0], [0.1, 0.0, 0.0, 0.0], 1.0),
            ([2.0, 0.0, 0.0, 0.0], [1.0, 0.4, 0.0, 0.0], [0.2, 0.0, 0.0, 0.0], 1.0),
        ])
        merged = normalize_config(cfg)
        self.assertEqual(len(merged.taus), 1)
        self.assertAlmostEqual(merged.taus[0].r, math.sqrt(2.0))
        np.testing.assert_allclose(build_metric(merged, self.point), build_metric(cfg, self.point), atol=1e-12)

    def test_general_position(self):
        self.assertTrue(self.generic.general_position())
        parallel = SuperpositionConfig.from_tuples([
            ([1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], 1.0),
            ([1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0], 1.0),
        ])
        self.assertFalse(parallel.general_position())

    def test_configuration_classes(self):
        for name, entries in CLASS_CONFIGS.items():
            cfg = SuperpositionConfig.from_tuples(entries)
            self.assertEqual(cfg.parameter_class().value, name)
        self.assertIs(self.single.parameter_class(), ParameterClass.REAL)

    def test_assembled_dilaton(self):
        solution = assemble_solution(self.generic)
        self.assertEqual(solution.longitudinal, "R^(1,1)")
        for point in SAMPLE_POINTS:
            self.assertLess(solution.dilaton_residual(point), 1e-12)

    def test_near_intersection_is_product_of_cones(self):
        first, second = self.generic.taus
        stacked = np.vstack([first.jacobian(), second.jacobian()])
        corner = np.linalg.solve(stacked, np.concatenate([first.a.as_array(), second.a.as_array()]))
        direction = np.array(SAMPLE_POINTS[1])
        for scale in (1e-2, 1e-3):
            x = corner + scale * direction
            u, v = first(x), second(x)
            cones = np.diag(np.concatenate([
                np.full(4, first.r ** 2 / float(u @ u)),
                np.full(4, second.r ** 2 / float(v @ v)),
            ]))
            product = stacked.T @ cones @ stacked
            gamma = build_metric(self.generic, x)
            self.assertLess(np.linalg.norm(gamma - product) / np.linalg.norm(product), 100.0 * scale ** 2)

    def test_far_from_planes_is_nearly_flat(self):
        far = 1e3 * self.point
        gamma = build_metric(self.generic, far)
        self.assertLess(np.max(np.abs(gamma - np.eye(8))), 1e-5)


class TestHKT(unittest.TestCase):
    """Test the HKT relation on the NS-5 anchor and on superpositions."""

    def test_coupling(self):
        self.assertEqual(hkt_coupling(), -2.0)

    def test_ns5_is_hkt_for_both_triples(self):
        solution = ns5_solution()
        self.assertLess(hkt_residual(solution, NS5_POINT, right_triple(4)), 1e-5)
        self.assertLess(hkt_residual(solution, NS5_POINT, left_triple(4)), 1e-5)

    def test_generic_superposition(self):
        cfg = SuperpositionConfig.from_tuples(CLASS_CONFIGS["quaternion"])
        for point in SAMPLE_POINTS:
            self.assertLess(hkt_residual(cfg, point, right_triple(8)), 1e-5)
        worst = min(hkt_residual(cfg, point, left_triple(8)) for point in SAMPLE_POINTS)
        self.assertGreater(worst, 1e-2)

    def test_real_class_is_hkt_for_both(self):
        cfg = SuperpositionConfig.from_tuples(CLASS_CONFIGS["real"])
        point = SAMPLE_POINTS[0]
        self.assertLess(hkt_residual(cfg, point, right_triple(8)), 1e-5)
        self.assertLess(hkt_residual(cfg, point, left_triple(8)), 1e-5)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            hkt_residual(ns5_solution(), NS5_POINT, right_triple(8))


class TestNS5(unittest.TestCase):
    """Test the NS-5-brane fields."""

    def test_harmonic(self):
        self.assertEqual(ns5_harmonic(np.array([1.0, 0.0, 0.0, 0.0])), 2.0)

    def test_base_metric_on_unit_sphere(self):
        metric, torsion = ns5_base()
        np.testing.assert_allclose(metric(np.array([0.0, 0.6, 0.0, 0.8])), np.eye(4), atol=1e-15)
        self.assertEqual(torsion.degree, 3)

    def test_dilaton(self):
        solution = ns5_solution()
        self.assertEqual(solution.longitudinal, "R^(1,5)")
        self.assertLess(solution.dilaton_residual(NS5_POINT), 1e-12)

    def test_asymptotic_profile(self):
        solution = ns5_solution()
        self.assertEqual(solution.asymptotic_profile(100.0)["region"], "flat")
        self.assertEqual(solution.asymptotic_profile(0.01)["region"], "throat")
        self.assertEqual(solution.asymptotic_profile(1.0)["region"], "intermediate")
        with self.assertRaises(ValueError):
            solution.asymptotic_profile(0.0)

    def test_torsion_closed(self):
        self.assertLess(ns5_solution().closure_residual(NS5_POINT), 1e-6)


class TestMBrane(unittest.TestCase):
    """Test the M-2 and M-5 metrics and the M-5 flux."""

    def setUp(self):
        self.m5 = m_brane(MBraneKind.M5, 1.0)
        self.m2 = m_brane(MBraneKind.M2, 1.0)
        self.y5 = np.array([0.7, -0.4, 0.5, 0.3, 0.6])
        self.y8 = np.array([0.7, -0.4, 0.5, 0.3, 0.6, -0.2, 0.1, 0.4])

    def test_harmonic_functions(self):
        self.assertEqual(self.m5.h(np.array([1.0, 0.0, 0.0, 0.0, 0.0])), 2.0)
        self.assertAlmostEqual(self.m2.h(np.array([2.0] + [0.0] * 7)), 1.0 + 1.0 / 64.0)

    def test_metric_diagonal(self):
        diagonal = self.m5.metric_diagonal([1.0, 0.0, 0.0, 0.0, 0.0])
        self.assertEqual(len(diagonal), 11)
        self.assertAlmostEqual(diagonal[0], -(2.0 ** (-1.0 / 3.0)))
        np.testing.assert_allclose(diagonal[1:6], 2.0 ** (-1.0 / 3.0))
        np.testing.assert_allclose(diagonal[6:], 2.0 ** (2.0 / 3.0))
        self.assertEqual(len(self.m2.metric_diagonal(self.y8)), 11)

    def test_flux_closed(self):
        for sol, y in ((self.m5, self.y5), (self.m2, self.y8)):
            dF = exterior_derivative(sol.flux, y, richardson=True)
            self.assertLess(dF.max_norm(), 1e-6, msg=sol.kind.value)

    def test_harmonic_is_harmonic(self):
        self.assertLess(self.m5.laplacian_residual(self.y5), EOM_THRESHOLD)
        self.assertLess(self.m2.laplacian_residual(self.y8), EOM_THRESHOLD)

    def test_charge(self):
        self.assertLess(abs(flux_charge(self.m5, 1.0) - 1.0), 0.01)

    def test_radius_independence(self):
        near, far = flux_charge(self.m5, 1.0), flux_charge(self.m5, 5.0)
        self.assertLess(abs(near - far) / abs(near), 0.01)

    def test_linearity(self):
        single = flux_integral(self.m5, 1.0)
        tripled = flux_integral(m_brane(MBraneKind.M5, 3.0), 1.0)
        self.assertLess(abs(tripled / (3.0 * single) - 1.0), 1e-3)

    def test_m2_flux_integral_unavailable(self):
        with self.assertRaises(ValueError):
            flux_integral(self.m2, 1.0)

    def test_non_positive_charge(self):
        with self.assertRaises(ValueError):
            m_brane(MBraneKind.M5, 0.0)


class TestFieldEquations(unittest.TestCase):
    """Test the string-frame field equations."""

    def test_flat_background(self):
        flat = CommonSectorSolution(
            metric=constant_metric(np.eye(4)),
            torsion=zero_form_field(4, 3),
            dilaton=ScalarField(4, lambda x: 0.0),
        )
        residual = eom_residual(flat, NS5_POINT)
        self.assertEqual(residual.max(), 0.0)

    def test_ns5_solves_equations(self):
        residual = eom_residual(ns5_solution(), NS5_POINT)
        self.assertLess(residual.max(), EOM_THRESHOLD)
        self.assertEqual(set(residual.to_dict()), {"einstein", "h_equation", "dilaton", "step"})

    def test_ns5_second_order(self):
        orders = convergence_order(ns5_solution(), NS5_POINT)
        measured = {name: order for name, order in orders.items() if not math.isnan(order)}
        self.assertTrue(measured)
        for name, order in measured.items():
            self.assertLess(abs(order - EOM_ORDER), EOM_ORDER_TOLERANCE, msg=name)

    def test_two_map_solves_equations(self):
        solution = assemble_solution(SuperpositionConfig.from_tuples(CLASS_CONFIGS["quaternion"]))
        for point in SAMPLE_POINTS[:2]:
            self.assertLess(eom_residual(solution, point).max(), EOM_THRESHOLD)

    def test_two_map_second_order(self):
        solution = assemble_solution(SuperpositionConfig.from_tuples(CLASS_CONFIGS["quaternion"]))
        orders = convergence_order(solution, SAMPLE_POINTS[0])
        measured = {name: order for name, order in orders.items() if not math.isnan(order)}
        self.assertTrue(measured)
        for name, order in measured.items():
            self.assertLess(abs(order - EOM_ORDER), EOM_ORDER_TOLERANCE, msg=name)

    def test_roundoff_components_not_measured(self):
        self.assertTrue(math.isnan(observed_order(3.9e-8, 3.8e-8, 1e-7)))
        self.assertAlmostEqual(observed_order(4e-4, 1e-4, 1e-7), 2.0)

    def test_scaled_torsion_violates_equations(self):
        solution = assemble_solution(SuperpositionConfig.from_tuples(CLASS_CONFIGS["quaternion"]))
        torsion = solution.torsion
        scaled = FormField(8, lambda y: torsion(y) * 2.0, torsion.distance, degree=3)
        perturbed = replace(solution, torsion=scaled)
        point = SAMPLE_POINTS[0]
        coarse = eom_residual(perturbed, point).max()
        fine = eom_residual(perturbed, point, settings.EOM_STEP / 2.0).max()
        self.assertGreater(coarse, 1e-2)
        self.assertGreater(fine, 0.5 * coarse)


class TestThreeMapSuperposition(unittest.TestCase):
    """Test a generic superposition of three five-branes."""

    def setUp(self):
        self.cfg = SuperpositionConfig.from_tuples(THREE_MAP_CONFIG)

    def test_general_position(self):
        self.assertTrue(self.cfg.general_position())
        self.assertEqual(len(self.cfg.taus), 3)

    def test_hkt_for_right_triple_only(self):
        for point in SAMPLE_POINTS:
            self.assertLess(hkt_residual(self.cfg, point, right_triple(8)), 1e-5)
        worst = max(hkt_residual(self.cfg, point, left_triple(8)) for point in SAMPLE_POINTS)
        self.assertGreater(worst, 1e-2)

    def test_torsion_closed(self):
        for point in SAMPLE_POINTS:
            dH = exterior_derivative(self.cfg.torsion_field(), point, richardson=True)
            self.assertLess(dH.max_norm(), 1e-6)

    def test_solves_equations(self):
        residual = eom_residual(assemble_solution(self.cfg), SAMPLE_POINTS[0])
        self.assertLess(residual.max(), EOM_THRESHOLD)


class TestClassTables(unittest.TestCase):
    """Test the parameter-class tables against curvature and kernels."""

    def test_holonomy_rows(self):
        point = SAMPLE_POINTS[0]
        for name, entries in CLASS_CONFIGS.items():
            minus = assemble_solution(SuperpositionConfig.from_tuples(entries)).connection(-1)
            reports = [algebra_membership(s) for s in curvature_samples(minus, point)]
            reports = [r for r in reports if not r.indeterminate]
            self.assertTrue(reports, msg=name)
            for algebra, expected in HOLONOMY_TABLE[name].items():
                worst = max(r.residuals[algebra] for r in reports)
                if expected:
                    self.assertLess(worst, MEMBER_THRESHOLD, msg=f"{name} {algebra}")
                else:
                    self.assertGreater(worst, NONMEMBER_THRESHOLD, msg=f"{name} {algebra}")

    def test_kernel_calibrated_by_class_row(self):
        for name, entries in CLASS_CONFIGS.items():
            w = calibration_by_name(CLASS_CALIBRATION[name])
            for t in SuperpositionConfig.from_tuples(entries).taus:
                self.assertEqual(t.parameter_class().value, name)
                self.assertAlmostEqual(evaluate_on_plane(w, kernel_frame(t)), 1.0, places=9, msg=name)


if __name__ == "__main__":
    unittest.main()
