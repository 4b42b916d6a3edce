import unittest
from itertools import permutations

import numpy as np
from hypothesis import given, settings as hyp_settings
import hypothesis.strategies as st

from src.errors import (
    DimensionMismatchError,
    FormDegreeError,
    NonPositiveMetricError,
    SingularityProximityError,
)
from src.exterior import (
    AltForm,
    FormField,
    Plane,
    ScalarField,
    exterior_derivative,
    hodge_star,
    interior,
    j_derivation,
    kahler_form,
    norm,
    pullback,
    pullback_field,
    pullback_metric,
    wedge,
)
from src.exterior.alt_form import multi_indices, sort_with_sign
from src.quat import Quaternion, right_triple


def random_form(rng: np.random.Generator, n: int, k: int) -> AltForm:
    return AltForm(n, k, rng.normal(size=len(multi_indices(n, k))))


def random_metric(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.normal(size=(n, n))
    return a @ a.T + n * np.eye(n)


def brute_force_wedge_2_2(alpha: np.ndarray, beta: np.ndarray, frame: np.ndarray) -> float:
    """(α∧β)(X₁..X₄) summed over shuffles, from the component matrices."""
    total = 0.0
    for perm in permutations(range(4)):
        if perm[0] < perm[1] and perm[2] < perm[3]:
            sign, _ = sort_with_sign(perm)
            X = frame[:, perm]
            total += sign * (X[:, 0] @ alpha @ X[:, 1]) * (X[:, 2] @ beta @ X[:, 3])
    return total


class TestAltForm(unittest.TestCase):
    """Test storage, evaluation and the wedge product."""

    def setUp(self):
        self.rng = np.random.default_rng(11)

    def test_basis_evaluation(self):
        """Test dx¹∧dx² on the (e₁, e₂)-plane."""
        form = wedge(AltForm.basis(4, (0,)), AltForm.basis(4, (1,)))
        self.assertAlmostEqual(form.evaluate(np.eye(4)[:, :2]), 1.0)
        self.assertAlmostEqual(form.evaluate(np.eye(4)[:, [1, 0]]), -1.0)

    def test_repeated_column_vanishes(self):
        """Test that a frame with a repeated column gives 0."""
        form = random_form(self.rng, 8, 4)
        frame = self.rng.normal(size=(8, 4))
        frame[:, 3] = frame[:, 1]
        self.assertAlmostEqual(form.evaluate(frame), 0.0, places=10)

    def test_tensor_round_trip(self):
        """Test that the full tensor restricts back to the same coefficients."""
        form = random_form(self.rng, 5, 3)
        tensor = form.to_tensor()
        self.assertAlmostEqual(tensor[2, 0, 4], -form.component((0, 2, 4)))
        self.assertTrue(AltForm.from_tensor(tensor).allclose(form))

    def test_matrix_round_trip(self):
        """Test 2-forms against their antisymmetric matrices."""
        form = random_form(self.rng, 8, 2)
        matrix = form.to_matrix()
        np.testing.assert_allclose(matrix, -matrix.T)
        x, y = self.rng.normal(size=8), self.rng.normal(size=8)
        self.assertAlmostEqual(form.evaluate(np.column_stack([x, y])), x @ matrix @ y, places=10)

    def test_graded_commutativity(self):
        """Test a∧b = (−1)^{deg a·deg b} b∧a."""
        for ka, kb in [(1, 1), (1, 2), (2, 2), (2, 3), (1, 4)]:
            a, b = random_form(self.rng, 8, ka), random_form(self.rng, 8, kb)
            sign = (-1) ** (ka * kb)
            self.assertTrue(wedge(a, b).allclose(sign * wedge(b, a), atol=1e-10))

    def test_associativity(self):
        """Test (a∧b)∧c = a∧(b∧c)."""
        a, b, c = (random_form(self.rng, 6, k) for k in (1, 2, 2))
        self.assertTrue(wedge(wedge(a, b), c).allclose(wedge(a, wedge(b, c)), atol=1e-10))

    def test_kahler_square_brute_force(self):
        """Test ω_{J₁}∧ω_{J₁} on the first quaternionic line of ℝ⁸."""
        J1 = right_triple(8).J1
        omega = kahler_form(J1)
        square = wedge(omega, omega)
        self.assertEqual(square.degree, 4)
        frame = np.eye(8)[:, :4]
        expected = brute_force_wedge_2_2(J1.T, J1.T, frame)
        self.assertNotAlmostEqual(expected, 0.0)
        self.assertAlmostEqual(square.evaluate(frame), expected, places=12)

    def test_wedge_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            wedge(AltForm.basis(4, (0,)), AltForm.basis(8, (0,)))
        with self.assertRaises(FormDegreeError):
            wedge(AltForm.volume(4), AltForm.basis(4, (0,)))

    def test_evaluate_many_matches_single(self):
        """Test batched evaluation against single frames."""
        form = random_form(self.rng, 8, 4)
        frames = self.rng.normal(size=(7, 8, 4))
        batch = form.evaluate_many(frames)
        for frame, value in zip(frames, batch):
            self.assertAlmostEqual(form.evaluate(frame), value, places=10)


class TestInteriorAndDerivation(unittest.TestCase):
    """Test contraction and the i_J derivation."""

    def setUp(self):
        self.rng = np.random.default_rng(3)
        self.e12 = AltForm.basis(4, (0, 1))

    def test_interior_examples(self):
        """Test i_{e₁}(dx¹∧dx²) = dx² and i_{e₃}(dx¹∧dx²) = 0."""
        e = np.eye(4)
        self.assertTrue(interior(e[0], self.e12).allclose(AltForm.basis(4, (1,))))
        self.assertTrue(interior(e[1], self.e12).allclose(-AltForm.basis(4, (0,))))
        self.assertTrue(interior(e[2], self.e12).allclose(AltForm.zero(4, 1)))

    def test_interior_twice_vanishes(self):
        """Test i_v i_v a = 0."""
        a, v = random_form(self.rng, 8, 3), self.rng.normal(size=8)
        self.assertLess(interior(v, interior(v, a)).max_norm(), 1e-12)

    def test_interior_matches_evaluation(self):
        """Test (i_v a)(X₂, X₃) = a(v, X₂, X₃)."""
        a = random_form(self.rng, 6, 3)
        frame = self.rng.normal(size=(6, 3))
        lhs = interior(frame[:, 0], a).evaluate(frame[:, 1:])
        self.assertAlmostEqual(lhs, a.evaluate(frame), places=10)

    def test_interior_of_scalar_rejected(self):
        with self.assertRaises(FormDegreeError):
            interior(np.ones(4), AltForm.scalar(4, 1.0))

    def test_identity_derivation_scales_by_degree(self):
        """Test i_Id a = k·a."""
        a = random_form(self.rng, 8, 3)
        self.assertTrue(j_derivation(np.eye(8), a).allclose(3 * a, atol=1e-12))

    def test_derivation_slot_sum(self):
        """Test i_J a against the slot-sum definition."""
        a = random_form(self.rng, 5, 2)
        J = self.rng.normal(size=(5, 5))
        frame = self.rng.normal(size=(5, 2))
        slot_sum = a.evaluate(np.column_stack([J @ frame[:, 0], frame[:, 1]])) \
            + a.evaluate(np.column_stack([frame[:, 0], J @ frame[:, 1]]))
        self.assertAlmostEqual(j_derivation(J, a).evaluate(frame), slot_sum, places=10)

    def test_leibniz_rule(self):
        """Test i_J(a∧b) = (i_J a)∧b + a∧(i_J b)."""
        a, b = random_form(self.rng, 8, 2), random_form(self.rng, 8, 1)
        J = self.rng.normal(size=(8, 8))
        lhs = j_derivation(J, wedge(a, b))
        rhs = wedge(j_derivation(J, a), b) + wedge(a, j_derivation(J, b))
        self.assertTrue(lhs.allclose(rhs, atol=1e-10))

    def test_kahler_form_is_invariant(self):
        """Test i_{J₁}ω_{J₁} = 0 on ℝ⁴."""
        J1 = right_triple(4).J1
        self.assertLess(j_derivation(J1, kahler_form(J1)).max_norm(), 1e-15)


class TestHodgeStar(unittest.TestCase):
    """Test the Riemannian Hodge star."""

    def setUp(self):
        self.rng = np.random.default_rng(5)

    def test_standard_orientation(self):
        """Test ⋆(dx¹∧dx²) = dx³∧dx⁴ on Euclidean ℝ⁴."""
        self.assertTrue(hodge_star(None, AltForm.basis(4, (0, 1))).allclose(AltForm.basis(4, (2, 3))))
        self.assertTrue(hodge_star(None, AltForm.basis(4, (0, 1)), -1).allclose(-AltForm.basis(4, (2, 3))))

    def test_star_of_one_conformal(self):
        """Test ⋆1 = c² dx¹∧…∧dx⁴ for the metric c·δ."""
        c = 2.5
        star = hodge_star(c * np.eye(4), AltForm.scalar(4, 1.0))
        self.assertTrue(star.allclose(c ** 2 * AltForm.volume(4)))

    def test_double_star(self):
        """Test ⋆⋆a = (−1)^{k(n−k)} a for random metrics."""
        for n, k in [(4, 2), (4, 1), (5, 2), (8, 3)]:
            g = random_metric(self.rng, n)
            a = random_form(self.rng, n, k)
            twice = hodge_star(g, hodge_star(g, a))
            self.assertTrue(twice.allclose((-1) ** (k * (n - k)) * a, atol=1e-9))

    def test_isometry(self):
        """Test |⋆a|_g = |a|_g."""
        g = random_metric(self.rng, 6)
        a = random_form(self.rng, 6, 2)
        self.assertAlmostEqual(norm(hodge_star(g, a), g), norm(a, g), places=9)

    def test_wedge_with_star_is_norm_volume(self):
        """Test a∧⋆a = |a|² vol_g."""
        g = random_metric(self.rng, 5)
        a = random_form(self.rng, 5, 2)
        lhs = wedge(a, hodge_star(g, a))
        volume = np.sqrt(np.linalg.det(g)) * AltForm.volume(5)
        self.assertTrue(lhs.allclose(norm(a, g) ** 2 * volume, atol=1e-9))

    def test_rejects_indefinite_metric(self):
        with self.assertRaises(NonPositiveMetricError):
            hodge_star(np.diag([1.0, 1.0, 1.0, -1.0]), AltForm.basis(4, (0,)))


class TestExteriorDerivative(unittest.TestCase):
    """Test the finite-difference exterior derivative."""

    def setUp(self):
        # f = sin(x¹) x² dx³ + cos(x²) dx¹
        self.trig = FormField(
            3,
            lambda x: AltForm(3, 1, [np.cos(x[1]), 0.0, np.sin(x[0]) * x[1]]),
            degree=1,
        )
        # df = cos(x¹) x² dx¹∧dx³ + sin(x¹) dx²∧dx³ + sin(x²) dx¹∧dx²
        self.trig_exact = lambda x: AltForm(3, 2, [np.sin(x[1]), np.cos(x[0]) * x[1], np.sin(x[0])])

    def test_exact_on_linear_coefficients(self):
        """Test d(x¹dx²) = dx¹∧dx² to machine precision."""
        field = FormField(4, lambda x: AltForm.basis(4, (1,), x[0]), degree=1)
        d = exterior_derivative(field, [0.3, -1.0, 2.0, 0.5], 1e-4)
        self.assertTrue(d.allclose(AltForm.basis(4, (0, 1)), atol=1e-10))

    def test_second_order_convergence(self):
        """Test that halving the step reduces the error about fourfold."""
        x = np.array([0.4, 0.9, -0.3])
        errors = []
        for step in (1e-2, 5e-3):
            d = exterior_derivative(self.trig, x, step)
            errors.append((d - self.trig_exact(x)).max_norm())
        self.assertAlmostEqual(errors[0] / errors[1], 4.0, delta=0.3)

    def test_richardson_improves(self):
        x = np.array([0.4, 0.9, -0.3])
        plain = (exterior_derivative(self.trig, x, 1e-2) - self.trig_exact(x)).max_norm()
        refined = (exterior_derivative(self.trig, x, 1e-2, richardson=True) - self.trig_exact(x)).max_norm()
        self.assertLess(refined, plain / 10)

    def test_d_squared_vanishes(self):
        """Test d(df) = 0 for a smooth 1-form."""
        step = 1e-3
        d_field = FormField(3, lambda y: exterior_derivative(self.trig, y, step), degree=2)
        dd = exterior_derivative(d_field, [0.2, -0.7, 1.1], step)
        self.assertLess(dd.max_norm(), 1e-6)

    def test_harmonic_function_gradient(self):
        """Test dh = −2 dx¹ for h = 1 + 1/|q|² at q = (1, 0, 0, 0)."""
        h = ScalarField(4, lambda q: 1.0 + 1.0 / (q @ q), distance=lambda q: float(np.linalg.norm(q)))
        dh = exterior_derivative(h, [1.0, 0.0, 0.0, 0.0], 1e-4)
        np.testing.assert_allclose(dh.coefficients, [-2.0, 0.0, 0.0, 0.0], atol=1e-7)

    def test_clearance_enforced(self):
        """Test that stencils near the excluded set are rejected."""
        h = ScalarField(4, lambda q: 1.0 / (q @ q), distance=lambda q: float(np.linalg.norm(q)))
        with self.assertRaises(SingularityProximityError):
            exterior_derivative(h, [1e-4, 0.0, 0.0, 0.0], 1e-4)


class TestPullback(unittest.TestCase):
    """Test pullbacks of forms and metrics."""

    def setUp(self):
        self.rng = np.random.default_rng(13)

    def test_identity(self):
        a = random_form(self.rng, 8, 3)
        self.assertTrue(pullback(np.eye(8), a).allclose(a))

    def test_homogeneity(self):
        """Test (2·Id)*a = 2ᵏ a."""
        a = random_form(self.rng, 8, 4)
        self.assertTrue(pullback(2 * np.eye(8), a).allclose(16 * a, atol=1e-10))

    def test_projection_metric(self):
        """Test τ*(dq dq̄) for τ(u) = u¹ is flat on the first factor only."""
        jacobian = np.hstack([Quaternion.one().left_matrix(), np.zeros((4, 4))])
        expected = np.diag([1.0, 1, 1, 1, 0, 0, 0, 0])
        np.testing.assert_array_equal(pullback_metric(jacobian, np.eye(4)), expected)

    def test_evaluation_definition(self):
        """Test (A*a)(X…) = a(AX…) for a rectangular A."""
        A = self.rng.normal(size=(4, 8))
        a = random_form(self.rng, 4, 2)
        frame = self.rng.normal(size=(8, 2))
        self.assertAlmostEqual(pullback(A, a).evaluate(frame), a.evaluate(A @ frame), places=10)

    def test_commutes_with_wedge(self):
        A = self.rng.normal(size=(4, 8))
        a, b = random_form(self.rng, 4, 1), random_form(self.rng, 4, 2)
        lhs = pullback(A, wedge(a, b))
        rhs = wedge(pullback(A, a), pullback(A, b))
        self.assertTrue(lhs.allclose(rhs, atol=1e-10))

    def test_commutes_with_d(self):
        """Test τ*(df) = d(τ*f) for an affine quaternionic map."""
        p1, p2 = Quaternion(0.5, 1.0, 0.0, -0.5), Quaternion(0.2, 0.0, 1.0, 0.3)
        offset = np.array([0.1, -0.2, 0.3, 0.0])
        A = np.hstack([p1.left_matrix(), p2.left_matrix()])
        tau = lambda u: A @ u - offset
        f = ScalarField(4, lambda q: np.sin(q[0]) * q[1] + q[2] * q[3] ** 2)
        pulled = pullback_field(f, tau, lambda u: A, 8)
        x = self.rng.normal(size=8)
        lhs = pullback(A, exterior_derivative(f, tau(x), 1e-4))
        rhs = exterior_derivative(pulled, x, 1e-4)
        self.assertTrue(lhs.allclose(rhs, atol=1e-6))


class TestPlane(unittest.TestCase):
    """Test oriented planes."""

    def test_rejects_non_orthonormal(self):
        with self.assertRaises(ValueError):
            Plane(np.array([[1.0, 1.0], [0.0, 1.0], [0.0, 0.0]]))

    def test_from_vectors_keeps_orientation(self):
        """Test that orthonormalization keeps the sign of the volume."""
        vectors = np.array([[2.0, 1.0], [0.0, 1.0], [0.0, 0.0]])
        plane = Plane.from_vectors(vectors)
        area = AltForm.basis(3, (0, 1))
        self.assertGreater(area.evaluate(plane.frame), 0.0)
        self.assertLess(area.evaluate(plane.reversed().frame), 0.0)

    def test_principal_angles(self):
        a = Plane(np.eye(4)[:, :2])
        b = Plane(np.eye(4)[:, [1, 0]])
        c = Plane(np.eye(4)[:, [0, 2]])
        self.assertAlmostEqual(a.max_angle(b), 0.0, places=6)
        self.assertAlmostEqual(a.max_angle(c), np.pi / 2, places=12)


if __name__ == "__main__":
    unittest.main()
