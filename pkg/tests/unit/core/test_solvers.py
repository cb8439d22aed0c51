"""Unit tests for the exact linear solvers."""

import unittest

from rational_telescopers.core.algebra import FIELD, Q, RING, X, Y, Z, Kind, act, derivative
from rational_telescopers.core.algebraic import AlgebraicElement
from rational_telescopers.core.solvers import (
    SolverBounds,
    algebraic_nonseparable_test,
    annihilator_search,
    bounded_ode_rational_solve,
    kx_nullspace,
    rational_antiderivative,
    solve_shift_first_order,
)
from rational_telescopers.exceptions.telescoping_exceptions import BoundExceededError

x, y, z, q = RING.gens


class TestSolverBounds(unittest.TestCase):
    """Test cases for the bounds triple."""

    def test_defaults(self):
        """Test the default bounds."""
        self.assertEqual(SolverBounds(), SolverBounds(12, 8, 6))

    def test_parse(self):
        """Test parsing of N:M:B."""
        self.assertEqual(SolverBounds.parse("3:4:5"), SolverBounds(3, 4, 5))
        for text in ("3:4", "a:b:c", "1:2:-1"):
            with self.subTest(text=text):
                with self.assertRaises(ValueError):
                    SolverBounds.parse(text)


class TestFirstOrder(unittest.TestCase):
    """Test cases for first-order shift equations and antiderivatives."""

    def test_shift_solution(self):
        """Test S(b) - b = 1/(y(y+1))."""
        self.assertEqual(solve_shift_first_order(1 / (Y * (Y + 1))), -1 / Y)
        self.assertIsNone(solve_shift_first_order(1 / Y))
        self.assertEqual(solve_shift_first_order(FIELD.zero), FIELD.zero)

    def test_twisted_q_shift(self):
        """Test q^twist T(b) - b = a."""
        a = (Q**2 - 1) * Y
        b = solve_shift_first_order(a, "y", Kind.T, twist=1)
        self.assertEqual(Q * act(b, "y", Kind.T) - b, a)

    def test_rejects_invalid_kinds(self):
        """Test that derivations and twisted shifts raise."""
        with self.assertRaises(ValueError):
            solve_shift_first_order(1 / Y, "y", Kind.D)
        with self.assertRaises(ValueError):
            solve_shift_first_order(1 / Y, "y", Kind.S, twist=1)

    def test_rational_antiderivative(self):
        """Test rational antiderivatives and their absence."""
        self.assertEqual(rational_antiderivative(1 / Y**2), -1 / Y)
        self.assertIsNone(rational_antiderivative(1 / Y))
        self.assertEqual(rational_antiderivative(2 * Y / (Y**2 + X) ** 2), -1 / (Y**2 + X))


class TestNullspace(unittest.TestCase):
    """Test cases for relations with coefficients in x."""

    def test_relation_in_x(self):
        """Test x*y - y*x = 0."""
        [relation] = kx_nullspace([[Y], [X * Y]])
        self.assertEqual(relation[0] / relation[1], -X)

    def test_independent(self):
        """Test functions without a relation over K(x)."""
        self.assertEqual(kx_nullspace([[1 / (Y + Z)], [1 / (Y + Z + 1)]]), [])
        self.assertEqual(kx_nullspace([]), [])

    def test_three_vectors(self):
        """Test (y + z) - y - z = 0."""
        [relation] = kx_nullspace([[Y + Z], [Y], [Z]])
        self.assertEqual(relation[1] / relation[0], -FIELD.one)
        self.assertEqual(relation[2] / relation[0], -FIELD.one)

    def test_annihilator(self):
        """Test the annihilator of x*y in D_x."""
        operator = annihilator_search([X * Y], Kind.D, SolverBounds())
        self.assertEqual(operator.order, 1)
        self.assertFalse(operator.apply(X * Y))
        self.assertIsNone(annihilator_search([1 / (X + Y)], Kind.D, SolverBounds(max_order=2)))


class TestBoundedOde(unittest.TestCase):
    """Test cases for the bounded rational solver."""

    def test_solves_scalar_equation(self):
        """Test D(c) = -1/y^2."""
        [c] = bounded_ode_rational_solve([[FIELD.zero]], [-1 / Y**2], SolverBounds())
        self.assertEqual(derivative(c, "y"), -1 / Y**2)

    def test_zero_right_hand_side(self):
        """Test that a zero system has the zero solution."""
        self.assertEqual(
            bounded_ode_rational_solve([[FIELD.zero]], [FIELD.zero], SolverBounds()), [FIELD.zero]
        )

    def test_bound_exceeded(self):
        """Test that a missing solution raises."""
        with self.assertRaises(BoundExceededError):
            bounded_ode_rational_solve([[FIELD.zero]], [1 / Y], SolverBounds(2, 2, 1))


class TestSeparability(unittest.TestCase):
    """Test cases for the separability test of algebraic residues."""

    def test_separable(self):
        """Test a residue annihilated by x*D_x - 1."""
        alpha = AlgebraicElement.of(X * Z, z**2 - y)
        result = algebraic_nonseparable_test(alpha, SolverBounds(max_order=3))
        self.assertEqual(result.status, "separable")
        self.assertEqual(result.telescoper.order, 1)

    def test_nonseparable(self):
        """Test a residue whose valuations at x + y keep dropping."""
        alpha = AlgebraicElement.of(Z / (X + Y), z**2 - y)
        result = algebraic_nonseparable_test(alpha, SolverBounds(max_order=3))
        self.assertEqual(result.status, "nonseparable")
        self.assertEqual(result.factor, x + y)

    def test_unsupported_without_order(self):
        """Test that a zero order bound leaves the question open."""
        alpha = AlgebraicElement.of(Z / (X + Y), z**2 - y)
        self.assertEqual(algebraic_nonseparable_test(alpha, SolverBounds(max_order=0)).status, "unsupported")


if __name__ == "__main__":
    unittest.main()
