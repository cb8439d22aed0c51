"""Unit tests for residues in algebraic extensions."""

import unittest

from rational_telescopers.core.algebra import FIELD, RING, X, Y, Z, Kind, derivative, multiplicity
from rational_telescopers.core.algebraic import (
    AlgebraicElement,
    derivation_matrix,
    residue,
    residue_fraction,
    vector_hermite_reduce,
)
from rational_telescopers.exceptions.telescoping_exceptions import ZeroDivisorError

x, y, z, q = RING.gens

MODULUS = z**2 - y


class TestAlgebraicElement(unittest.TestCase):
    """Test cases for arithmetic with a root of z^2 - y."""

    def test_coordinates(self):
        """Test reduction into the power basis."""
        self.assertEqual(AlgebraicElement.of(Z, MODULUS).coords, (FIELD.zero, FIELD.one))
        self.assertEqual(AlgebraicElement.of(Z**3 + X, MODULUS).coords, (X, Y))
        with self.assertRaises(ValueError):
            AlgebraicElement(MODULUS, (FIELD.one,))

    def test_arithmetic(self):
        """Test products and inverses."""
        beta = AlgebraicElement.of(Z, MODULUS)
        self.assertEqual((beta * beta).coords, (Y, FIELD.zero))
        self.assertEqual(beta.inverse().coords, (FIELD.zero, 1 / Y))
        self.assertTrue((beta - beta).is_zero())
        with self.assertRaises(ZeroDivisorError):
            AlgebraicElement.zero(MODULUS).inverse()

    def test_derivative_of_root(self):
        """Test D_y(beta) = beta/(2y)."""
        beta = AlgebraicElement.of(Z, MODULUS)
        self.assertEqual(beta.derivative("y").coords, (FIELD.zero, 1 / (2 * Y)))
        self.assertTrue(beta.derivative("x").is_zero())
        self.assertEqual(derivation_matrix(MODULUS, "y")[0], (FIELD.zero, FIELD.zero))

    def test_leibniz_rule(self):
        """Test the product rule for both derivations."""
        modulus = z**2 - x * y - 1
        a = AlgebraicElement.of(X + Z, modulus)
        b = AlgebraicElement.of(Y * Z + 1, modulus)
        for var in ("x", "y"):
            with self.subTest(var=var):
                left = (a * b).derivative(var)
                right = a.derivative(var) * b + a * b.derivative(var)
                self.assertEqual(left.coords, right.coords)

    def test_act(self):
        """Test shifts in variables the modulus does not involve."""
        element = AlgebraicElement.of(X * Z, MODULUS)
        self.assertEqual(element.act("x", Kind.S).coords, (FIELD.zero, X + 1))
        with self.assertRaises(ValueError):
            element.act("y", Kind.S)

    def test_valuation(self):
        """Test the order at a factor of the coordinate denominators."""
        element = AlgebraicElement.of(Z / (Y * (X + Y)), MODULUS)
        self.assertEqual(element.valuation(x + y), -1)
        self.assertEqual(AlgebraicElement.zero(MODULUS).valuation(x + y), float("inf"))


class TestResidues(unittest.TestCase):
    """Test cases for residues at the roots of a modulus."""

    def test_residue(self):
        """Test the residue of 1/(z^2 - y)."""
        self.assertEqual(residue(FIELD.one, MODULUS).coords, (FIELD.zero, 1 / (2 * Y)))

    def test_residue_fraction_inverts_residue(self):
        """Test that residue_fraction rebuilds a proper fraction."""
        for a in (FIELD.one, X + Z, Y * Z / (X + 1)):
            with self.subTest(a=a):
                self.assertEqual(residue_fraction(residue(a, MODULUS), MODULUS), a / FIELD(MODULUS))


class TestVectorHermite(unittest.TestCase):
    """Test cases for Hermite reduction of first-order systems."""

    def _check(self, avec, matrix, red):
        for i, a in enumerate(avec):
            rebuilt = derivative(red.certificate[i], "y") + red.remainder[i]
            for k in range(len(avec)):
                rebuilt += red.certificate[k] * matrix[k][i]
            self.assertEqual(rebuilt, a)

    def test_scalar_case(self):
        """Test that a zero matrix gives ordinary Hermite reduction."""
        avec = [1 / Y**2]
        matrix = [[FIELD.zero]]
        red = vector_hermite_reduce(avec, matrix)
        self.assertEqual(red.certificate, (-1 / Y,))
        self.assertEqual(red.remainder, (FIELD.zero,))

    def test_system_identity(self):
        """Test the identity and the lowered multiplicities for a coupled system."""
        avec = [1 / (X + Y) ** 3, X / (X + Y) ** 2]
        matrix = [[FIELD.zero, 1 / Y], [FIELD.one, FIELD.zero]]
        red = vector_hermite_reduce(avec, matrix)
        self._check(avec, matrix, red)
        for r in red.remainder:
            self.assertLessEqual(multiplicity(x + y, r.denom), 1)


if __name__ == "__main__":
    unittest.main()
