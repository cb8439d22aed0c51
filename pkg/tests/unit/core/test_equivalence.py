"""Unit tests for shift and q-shift equivalence."""

import unittest

from rational_telescopers.core.algebra import FIELD, Q, RING, GroupSpec, Kind
from rational_telescopers.core.equivalence import (
    dispersion,
    extended_gcd,
    group_equiv,
    integer_linear,
    invariance_search,
    lattice_invariance,
    orbit_partition,
    q_integer_linear,
    q_power_ratio,
    q_shift_equiv,
    rational_separable,
    restrict_stabilizer,
    shift_equiv,
    stabilizer_lattice,
)

x, y, z, q = RING.gens

ORBIT_FACTORS = [
    z**2 + 2 * x + y,
    z**2 + 2 * x + y + 1,
    z**2 + 2 * q * x + y,
    z**2 + 2 * q * x + y + 2 * z + 2,
]


class TestIntegerLinear(unittest.TestCase):
    """Test cases for polynomials in an integer-linear form."""

    def test_detects_linear_form(self):
        """Test p = r(x + y)."""
        p = x**2 + 2 * x * y + y**2 + 3
        shape = integer_linear(p, ("x", "y"))
        self.assertIsNotNone(shape)
        self.assertIn(shape.direction, [(1, 1), (-1, -1)])
        self.assertEqual(shape.value(), FIELD(p))

    def test_rejects_nonlinear_form(self):
        """Test that x^2 + y is not integer-linear."""
        self.assertIsNone(integer_linear(x**2 + y, ("x", "y")))

    def test_constant_direction_with_three_variables(self):
        """Test a form in x, y and z."""
        shape = integer_linear(2 * x - y + 3 * z + 1, ("x", "y", "z"))
        self.assertIn(shape.direction, [(2, -1, 3), (-2, 1, -3)])

    def test_q_integer_linear_signed(self):
        """Test that x + y needs a signed direction."""
        self.assertIsNone(q_integer_linear(x + y, ("x", "y")))
        shape = q_integer_linear(x + y, ("x", "y"), signed=True)
        self.assertIsNotNone(shape)
        self.assertEqual(shape.value(), FIELD(x + y))

    def test_q_integer_linear_unsigned(self):
        """Test a monomial times a polynomial in x*y."""
        p = x * y**2 + q * x**2 * y**3
        shape = q_integer_linear(p, ("x", "y"))
        self.assertEqual(shape.direction, (1, 1))
        self.assertEqual(shape.value(), FIELD(p))

    def test_q_integer_linear_rejects_off_line_support(self):
        """Test support that is not on a line."""
        self.assertIsNone(q_integer_linear(x + y**2 + 1, ("x", "y"), signed=True))


class TestGroupEquivalence(unittest.TestCase):
    """Test cases for relations psi(p1) = q^s p2."""

    def test_q_dilation_relation(self):
        """Test a relation under the dilation of x."""
        relation = group_equiv(ORBIT_FACTORS[0], ORBIT_FACTORS[2], GroupSpec.parse("tx"))
        self.assertEqual(relation.as_dict(), {"x": 1})
        self.assertEqual(relation.s, 0)

    def test_shift_equiv(self):
        """Test that the found shift maps p1 to p2."""
        exps = shift_equiv(x + y, x + y + 3, ("x", "y"))
        self.assertEqual(sum(exps.values()), 3)
        self.assertIsNone(shift_equiv(x + y, x + 2 * y, ("x", "y")))
        self.assertIsNone(shift_equiv(x**2 + y, x**2 + 2 * y, ("x", "y")))

    def test_q_shift_equiv(self):
        """Test a q-power scalar in the relation."""
        exps, s = q_shift_equiv(x + y, q * x + q * y, ("x", "y"))
        group = GroupSpec.parse("tx,ty")
        self.assertEqual(group.act(FIELD(x + y), exps), Q**s * FIELD(q * x + q * y))

    def test_q_power_ratio(self):
        """Test detection of q-power multiples."""
        self.assertEqual(q_power_ratio(q**2 * (x + 1), x + 1), 2)
        self.assertIsNone(q_power_ratio(2 * (x + 1), x + 1))

    def test_stabilizer_lattice(self):
        """Test the stabilizer of x + y under shifts."""
        basis = stabilizer_lattice(x + y, GroupSpec.parse("sx,sy"))
        self.assertEqual(len(basis), 1)
        exps, s = basis[0]
        self.assertEqual(exps["x"] + exps["y"], 0)
        self.assertNotEqual(exps["x"], 0)

    def test_invariance_search(self):
        """Test the minimal invariance of a factor."""
        witness = invariance_search(x + y, GroupSpec.parse("sx,sy"))
        self.assertEqual((witness.m, witness.n), (1, 1))
        self.assertIsNone(invariance_search(x**2 + y, GroupSpec.parse("sx,sy")))
        with self.assertRaises(ValueError):
            invariance_search(x + y, GroupSpec.parse("sy"))

    def test_shared_invariance(self):
        """Test a direction fixing a denominator factor and a factor free of z."""
        group = GroupSpec.parse("sx,sy,sz")
        d = x + y + z
        basis = restrict_stabilizer(stabilizer_lattice(d, group), x + y, group)
        witness = lattice_invariance(d, basis, group)
        self.assertEqual((witness.m, witness.n, witness.k), (1, 1, 0))
        narrowed = restrict_stabilizer(stabilizer_lattice(d, group), x**2 + y, group)
        self.assertIsNone(lattice_invariance(d, narrowed, group))

    def test_shared_q_invariance(self):
        """Test a shared q-dilation of x and y."""
        group = GroupSpec.parse("tx,ty,tz")
        d = x * y + z
        basis = restrict_stabilizer(stabilizer_lattice(d, group), x * y + 1, group)
        witness = lattice_invariance(d, basis, group)
        self.assertEqual((witness.m, witness.n, witness.k, witness.s), (1, 1, 0, 0))

    def test_extended_gcd(self):
        """Test Bezout coefficients for several integers."""
        for values in ([4, 6], [0, -3], [6, 10, 15]):
            with self.subTest(values=values):
                g, coeffs = extended_gcd(values)
                self.assertEqual(sum(c * v for c, v in zip(coeffs, values)), g)
                self.assertGreater(g, 0)
        self.assertEqual(extended_gcd([]), (0, []))


class TestOrbitPartition(unittest.TestCase):
    """Test cases for the orbit partition of denominator factors."""

    def test_orbit_counts(self):
        """Test the number of orbits as the group grows."""
        for text, count in [("sy", 3), ("tx,sy", 2), ("tx,sy,sz", 1)]:
            with self.subTest(group=text):
                self.assertEqual(len(orbit_partition(ORBIT_FACTORS, GroupSpec.parse(text))), count)

    def test_members_reproduce_factors(self):
        """Test factor = scalar * psi(representative) for every member."""
        group = GroupSpec.parse("tx,sy,sz")
        for orbit in orbit_partition(ORBIT_FACTORS, group):
            for member in orbit.members:
                image = group.act(FIELD(orbit.representative), dict(member.exponents))
                self.assertEqual(FIELD(member.factor), member.scalar * image)


class TestDispersion(unittest.TestCase):
    """Test cases for shift and q-shift dispersion sets."""

    def test_shift_dispersion(self):
        """Test the shifts where two factors meet."""
        self.assertEqual(dispersion(z + x, z + x + 3, "z", Kind.S), [-3])
        self.assertEqual(dispersion(z + x, z**2 + y, "z", Kind.S), [])

    def test_q_dispersion(self):
        """Test the dilations where two factors meet."""
        self.assertEqual(dispersion(z + x, q**2 * z + x, "z", Kind.T), [-2])

    def test_dispersion_rejects_derivations(self):
        """Test that derivations have no dispersion."""
        with self.assertRaises(ValueError):
            dispersion(z, z, "z", Kind.D)

    def test_rational_separable(self):
        """Test splitting a denominator into x and y parts."""
        self.assertEqual(rational_separable(1 / FIELD((x + 1) * y)), (x + 1, y))
        self.assertIsNone(rational_separable(1 / FIELD(x + y)))


if __name__ == "__main__":
    unittest.main()
