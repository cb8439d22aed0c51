"""Unit tests for Hermite, Abramov and orbit reductions."""

import unittest

from hypothesis import given
from hypothesis import strategies as st

from rational_telescopers.core.algebra import (
    FIELD,
    Q,
    RING,
    X,
    Y,
    Z,
    FactoredDen,
    GroupSpec,
    Kind,
    act,
    is_squarefree,
)
from rational_telescopers.core.equivalence import dispersion
from rational_telescopers.core.operators import theta
from rational_telescopers.core.reductions import (
    abramov_reduce,
    common_reduce,
    coprime_base,
    hermite_reduce,
    orbit_normal_form,
    q_abramov_reduce,
    sum_polynomial,
    telescoping_certificate,
)
from rational_telescopers.exceptions.telescoping_exceptions import FactorizationRequiredError

x, y, z, q = RING.gens

SAMPLES = [
    1 / (Z * (Z + 1)),
    (Z**3 + X) / ((Z + X) ** 2 * (Z - Y)),
    Y / (Z**2 + Y) ** 3,
    1 / (Z * (Z + X) * (Q * Z + X)),
    Z**2 + X / (Z + Y + 2),
]


class TestHermiteReduction(unittest.TestCase):
    """Test cases for Hermite reduction."""

    def test_identity(self):
        """Test f = D(g) + r with a squarefree denominator."""
        for f in SAMPLES:
            with self.subTest(f=f):
                red = hermite_reduce(f, "z")
                self.assertEqual(theta(red.certificate, "z", Kind.D) + red.remainder, f)
                self.assertTrue(is_squarefree(red.denominator, "z"))

    def test_exact_derivative(self):
        """Test that derivatives reduce to zero."""
        red = hermite_reduce(1 / Y**2, "y")
        self.assertEqual(red.certificate, -1 / Y)
        self.assertFalse(red.numerator)

    def test_logarithmic_part_remains(self):
        """Test that 1/y keeps a remainder."""
        self.assertEqual(hermite_reduce(1 / Y, "y").remainder, 1 / Y)


class TestAbramovReduction(unittest.TestCase):
    """Test cases for the shift and q-shift reductions."""

    def test_shift_identity(self):
        """Test f = S(g) - g + r."""
        for f in SAMPLES:
            with self.subTest(f=f):
                red = abramov_reduce(f, "z")
                self.assertEqual(theta(red.certificate, "z", Kind.S) + red.remainder, f)

    def test_summable(self):
        """Test a telescoping sum."""
        red = abramov_reduce(1 / (Z * (Z + 1)), "z")
        self.assertFalse(red.numerator)
        self.assertEqual(red.certificate, -1 / Z)

    def test_not_summable(self):
        """Test that 1/z keeps its remainder."""
        self.assertEqual(abramov_reduce(1 / Z, "z").remainder, 1 / Z)

    def test_sum_polynomial(self):
        """Test the antidifference of a polynomial."""
        for p in (Z**2, X * Z**3 + Y, FIELD(5)):
            with self.subTest(p=p):
                self.assertEqual(theta(sum_polynomial(p, "z"), "z", Kind.S), p)

    def test_q_shift_identity(self):
        """Test f = T(g) - g + c + r."""
        for f in SAMPLES:
            with self.subTest(f=f):
                red = q_abramov_reduce(f, "z")
                self.assertEqual(theta(red.certificate, "z", Kind.T) + red.remainder, f)

    def test_q_summable(self):
        """Test q-telescoping fractions and Laurent monomials."""
        self.assertFalse(q_abramov_reduce(1 / (Z + 1) - 1 / (Q * Z + 1), "z").remainder)
        self.assertFalse(q_abramov_reduce(Z + 1 / Z**2, "z").remainder)

    def test_q_constant(self):
        """Test that the var-free part is kept as the constant."""
        red = q_abramov_reduce(X + Z, "z")
        self.assertEqual(red.constant, X)
        self.assertEqual(red.certificate, Z / (Q - 1))

    def test_telescoping_certificate(self):
        """Test theta^n(c) - c = theta(G) - G."""
        c = X / (Z + Y)
        for kind in (Kind.S, Kind.T):
            for n in (3, -2, 0):
                with self.subTest(kind=kind, n=n):
                    g = telescoping_certificate(c, "z", kind, n)
                    self.assertEqual(theta(g, "z", kind), act(c, "z", kind, n) - c)


class TestReductionCorpus(unittest.TestCase):
    """Randomized reconstruction identities."""

    @given(
        st.lists(st.integers(min_value=-3, max_value=3), min_size=1, max_size=3),
        st.integers(min_value=-3, max_value=3),
        st.integers(min_value=1, max_value=3),
    )
    def test_reconstruction(self, coeffs, a, k):
        """Test that every reduction reproduces a random fraction."""
        numerator = X + sum((c * Z**i for i, c in enumerate(coeffs)), FIELD.zero)
        f = numerator / ((Z + a) ** k * (Z**2 + Y))
        red = hermite_reduce(f, "z")
        self.assertEqual(theta(red.certificate, "z", Kind.D) + red.remainder, f)
        self.assertTrue(is_squarefree(red.denominator, "z"))
        red = abramov_reduce(f, "z")
        self.assertEqual(theta(red.certificate, "z", Kind.S) + red.remainder, f)
        self.assertLessEqual(set(dispersion(red.denominator, red.denominator, "z", Kind.S)), {0})
        red = q_abramov_reduce(f, "z")
        self.assertEqual(theta(red.certificate, "z", Kind.T) + red.remainder, f)
        self.assertLessEqual(set(dispersion(red.denominator, red.denominator, "z", Kind.T)), {0})


class TestCommonReduction(unittest.TestCase):
    """Test cases for reductions over shared representatives."""

    def test_equivalent_fractions_share_remainders(self):
        """Test that shift-equivalent fractions reduce to the same remainder."""
        results = common_reduce([1 / (Z + X), 1 / (Z + X + 1), 1 / (Z + X - 2)], "z", Kind.S)
        remainders = [r for _, r in results]
        self.assertEqual(remainders[0], remainders[1])
        self.assertEqual(remainders[0], remainders[2])
        for (g, r), f in zip(results, [1 / (Z + X), 1 / (Z + X + 1), 1 / (Z + X - 2)]):
            self.assertEqual(theta(g, "z", Kind.S) + r, f)

    def test_q_equivalent_fractions_share_remainders(self):
        """Test the same for q-dilations."""
        functions = [1 / (Z + X), 1 / (Q * Z + X)]
        results = common_reduce(functions, "z", Kind.T)
        self.assertEqual(results[0][1], results[1][1])
        for (g, r), f in zip(results, functions):
            self.assertEqual(theta(g, "z", Kind.T) + r, f)

    def test_coprime_base(self):
        """Test pairwise coprime pieces of several polynomials."""
        base = coprime_base([(z + x) ** 2 * (z + y), (z + y) * (z + 1)], "z")
        self.assertEqual(set(base), {z + x, z + y, z + 1})


class TestOrbitNormalForm(unittest.TestCase):
    """Test cases for reduction along orbits."""

    def test_fractions_move_to_representative(self):
        """Test that a shifted factor is moved onto its representative."""
        f = 1 / (Z**2 + Y) + 1 / (Z**2 + Y + 1)
        den = FactoredDen.of([(z**2 + y, 1), (z**2 + y + 1, 1)])
        form = orbit_normal_form(f, Kind.S, Kind.D, GroupSpec.parse("sy"), den)
        self.assertEqual(len(form.blocks), 1)
        self.assertEqual(form.remainder(), 2 / (Z**2 + Y))
        self.assertEqual(form.reconstruct(), f)

    def test_requires_factored_input(self):
        """Test that higher-degree factors must be asserted irreducible."""
        f = 1 / (Z**2 + Y)
        with self.assertRaises(FactorizationRequiredError):
            orbit_normal_form(f, Kind.S, Kind.D, GroupSpec.parse("sy"), FactoredDen.trivial(f.denom))


if __name__ == "__main__":
    unittest.main()
