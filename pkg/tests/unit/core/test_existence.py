"""Unit tests for telescoper existence."""

import unittest

from hypothesis import given
from hypothesis import strategies as st

from rational_telescopers.core.algebra import FIELD, RING, X, Y, Z, FactoredDen, Kind
from rational_telescopers.core.existence import ALL_TYPES, TelescoperType, decide, verify_telescoper
from rational_telescopers.core.operators import OrePoly, ore_lclm, ore_mul
from rational_telescopers.core.solvers import SolverBounds
from rational_telescopers.core.verdicts import EXISTS, NOT_EXISTS, UNSUPPORTED, Reason

x, y, z, q = RING.gens

DECIDED = [
    (1 / (X * Y * Z), "Dx,Dy,Dz", None),
    (1 / (Z * (X + Y)), "Dx,Sy,Sz", FactoredDen.of([(z, 1), (x + y, 1)])),
    (X / (Z**2 - Y), "Sx,Dy,Dz", FactoredDen.of([(z**2 - y, 1)])),
    (X / (Z**2 - Y), "Tx,Dy,Dz", FactoredDen.of([(z**2 - y, 1)])),
    (1 / ((X + Y) * (Z**2 - X - Y)), "Sx,Sy,Dz", FactoredDen.of([(x + y, 1), (z**2 - x - y, 1)])),
    (1 / ((X + Y) * (X + Y + Z)), "Sx,Sy,Sz", FactoredDen.of([(x + y, 1), (x + y + z, 1)])),
    (1 / ((X**2 + Y) * (X + Y + Z)), "Sx,Sy,Sz", FactoredDen.of([(x**2 + y, 1), (x + y + z, 1)])),
    (1 / (Y * (Z - X)), "Dx,Sy,Dz", FactoredDen.of([(y, 1), (z - x, 1)])),
    (1 / ((X + Y) * (Z**2 - X - Y)), "Dx,Sy,Dz", FactoredDen.of([(x + y, 1), (z**2 - x - y, 1)])),
]

DERIVATION_CORPUS = (
    [1 / (X + Y + Z + k) for k in range(5)]
    + [X / (Y + Z + k) for k in range(5)]
    + [1 / (X * Y + Z + k) for k in range(5)]
    + [1 / ((X + k + 1) * (Y + Z)) for k in range(5)]
)


class TestTelescoperType(unittest.TestCase):
    """Test cases for telescoper type names."""

    def test_parse(self):
        """Test parsing of trivariate and bivariate names."""
        cases = [
            ("Dx,Sy,Dz", (Kind.D, Kind.S, Kind.D), 6),
            ("Sx,Sy,Sz", (Kind.S, Kind.S, Kind.S), 5),
            ("qSx,qSy,Sz", (Kind.T, Kind.T, Kind.S), 5),
            ("Tx,Dy,Dz", (Kind.T, Kind.D, Kind.D), 3),
            ("Sx,Ty", (Kind.S, Kind.T, None), 0),
        ]
        for text, kinds, family in cases:
            with self.subTest(text=text):
                t = TelescoperType.parse(text)
                self.assertEqual((t.dx, t.theta_y, t.theta_z), kinds)
                self.assertEqual(t.family, family)

    def test_str(self):
        """Test that the alias prints in its canonical form."""
        self.assertEqual(str(TelescoperType.parse("qSx,qSy,Sz")), "Tx,Ty,Sz")
        self.assertEqual(str(TelescoperType.parse(" Dx , Ty ")), "Dx,Ty")

    def test_parse_errors(self):
        """Test malformed and unsupported names."""
        for text in ["Sx", "Dx,Sz", "Sy,Sx,Sz", "Dx,Dy,Sz", "Ex,Sy", "Sx,Sy,Sz,Sw"]:
            with self.subTest(text=text):
                with self.assertRaises(ValueError):
                    TelescoperType.parse(text)

    def test_all_types(self):
        """Test the eighteen trivariate and nine bivariate types."""
        self.assertEqual(len(ALL_TYPES), 27)
        self.assertEqual(sum(1 for t in ALL_TYPES if t.bivariate), 9)
        self.assertEqual({t.family for t in ALL_TYPES}, {0, 1, 2, 3, 4, 5, 6})


class TestDecide(unittest.TestCase):
    """Test cases for the existence decision."""

    def test_zero_has_identity_telescoper(self):
        """Test that zero is telescoped by 1 for every type."""
        for t in ALL_TYPES:
            with self.subTest(t=str(t)):
                verdict = decide(FIELD.zero, t)
                self.assertEqual(verdict.status, EXISTS)
                self.assertEqual(verdict.telescoper, OrePoly.one(t.dx))

    def test_derivations_only(self):
        """Test a witness for three derivations."""
        verdict = decide(1 / (X * Y * Z), "Dx,Dy,Dz")
        self.assertEqual(verdict.status, EXISTS)
        self.assertEqual(str(verdict.telescoper), "x*Dx + 1")
        self.assertTrue(verdict.verified)

    def test_shift_pair_not_split(self):
        """Test that a non-split scalar numerator has no telescoper."""
        den = FactoredDen.of([(z, 1), (x + y, 1)])
        verdict = decide(1 / (Z * (X + Y)), "Dx,Sy,Sz", den)
        self.assertEqual(verdict.status, NOT_EXISTS)
        self.assertEqual(verdict.reason, Reason.NOT_SPLIT)

    def test_shift_pair_den_depends_on_x(self):
        """Test a shift-pair orbit that involves x."""
        den = FactoredDen.of([(y + 1, 1), (x + y + z, 1)])
        verdict = decide(1 / ((Y + 1) * (X + Y + Z)), "Dx,Sy,Sz", den)
        self.assertEqual(verdict.status, NOT_EXISTS)
        self.assertEqual(verdict.reason, Reason.DEN_DEPENDS_ON_X)
        self.assertEqual(verdict.detail, "x+y+z")

    def test_x_invariant_algebraic_residue(self):
        """Test a residue at an x-free algebraic factor."""
        den = FactoredDen.of([(z**2 - y, 1)])
        f = X / (Z**2 - Y)
        shift = decide(f, "Sx,Dy,Dz", den)
        self.assertEqual(shift.status, EXISTS)
        self.assertEqual(str(shift.telescoper), "x*Sx - (x+1)")
        q_shift = decide(f, "Tx,Dy,Dz", den)
        self.assertEqual(q_shift.status, EXISTS)
        self.assertEqual(str(q_shift.telescoper), "Tx - q")

    def test_invariant_orbit(self):
        """Test an orbit fixed by a joint shift of x and y."""
        den = FactoredDen.of([(x + y, 1), (z**2 - x - y, 1)])
        verdict = decide(1 / ((X + Y) * (Z**2 - X - Y)), "Sx,Sy,Dz", den)
        self.assertEqual(verdict.status, EXISTS)
        self.assertEqual(str(verdict.telescoper), "Sx - 1")

    def test_three_shifts(self):
        """Test existence and nonexistence with three shifts."""
        den = FactoredDen.of([(x + y, 1), (x + y + z, 1)])
        verdict = decide(1 / ((X + Y) * (X + Y + Z)), "Sx,Sy,Sz", den)
        self.assertEqual(verdict.status, EXISTS)
        self.assertTrue(verdict.verified)
        den = FactoredDen.of([(x**2 + y, 1), (x + y + z, 1)])
        verdict = decide(1 / ((X**2 + Y) * (X + Y + Z)), "Sx,Sy,Sz", den)
        self.assertEqual(verdict.status, NOT_EXISTS)

    def test_numerator_factor_fixes_direction(self):
        """Test witnesses when the free factor picks one of several directions of the orbit."""
        cases = [
            ("Sx,Sy,Sz", x + y, x + y + z, "Sx - 1"),
            ("Sx,Sy,Sz", x + y, x + 2 * y + z, "Sx - 1"),
            ("Sx,Sy,Sz", x + y, 2 * x + y + z, "Sx - 1"),
            ("Tx,Ty,Tz", x * y + 1, x * y + z, "Tx - 1"),
        ]
        for name, c, d, expected in cases:
            with self.subTest(name=name, d=d):
                f = 1 / (FIELD(c) * FIELD(d))
                verdict = decide(f, name, FactoredDen.of([(c, 1), (d, 1)]))
                self.assertEqual(verdict.status, EXISTS)
                self.assertEqual(str(verdict.telescoper), expected)
                self.assertTrue(verdict.verified)
                self.assertTrue(verify_telescoper(verdict.telescoper, f, name, certificates=verdict.certificates))

    def test_shift_in_y_derivation_in_z(self):
        """Test a residue free of y and a nonseparable residue."""
        den = FactoredDen.of([(y, 1), (z - x, 1)])
        verdict = decide(1 / (Y * (Z - X)), "Dx,Sy,Dz", den)
        self.assertEqual(verdict.status, EXISTS)
        self.assertEqual(verdict.telescoper.order, 1)
        den = FactoredDen.of([(x + y, 1), (z**2 - x - y, 1)])
        verdict = decide(1 / ((X + Y) * (Z**2 - X - Y)), "Dx,Sy,Dz", den)
        self.assertEqual(verdict.status, NOT_EXISTS)
        self.assertEqual(verdict.reason, Reason.NONSEPARABLE_RESIDUE)

    def test_derivation_corpus(self):
        """Test that three derivations always telescope and that witnesses verify."""
        witnesses = 0
        for f in DERIVATION_CORPUS:
            with self.subTest(f=f):
                verdict = decide(f, "Dx,Dy,Dz")
                self.assertEqual(verdict.status, EXISTS)
                if verdict.telescoper is not None:
                    witnesses += 1
                    self.assertTrue(verdict.verified)
        self.assertEqual(len(DERIVATION_CORPUS), 20)
        self.assertGreaterEqual(witnesses, 5)

    def test_bounds_never_flip_decisions(self):
        """Test that tighter bounds keep the decision or give up."""
        tight = SolverBounds(max_degree=1, max_multiplicity=1, max_order=1)
        for f, name, den in DECIDED:
            with self.subTest(name=name, f=f):
                full = decide(f, name, den)
                self.assertNotEqual(full.status, UNSUPPORTED)
                self.assertIn(decide(f, name, den, tight).status, {full.status, UNSUPPORTED})

    def test_bivariate_type(self):
        """Test that bivariate types are decided in x and y."""
        self.assertEqual(decide(1 / (X + Y), "Sx,Sy").status, EXISTS)
        verdict = decide(1 / (X + Y), "Dx,Sy")
        self.assertEqual(verdict.status, NOT_EXISTS)
        self.assertEqual(verdict.reason, Reason.NOT_SPLIT)


class TestClosure(unittest.TestCase):
    """Test cases for telescopers of linear combinations."""

    den = FactoredDen.of([(x + y, 1), (z**2 - x - y, 1)])

    @given(
        st.integers(min_value=-3, max_value=3),
        st.integers(min_value=-3, max_value=3).filter(bool),
    )
    def test_lclm_telescopes_combination(self, i, j):
        """Test that the LCLM of scaled witnesses telescopes a combination."""
        first = 1 / ((X + Y) * (Z**2 - X - Y))
        second = 1 / (Z**2 - X - Y)
        a, b = X + i, FIELD(j)
        operators = []
        for f, scale in ((first, a), (second, b)):
            verdict = decide(f, "Sx,Sy,Dz", self.den)
            operators.append(ore_mul(verdict.telescoper, OrePoly(Kind.S, [1 / scale])))
        combined = a * first + b * second
        self.assertTrue(verify_telescoper(ore_lclm(*operators), combined, "Sx,Sy,Dz", den=self.den))
        self.assertEqual(decide(combined, "Sx,Sy,Dz", self.den).status, EXISTS)


class TestVerifyTelescoper(unittest.TestCase):
    """Test cases for telescoper verification."""

    def setUp(self):
        self.f = 1 / ((X + Y) * (X + Y + Z))
        self.shift = OrePoly(Kind.S, [-FIELD.one, FIELD.one])

    def test_with_certificates(self):
        """Test the direct identity check."""
        result = verify_telescoper(self.shift, self.f, "Sx,Sy,Sz", certificates=(self.f, FIELD.zero))
        self.assertTrue(result)
        self.assertFalse(result.undecided)
        wrong = verify_telescoper(self.shift, self.f, "Sx,Sy,Sz", certificates=(FIELD.zero, FIELD.zero))
        self.assertFalse(wrong)

    def test_through_exactness(self):
        """Test verification of L(f) by the exactness test."""
        den = FactoredDen.of([(x + y, 1), (z**2 - x - y, 1)])
        f = 1 / ((X + Y) * (Z**2 - X - Y))
        result = verify_telescoper(self.shift, f, "Sx,Sy,Dz", den=den)
        self.assertTrue(result)
        self.assertIsNotNone(result.certificates)
        self.assertFalse(verify_telescoper(OrePoly.generator(Kind.D), f, "Dx,Sy,Dz", den=den))
        q_shift = OrePoly(Kind.T, [-FIELD(q) * X, X])
        den = FactoredDen.of([(z**2 - y, 1)])
        self.assertTrue(verify_telescoper(q_shift, X / (Z**2 - Y), "Tx,Dy,Dz", den=den))

    def test_identity_and_z_free_image(self):
        """Test the identity on an exact function and an image free of z."""
        self.assertTrue(verify_telescoper(OrePoly.one(Kind.S), 1 / (Y + Z), "Sx,Sy,Sz"))
        self.assertTrue(verify_telescoper(OrePoly.generator(Kind.D), 1 / (X + Y), "Dx,Sy,Dz"))

    def test_bivariate(self):
        """Test verification through the bivariate remainder."""
        self.assertTrue(verify_telescoper(self.shift, 1 / (X + Y), "Sx,Sy"))
        self.assertFalse(verify_telescoper(self.shift, 1 / (X**2 + Y), "Sx,Sy"))

    def test_kind_mismatch(self):
        """Test that an operator of the wrong kind is rejected."""
        self.assertFalse(verify_telescoper(OrePoly.generator(Kind.D), self.f, "Sx,Sy,Sz"))

    def test_zero_operator(self):
        """Test that the zero operator raises."""
        with self.assertRaises(ValueError):
            verify_telescoper(OrePoly(Kind.S), self.f, "Sx,Sy,Sz")


if __name__ == "__main__":
    unittest.main()
