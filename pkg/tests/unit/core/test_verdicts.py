"""Unit tests for verdicts and witnesses."""

import unittest

from rational_telescopers.core.algebra import FIELD, X, Kind
from rational_telescopers.core.operators import OrePoly, right_quotient
from rational_telescopers.core.verdicts import Reason, Verdict, Witness, combine_witnesses, merge_parts


class TestVerdict(unittest.TestCase):
    """Test cases for the Verdict class."""

    def test_exists_normalizes_witness(self):
        """Test that the telescoper is normalized and the certificates rescaled."""
        witness = Witness(OrePoly(Kind.S, [-(X + 1) / X, FIELD.one]), g=1 / X)
        verdict = Verdict.exists(witness)
        self.assertEqual(verdict.telescoper, OrePoly(Kind.S, [-(X + 1), X]))
        self.assertEqual(verdict.certificates, (FIELD.one, FIELD.zero))
        self.assertTrue(verdict.verified)

    def test_exists_without_witness(self):
        """Test a positive verdict without a telescoper."""
        verdict = Verdict.exists()
        self.assertIsNone(verdict.telescoper)
        self.assertIsNone(verdict.verified)
        self.assertTrue(verdict.decided)

    def test_to_dict_key_order(self):
        """Test the JSON field order."""
        witness = Witness(OrePoly(Kind.S, [-(X + 1), X]), g=FIELD.one)
        document = Verdict.exists(witness).to_dict("Sx,Sy,Dz")
        self.assertEqual(list(document), ["type", "verdict", "telescoper", "certificates", "verified"])
        self.assertEqual(document["telescoper"], "x*Sx - (x+1)")
        self.assertEqual(document["certificates"], ["1", "0"])

    def test_not_exists_and_unsupported(self):
        """Test the reason and branch fields."""
        document = Verdict.not_exists(Reason.NOT_SPLIT, "x+y").to_dict("Dx,Sy")
        self.assertEqual(
            document, {"type": "Dx,Sy", "verdict": "not_exists", "reason": "NOT_SPLIT", "detail": "x+y"}
        )
        verdict = Verdict.unsupported(Reason.BOUND_EXCEEDED)
        self.assertFalse(verdict.decided)
        self.assertEqual(verdict.to_dict("Sx,Sy,Sz")["branch"], "BOUND_EXCEEDED")


class TestParts(unittest.TestCase):
    """Test cases for combining partial results."""

    def test_merge_parts_prefers_not_exists(self):
        """Test the precedence of not_exists over unsupported."""
        unsupported = Verdict.unsupported(Reason.BOUND_EXCEEDED)
        failed = Verdict.not_exists(Reason.NOT_SUMMABLE)
        self.assertIs(merge_parts([unsupported, failed]), failed)
        self.assertIs(merge_parts([Verdict.exists(), unsupported]), unsupported)
        self.assertIsNone(merge_parts([Verdict.exists()]))

    def test_combine_witnesses(self):
        """Test that the combined telescoper is a common left multiple."""
        first = Witness(OrePoly(Kind.S, [-FIELD.one, FIELD.one]), g=X)
        second = Witness(OrePoly(Kind.S, [-(X + 1), X]))
        combined = combine_witnesses([first, second])
        for w in (first, second):
            right_quotient(combined.telescoper, w.telescoper)
        quotient = right_quotient(combined.telescoper, first.telescoper)
        self.assertEqual(combined.g, quotient.apply(X))


if __name__ == "__main__":
    unittest.main()
