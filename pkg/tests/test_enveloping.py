"""
Tests for the enveloping algebra module.
"""

import unittest
from fractions import Fraction

from src.algebra.enveloping import (
    TensorElement,
    antipode0,
    coproduct0,
    counit0,
    counit_slot,
    embed,
    enveloping,
    flip,
    hopf0_apply,
    map_slot,
    multiply_slots,
    tensor_exp,
    unipotent_inverse,
)
from src.algebra.scalars import ONE, ZERO, g, h
from src.algebra.superalgebra import gl2, sl12
from src.errors import PresentationError, TensorRankError, TruncationError, UsageError


class TestPBWProducts(unittest.TestCase):
    """Test cases for PBW normal forms."""

    def setUp(self):
        """Set up test fixtures."""
        self.U = enveloping(sl12())

    def test_generator_order(self):
        """Test that gl(2) is a prefix of the sl(1/2) generator order."""
        self.assertEqual(self.U.names, ("Z", "H", "Xp", "Xm", "vp", "vm", "vbp", "vbm"))
        self.assertEqual(enveloping(gl2()).names, self.U.names[:4])

    def test_even_reordering(self):
        """Test Xm Xp = Xp Xm - H."""
        U = self.U
        self.assertEqual(U.word(["Xm", "Xp"]), U.word(["Xp", "Xm"]) - U.gen("H"))

    def test_odd_square(self):
        """Test v+ v+ = 1/2 {v+, v+} = 0."""
        self.assertTrue(self.U.word(["vp", "vp"]).is_zero())

    def test_odd_reordering(self):
        """Test vb+ v+ = -v+ vb+ + Xp."""
        U = self.U
        self.assertEqual(U.word(["vbp", "vp"]), -U.word(["vp", "vbp"]) + U.gen("Xp"))

    def test_associativity(self):
        """Test (ab)c = a(bc) on mixed words."""
        U = self.U
        a, b, c = U.gen("vbm"), U.word(["Xm", "vp"]), U.word(["vbp", "H"])
        self.assertEqual((a * b) * c, a * (b * c))

    def test_graded_commutator(self):
        """Test the graded commutator of generators reproduces the bracket table."""
        U = self.U
        self.assertEqual(U.gen("vbp").commutator(U.gen("vm")), (U.gen("Z") + U.gen("H")).scale(Fraction(1, 2)))
        self.assertEqual(U.gen("H").commutator(U.gen("vbm")), -U.gen("vbm"))

    def test_parity(self):
        """Test the Z2 degree of elements."""
        U = self.U
        self.assertEqual(U.gen("vp").parity(), 1)
        self.assertEqual(U.word(["vp", "vbm"]).parity(), 0)
        self.assertIsNone((U.gen("vp") + U.gen("Xp")).parity())

    def test_scalars_and_unknown_generators(self):
        """Test scalar comparison and unknown generators."""
        self.assertEqual(self.U.one(), 1)
        with self.assertRaises(PresentationError):
            enveloping(gl2()).gen("vp")


class TestTensors(unittest.TestCase):
    """Test cases for graded tensor products."""

    def setUp(self):
        """Set up test fixtures."""
        self.U = enveloping(sl12())
        self.one = self.U.one()

    def test_koszul_sign(self):
        """Test (1 (x) v+)(vb+ (x) 1) = -(vb+ (x) v+)."""
        U = self.U
        left = TensorElement.pure(self.one, U.gen("vp"))
        right = TensorElement.pure(U.gen("vbp"), self.one)
        self.assertEqual(left * right, -TensorElement.pure(U.gen("vbp"), U.gen("vp")))
        self.assertEqual(right * left, TensorElement.pure(U.gen("vbp"), U.gen("vp")))

    def test_graded_flip(self):
        """Test that flipping two odd slots gives a sign."""
        U = self.U
        t = TensorElement.pure(U.gen("vp"), U.gen("vbm"))
        self.assertEqual(flip(t), -TensorElement.pure(U.gen("vbm"), U.gen("vp")))
        self.assertEqual(flip(flip(t)), t)

    def test_embed(self):
        """Test F13 placement of a rank-2 tensor."""
        U = self.U
        t = TensorElement.pure(U.gen("Xp"), U.gen("Z"))
        self.assertEqual(embed(t, (0, 2)), TensorElement.pure(U.gen("Xp"), self.one, U.gen("Z")))

    def test_tensor_exp(self):
        """Test exp(h Xp (x) Z) at N=1."""
        U = self.U
        t = TensorElement.pure(U.gen("Xp", 1), U.gen("Z", 1)).scale(h)
        self.assertEqual(tensor_exp(t), U.tensor_one(2, 1) + t)

    def test_tensor_exp_needs_positive_degree(self):
        """Test that exp rejects a degree-0 argument."""
        U = self.U
        with self.assertRaises(TruncationError):
            tensor_exp(TensorElement.pure(U.gen("Xp"), U.gen("Z")))

    def test_unipotent_inverse(self):
        """Test (1 + h Xp (x) Z + g H (x) 1) times its inverse."""
        U = self.U
        x = (U.tensor_one(2, 3) + TensorElement.pure(U.gen("Xp", 3), U.gen("Z", 3)).scale(h)
             + TensorElement.pure(U.gen("H", 3), U.one(3)).scale(g))
        self.assertEqual(x * unipotent_inverse(x), U.tensor_one(2, 3))

    def test_rank_errors(self):
        """Test that ranks must agree and lie in {2, 3}."""
        U = self.U
        with self.assertRaises(TensorRankError):
            U.tensor_one(2) + U.tensor_one(3)
        with self.assertRaises(TensorRankError):
            TensorElement(U, 4, {})


class TestUndeformedHopf(unittest.TestCase):
    """Test cases for the primitive coproduct, counit and antipode."""

    def setUp(self):
        """Set up test fixtures."""
        self.U = enveloping(sl12())

    def test_coproduct_of_square(self):
        """Test Delta0(Xp^2) = Xp^2 (x) 1 + 2 Xp (x) Xp + 1 (x) Xp^2."""
        U = self.U
        xp, one = U.gen("Xp"), U.one()
        expected = (TensorElement.pure(xp * xp, one) + TensorElement.pure(xp, xp).scale(2)
                    + TensorElement.pure(one, xp * xp))
        self.assertEqual(coproduct0(xp * xp), expected)

    def test_cocommutative(self):
        """Test that Delta0 is graded cocommutative."""
        x = self.U.word(["Xp", "vm", "vbp"])
        self.assertEqual(flip(coproduct0(x)), coproduct0(x))

    def test_counit(self):
        """Test the counit on generators and constants."""
        U = self.U
        self.assertEqual(counit0(U.gen("vp")), ZERO)
        self.assertEqual(counit0(U.scalar(3) + U.gen("Xm")), 3 * ONE)
        self.assertEqual(counit_slot(coproduct0(U.gen("Xp")), 0), U.gen("Xp"))

    def test_antipode_sign(self):
        """Test S0(v+ vb+) = -vb+ v+ = v+ vb+ - Xp."""
        U = self.U
        self.assertEqual(antipode0(U.word(["vp", "vbp"])), U.word(["vp", "vbp"]) - U.gen("Xp"))
        self.assertEqual(antipode0(U.gen("Z")), -U.gen("Z"))

    def test_antipode_axiom(self):
        """Test m (S0 (x) id) Delta0 = eta eps0."""
        U = self.U
        for x in (U.gen("vbm"), U.word(["Xp", "vm"]), U.word(["vp", "vbp", "H"])):
            lhs = multiply_slots(map_slot(coproduct0(x), 0, antipode0))
            self.assertEqual(lhs, U.scalar(counit0(x)))

    def test_hopf0_apply(self):
        """Test dispatch by map name and the error for an unknown map."""
        xp = self.U.gen("Xp")
        self.assertEqual(hopf0_apply("antipode", xp), -xp)
        self.assertEqual(hopf0_apply("counit", xp), ZERO)
        with self.assertRaises(UsageError):
            hopf0_apply("bogus", xp)


if __name__ == '__main__':
    unittest.main()
