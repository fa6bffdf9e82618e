"""
Tests for the twist kit module.
"""

import unittest
from fractions import Fraction

from src.algebra.enveloping import TensorElement, enveloping, flip
from src.algebra.scalars import g, h, qq
from src.algebra.superalgebra import gl2, sl12
from src.errors import PresentationError, TruncationError
from src.reports.report import FAIL
from src.twist.closed_forms import ClosedForm, SigmaCalculus, match_reading, t
from src.twist.twistkit import (
    TwistedHopf,
    UniversalR,
    build_antipode,
    build_sigma,
    build_twist,
    build_universal_R,
    hexagon_checks,
    match_closed_forms,
    odd_generator_images,
    restriction_consistency,
    trivial_twist,
    verify_cocycle,
    verify_hopf_axioms,
    verify_r_properties,
)


def _failed(checks):
    return [check.name for check in checks if not check.passed]


class TestTwistElement(unittest.TestCase):
    """Test cases for sigma, F and the cocycle condition."""

    def setUp(self):
        """Set up test fixtures."""
        self.U = enveloping(gl2())

    def test_sigma(self):
        """Test sigma = 2h Xp + 2h^2 Xp^2 + (8/3) h^3 Xp^3 at N=3."""
        U = self.U
        xp = U.gen("Xp", 3)
        expected = (xp.scale(2 * h) + (xp * xp).scale(2 * h ** 2)
                    + (xp * xp * xp).scale(h ** 3 * qq(Fraction(8, 3))))
        self.assertEqual(build_sigma(U, 3), expected)

    def test_sigma_needs_positive_order(self):
        """Test that order 0 is rejected."""
        with self.assertRaises(TruncationError):
            build_sigma(self.U, 0)

    def test_twist_first_order(self):
        """Test F = 1 (x) 1 + g Xp (x) Z - h H (x) Xp at N=1."""
        U = self.U
        twist = build_twist(U, 1)
        t = TensorElement.pure
        expected = (U.tensor_one(2, 1) + t(U.gen("Xp", 1), U.gen("Z", 1)).scale(g)
                    - t(U.gen("H", 1), U.gen("Xp", 1)).scale(h))
        self.assertEqual(twist.F, expected)

    def test_twist_inverse(self):
        """Test F F^-1 = 1 at N=3."""
        twist = build_twist(self.U, 3)
        self.assertEqual(twist.F * twist.Finv, self.U.tensor_one(2, 3))

    def test_twist_needs_gl2(self):
        """Test that an algebra without Z, H, Xp is rejected."""
        with self.assertRaises(PresentationError):
            build_twist(sl12().restrict(("vp", "vbp", "Xp")), 1)

    def test_cocycle(self):
        """Test the cocycle and counit conditions at N=3."""
        checks = verify_cocycle(build_twist(self.U, 3))
        self.assertEqual(len(checks), 3)
        self.assertEqual(_failed(checks), [])

    def test_swapped_factors_break_the_cocycle(self):
        """Test that multiplying the exponentials in the wrong order fails."""
        checks = verify_cocycle(build_twist(self.U, 2, swap_factors=True))
        self.assertEqual(checks[0].status, FAIL)
        self.assertGreater(checks[0].residual_terms, 0)

    def test_trivial_twist(self):
        """Test that F = 1 is a twist."""
        self.assertEqual(_failed(verify_cocycle(trivial_twist(self.U, 2))), [])


class TestTwistedHopf(unittest.TestCase):
    """Test cases for the twisted coproduct and antipode of gl(2)."""

    def setUp(self):
        """Set up test fixtures."""
        self.U = enveloping(gl2())
        self.hopf = TwistedHopf(build_twist(self.U, 3))

    def test_central_generator(self):
        """Test that Z stays primitive and S(Z) = -Z."""
        U = self.U
        Z, one = U.gen("Z", 3), U.one(3)
        self.assertEqual(self.hopf.coproduct_gen("Z"), TensorElement.pure(Z, one) + TensorElement.pure(one, Z))
        self.assertEqual(self.hopf.antipode_gen("Z"), -Z)

    def test_coproduct_of_xp(self):
        """Test Delta(Xp) = Xp (x) (1 - 2h Xp) + 1 (x) Xp."""
        U = self.U
        xp, one = U.gen("Xp", 3), U.one(3)
        expected = TensorElement.pure(xp, one - xp.scale(2 * h)) + TensorElement.pure(one, xp)
        self.assertEqual(self.hopf.coproduct_gen("Xp"), expected)

    def test_antipode_table(self):
        """Test the antipode table and u u^-1 = 1."""
        u, table = build_antipode(self.hopf, ["Z", "H"])
        self.assertEqual(set(table), {"Z", "H"})
        self.assertEqual(u * self.hopf.u_inv, self.U.one(3))

    def test_hopf_axioms(self):
        """Test the Hopf axioms on generators, coassociativity included."""
        hopf = TwistedHopf(build_twist(self.U, 2))
        self.assertEqual(_failed(verify_hopf_axioms(hopf)), [])

    def test_closed_forms(self):
        """Test that every printed closed form matches in some reading."""
        checks = match_closed_forms(self.hopf)
        self.assertTrue(checks)
        self.assertEqual(_failed(checks), [])
        self.assertTrue(all(check.detail.startswith("reading: ") for check in checks))

    def test_coproduct_of_xp_is_flip_symmetric(self):
        """Test that Delta(Xp) is its own flip and matches as printed."""
        delta = self.hopf.coproduct_gen("Xp")
        self.assertEqual(flip(delta), delta)
        check = next(c for c in match_closed_forms(self.hopf) if c.name == "Delta(Xp) closed form")
        self.assertEqual(check.detail, "reading: printed")

    def test_corrupted_closed_form_matches_no_reading(self):
        """Test that Delta(H) without its -2g term is rejected."""
        def without_g_term(c):
            return t(c.gen("H"), c.e(1)) + t(c.one(), c.gen("H"))

        form = ClosedForm("coproduct", "H", "Delta(H)", (("printed", without_g_term),))
        calculus = SigmaCalculus(self.U, 3)
        matched, residuals = match_reading(form, self.hopf.coproduct_gen("H"), calculus)
        self.assertIsNone(matched)
        self.assertGreater(residuals["printed"], 0)

    def test_g_fixed_to_zero(self):
        """Test that the g = 0 algebra gives the g = 0 image of the generic series."""
        hopf = TwistedHopf(build_twist(enveloping(gl2(), ("g",)), 3))
        self.assertEqual(hopf.coproduct_gen("Xm").terms, self.hopf.coproduct_gen("Xm").specialize(g_value=0).terms)
        self.assertEqual(hopf.antipode_gen("H").terms, self.hopf.antipode_gen("H").specialize(g_value=0).terms)
        self.assertEqual(_failed(match_closed_forms(hopf)), [])


class TestSuperTwist(unittest.TestCase):
    """Test cases for the twist of sl(1/2)."""

    def setUp(self):
        """Set up test fixtures."""
        self.hopf = TwistedHopf(build_twist(sl12(), 2))

    def test_odd_images(self):
        """Test that Delta(vp) and Delta(vbm) agree with the generating brackets."""
        checks = odd_generator_images(self.hopf)
        self.assertEqual(len(checks), 2)
        self.assertEqual(_failed(checks), [])

    def test_restriction(self):
        """Test that the gl(2) tables embed into the sl(1/2) tables."""
        sub = TwistedHopf(build_twist(gl2(), 2))
        self.assertEqual(_failed(restriction_consistency(sub, self.hopf)), [])

    def test_hopf_axioms_on_odd_generators(self):
        """Test the Hopf axioms on the odd generators."""
        checks = verify_hopf_axioms(self.hopf, names=["vm", "vbp"], coassociativity=False)
        self.assertEqual(_failed(checks), [])


class TestUniversalR(unittest.TestCase):
    """Test cases for R = F21 F^-1."""

    def setUp(self):
        """Set up test fixtures."""
        self.U = enveloping(gl2())
        twist = build_twist(self.U, 2)
        self.hopf = TwistedHopf(twist)
        self.universal = build_universal_R(twist)

    def test_first_order(self):
        """Test R at N=1."""
        U = self.U
        universal = build_universal_R(build_twist(U, 1))
        t = TensorElement.pure
        Z, H, Xp = U.gen("Z", 1), U.gen("H", 1), U.gen("Xp", 1)
        expected = (U.tensor_one(2, 1) + t(Z, Xp).scale(g) - t(Xp, H).scale(h) + t(H, Xp).scale(h)
                    - t(Xp, Z).scale(g))
        self.assertEqual(universal.R, expected)

    def test_r_properties(self):
        """Test agreement, triangularity, intertwining and the hexagons at N=2."""
        self.assertEqual(_failed(verify_r_properties(self.universal, self.hopf)), [])

    def test_hexagons(self):
        """Test the two rank-3 identities."""
        checks = hexagon_checks(self.universal, self.hopf)
        self.assertEqual(len(checks), 2)
        self.assertEqual(_failed(checks), [])

    def test_one_parameter_r_fails_intertwiner(self):
        """Test that dropping g from R breaks R Delta(Xm) = Delta^op(Xm) R."""
        mutated = UniversalR(self.universal.R.specialize(g_value=0), self.universal.direct, self.universal.order)
        checks = verify_r_properties(mutated, self.hopf, names=["Xm"], hexagons=False)
        by_name = {check.name: check for check in checks}
        self.assertEqual(by_name["intertwiner R Delta(Xm) = Delta^op(Xm) R"].status, FAIL)


if __name__ == '__main__':
    unittest.main()
