"""
Tests for the localization module.
"""

import unittest

from src.frt.frtkit import frt_system
from src.frt.localization import (
    Superdeterminant,
    localize,
    sdet_suite,
    t_inverse_checks,
    verify_m_inverse_and_hopf,
)
from src.frt.rewriting import NCPoly


def _failed(checks):
    return [check.name for check in checks if not check.passed]


class TestLocalization(unittest.TestCase):
    """Test cases for detT^-1, T^-1, sdetM and M^-1."""

    @classmethod
    def setUpClass(cls):
        """Localize once; the derivation is shared by every test."""
        cls.loc, cls.sdet, cls.checks = localize(frt_system())

    def test_inverse_of_det_t(self):
        """Test the straightening automorphism and detT detT^-1 = 1."""
        self.assertEqual(_failed(self.checks), [])
        self.assertTrue((self.loc.dinv() * self.loc.element(self.loc.det) - 1).is_zero())

    def test_t_inverse(self):
        """Test T T^-1 = T^-1 T = I2 and the adjugate limit."""
        classical_L = [[entry.specialize(0, 0) for entry in row] for row in self.sdet.L]
        checks = t_inverse_checks(self.loc, self.sdet.L, classical_L)
        self.assertEqual(len(checks), 3)
        self.assertEqual(_failed(checks), [])

    def test_sdet_is_central(self):
        """Test the sdetM formula, its centrality and the Berezinian limit."""
        checks = sdet_suite(self.loc, self.sdet, classical_system=frt_system(h_value=0, g_value=0))
        self.assertEqual(_failed(checks), [])

    def test_sdet_plus_det_inverse_is_not_central(self):
        """Test that adding detT^-1 to sdetM breaks centrality."""
        mutated = Superdeterminant(self.sdet.numerator + self.loc.det, self.sdet.w_numerator, self.sdet.L)
        failed = _failed(sdet_suite(self.loc, mutated))
        self.assertIn("[eta, sdetM] = 0", failed)
        self.assertIn("[detT, sdetM] = 0", failed)

    def test_sdet_json(self):
        """Test the JSON layout of sdetM."""
        record = self.sdet.to_json()
        self.assertEqual(record["sdet"]["detT_inverse_power"], 2)
        self.assertTrue(record["sdet"]["numerator"])

    def test_nonzero_elements(self):
        """Test that the zero test does not accept the generators."""
        self.assertFalse(self.loc.gen("e").is_zero())
        self.assertFalse(self.loc.sdet().is_zero())
        self.assertTrue((self.loc.gen("a") - self.loc.element(NCPoly.gen("a"))).is_zero())

    def test_m_inverse_and_hopf(self):
        """Test M M^-1 = M^-1 M = I3, the bialgebra maps and the antipode axiom."""
        checks = verify_m_inverse_and_hopf(self.loc, self.sdet)
        self.assertEqual(_failed(checks), [])


if __name__ == '__main__':
    unittest.main()
