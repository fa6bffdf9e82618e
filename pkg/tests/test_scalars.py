"""
Tests for the scalars module.
"""

import unittest
from fractions import Fraction

from src.algebra.scalars import (
    ONE,
    ZERO,
    RatFun,
    TruncSeries,
    g,
    h,
    poly,
    poly_arith,
    poly_from_json,
    poly_to_json,
    qq,
    ratfun_simplify,
    series_exp,
    series_log,
    specialize,
    truncate,
)
from src.errors import ScalarError


class TestPolynomials(unittest.TestCase):
    """Test cases for polynomial arithmetic in h and g."""

    def setUp(self):
        """Set up test fixtures."""
        self.p = h + g
        self.q = h - g

    def test_difference_of_squares(self):
        """Test (h+g)(h-g) = h^2 - g^2."""
        self.assertEqual(poly_arith(self.p, self.q, "mul"), h ** 2 - g ** 2)

    def test_truncate_by_total_degree(self):
        """Test that truncation drops terms of total degree above N."""
        self.assertEqual(truncate(h ** 2 + h * g + g ** 3, 2), h ** 2 + h * g)
        self.assertEqual(truncate(ZERO, 2), ZERO)

    def test_truncate_with_vanishing_parameter(self):
        """Test that truncation at g = 0 agrees with specializing first."""
        p = 1 + h + g + h * g + h ** 2 + g ** 3
        self.assertEqual(truncate(p, 2, ("g",)), 1 + h + h ** 2)
        self.assertEqual(truncate(p, 2, ("g",)), truncate(specialize(p, g_value=0), 2))
        self.assertEqual(truncate(p, 5, ("h", "g")), ONE)

    def test_truncated_product(self):
        """Test (1 + 2h)(1 - 2h) truncated at N=1."""
        self.assertEqual(poly_arith(1 + 2 * h, 1 - 2 * h, "mul", order=1), ONE)

    def test_truncation_is_multiplicative(self):
        """Test truncate(ab) = truncate(truncate(a) truncate(b))."""
        a = 1 + h + g ** 2 + h ** 3
        b = 2 - g + h * g ** 2
        self.assertEqual(truncate(a * b, 2), truncate(truncate(a, 2) * truncate(b, 2), 2))

    def test_specialize(self):
        """Test substituting exact rationals for h and g."""
        p = h * g + h
        self.assertEqual(specialize(p, Fraction(1, 2)), poly({(0, 1): Fraction(1, 2), (0, 0): Fraction(1, 2)}))
        self.assertEqual(specialize(p, g_value=0), h)
        self.assertEqual(specialize(p, 2, 3), poly({(0, 0): 8}))

    def test_json_records(self):
        """Test the JSON layout of a polynomial."""
        p = h ** 2 - g * qq(Fraction(1, 3))
        records = poly_to_json(p)
        self.assertEqual(records[0], {"h": 2, "g": 0, "num": "1", "den": "1"})
        self.assertEqual(records[1], {"h": 0, "g": 1, "num": "-1", "den": "3"})
        self.assertEqual(poly_from_json(records), p)

    def test_unknown_operation(self):
        """Test that an unknown operation is rejected."""
        with self.assertRaises(ScalarError):
            poly_arith(self.p, self.q, "div")


class TestSeries(unittest.TestCase):
    """Test cases for truncated series, exp and log."""

    def test_exp_of_zero(self):
        """Test exp(0) = 1."""
        self.assertEqual(series_exp(TruncSeries(ZERO, 4)).poly, ONE)

    def test_exp_taylor(self):
        """Test exp(2h) at N=2."""
        self.assertEqual(series_exp(TruncSeries(2 * h, 2)).poly, 1 + 2 * h + 2 * h ** 2)

    def test_log_of_one_minus_2h(self):
        """Test log(1 - 2h) at N=3."""
        expected = -2 * h - 2 * h ** 2 - h ** 3 * qq(Fraction(8, 3))
        self.assertEqual(series_log(TruncSeries(1 - 2 * h, 3)).poly, expected)

    def test_log_of_one(self):
        """Test log(1) = 0."""
        self.assertTrue(series_log(TruncSeries(ONE, 5)).is_zero())

    def test_round_trips(self):
        """Test that exp and log invert each other."""
        s = TruncSeries(h + 2 * g - h * g + g ** 3 * qq(Fraction(1, 7)), 6)
        self.assertEqual(series_log(series_exp(s)).poly, s.poly)
        t = TruncSeries(1 + h + g, 6)
        self.assertEqual(series_exp(series_log(t)).poly, t.poly)

    def test_exp_is_multiplicative(self):
        """Test exp(a + b) = exp(a) exp(b)."""
        a, b = TruncSeries(h - g, 5), TruncSeries(h * g + 3 * g, 5)
        self.assertEqual(series_exp(a + b).poly, (series_exp(a) * series_exp(b)).poly)

    def test_preconditions(self):
        """Test that exp and log reject bad constant terms."""
        with self.assertRaises(ScalarError):
            series_exp(TruncSeries(1 + h, 3))
        with self.assertRaises(ScalarError):
            series_log(TruncSeries(2 * h, 3))
        with self.assertRaises(ScalarError):
            TruncSeries(h, -1)


class TestRationalFunctions(unittest.TestCase):
    """Test cases for RatFun normalization."""

    def test_cancellation(self):
        """Test (h^2 - g^2)/(h + g) = h - g."""
        f = ratfun_simplify(RatFun(h ** 2 - g ** 2, h + g))
        self.assertEqual(f.num, h - g)
        self.assertEqual(f.den, ONE)

    def test_constant_factors(self):
        """Test (2hg)/(2h) = g."""
        f = ratfun_simplify(RatFun(2 * h * g, 2 * h))
        self.assertEqual((f.num, f.den), (g, ONE))

    def test_self_quotient(self):
        """Test (h+g)/(h+g) = 1."""
        f = ratfun_simplify(RatFun(h + g, h + g))
        self.assertEqual((f.num, f.den), (ONE, ONE))

    def test_equality_after_simplify(self):
        """Test that equal rational functions reach the same representative."""
        a = ratfun_simplify(RatFun(2 * h + 2 * g, 4 * h))
        b = ratfun_simplify(RatFun(h ** 2 + h * g, 2 * h ** 2))
        self.assertEqual(a, b)
        self.assertFalse(a.is_polynomial())

    def test_default_denominator(self):
        """Test that a bare numerator is a polynomial over 1."""
        f = RatFun(h + g)
        self.assertEqual(f.den, ONE)
        self.assertTrue(f.is_polynomial())
        self.assertEqual(RatFun(g).den, RatFun(h).den)

    def test_zero_denominator(self):
        """Test that a zero denominator is rejected."""
        with self.assertRaises(ScalarError):
            RatFun(h, ZERO)


if __name__ == '__main__':
    unittest.main()
