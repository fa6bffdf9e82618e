"""
Tests for the configuration module.
"""

import os
import unittest
from fractions import Fraction
from unittest.mock import patch

from src.config import SuiteConfig, parse_assignments, parse_budget, parse_rational, parse_rep
from src.errors import UsageError


class TestParsers(unittest.TestCase):
    """Test cases for the flag parsers."""

    def test_rationals(self):
        """Test exact rationals and rejected decimals."""
        self.assertEqual(parse_rational("1/2"), Fraction(1, 2))
        self.assertEqual(parse_rational("-3"), Fraction(-3))
        for text in ("0.5", "1e3", "", "x"):
            with self.assertRaises(UsageError):
                parse_rational(text)

    def test_assignments(self):
        """Test --set parsing."""
        self.assertEqual(parse_assignments(["h=1/2", "g=0"]), {"h": Fraction(1, 2), "g": Fraction(0)})
        self.assertEqual(parse_assignments(None), {})
        with self.assertRaises(UsageError):
            parse_assignments(["q=1"])
        with self.assertRaises(UsageError):
            parse_assignments(["h"])

    def test_budget(self):
        """Test --budget parsing."""
        self.assertEqual(parse_budget("steps=10,len=4"), {"max_steps": 10, "max_length": 4})
        self.assertEqual(parse_budget("len=5"), {"max_length": 5})
        with self.assertRaises(UsageError):
            parse_budget("depth=3")
        with self.assertRaises(UsageError):
            parse_budget("steps=many")

    def test_rep(self):
        """Test --rep validation."""
        self.assertEqual(parse_rep("fundamental"), "fundamental")
        self.assertEqual(parse_rep("spin:3/2"), "spin:3/2")
        with self.assertRaises(UsageError):
            parse_rep("adjoint")


class TestSuiteConfig(unittest.TestCase):
    """Test cases for SuiteConfig."""

    def test_defaults(self):
        """Test the documented defaults."""
        config = SuiteConfig()
        self.assertEqual((config.order, config.rank3_order), (6, 4))
        self.assertEqual((config.max_steps, config.max_length), (100000, 8))
        self.assertFalse(config.specialized)

    def test_validation(self):
        """Test that bad settings raise UsageError."""
        for kwargs in ({"suite": "nope"}, {"order": 0}, {"max_steps": 0}, {"output_format": "xml"},
                       {"rep": "spin:x"}, {"h_value": 0.5}):
            with self.assertRaises(UsageError):
                SuiteConfig(**kwargs)

    @patch.dict(os.environ, {"TWISTLAB_ORDER": "3", "TWISTLAB_BUDGET_STEPS": "50", "TWISTLAB_FORMAT": "json"})
    def test_from_env(self):
        """Test environment defaults and flag overrides."""
        config = SuiteConfig.from_env("cocycle", max_length=4, rep=None)
        self.assertEqual(config.order, 3)
        self.assertEqual(config.max_steps, 50)
        self.assertEqual(config.max_length, 4)
        self.assertEqual(config.output_format, "json")
        self.assertEqual(config.rep, "fundamental")

    @patch.dict(os.environ, {"TWISTLAB_ORDER": "three"})
    def test_from_env_rejects_non_integers(self):
        """Test that a malformed environment variable is a usage error."""
        with self.assertRaises(UsageError):
            SuiteConfig.from_env()

    def test_order_override_caps_rank3_order(self):
        """Test that --order 2 also lowers the rank-3 order."""
        config = SuiteConfig.from_env(order=2)
        self.assertEqual(config.rank3_order, 2)

    def test_to_json(self):
        """Test the configuration echo."""
        config = SuiteConfig(suite="ybe", h_value=Fraction(1, 2))
        record = config.to_json()
        self.assertTrue(config.specialized)
        self.assertEqual(record["h"], "1/2")
        self.assertIsNone(record["g"])
        self.assertEqual(record["budget"], {"steps": 100000, "len": 8})


if __name__ == '__main__':
    unittest.main()
