"""
Tests for the command line and the suite runner.
"""

import io
import json
import unittest
from contextlib import redirect_stderr, redirect_stdout
from fractions import Fraction
from unittest.mock import patch

from run import main
from src.cli import dump, render, run_suite
from src.config import SuiteConfig
from src.errors import BudgetExceeded, RelationError, UsageError
from src.reports.report import EXIT_INCONCLUSIVE, EXIT_USAGE, FAIL, INCONCLUSIVE, PASS


class TestRunSuite(unittest.TestCase):
    """Test cases for run_suite and render."""

    def setUp(self):
        """Set up a small configuration."""
        self.config = SuiteConfig(order=2, rank3_order=2)

    def test_validate_algebras(self):
        """Test the presentation audit suite."""
        report = run_suite(self.config.with_suite("validate-algebras"))
        self.assertEqual(report.status, PASS)
        self.assertEqual(report.config["suite"], "validate-algebras")

    def test_cocycle(self):
        """Test the cocycle suite at order 2."""
        report = run_suite(self.config.with_suite("cocycle"))
        self.assertEqual(len(report.checks), 3)
        self.assertEqual(report.status, PASS)

    def test_ybe_specialized(self):
        """Test the Yang-Baxter suite with h and g fixed."""
        config = SuiteConfig(suite="ybe", h_value=1, g_value=2)
        self.assertEqual(run_suite(config).status, PASS)

    def test_series_suite_at_g_zero(self):
        """Test that a series suite runs in the g = 0 specialization."""
        report = run_suite(SuiteConfig(suite="hopf-gl2", order=2, rank3_order=2, g_value=Fraction(0)))
        self.assertEqual(report.status, PASS)
        self.assertEqual(report.config["g"], "0")

    def test_series_suite_rejects_nonzero_values(self):
        """Test that a series suite refuses h or g fixed away from zero."""
        for suite in ("cocycle", "jordanian", "all"):
            with self.assertRaises(UsageError):
                run_suite(SuiteConfig(suite=suite, order=2, rank3_order=2, g_value=Fraction(1, 2)))

    @patch("src.cli.relations_suite")
    def test_budget_exhaustion_is_inconclusive(self, mock_suite):
        """Test that BudgetExceeded becomes an inconclusive check."""
        mock_suite.side_effect = BudgetExceeded("normal form needs more than 1 rewrite steps", 2)
        report = run_suite(self.config.with_suite("frt-relations"))
        self.assertEqual(report.status, INCONCLUSIVE)
        self.assertEqual(report.exit_code, EXIT_INCONCLUSIVE)

    @patch("src.cli.relations_suite")
    def test_library_errors_fail(self, mock_suite):
        """Test that other library errors become failed checks."""
        mock_suite.side_effect = RelationError("Relation mixes parities")
        report = run_suite(self.config.with_suite("frt-relations"))
        self.assertEqual(report.status, FAIL)
        self.assertIn("RelationError", report.checks[0].detail)

    def test_render(self):
        """Test JSON and text rendering of a report."""
        report = run_suite(self.config.with_suite("validate-algebras"))
        self.assertEqual(json.loads(render(report, "json"))["status"], PASS)
        self.assertIn("Suite: validate-algebras", render(report, "text"))


class TestDump(unittest.TestCase):
    """Test cases for the artifact dumps."""

    def setUp(self):
        """Set up a small configuration."""
        self.config = SuiteConfig(order=2, output_format="json")

    def test_sigma(self):
        """Test the JSON dump of sigma."""
        data = json.loads(dump("sigma", self.config))
        self.assertEqual(data["order"], 2)
        self.assertEqual(len(data["terms"]), 2)

    def test_specialized_detT(self):
        """Test that --set applies to the detT dump."""
        config = SuiteConfig(output_format="text", h_value=0, g_value=0)
        self.assertNotIn("h", dump("detT", config))

    def test_twist_at_g_zero(self):
        """Test that --set g=0 drops the g Xp (x) Z term of F."""
        generic = json.loads(dump("F", SuiteConfig(order=1, output_format="json")))
        specialized = json.loads(dump("F", SuiteConfig(order=1, output_format="json", g_value=Fraction(0))))
        self.assertEqual(len(generic["terms"]), 3)
        self.assertEqual(len(specialized["terms"]), 2)

    def test_series_dump_rejects_nonzero_values(self):
        """Test that series artifacts refuse h or g fixed away from zero."""
        for selector in ("sigma", "R", "coproduct:Xm"):
            with self.assertRaises(UsageError):
                dump(selector, SuiteConfig(order=1, output_format="json", h_value=Fraction(1, 2)))

    def test_unknown_selector(self):
        """Test that unknown selectors and generators are usage errors."""
        with self.assertRaises(UsageError):
            dump("tau", self.config)
        with self.assertRaises(UsageError):
            dump("coproduct:W", self.config)


class TestMain(unittest.TestCase):
    """Test cases for the entry point."""

    def _run(self, argv):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = main(argv)
        return code, out.getvalue(), err.getvalue()

    def test_verify(self):
        """Test a passing suite in JSON."""
        code, out, _ = self._run(["verify", "validate-algebras", "--format", "json"])
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["suite"], "validate-algebras")

    def test_usage_errors(self):
        """Test that malformed invocations exit with 64."""
        for argv in (["verify", "everything"], ["verify", "cocycle", "--set", "h=0.5"],
                     ["verify", "hopf-gl2", "--set", "g=1/2"],
                     ["verify", "cocycle", "--budget", "depth=2"], ["frobnicate"], []):
            code, _, err = self._run(argv)
            self.assertEqual(code, EXIT_USAGE)
            self.assertIn("Usage error", err)


if __name__ == '__main__':
    unittest.main()
