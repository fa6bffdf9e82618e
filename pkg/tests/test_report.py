"""
Tests for the report module.
"""

import json
import unittest

from src.reports.report import (
    EXIT_FAIL,
    EXIT_INCONCLUSIVE,
    EXIT_PASS,
    FAIL,
    INCONCLUSIVE,
    PASS,
    Check,
    Report,
    residual_size,
)


class TestChecks(unittest.TestCase):
    """Test cases for Check records."""

    def test_residual_size(self):
        """Test counting nonzero terms of different residual shapes."""
        self.assertEqual(residual_size(None), 0)
        self.assertEqual(residual_size([]), 0)
        self.assertEqual(residual_size([[0, 1], [2, 0]]), 2)
        self.assertEqual(residual_size({"a": 0, "b": 3}), 1)
        self.assertEqual(residual_size(4), 4)
        self.assertEqual(residual_size(True), 0)

    def test_labelled_failures_count_once(self):
        """Test that a list of (label, residual) pairs counts one term per pair."""
        self.assertEqual(residual_size([("x", "y")]), 1)
        self.assertEqual(residual_size([(0, 0), (1, 2)]), 2)
        self.assertEqual(residual_size([("H", "Xp", "vm", 3)]), 1)

    def test_from_residual(self):
        """Test pass and fail from a residual."""
        self.assertEqual(Check.from_residual("zero", []).status, PASS)
        check = Check.from_residual("nonzero", [("x", "y")], anchor="x = y")
        self.assertEqual(check.status, FAIL)
        self.assertEqual(check.residual_terms, 1)

    def test_failure_from_error(self):
        """Test that an exception is recorded in the detail."""
        check = Check.failure("stage", ValueError("boom"))
        self.assertEqual(check.status, FAIL)
        self.assertEqual(check.detail, "ValueError: boom")

    def test_json_omits_empty_detail(self):
        """Test the JSON record of a check."""
        record = Check.from_bool("ok", True).to_json()
        self.assertNotIn("detail", record)
        self.assertEqual(record["status"], PASS)


class TestReport(unittest.TestCase):
    """Test cases for Report aggregation and rendering."""

    def setUp(self):
        """Set up test fixtures."""
        self.report = Report("demo", config={"order": 2})
        self.report.add(Check.from_bool("first", True))

    def test_status_precedence(self):
        """Test pass < inconclusive < fail."""
        self.assertEqual(self.report.status, PASS)
        self.assertEqual(self.report.exit_code, EXIT_PASS)
        self.report.add(Check.inconclusive("second"))
        self.assertEqual(self.report.status, INCONCLUSIVE)
        self.assertEqual(self.report.exit_code, EXIT_INCONCLUSIVE)
        self.report.add(Check.from_bool("third", False))
        self.assertEqual(self.report.exit_code, EXIT_FAIL)

    def test_merge_and_lookup(self):
        """Test merging reports and finding a check by name."""
        other = Report("other")
        other.add(Check.from_bool("second", False))
        self.report.merge(other)
        self.assertEqual(len(self.report.checks), 2)
        self.assertEqual(self.report.check("second").status, FAIL)
        with self.assertRaises(KeyError):
            self.report.check("missing")

    def test_json_is_deterministic(self):
        """Test that timing does not leak into the JSON."""
        first = self.report.dumps()
        self.report.elapsed = 12.5
        self.assertEqual(self.report.dumps(), first)
        data = json.loads(first)
        self.assertEqual(data["config"], {"order": 2})
        self.assertEqual(data["checks"][0]["name"], "first")

    def test_render_text(self):
        """Test the tabulated rendering."""
        text = self.report.render_text()
        self.assertIn("Suite: demo", text)
        self.assertIn("1 pass, 0 fail, 0 inconclusive", text)
        self.assertEqual(Report("empty").render_text(), "empty: no checks run")


if __name__ == '__main__':
    unittest.main()
