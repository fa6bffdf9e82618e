"""
Report Module

Check and Report records produced by the verification suites, with a
tabulated text rendering and a canonical JSON rendering.
"""

import json
import logging
from dataclasses import dataclass, field

import pandas as pd
from tabulate import tabulate

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64


def residual_size(residual):
    """
    Count the nonzero terms of a residual.

    Args:
        residual: Element, TensorElement, matrix (list of rows), dict, list or int.

    Returns:
        int: Number of nonzero terms or entries.
    """
    if residual is None:
        return 0
    if isinstance(residual, bool):
        return 0 if residual else 1
    if isinstance(residual, int):
        return residual
    terms = getattr(residual, "terms", None)
    if isinstance(terms, dict):
        return len(terms)
    if isinstance(residual, dict):
        return sum(1 for v in residual.values() if v)
    if isinstance(residual, (list, tuple)):
        # rows of a matrix are lists; tuples are labelled failures, one term each
        if residual and all(isinstance(row, list) for row in residual):
            return sum(1 for row in residual for entry in row if entry)
        return sum(1 for entry in residual if entry)
    return 0 if not residual else 1


@dataclass
class Check:
    """One named identity and the outcome of checking it."""

    name: str
    status: str
    residual_terms: int = 0
    anchor: str = ""
    detail: str = ""

    @classmethod
    def from_residual(cls, name, residual, anchor="", detail=""):
        count = residual_size(residual)
        return cls(name, PASS if count == 0 else FAIL, count, anchor, detail)

    @classmethod
    def from_bool(cls, name, ok, anchor="", detail=""):
        return cls(name, PASS if ok else FAIL, 0 if ok else 1, anchor, detail)

    @classmethod
    def inconclusive(cls, name, anchor="", detail=""):
        return cls(name, INCONCLUSIVE, 0, anchor, detail)

    @classmethod
    def failure(cls, name, error, anchor=""):
        return cls(name, FAIL, 1, anchor, f"{type(error).__name__}: {error}")

    @property
    def passed(self):
        return self.status == PASS

    def to_json(self):
        record = {
            "name": self.name,
            "status": self.status,
            "residual_terms": self.residual_terms,
            "anchor": self.anchor,
        }
        if self.detail:
            record["detail"] = self.detail
        return record


@dataclass
class Report:
    """The checks of one suite run together with the configuration used."""

    suite: str
    checks: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def add(self, check):
        self.checks.append(check)
        level = logging.INFO if check.status == PASS else logging.WARNING
        logger.log(level, f"[{self.suite}] {check.name}: {check.status}")
        return check

    def extend(self, checks):
        for check in checks:
            self.add(check)

    def merge(self, other):
        for check in other.checks:
            self.checks.append(check)
        self.elapsed += other.elapsed

    @property
    def status(self):
        statuses = {check.status for check in self.checks}
        if FAIL in statuses:
            return FAIL
        if INCONCLUSIVE in statuses:
            return INCONCLUSIVE
        return PASS

    @property
    def exit_code(self):
        return {PASS: EXIT_PASS, FAIL: EXIT_FAIL, INCONCLUSIVE: EXIT_INCONCLUSIVE}[self.status]

    def check(self, name):
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def to_json(self):
        # timing is left out so identical configurations give identical JSON
        return {
            "suite": self.suite,
            "config": self.config,
            "status": self.status,
            "checks": [check.to_json() for check in self.checks],
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def render_text(self):
        """Render the checks as a table followed by a summary line."""
        if not self.checks:
            return f"{self.suite}: no checks run"
        df = pd.DataFrame([check.to_json() for check in self.checks])
        columns = [c for c in ("name", "status", "residual_terms", "anchor", "detail") if c in df.columns]
        df = df[columns].fillna("")
        table = tabulate(df, headers="keys", tablefmt="pretty", showindex=False)
        counts = df["status"].value_counts().to_dict()
        summary = ", ".join(f"{counts.get(s, 0)} {s}" for s in (PASS, FAIL, INCONCLUSIVE))
        return f"Suite: {self.suite}\n{table}\n{summary} ({self.elapsed:.2f}s)"
