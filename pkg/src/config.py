"""
Configuration Module

SuiteConfig: the settings of one verification run, read from the
environment (optionally a .env file) and overridden by command-line flags.
"""

import logging
import os
from dataclasses import dataclass, replace
from fractions import Fraction

from src.errors import UsageError

logger = logging.getLogger(__name__)

SUITES = (
    "validate-algebras",
    "cocycle",
    "hopf-gl2",
    "hopf-sl12",
    "rmatrix-universal",
    "rmatrix-fundamental",
    "ybe",
    "jordanian",
    "frt-relations",
    "frt-det",
    "frt-sdet",
    "frt-inverse",
)
FORMATS = ("text", "json")
PARAMETERS = ("h", "g")


def _env_int(name, default):
    value = os.environ.get(name, default)
    try:
        return int(value)
    except (TypeError, ValueError):
        raise UsageError(f"{name} must be an integer, got {value!r}")


def parse_rational(text):
    """
    Parse an exact rational such as ``0``, ``-3`` or ``1/2``.

    Raises:
        UsageError: for decimals, floats or anything else.
    """
    text = text.strip()
    if not text or "." in text or "e" in text.lower():
        raise UsageError(f"Specializations must be exact rationals, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"Not a rational number: {text!r}")


def parse_assignments(items):
    """
    Parse ``--set h=1/2`` style assignments.

    Args:
        items (list): Strings of the form ``name=value``.

    Returns:
        dict: parameter name -> Fraction.
    """
    values = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or name not in PARAMETERS:
            raise UsageError(f"--set expects h=<rational> or g=<rational>, got {item!r}")
        values[name] = parse_rational(value)
    return values


def parse_budget(text):
    """
    Parse ``steps=K,len=L`` (either part may be omitted).

    Returns:
        dict: with keys ``max_steps`` and/or ``max_length``.
    """
    keys = {"steps": "max_steps", "len": "max_length"}
    budget = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, sep, value = part.partition("=")
        if not sep or name.strip() not in keys:
            raise UsageError(f"--budget expects steps=K,len=L, got {text!r}")
        try:
            budget[keys[name.strip()]] = int(value)
        except ValueError:
            raise UsageError(f"Budget values must be integers, got {part!r}")
    return budget


def parse_rep(text):
    """Validate a representation selector: ``fundamental`` or ``spin:j``."""
    if text == "fundamental":
        return text
    kind, sep, spin = text.partition(":")
    if kind != "spin" or not sep:
        raise UsageError(f"--rep expects fundamental or spin:j, got {text!r}")
    parse_rational(spin)
    return text


@dataclass(frozen=True)
class SuiteConfig:
    """
    Settings of one run.

    Attributes:
        suite (str): Suite name or "all".
        order (int): Truncation order for rank-2 checks.
        rank3_order (int): Truncation order for rank-3 checks.
        max_steps (int): Rewrite steps allowed per reduction.
        max_length (int): Longest word allowed during a reduction.
        rep (str): "fundamental" or "spin:j".
        output_format (str): "text" or "json".
        h_value (Fraction): Fixed value of h, or None.
        g_value (Fraction): Fixed value of g, or None.
    """

    suite: str = "all"
    order: int = 6
    rank3_order: int = 4
    max_steps: int = 100000
    max_length: int = 8
    rep: str = "fundamental"
    output_format: str = "text"
    h_value: Fraction = None
    g_value: Fraction = None

    def __post_init__(self):
        if self.suite not in SUITES + ("all",):
            raise UsageError(f"Unknown suite: {self.suite}. Choose one of {', '.join(SUITES + ('all',))}")
        if self.order < 1 or self.rank3_order < 1:
            raise UsageError("Truncation orders must be at least 1")
        if self.max_steps < 1 or self.max_length < 1:
            raise UsageError("Budgets must be positive")
        if self.output_format not in FORMATS:
            raise UsageError(f"Unknown format: {self.output_format}")
        parse_rep(self.rep)
        for value in (self.h_value, self.g_value):
            if value is not None and not isinstance(value, (int, Fraction)):
                raise UsageError(f"Specializations must be exact rationals, got {value!r}")

    @classmethod
    def from_env(cls, suite="all", **overrides):
        """
        Build a config from TWISTLAB_* environment variables, then apply
        the given overrides (None values are ignored).
        """
        values = {
            "suite": suite,
            "order": _env_int("TWISTLAB_ORDER", 6),
            "rank3_order": _env_int("TWISTLAB_RANK3_ORDER", 4),
            "max_steps": _env_int("TWISTLAB_BUDGET_STEPS", 100000),
            "max_length": _env_int("TWISTLAB_BUDGET_LEN", 8),
            "output_format": os.environ.get("TWISTLAB_FORMAT", "text"),
        }
        order = overrides.get("order")
        if order is not None:
            values["rank3_order"] = min(order, values["rank3_order"])
        values.update({k: v for k, v in overrides.items() if v is not None})
        config = cls(**values)
        logger.debug(f"Configuration: {config.to_json()}")
        return config

    def with_suite(self, suite):
        return replace(self, suite=suite)

    @property
    def specialized(self):
        return self.h_value is not None or self.g_value is not None

    def to_json(self):
        def rational(value):
            return None if value is None else str(value)

        return {
            "suite": self.suite,
            "order": self.order,
            "rank3_order": self.rank3_order,
            "budget": {"steps": self.max_steps, "len": self.max_length},
            "rep": self.rep,
            "h": rational(self.h_value),
            "g": rational(self.g_value),
        }
