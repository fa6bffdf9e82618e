"""
CLI Module

Runs the named verification suites and the expression dumps. Every suite
is a composition of library operations; errors raised by the libraries
are recorded as failed (or, for exhausted budgets, inconclusive) checks.
"""

import json
import logging
import time
from fractions import Fraction
from functools import lru_cache

from tabulate import tabulate

from src.algebra.enveloping import enveloping
from src.algebra.scalars import format_poly, specialize
from src.algebra.superalgebra import algebra_checks, gl2, sl12
from src.config import SUITES
from src.errors import BudgetExceeded, TwistlabError, UsageError
from src.frt.frtkit import ANCHOR_DET, ANCHOR_FRT, det_t, det_t_suite, frt_relations, frt_system, relations_suite
from src.frt.localization import ANCHOR_M_INVERSE, ANCHOR_SDET, localize, sdet_suite, t_inverse_checks
from src.frt.localization import verify_m_inverse_and_hopf
from src.frt.rewriting import word_names
from src.reports.report import Check, Report
from src.representations.representations import (
    ANCHOR_BLOCKS,
    entries,
    exact_universal_R,
    fundamental_rep,
    map_entries,
    matrix_to_json,
    r_matrix_fundamental,
    representation_checks,
    specialized_r_matrix,
    spin_rep_gl2,
    truncated_agreement,
    verify_graded_ybe,
)
from src.twist.jordanian import ANCHOR_RELATIONS as ANCHOR_JORDANIAN
from src.twist.jordanian import jordanian_check
from src.twist.twistkit import (
    ANCHOR_COCYCLE,
    ANCHOR_COPRODUCT,
    ANCHOR_R,
    TwistedHopf,
    build_sigma,
    build_twist,
    build_universal_R,
    coassociativity_checks,
    hexagon_checks,
    match_closed_forms,
    odd_generator_images,
    restriction_consistency,
    verify_cocycle,
    verify_hopf_axioms,
    verify_r_properties,
)

logger = logging.getLogger(__name__)

PRESENTATIONS = {"gl2": gl2, "sl12": sl12}
SERIES_SUITES = ("cocycle", "hopf-gl2", "hopf-sl12", "rmatrix-universal", "jordanian")
DUMP_SELECTORS = ("sigma", "F", "R", "coproduct:<gen>", "antipode:<gen>", "rmatrix99", "relations", "detT", "sdet")


def vanishing_parameters(config):
    """
    The parameters that ``--set`` fixes to zero.

    Truncation in the (h, g)-degree commutes with h = 0 and g = 0 only, so the
    series suites and dumps accept no other values.

    Raises:
        UsageError: if h or g is fixed to a nonzero value.
    """
    values = {"h": config.h_value, "g": config.g_value}
    nonzero = [f"{p}={v}" for p, v in values.items() if v is not None and v != 0]
    if nonzero:
        raise UsageError(f"Truncated series can only be specialized at zero, not {', '.join(nonzero)}")
    return tuple(p for p, v in values.items() if v == 0)


# -- cached constructions ----------------------------------------------------------


@lru_cache(maxsize=None)
def _twist(name, order, vanishing=()):
    return build_twist(enveloping(PRESENTATIONS[name](), vanishing), order)


@lru_cache(maxsize=None)
def _hopf(name, order, vanishing=()):
    return TwistedHopf(_twist(name, order, vanishing))


@lru_cache(maxsize=None)
def _universal(name, order, vanishing=()):
    return build_universal_R(_twist(name, order, vanishing))


@lru_cache(maxsize=None)
def _localized(max_steps, max_length, h_value, g_value):
    return localize(frt_system(max_steps, max_length, h_value, g_value))


def _system(config, **values):
    h_value = values.get("h_value", config.h_value)
    g_value = values.get("g_value", config.g_value)
    return frt_system(config.max_steps, config.max_length, h_value, g_value)


def representation(config):
    """The representation named by ``config.rep``."""
    if config.rep == "fundamental":
        return fundamental_rep()
    return spin_rep_gl2(Fraction(config.rep.partition(":")[2]))


# -- suites ------------------------------------------------------------------------


def _collect(report, stage, anchor, producer):
    """Run one stage and add its checks; library errors become checks."""
    try:
        report.extend(producer())
    except BudgetExceeded as error:
        logger.warning(f"{stage}: budget exhausted ({error})")
        report.add(Check.inconclusive(stage, anchor, str(error)))
    except TwistlabError as error:
        logger.error(f"{stage}: {error}")
        report.add(Check.failure(stage, error, anchor))


def _validate_algebras(config, report):
    _collect(report, "presentations", "", algebra_checks)


def _cocycle(config, report):
    # F only involves Z, H and Xp, so the gl(2) copy decides sl(1/2) as well
    vanishing = vanishing_parameters(config)
    _collect(report, "cocycle", ANCHOR_COCYCLE, lambda: verify_cocycle(_twist("gl2", config.rank3_order, vanishing)))


def _hopf_suite(name):
    def run(config, report):
        vanishing = vanishing_parameters(config)
        hopf = _hopf(name, config.order, vanishing)
        _collect(report, "Hopf axioms", ANCHOR_COPRODUCT, lambda: verify_hopf_axioms(hopf, coassociativity=False))
        _collect(report, "closed forms", ANCHOR_COPRODUCT, lambda: match_closed_forms(hopf))
        if name == "sl12":
            _collect(report, "odd generators", ANCHOR_COPRODUCT, lambda: odd_generator_images(hopf))
            _collect(report, "restriction to gl(2)", ANCHOR_COPRODUCT,
                     lambda: restriction_consistency(_hopf("gl2", config.order, vanishing), hopf))
        _collect(report, "coassociativity", ANCHOR_COCYCLE,
                 lambda: coassociativity_checks(_hopf(name, config.rank3_order, vanishing)))

    return run


def _rmatrix_universal(config, report):
    vanishing = vanishing_parameters(config)
    _collect(report, "universal R", ANCHOR_R, lambda: verify_r_properties(
        _universal("sl12", config.order, vanishing), _hopf("sl12", config.order, vanishing), hexagons=False))
    _collect(report, "hexagons", ANCHOR_R, lambda: hexagon_checks(
        _universal("sl12", config.rank3_order, vanishing), _hopf("sl12", config.rank3_order, vanishing)))


def _series_agreement(config, rep):
    exact = exact_universal_R(rep)
    try:
        vanishing = vanishing_parameters(config)
    except UsageError:
        check = truncated_agreement(_universal("gl2", config.order).R, rep, exact, config.order)
        check.detail = "compared with h and g symbolic"
        return [check]
    exact = map_entries(exact, lambda v: specialize(v, config.h_value, config.g_value))
    return [truncated_agreement(_universal("gl2", config.order, vanishing).R, rep, exact, config.order)]


def _rmatrix_fundamental(config, report):
    rep = representation(config)
    _collect(report, "representation", ANCHOR_BLOCKS,
             lambda: representation_checks(rep, sl12() if config.rep == "fundamental" else gl2()))
    if config.rep == "fundamental":
        _collect(report, "9x9 blocks", ANCHOR_BLOCKS, lambda: list(
            r_matrix_fundamental(rep, config.h_value, config.g_value).checks))
    _collect(report, "series agreement", ANCHOR_BLOCKS, lambda: _series_agreement(config, rep))


def _ybe(config, report):
    rep = representation(config)
    _collect(report, "graded YBE", ANCHOR_BLOCKS, lambda: verify_graded_ybe(
        specialized_r_matrix(rep, config.h_value, config.g_value), rep.space.parities))


def _jordanian(config, report):
    _collect(report, "Jordanian basis", ANCHOR_JORDANIAN, lambda: jordanian_check(
        _hopf("gl2", config.order, vanishing_parameters(config))))


def _frt_relations(config, report):
    _collect(report, "FRT relations", ANCHOR_FRT,
             lambda: relations_suite(_system(config), config.h_value, config.g_value))


def _frt_det(config, report):
    def checks():
        system = _system(config)
        # the g = 0 comparison needs h and g symbolic
        classical = None if config.specialized else _system(config, g_value=Fraction(0))
        return det_t_suite(system, classical, config.h_value, config.g_value)

    _collect(report, "detT", ANCHOR_DET, checks)


def _frt_sdet(config, report):
    def checks():
        loc, sdet, found = _localized(config.max_steps, config.max_length, config.h_value, config.g_value)
        classical_L = classical = None
        if not config.specialized:
            classical_L = [[entry.specialize(0, 0) for entry in row] for row in sdet.L]
            classical = _system(config, h_value=Fraction(0), g_value=Fraction(0))
        return found + t_inverse_checks(loc, sdet.L, classical_L) + sdet_suite(loc, sdet, classical)

    _collect(report, "sdetM", ANCHOR_SDET, checks)


def _frt_inverse(config, report):
    def checks():
        loc, sdet, _ = _localized(config.max_steps, config.max_length, config.h_value, config.g_value)
        return verify_m_inverse_and_hopf(loc, sdet)

    _collect(report, "M^-1", ANCHOR_M_INVERSE, checks)


SUITE_RUNNERS = {
    "validate-algebras": _validate_algebras,
    "cocycle": _cocycle,
    "hopf-gl2": _hopf_suite("gl2"),
    "hopf-sl12": _hopf_suite("sl12"),
    "rmatrix-universal": _rmatrix_universal,
    "rmatrix-fundamental": _rmatrix_fundamental,
    "ybe": _ybe,
    "jordanian": _jordanian,
    "frt-relations": _frt_relations,
    "frt-det": _frt_det,
    "frt-sdet": _frt_sdet,
    "frt-inverse": _frt_inverse,
}


def run_suite(config):
    """
    Run the suite named by ``config.suite``; "all" runs every suite in turn.

    Args:
        config (SuiteConfig): Validated run settings.

    Returns:
        Report: The checks, the overall status and the configuration echo.

    Raises:
        UsageError: for an unknown suite, or a nonzero --set value on a
            suite that expands series.
    """
    if config.suite in SERIES_SUITES + ("all",):
        vanishing_parameters(config)
    if config.suite == "all":
        report = Report("all", config=config.to_json())
        for suite in SUITES:
            report.merge(run_suite(config.with_suite(suite)))
        logger.info(f"all suites finished: {report.status}")
        return report
    runner = SUITE_RUNNERS.get(config.suite)
    if runner is None:
        raise UsageError(f"Unknown suite: {config.suite}")
    logger.info(f"Running suite {config.suite}")
    report = Report(config.suite, config=config.to_json())
    start = time.perf_counter()
    runner(config, report)
    report.elapsed = time.perf_counter() - start
    logger.info(f"Suite {config.suite} finished: {report.status} in {report.elapsed:.2f}s")
    return report


def render(report, output_format):
    return report.dumps() if output_format == "json" else report.render_text()


# -- dumps -------------------------------------------------------------------------


def _hopf_image(selector, config):
    kind, _, name = selector.partition(":")
    if name not in sl12().names:
        raise UsageError(f"Unknown generator in {selector!r}; choose one of {', '.join(sl12().names)}")
    hopf = _hopf("sl12", config.order, vanishing_parameters(config))
    return hopf.coproduct_gen(name) if kind == "coproduct" else hopf.antipode_gen(name)


def _matrix_text(M):
    return tabulate([[format_poly(v) for v in row] for row in entries(M)], tablefmt="pretty")


def dump(selector, config):
    """
    Serialize one artifact.

    Args:
        selector (str): sigma, F, R, coproduct:<gen>, antipode:<gen>,
            rmatrix99, relations, detT or sdet.
        config (SuiteConfig): Orders, budgets, specializations and format.

    Returns:
        str: Canonical JSON, or a text rendering.

    Raises:
        UsageError: for an unknown selector or generator, or a nonzero --set
            value on a series artifact.
    """
    logger.info(f"Dumping {selector}")
    if selector == "sigma":
        artifact = build_sigma(enveloping(gl2(), vanishing_parameters(config)), config.order)
    elif selector == "F":
        artifact = _twist("gl2", config.order, vanishing_parameters(config)).F
    elif selector == "R":
        artifact = _universal("gl2", config.order, vanishing_parameters(config)).R
    elif selector.startswith(("coproduct:", "antipode:")):
        artifact = _hopf_image(selector, config)
    elif selector == "rmatrix99":
        R = r_matrix_fundamental(h_value=config.h_value, g_value=config.g_value).R
        if config.output_format == "json":
            return json.dumps(matrix_to_json(R), indent=2, sort_keys=True)
        return _matrix_text(R)
    elif selector == "relations":
        relations = frt_relations(config.h_value, config.g_value)
        if config.output_format == "json":
            return json.dumps(relations.to_json(), indent=2, sort_keys=True)
        return "\n".join(f"{'*'.join(word_names(lhs))} -> {rhs}" for lhs, rhs in relations)
    elif selector == "detT":
        artifact = _system(config).normal_form(det_t().specialize(config.h_value, config.g_value))
    elif selector == "sdet":
        artifact = _localized(config.max_steps, config.max_length, config.h_value, config.g_value)[1]
        if config.output_format != "json":
            return (f"sdetM = ({artifact.numerator}) detT^-2\n"
                    f"e - Psi T^-1 Theta = ({artifact.w_numerator}) detT^-1")
    else:
        raise UsageError(f"Unknown dump selector: {selector}. Choose one of {', '.join(DUMP_SELECTORS)}")
    if config.output_format == "json":
        return json.dumps(artifact.to_json(), indent=2, sort_keys=True)
    return str(artifact)
