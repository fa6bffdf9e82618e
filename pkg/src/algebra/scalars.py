"""
Scalars Module

Exact coefficient arithmetic for the deformation parameters h and g:
rationals, bivariate polynomials, truncated formal series and reduced
rational functions. Polynomials are sympy's sparse ``PolyElement`` over
QQ[h, g] with the graded lexicographic order (h > g), so every value is
immutable and canonical.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from sympy import QQ, symbols
from sympy.polys.orderings import grlex

from src.errors import ScalarError

logger = logging.getLogger(__name__)

Rational = Fraction

H_SYMBOL, G_SYMBOL = symbols("h g")

# QQ[h, g] and its fraction field share the symbol set and the monomial order
POLY_DOMAIN = QQ.poly_ring(H_SYMBOL, G_SYMBOL, order=grlex)
FRAC_DOMAIN = QQ.frac_field(H_SYMBOL, G_SYMBOL, order=grlex)
HG = POLY_DOMAIN.ring
h, g = HG.gens
ZERO = HG.zero
ONE = HG.one

DEFAULT_ORDER = 6


def qq(value):
    """
    Convert an int, Fraction or QQ element to a QQ coefficient.

    Args:
        value: The number to convert.

    Returns:
        A QQ domain element.
    """
    if isinstance(value, Fraction):
        return QQ(int(value.numerator), int(value.denominator))
    if isinstance(value, int):
        return QQ(value)
    return QQ.convert(value)


def to_fraction(coeff):
    """Convert a QQ coefficient back to a ``Fraction``."""
    return Fraction(int(coeff.numerator), int(coeff.denominator))


def poly(terms):
    """
    Build a PolyHG from a mapping of exponent pairs to rational coefficients.

    Args:
        terms (dict): Mapping (i, j) -> coefficient, meaning coeff * h**i * g**j.

    Returns:
        PolyElement: The polynomial with zero coefficients pruned.
    """
    return HG.from_dict({(int(i), int(j)): qq(c) for (i, j), c in terms.items() if c != 0})


def constant(value):
    """Return the constant polynomial ``value``."""
    return HG.ground_new(qq(value))


def truncate(p, order, vanishing=()):
    """
    Drop every term of total (h, g)-degree above ``order``.

    Args:
        p (PolyElement): Polynomial in h, g.
        order (int): Maximal total degree kept.
        vanishing (tuple): Parameters (``"h"``, ``"g"``) set to zero, so
            every term containing one of them is dropped as well.

    Returns:
        PolyElement: The truncated polynomial.
    """
    if not p:
        return p
    drop_h, drop_g = "h" in vanishing, "g" in vanishing
    if not (drop_h or drop_g) and max(i + j for i, j in p.keys()) <= order:
        return p
    return HG.from_dict({m: c for m, c in p.items()
                         if m[0] + m[1] <= order and not (drop_h and m[0]) and not (drop_g and m[1])})


def low_degree(p):
    """Smallest total degree among the terms of ``p`` (None for zero)."""
    if not p:
        return None
    return min(i + j for i, j in p.keys())


def constant_term(p):
    """Coefficient of h**0 g**0 as a ``Fraction``."""
    return to_fraction(p.get((0, 0), QQ.zero))


def poly_arith(a, b, op, order=None):
    """
    Exact arithmetic on PolyHG values and truncated series.

    Args:
        a: First operand (PolyElement or TruncSeries).
        b: Second operand of the same kind (ignored for ``truncate``).
        op (str): One of ``add``, ``mul`` or ``truncate``.
        order (int): Truncation order for ``truncate`` on plain polynomials.

    Returns:
        The result, of the same kind as ``a``.
    """
    if isinstance(a, TruncSeries):
        if op == "add":
            return a + b
        if op == "mul":
            return a * b
        if op == "truncate":
            return TruncSeries(a.poly, order if order is not None else a.order)
        raise ScalarError(f"Unknown operation: {op}")
    if op == "add":
        return a + b
    if op == "mul":
        product = a * b
        return truncate(product, order) if order is not None else product
    if op == "truncate":
        return truncate(a, order)
    raise ScalarError(f"Unknown operation: {op}")


def specialize(p, h_value=None, g_value=None):
    """
    Substitute exact rational values for h and/or g.

    Args:
        p (PolyElement): Polynomial in h, g.
        h_value (Fraction): Value for h, or None to keep h symbolic.
        g_value (Fraction): Value for g, or None to keep g symbolic.

    Returns:
        PolyElement: The specialized polynomial (still in QQ[h, g]).
    """
    if h_value is not None:
        p = p.subs(h, qq(h_value))
    if g_value is not None:
        p = p.subs(g, qq(g_value))
    return p


def format_poly(p):
    """Render a polynomial as a stable human-readable string."""
    return str(p.as_expr())


def poly_to_json(p):
    """Serialize a polynomial as a list of exponent/coefficient records."""
    records = []
    for (i, j), c in sorted(p.items(), key=lambda item: (-(item[0][0] + item[0][1]), item[0])):
        f = to_fraction(c)
        records.append({"h": i, "g": j, "num": str(f.numerator), "den": str(f.denominator)})
    return records


def poly_from_json(records):
    """Inverse of ``poly_to_json``."""
    return poly({(r["h"], r["g"]): Fraction(int(r["num"]), int(r["den"])) for r in records})


@dataclass(frozen=True)
class TruncSeries:
    """
    A bivariate formal power series in h, g known up to total degree ``order``.
    """

    poly: object
    order: int = DEFAULT_ORDER

    def __post_init__(self):
        if self.order < 0:
            raise ScalarError("Truncation order must be non-negative")
        object.__setattr__(self, "poly", truncate(self.poly, self.order))

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            return other.poly, min(self.order, other.order)
        if isinstance(other, (int, Fraction)):
            return constant(other), self.order
        return other, self.order

    def __add__(self, other):
        p, order = self._coerce(other)
        return TruncSeries(self.poly + p, order)

    __radd__ = __add__

    def __sub__(self, other):
        p, order = self._coerce(other)
        return TruncSeries(self.poly - p, order)

    def __neg__(self):
        return TruncSeries(-self.poly, self.order)

    def __mul__(self, other):
        p, order = self._coerce(other)
        return TruncSeries(self.poly * p, order)

    __rmul__ = __mul__

    def scale(self, factor):
        """Multiply by a rational constant."""
        return TruncSeries(self.poly * qq(Fraction(factor)), self.order)

    @property
    def constant(self):
        return constant_term(self.poly)

    def is_zero(self):
        return not self.poly

    def __str__(self):
        return f"{format_poly(self.poly)} + O({self.order + 1})"

    def to_json(self):
        return {"terms": poly_to_json(self.poly), "order": self.order}

    @classmethod
    def from_json(cls, data):
        return cls(poly_from_json(data["terms"]), int(data["order"]))


def series_exp(s):
    """
    Exponential of a series without constant term.

    Args:
        s (TruncSeries): Series with zero constant term.

    Returns:
        TruncSeries: sum_{k <= N} s**k / k! truncated at the order of ``s``.
    """
    if s.constant != 0:
        raise ScalarError("series_exp needs a zero constant term; factor out exp(c) first")
    result = TruncSeries(ONE, s.order)
    power = TruncSeries(ONE, s.order)
    for k in range(1, s.order + 1):
        power = power * s
        if power.is_zero():
            break
        result = result + power.scale(Fraction(1, factorial(k)))
    return result


def series_log(s):
    """
    Logarithm of a series with constant term 1.

    Args:
        s (TruncSeries): Series of the form 1 + (higher order).

    Returns:
        TruncSeries: sum_{k >= 1} (-1)**(k+1) (s-1)**k / k truncated.
    """
    if s.constant != 1:
        raise ScalarError("series_log needs constant term 1")
    u = s - 1
    result = TruncSeries(ZERO, s.order)
    power = TruncSeries(ONE, s.order)
    for k in range(1, s.order + 1):
        power = power * u
        if power.is_zero():
            break
        result = result + power.scale(Fraction((-1) ** (k + 1), k))
    return result


@dataclass(frozen=True)
class RatFun:
    """
    A quotient num/den of polynomials in h, g.

    Use ``ratfun_simplify`` to reach the canonical form in which structural
    equality is equality of rational functions.
    """

    num: object
    den: object = field(default_factory=lambda: ONE)

    def __post_init__(self):
        if not self.den:
            raise ScalarError("RatFun with zero denominator")

    def __add__(self, other):
        other = as_ratfun(other)
        return ratfun_simplify(RatFun(self.num * other.den + other.num * self.den, self.den * other.den))

    def __sub__(self, other):
        other = as_ratfun(other)
        return ratfun_simplify(RatFun(self.num * other.den - other.num * self.den, self.den * other.den))

    def __mul__(self, other):
        other = as_ratfun(other)
        return ratfun_simplify(RatFun(self.num * other.num, self.den * other.den))

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def is_polynomial(self):
        return self.den == ONE

    def __str__(self):
        if self.is_polynomial():
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"


def as_ratfun(value):
    """Wrap a polynomial or number as a RatFun."""
    if isinstance(value, RatFun):
        return value
    if isinstance(value, (int, Fraction)):
        return RatFun(constant(value))
    return RatFun(value)


def ratfun_simplify(f):
    """
    Reduce a rational function to canonical form.

    The gcd of numerator and denominator is cancelled and the denominator is
    made monic with respect to the graded lexicographic order (h > g).

    Args:
        f (RatFun): The rational function.

    Returns:
        RatFun: The canonical representative.
    """
    if not f.den:
        raise ScalarError("Zero denominator")
    if not f.num:
        return RatFun(ZERO, ONE)
    num, den = f.num.cancel(f.den)
    lead = den.LC
    return RatFun(num.quo_ground(lead), den.quo_ground(lead))


def to_frac(p):
    """Embed a PolyHG into the fraction field QQ(h, g)."""
    return FRAC_DOMAIN.convert_from(p, POLY_DOMAIN)


def frac_to_ratfun(f):
    """Convert a fraction-field element to a canonical RatFun."""
    return ratfun_simplify(RatFun(HG(f.numer.as_expr()) if f.numer.ring != HG else f.numer,
                                  HG(f.denom.as_expr()) if f.denom.ring != HG else f.denom))
