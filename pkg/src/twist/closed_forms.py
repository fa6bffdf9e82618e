"""
Closed Forms Module

Series primitives for functions of sigma = -ln(1 - 2h Xp) and the printed
closed forms of the twisted coproducts and antipodes, each with its
alternative readings.

Every 1/h in a closed form is cancelled against the overall h carried by
sigma before anything is expanded:

    e^{-sigma} = 1 - 2h Xp
    e^{sigma} - 1 = 2h Xp e^{sigma}
    (g/h)(1 - e^{sigma}) = -2g Xp e^{sigma}
    sinh(sigma/2)/h = Xp e^{sigma/2}
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from src.algebra.enveloping import Element, TensorElement
from src.algebra.scalars import ONE, g, h, qq

logger = logging.getLogger(__name__)


def sigma(algebra, order):
    """sigma = sum_{k=1..N} (2h)^k Xp^k / k."""
    return scaled_sigma(algebra, 1, 0, order)


def scaled_sigma(algebra, lam, mu, order):
    """
    The element (lam + mu g/h) sigma with the 1/h cancelled termwise.

    Args:
        algebra (EnvelopingAlgebra): Algebra containing Xp.
        lam (Fraction): Coefficient of sigma.
        mu (Fraction): Coefficient of (g/h) sigma.
        order (int): Truncation order.

    Returns:
        Element: sum_k (2^k lam h^k + 2^k mu g h^{k-1}) Xp^k / k.
    """
    lam, mu = qq(Fraction(lam)), qq(Fraction(mu))
    terms = {}
    for k in range(1, order + 1):
        coeff = (h ** k * lam + g * h ** (k - 1) * mu) * qq(Fraction(2 ** k, k))
        terms[algebra.monomial("Xp", k)] = coeff
    return Element(algebra, terms, order)


def sigma_over_2h(algebra, order):
    """
    X = sigma/2h = sum_k (2h)^{k-1} Xp^k / k.

    The coefficient of Xp^k has degree k - 1, so a degree-N truncation keeps
    the powers Xp^1 .. Xp^{N+1}, one more than sigma itself.
    """
    terms = {}
    for degree in range(order + 1):
        k = degree + 1
        terms[algebra.monomial("Xp", k)] = h ** degree * qq(Fraction(2 ** degree, k))
    return Element(algebra, terms, order)


def exp_sigma(algebra, lam, mu, order):
    """
    exp((lam + mu g/h) sigma) as a series in Xp.

    Since e^{c sigma} = (1 - 2h Xp)^{-c}, the coefficient of Xp^m is
    prod_{k<m} (2(lam + k) h + 2 mu g) / m!, a polynomial of degree m.
    """
    lam, mu = Fraction(lam), Fraction(mu)
    terms = {algebra.unit: ONE}
    coeff = ONE
    for m in range(1, order + 1):
        coeff = coeff * (h * qq(2 * (lam + m - 1)) + g * qq(2 * mu)) * qq(Fraction(1, m))
        if not coeff:
            break
        terms[algebra.monomial("Xp", m)] = coeff
    return Element(algebra, terms, order)


class SigmaCalculus:
    """
    Named series building blocks for one algebra and truncation order.

    ``e(k)`` is e^{k sigma}, ``ea(k)`` is e^{k (g/2h) sigma} and ``eb(k)`` is
    e^{k (h+g) sigma / 2h}; products of these commute with each other.
    """

    def __init__(self, algebra, order):
        self.algebra = algebra
        self.order = order
        self._cache = {}

    def gen(self, name):
        return self.algebra.gen(name, self.order)

    def one(self):
        return self.algebra.one(self.order)

    def _memo(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def e(self, k):
        return self._memo(("e", k), lambda: exp_sigma(self.algebra, k, 0, self.order))

    def ea(self, k):
        return self._memo(("ea", k), lambda: exp_sigma(self.algebra, 0, Fraction(k, 2), self.order))

    def eb(self, k):
        return self._memo(("eb", k), lambda: exp_sigma(self.algebra, Fraction(k, 2), Fraction(k, 2), self.order))

    def sigma(self):
        return self._memo("sigma", lambda: sigma(self.algebra, self.order))

    def x(self):
        return self._memo("X", lambda: sigma_over_2h(self.algebra, self.order))

    def xp_e(self, k=1):
        """Xp e^{k sigma}, the cancelled form of (e^{k sigma} - e^{(k-1) sigma}) / 2h."""
        return self.gen("Xp") * self.e(k)

    def sinh_over_h(self):
        """sinh(sigma/2)/h = Xp e^{sigma/2}."""
        return self.xp_e(Fraction(1, 2))

    def cosh(self):
        return (self.e(Fraction(1, 2)) + self.e(Fraction(-1, 2))).scale(Fraction(1, 2))


def t(*elements):
    """Shorthand for a pure tensor."""
    return TensorElement.pure(*elements)


@dataclass(frozen=True)
class ClosedForm:
    """
    A printed right-hand side together with its alternative readings.

    ``readings`` maps a label to a builder taking a SigmaCalculus; the label
    ``printed`` is the form as it appears in print.
    """

    kind: str
    generator: str
    anchor: str
    readings: tuple


def _delta_h(c):
    H, Z = c.gen("H"), c.gen("Z")
    return t(H, c.e(1)) + t(c.one(), H) + t(c.xp_e(1), Z * c.e(1)).scale(-2 * g)


def _delta_xp_printed(c):
    Xp = c.gen("Xp")
    return t(Xp, c.one()) + t(c.e(-1), Xp)


def _delta_z(c):
    Z = c.gen("Z")
    return t(Z, c.one()) + t(c.one(), Z)


def _delta_xm(c):
    H, Z, Xm, one = c.gen("H"), c.gen("Z"), c.gen("Xm"), c.one()
    E, E2 = c.e(1), c.e(2)
    E_minus_1 = E - one
    terms = [
        t(Xm, E),
        t(one, Xm),
        t(H, E * H).scale(-h),
        t(H * (H + 2), E * E_minus_1).scale(h * qq(Fraction(-1, 2))),
        t(E_minus_1, Z * E * H).scale(g),
        t(H - E + 1, Z * E).scale(g),
        t(E_minus_1 * (H + E + 1), Z * E2).scale(g),
        # (g^2/2h)(e^sigma - 1) = g^2 Xp e^sigma
        t(c.xp_e(1), Z * Z * E).scale(-g ** 2),
        # (g^2/2h)(e^sigma - 1)^2 = 2h g^2 (Xp e^sigma)^2
        t(c.xp_e(1) * c.xp_e(1), Z * Z * E2).scale(-2 * h * g ** 2),
    ]
    total = terms[0]
    for term in terms[1:]:
        total = total + term
    return total


def _antipode_z(c):
    return -c.gen("Z")


def _antipode_h(c):
    H, Z, Xp = c.gen("H"), c.gen("Z"), c.gen("Xp")
    # (g/h) Z (e^{-sigma} - 1) = -2g Z Xp
    return -(H * c.e(-1)) - (Z * Xp).scale(2 * g)


def _antipode_xp_literal(c):
    return -(c.x() * c.e(1))


def _antipode_xp_subscript(c):
    return -(c.gen("Xp") * c.e(1))


def _antipode_xm(c):
    H, Z, Xm, Xp, one = c.gen("H"), c.gen("Z"), c.gen("Xm"), c.gen("Xp"), c.one()
    W = c.e(-1)
    inner = (
        Xm
        + (H * H * (W + one)).scale(h * qq(Fraction(1, 2)))
        - (H * (W - one)).scale(h)
        - (H * Z * W).scale(g)
        + (Z * (W - one)).scale(g)
        # (g^2/2h)(e^{-sigma} - 1) Z^2 = -g^2 Xp Z^2
        - (Xp * Z * Z).scale(g ** 2)
    )
    return -(inner * W)


def _delta_vbp(c):
    vbp = c.gen("vbp")
    return t(vbp, c.e(Fraction(-1, 2))) + t(c.ea(-1), vbp)


def _delta_vm(c):
    vm, vp, H, Z, one = c.gen("vm"), c.gen("vp"), c.gen("H"), c.gen("Z"), c.one()
    E, A = c.e(1), c.ea(1)
    return (
        t(vm, c.e(Fraction(1, 2)))
        + t(A, vm)
        + t(H * A, vp * E).scale(h)
        - t(vp * E, Z * c.e(Fraction(1, 2))).scale(g)
        - t((E - one) * A, Z * vp * E).scale(g)
    )


def _antipode_vbp_printed(c):
    return -c.gen("vbm") + c.eb(1)


def _antipode_vbp_repaired(c):
    return -(c.gen("vbp") * c.eb(1))


def _antipode_vm(c):
    vm, vp, H, Z, one = c.gen("vm"), c.gen("vp"), c.gen("H"), c.gen("Z"), c.one()
    return -((vm - (H * vp).scale(h) + (vp * (one + Z)).scale(g)) * c.eb(-1))


GL2_FORMS = (
    ClosedForm("coproduct", "Z", 'Delta(Z) = Z (x) 1 + 1 (x) Z', (("printed", _delta_z),)),
    ClosedForm("coproduct", "H", 'Delta(H) = H (x) e^sigma + 1 (x) H + ...', (("printed", _delta_h),)),
    ClosedForm(
        "coproduct",
        "Xp",
        'Delta(X+) = X+ (x) 1 + e^{-sigma} (x) X+',
        (("printed", _delta_xp_printed),),
    ),
    ClosedForm("coproduct", "Xm", 'Delta(X-) = X- (x) e^sigma + 1 (x) X- - hH (x) e^sigma H ...',
               (("printed", _delta_xm),)),
    ClosedForm("antipode", "Z", 'S(Z) = -Z', (("printed", _antipode_z),)),
    ClosedForm("antipode", "H", 'S(H) = -H e^{-sigma} + (g/h) Z (e^{-sigma} - 1)',
               (("printed", _antipode_h),)),
    ClosedForm(
        "antipode",
        "Xp",
        'S(X+) = -X e^sigma',
        (("printed (X = sigma/2h)", _antipode_xp_literal), ("X read as X+", _antipode_xp_subscript)),
    ),
    ClosedForm("antipode", "Xm", 'S(X-) = -{X- + (h/2) H^2 (e^{-sigma} + 1) ...} e^{-sigma}',
               (("printed", _antipode_xm),)),
)

SL12_FORMS = (
    ClosedForm("coproduct", "vbp", 'Delta(vb+) = vb+ (x) e^{-sigma/2} + exp(-(g/2h) sigma) (x) vb+',
               (("printed", _delta_vbp),)),
    ClosedForm("coproduct", "vm", 'Delta(v-) = v- (x) e^{sigma/2} + exp((g/2h) sigma) (x) v- + ...',
               (("printed", _delta_vm),)),
    ClosedForm(
        "antipode",
        "vbp",
        'S(vb+) = -vb_ + exp((h+g) sigma / 2h)',
        (("printed", _antipode_vbp_printed), ("vb+ times exp", _antipode_vbp_repaired)),
    ),
    ClosedForm("antipode", "vm", 'S(v-) = -(v- - hHv+ + gv+(1+Z)) exp(-(h+g) sigma / 2h)',
               (("printed", _antipode_vm),)),
)


def closed_forms(presentation_names):
    """The closed forms whose generators all belong to the given presentation."""
    forms = GL2_FORMS
    if "vm" in presentation_names:
        forms = forms + SL12_FORMS
    return forms


def match_reading(form, computed, calculus):
    """
    Compare a computed image with every reading of a closed form.

    Returns:
        tuple: (matched label or None, {label: residual term count}).
    """
    residuals = {}
    for label, build in form.readings:
        expected = build(calculus)
        residuals[label] = len((computed - expected).terms)
        if residuals[label] == 0:
            return label, residuals
    return None, residuals
