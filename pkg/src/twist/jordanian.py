"""
Jordanian Basis Module

The nonlinear generators

    A = Z,  H' = e^{-sigma/2} H,  X = sigma/2h,
    Y = e^{-sigma/2} (Xm + (h/2) H^2) - (h/8) e^{sigma/2} (e^{-sigma} - 1)

of the twisted gl(2), their commutation relations and their Hopf maps.
Here hX = sigma/2, so e^{hX} = e^{sigma/2} and sinh(hX)/h = Xp e^{sigma/2}.
"""

import logging
from fractions import Fraction

from src.algebra.scalars import g, h, qq
from src.reports.report import Check
from src.twist.closed_forms import SigmaCalculus, t

logger = logging.getLogger(__name__)

ANCHOR_BASIS = "A, H', X, Y as series in Z, H, X+, X-"
ANCHOR_RELATIONS = "[H', X] = 2 sinh(hX) / h and companions"
ANCHOR_HOPF = "Delta and S on A, H', X, Y"


class JordanianBasis:
    """The elements A, H', X, Y as truncated series in U(gl(2))."""

    def __init__(self, algebra, order):
        self.calculus = c = SigmaCalculus(algebra, order)
        half = Fraction(1, 2)
        self.A = c.gen("Z")
        self.H1 = c.e(-half) * c.gen("H")
        self.X = c.x()
        # (h/8) e^{sigma/2} (e^{-sigma} - 1) = -(h^2/4) Xp e^{sigma/2}
        self.Y = (c.e(-half) * (c.gen("Xm") + (c.gen("H") * c.gen("H")).scale(h * qq(half)))
                  + c.sinh_over_h().scale(h ** 2 * qq(Fraction(1, 4))))
        self.exp_hx = c.e(half)
        self.exp_minus_hx = c.e(-half)
        self.sinh_over_h = c.sinh_over_h()
        self.cosh = c.cosh()

    def elements(self):
        return {"A": self.A, "H'": self.H1, "X": self.X, "Y": self.Y}


def commutation_checks(basis):
    """Residuals of the Jordanian commutation relations."""
    A, H1, X, Y = basis.A, basis.H1, basis.X, basis.Y
    cosh = basis.cosh
    checks = [
        Check.from_residual("[X, Y] = H'", X.commutator(Y) - H1, ANCHOR_RELATIONS),
        Check.from_residual("[H', X] = 2 sinh(hX)/h", H1.commutator(X) - basis.sinh_over_h.scale(2), ANCHOR_RELATIONS),
        Check.from_residual("[H', Y] = -Y cosh(hX) - cosh(hX) Y", H1.commutator(Y) + Y * cosh + cosh * Y,
                            ANCHOR_RELATIONS),
    ]
    for name, other in (("H'", H1), ("X", X), ("Y", Y)):
        checks.append(Check.from_residual(f"[A, {name}] = 0", A.commutator(other), ANCHOR_RELATIONS))
    return checks


def hopf_checks(basis, hopf):
    """Residuals of the printed coproducts, counits and antipodes of A, H', X, Y."""
    A, H1, X, Y = basis.A, basis.H1, basis.X, basis.Y
    one = basis.calculus.one()
    ehx, emhx, sh = basis.exp_hx, basis.exp_minus_hx, basis.sinh_over_h
    expected_delta = {
        "A": t(A, one) + t(one, A),
        "H'": t(H1, ehx) + t(emhx, H1) - t(sh, A * ehx).scale(2 * g),
        "X": t(X, one) + t(one, X),
        "Y": (t(Y, ehx) + t(emhx, Y) - t(sh, A * A * ehx).scale(g ** 2) + t(H1, A * ehx).scale(g)),
    }
    expected_antipode = {
        "A": -A,
        "X": -X,
        "H'": -(ehx * H1 * emhx) - (sh * A).scale(2 * g),
        "Y": -(ehx * Y * emhx) + (sh * A * A).scale(g ** 2) + (ehx * H1 * A * emhx).scale(g),
    }
    checks = []
    for name, x in basis.elements().items():
        checks.append(Check.from_residual(f"Delta({name})", hopf.coproduct(x) - expected_delta[name], ANCHOR_HOPF))
        checks.append(Check.from_residual(f"eps({name}) = 0", hopf.counit(x), ANCHOR_HOPF))
        checks.append(Check.from_residual(f"S({name})", hopf.antipode(x) - expected_antipode[name], ANCHOR_HOPF))
    return checks


def jordanian_check(hopf):
    """
    Build the nonlinear basis inside a twisted gl(2) and check its relations
    and Hopf maps.

    Args:
        hopf (TwistedHopf): Twisted structure over an algebra containing gl(2).

    Returns:
        list: Checks.
    """
    basis = JordanianBasis(hopf.algebra, hopf.order)
    logger.debug(f"Y has {len(basis.Y.terms)} terms at order {hopf.order}")
    return commutation_checks(basis) + hopf_checks(basis, hopf)
