"""
Localization Module

SL_{h,g}(1/2) with detT and sdetM inverted.

detT is not central: D x = psi(x) D for an automorphism psi that is linear
on the generators, so detT^-1 y = psi^-1(y) detT^-1 and every element of the
localization is a right fraction

    sum_{s, k} p_{s,k} Sinv^s Dinv^k,

where Dinv = detT^-1 and Sinv = sdetM^-1 is central. Zero testing clears
Sinv with powers of sdetM and Dinv with powers of detT, both assumed to be
non-zero-divisors.
"""

import logging
from dataclasses import dataclass

from sympy.polys.matrices import DomainMatrix

from src.algebra.scalars import FRAC_DOMAIN, ONE, ZERO, to_frac
from src.errors import BudgetExceeded, RelationError
from src.frt.frtkit import coproduct_checks, det_t, h_free_multiple_of_g
from src.frt.rewriting import ENTRY, GENERATORS, NAMES, PARITY, NCPoly, normal_words, poly_coefficient
from src.reports.report import Check

logger = logging.getLogger(__name__)

ANCHOR_INVERTIBLE = 'detT detT^-1 = 1'
ANCHOR_T_INVERSE = 'T T^-1 = T^-1 T = I2'
ANCHOR_SDET = 'sdet M = (detT)^-1 (e - Psi T^-1 Theta)'
ANCHOR_CENTRAL = 'sdet M is central'
ANCHOR_BEREZINIAN = 'sdet M at h = g = 0 is the Berezinian'
ANCHOR_M_INVERSE = 'M M^-1 = M^-1 M = I3'
ANCHOR_ANTIPODE = 'S(M) = M^-1 with sdet M = 1'

T_INDICES = (1, 2)


def solve_linear(columns, target):
    """
    Solve sum_c x_c columns[c] = target over QQ(h, g).

    Args:
        columns (list): dict key -> PolyHG, one per unknown.
        target (dict): key -> PolyHG.

    Returns:
        list: Polynomial values of the unknowns (free ones set to zero), or
        None when the system has no solution.

    Raises:
        RelationError: if the solution is not polynomial in h, g.
    """
    keys = sorted({k for col in columns for k in col} | set(target), key=str)
    if not keys:
        return [ZERO] * len(columns)
    position = {k: r for r, k in enumerate(keys)}
    n = len(columns)
    rows = [[FRAC_DOMAIN.zero] * (n + 1) for _ in keys]
    for c, col in enumerate(columns):
        for k, v in col.items():
            rows[position[k]][c] = to_frac(v)
    for k, v in target.items():
        rows[position[k]][n] = to_frac(v)
    reduced, pivots = DomainMatrix(rows, (len(keys), n + 1), FRAC_DOMAIN).rref()
    if n in pivots:
        return None
    dense = reduced.to_dense().to_list()
    solution = [ZERO] * n
    for r, c in enumerate(pivots):
        solution[c] = poly_coefficient(dense[r][n])
    return solution


def _linear(vector):
    """NCPoly sum_i vector[i] x_i."""
    return NCPoly({(i,): c for i, c in enumerate(vector) if c})


class Localization:
    """
    The rewriting system of SL_{h,g}(1/2) extended by detT^-1 and sdetM^-1.

    ``psi`` and ``psi_inv`` are the 9x9 matrices of the conjugation
    automorphism and its inverse: psi(x_j) = sum_i psi[i][j] x_i.
    """

    def __init__(self, system):
        self.system = system
        self.det = system.normal_form(det_t())
        self.psi = derive_psi(system, self.det)
        self.psi_inv = invert_psi(self.psi)
        self._letter_images = {}
        self._word_cache = {}
        self._det_powers = {0: NCPoly.one(), 1: self.det}
        self.sdet_numerator = None

    def nf(self, p):
        return self.system.normal_form(p)

    def psi_image(self, index, inverse=False):
        M = self.psi_inv if inverse else self.psi
        return _linear([M[i][index] for i in range(len(GENERATORS))])

    def _letters(self, k):
        """psi^-k on the generators, as NCPolys."""
        if k not in self._letter_images:
            n = len(GENERATORS)
            if k == 1:
                images = {i: self.psi_image(i, inverse=True) for i in range(n)}
            else:
                first, previous = self._letters(1), self._letters(k - 1)
                images = {i: self.nf(previous[i].substitute(first)) for i in range(n)}
            self._letter_images[k] = images
        return self._letter_images[k]

    def psi_inv_power(self, p, k):
        """Normal form of psi^-k(p)."""
        if k == 0 or p.is_zero():
            return p
        result = NCPoly()
        for w, c in p.terms.items():
            key = (w, k)
            if key not in self._word_cache:
                self._word_cache[key] = self.nf(NCPoly.from_word(w).substitute(self._letters(k)))
            result = result + self._word_cache[key].scale(c)
        return result

    def det_power(self, m):
        if m not in self._det_powers:
            self._det_powers[m] = self.nf(self.det_power(m - 1) * self.det)
        return self._det_powers[m]

    # -- elements ---------------------------------------------------------------

    def element(self, p, s=0, k=0):
        return LocElement(self, {(s, k): self.nf(p)})

    def gen(self, name):
        return self.element(NCPoly.gen(name))

    def one(self):
        return self.element(NCPoly.one())

    def zero(self):
        return LocElement(self, {})

    def dinv(self, k=1):
        return self.element(NCPoly.one(), 0, k)

    def sinv(self):
        return self.element(NCPoly.one(), 1, 0)

    def sdet(self):
        if self.sdet_numerator is None:
            raise RelationError("sdetM has not been derived yet")
        return LocElement(self, {(0, 2): self.sdet_numerator})

    def is_zero(self, x):
        """
        Zero test for a right fraction.

        Sinv is cleared by multiplying with sdetM^smax, then every part
        p_k Dinv^k is written over the common denominator Dinv^K.
        """
        parts = {key: p for key, p in x.parts.items() if not p.is_zero()}
        if not parts:
            return True
        smax = max(s for s, _ in parts)
        if smax:
            cleared = self.zero()
            sdet = self.sdet()
            for (s, k), p in parts.items():
                term = LocElement(self, {(0, k): p})
                for _ in range(smax - s):
                    term = sdet * term
                cleared = cleared + term
            parts = {key: p for key, p in cleared.parts.items() if not p.is_zero()}
            if not parts:
                return True
        K = max(k for _, k in parts)
        numerator = NCPoly()
        for (_, k), p in parts.items():
            numerator = numerator + self.nf(p * self.det_power(K - k))
        return numerator.is_zero()


class LocElement:
    """A right fraction sum p_{s,k} Sinv^s Dinv^k with normal-form numerators."""

    __slots__ = ("loc", "parts")

    def __init__(self, loc, parts):
        self.loc = loc
        self.parts = {key: p for key, p in parts.items() if not p.is_zero()}

    def _wrap(self, other):
        if isinstance(other, LocElement):
            return other
        if isinstance(other, NCPoly):
            return self.loc.element(other)
        return self.loc.element(NCPoly.scalar(other))

    def __add__(self, other):
        other = self._wrap(other)
        parts = dict(self.parts)
        for key, p in other.parts.items():
            parts[key] = parts[key] + p if key in parts else p
        return LocElement(self.loc, parts)

    __radd__ = __add__

    def __neg__(self):
        return LocElement(self.loc, {key: -p for key, p in self.parts.items()})

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def scale(self, coeff):
        return LocElement(self.loc, {key: p.scale(coeff) for key, p in self.parts.items()})

    def __mul__(self, other):
        other = self._wrap(other)
        loc = self.loc
        parts = {}
        for (s1, k1), p1 in self.parts.items():
            for (s2, k2), p2 in other.parts.items():
                product = loc.nf(p1 * loc.psi_inv_power(p2, k1))
                key = (s1 + s2, k1 + k2)
                parts[key] = parts[key] + product if key in parts else product
        return LocElement(loc, parts)

    def is_zero(self):
        return self.loc.is_zero(self)

    def to_json(self):
        return [{"sdet_inverse_power": s, "detT_inverse_power": k, "numerator": p.to_json()}
                for (s, k), p in sorted(self.parts.items())]

    def __str__(self):
        if not self.parts:
            return "0"
        return " + ".join(f"[{p}] Sinv^{s} Dinv^{k}" for (s, k), p in sorted(self.parts.items()))


# -- adjoining detT^-1 ------------------------------------------------------------


def derive_psi(system, D):
    """
    Solve D x = psi(x) D with psi(x) a combination of generators of the same parity.

    Returns:
        list: 9x9 matrix of PolyHG, columns indexed by x.

    Raises:
        RelationError: if some D x is not of this form.
    """
    n = len(GENERATORS)
    right = [system.normal_form(NCPoly.from_word((i,)) * D).terms for i in range(n)]
    psi = [[ZERO] * n for _ in range(n)]
    for j in range(n):
        target = system.normal_form(D * NCPoly.from_word((j,))).terms
        candidates = [i for i in range(n) if PARITY[i] == PARITY[j]]
        solution = solve_linear([right[i] for i in candidates], target)
        if solution is None:
            raise RelationError(f"detT {NAMES[j]} is not of the form psi({NAMES[j]}) detT")
        for i, value in zip(candidates, solution):
            psi[i][j] = value
    return psi


def invert_psi(psi):
    """Inverse of the psi matrix; it must have polynomial entries."""
    n = len(psi)
    M = DomainMatrix([[to_frac(v) for v in row] for row in psi], (n, n), FRAC_DOMAIN)
    if M.det() == FRAC_DOMAIN.zero:
        raise RelationError("psi is not invertible: detT cannot be inverted by straightening")
    inverse = M.inv().to_dense().to_list()
    return [[poly_coefficient(v) if v else ZERO for v in row] for row in inverse]


def adjoin_inverses(system):
    """
    Adjoin detT^-1 to a rewriting system.

    Returns:
        tuple: (Localization, list of checks on the straightening rules).
    """
    loc = Localization(system)
    checks = []
    n = len(GENERATORS)
    identity = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    product = [[sum((loc.psi[i][k] * loc.psi_inv[k][j] for k in range(n)), ZERO) for j in range(n)]
               for i in range(n)]
    checks.append(Check.from_bool("psi is invertible over QQ[h, g]", product == identity, ANCHOR_INVERTIBLE))
    shifts = []
    details = []
    for j, name in enumerate(NAMES):
        image = loc.psi_image(j)
        shift = NCPoly.gen(name) - image
        shifts.extend(shift.terms.values())
        details.append(f"Dinv {name} = ({loc.psi_image(j, inverse=True)}) Dinv")
    checks.append(Check.from_bool("x - psi(x) has h-free multiples of g only",
                                  all(h_free_multiple_of_g(c) for c in shifts), ANCHOR_INVERTIBLE))
    checks.append(Check.from_residual("psi(detT) = detT", loc.nf(loc.det.substitute(
        {i: loc.psi_image(i) for i in range(n)}) - loc.det), ANCHOR_INVERTIBLE))
    D, Dinv = loc.element(loc.det), loc.dinv()
    checks.append(Check.from_bool("detT detT^-1 = 1", (D * Dinv - 1).is_zero(), ANCHOR_INVERTIBLE))
    checks.append(Check.from_bool("detT^-1 detT = 1", (Dinv * D - 1).is_zero(), ANCHOR_INVERTIBLE))
    c = loc.gen("c")
    checks.append(Check.from_bool("detT^-1 c = c detT^-1", (Dinv * c - c * Dinv).is_zero(), ANCHOR_INVERTIBLE,
                                  "; ".join(details)))
    return loc, checks


# -- T^-1 -----------------------------------------------------------------------------


def _t(i, j):
    return ENTRY[(i, j)]


def derive_t_inverse(loc, max_length=2, widen_to=3):
    """
    Solve T T^-1 = T^-1 T = I2 with T^-1 = L Dinv, the entries of L being
    combinations of normal words of length <= max_length in a, b, c, d.

    Returns:
        list: 2x2 matrix of NCPolys L.

    Raises:
        RelationError: if no solution exists up to word length ``widen_to``.
    """
    for length in range(max_length, widen_to + 1):
        basis = [w for m in range(length + 1) for w in normal_words(m, ("a", "b", "c", "d"))]
        unknowns = [(p, q, w) for p in T_INDICES for q in T_INDICES for w in basis]
        columns = []
        for p, q, w in unknowns:
            column = {}
            word_poly = NCPoly.from_word(w)
            for i in T_INDICES:
                # (T L)_{iq} gains t_ip w
                for key, c in loc.nf(NCPoly.from_word((_t(i, p),)) * word_poly).terms.items():
                    column[("TL", i, q, key)] = c
            for j in T_INDICES:
                # (L psi^-1(T))_{pj} gains w psi^-1(t_qj)
                image = loc.psi_inv_power(NCPoly.from_word((_t(q, j),)), 1)
                for key, c in loc.nf(word_poly * image).terms.items():
                    column[("LT", p, j, key)] = c
            columns.append(column)
        target = {}
        for i in T_INDICES:
            for key, c in loc.det.terms.items():
                target[("TL", i, i, key)] = c
                target[("LT", i, i, key)] = c
        solution = solve_linear(columns, target)
        if solution is not None:
            L = [[NCPoly(), NCPoly()], [NCPoly(), NCPoly()]]
            for (p, q, w), value in zip(unknowns, solution):
                if value:
                    L[p - 1][q - 1] = L[p - 1][q - 1] + NCPoly.from_word(w, value)
            logger.debug(f"T^-1 numerator found with words of length <= {length}")
            return L
        logger.info(f"no T^-1 with words of length <= {length}, widening")
    raise RelationError(f"no inverse of T with numerator words of length <= {widen_to}")


def t_inverse_checks(loc, L, classical_L=None):
    """Both products with T reduce to I2; optional comparison with the adjugate."""
    Dinv = loc.dinv()
    Tinv = [[loc.element(L[i][j]) * Dinv for j in range(2)] for i in range(2)]
    T = [[loc.element(NCPoly.from_word((_t(i, j),))) for j in T_INDICES] for i in T_INDICES]
    right, left = [], []
    for i in range(2):
        for j in range(2):
            delta = 1 if i == j else 0
            if not (T[i][0] * Tinv[0][j] + T[i][1] * Tinv[1][j] - delta).is_zero():
                right.append((i + 1, j + 1))
            if not (Tinv[i][0] * T[0][j] + Tinv[i][1] * T[1][j] - delta).is_zero():
                left.append((i + 1, j + 1))
    checks = [
        Check.from_residual("T T^-1 = I2", right, ANCHOR_T_INVERSE),
        Check.from_residual("T^-1 T = I2", left, ANCHOR_T_INVERSE,
                            "T^-1 = [" + "; ".join(", ".join(str(x) for x in row) for row in L) + "] Dinv"),
    ]
    if classical_L is not None:
        adjugate = [[NCPoly.gen("d"), -NCPoly.gen("b")], [-NCPoly.gen("c"), NCPoly.gen("a")]]
        bad = [(i, j) for i in range(2) for j in range(2) if classical_L[i][j] != adjugate[i][j]]
        checks.append(Check.from_residual("h = g = 0 gives the adjugate of T", bad, ANCHOR_T_INVERSE))
    return checks


# -- sdet -----------------------------------------------------------------------------


@dataclass
class Superdeterminant:
    """sdetM = numerator Dinv^2 together with w = e - Psi T^-1 Theta = w_numerator Dinv."""

    numerator: NCPoly
    w_numerator: NCPoly
    L: list

    def to_json(self):
        return {
            "sdet": {"numerator": self.numerator.to_json(), "detT_inverse_power": 2},
            "e - Psi T^-1 Theta": {"numerator": self.w_numerator.to_json(), "detT_inverse_power": 1},
        }


PSI = ("xi", "eta")
THETA = ("gamma", "delta")


def derive_sdet(loc, L):
    """
    sdetM = Dinv (e - Psi L Dinv Theta) = psi^-1(p_w) Dinv^2 with
    p_w = e detT - sum Psi_i L_ij psi^-1(Theta_j).

    The numerator is stored on ``loc`` so that Sinv can be cleared.
    """
    p_w = loc.nf(NCPoly.gen("e") * loc.det)
    for i, x in enumerate(PSI):
        for j, y in enumerate(THETA):
            theta = loc.psi_inv_power(NCPoly.gen(y), 1)
            p_w = p_w - loc.nf(NCPoly.gen(x) * L[i][j] * theta)
    numerator = loc.psi_inv_power(p_w, 1)
    loc.sdet_numerator = numerator
    return Superdeterminant(numerator, p_w, L)


def classical_berezinian(system):
    """e (ad - bc) - Psi adj(T) Theta in a supercommutative system."""
    gen = NCPoly.gen
    adjugate = [[gen("d"), -gen("b")], [-gen("c"), gen("a")]]
    value = gen("e") * (gen("a") * gen("d") - gen("b") * gen("c"))
    for i, x in enumerate(PSI):
        for j, y in enumerate(THETA):
            value = value - gen(x) * adjugate[i][j] * gen(y)
    return system.normal_form(value)


def sdet_suite(loc, sdet, classical_system=None):
    """
    Centrality of sdetM and its undeformed limit.

    [x, sdetM] = 0 is tested as x P - P psi^-2(x) = 0 for sdetM = P Dinv^2.
    Budget exhaustion makes a check inconclusive.

    Returns:
        list: Checks.
    """
    P = sdet.numerator
    checks = []
    try:
        Dinv = loc.dinv()
        w = loc.gen("e")
        for i, x in enumerate(PSI):
            for j, y in enumerate(THETA):
                w = w - loc.gen(x) * loc.element(sdet.L[i][j]) * Dinv * loc.gen(y)
        checks.append(Check.from_bool("sdetM = detT^-1 (e - Psi T^-1 Theta)", (Dinv * w - loc.sdet()).is_zero(),
                                      ANCHOR_SDET, f"numerator has {len(P.terms)} terms"))
    except BudgetExceeded as error:
        checks.append(Check.inconclusive("sdetM = detT^-1 (e - Psi T^-1 Theta)", ANCHOR_SDET, str(error)))
    for name in NAMES:
        x = NCPoly.gen(name)
        try:
            residual = loc.nf(x * P - P * loc.psi_inv_power(x, 2))
            checks.append(Check.from_residual(f"[{name}, sdetM] = 0", residual, ANCHOR_CENTRAL))
        except BudgetExceeded as error:
            checks.append(Check.inconclusive(f"[{name}, sdetM] = 0", ANCHOR_CENTRAL, str(error)))
    try:
        checks.append(Check.from_residual("[detT, sdetM] = 0", loc.nf(P - sdet.w_numerator), ANCHOR_CENTRAL,
                                          "psi fixes e detT - Psi L psi^-1(Theta)"))
    except BudgetExceeded as error:
        checks.append(Check.inconclusive("[detT, sdetM] = 0", ANCHOR_CENTRAL, str(error)))
    if classical_system is not None:
        try:
            limit = classical_system.normal_form(P.specialize(0, 0))
            expected = classical_berezinian(classical_system)
            checks.append(Check.from_residual("h = g = 0 gives the Berezinian", classical_system.normal_form(
                limit - expected), ANCHOR_BEREZINIAN))
        except BudgetExceeded as error:
            checks.append(Check.inconclusive("h = g = 0 gives the Berezinian", ANCHOR_BEREZINIAN, str(error)))
    return checks


# -- M^-1 and the Hopf maps ---------------------------------------------------------------


def _matmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    result = []
    for i in range(n):
        row = []
        for j in range(p):
            total = A[i][0] * B[0][j]
            for k in range(1, m):
                total = total + A[i][k] * B[k][j]
            row.append(total)
        result.append(row)
    return result


def supermatrix(loc):
    """M as a 3x3 matrix of localized elements."""
    return [[loc.element(NCPoly.from_word((ENTRY[(i, j)],))) for j in range(3)] for i in range(3)]


def m_inverse(loc, L, w_inverse):
    """
    M^-1 as the printed product of three block matrices

        | 1          0  |   | w^-1  0    |   | 1  -Psi T^-1 |
        | -T^-1 Theta I |   | 0     T^-1 |   | 0   I        |
    """
    one, zero = loc.one(), loc.zero()
    Dinv = loc.dinv()
    Tinv = [[loc.element(L[i][j]) * Dinv for j in range(2)] for i in range(2)]
    Psi = [loc.gen(x) for x in PSI]
    Theta = [loc.gen(y) for y in THETA]
    tinv_theta = [Tinv[i][0] * Theta[0] + Tinv[i][1] * Theta[1] for i in range(2)]
    psi_tinv = [Psi[0] * Tinv[0][j] + Psi[1] * Tinv[1][j] for j in range(2)]
    lower = [[one, zero, zero], [-tinv_theta[0], one, zero], [-tinv_theta[1], zero, one]]
    middle = [[w_inverse, zero, zero], [zero, Tinv[0][0], Tinv[0][1]], [zero, Tinv[1][0], Tinv[1][1]]]
    upper = [[one, -psi_tinv[0], -psi_tinv[1]], [zero, one, zero], [zero, zero, one]]
    return _matmul(_matmul(lower, middle), upper)


def _identity_residual(product, label, anchor):
    bad = []
    inconclusive = None
    for i in range(3):
        for j in range(3):
            try:
                if not (product[i][j] - (1 if i == j else 0)).is_zero():
                    bad.append((i, j))
            except BudgetExceeded as error:
                inconclusive = error
    if bad:
        return Check.from_residual(label, bad, anchor, f"entries {bad} differ from I3")
    if inconclusive is not None:
        return Check.inconclusive(label, anchor, str(inconclusive))
    return Check.from_residual(label, bad, anchor)


def verify_m_inverse_and_hopf(loc, sdet):
    """
    M M^-1 = M^-1 M = I3 in the localization, Delta and eps as algebra maps,
    and the antipode axiom with S(M) = M^-1 in the sdetM = 1 quotient.

    Returns:
        list: Checks.
    """
    checks = []
    M = supermatrix(loc)
    try:
        w_inverse = loc.sinv() * loc.dinv()
        Minv = m_inverse(loc, sdet.L, w_inverse)
        checks.append(_identity_residual(_matmul(M, Minv), "M M^-1 = I3", ANCHOR_M_INVERSE))
        checks.append(_identity_residual(_matmul(Minv, M), "M^-1 M = I3", ANCHOR_M_INVERSE))
    except BudgetExceeded as error:
        checks.append(Check.inconclusive("M M^-1 = M^-1 M = I3", ANCHOR_M_INVERSE, str(error)))
    checks.extend(coproduct_checks(loc.system.relations, loc.system))
    try:
        # sdetM = 1 means w = detT, i.e. e = detT + Psi T^-1 Theta, and w^-1 = Dinv
        psi_tinv_theta = loc.element(loc.nf(NCPoly.gen("e") * loc.det) - sdet.w_numerator) * loc.dinv()
        e_quotient = loc.element(loc.det) + psi_tinv_theta
        M_quotient = supermatrix(loc)
        M_quotient[0][0] = e_quotient
        S = m_inverse(loc, sdet.L, loc.dinv())
        checks.append(_identity_residual(_matmul(S, M_quotient), "S(M) M = I3 when sdetM = 1", ANCHOR_ANTIPODE))
        checks.append(_identity_residual(_matmul(M_quotient, S), "M S(M) = I3 when sdetM = 1", ANCHOR_ANTIPODE))
    except BudgetExceeded as error:
        checks.append(Check.inconclusive("antipode axiom when sdetM = 1", ANCHOR_ANTIPODE, str(error)))
    return checks


def localize(system):
    """
    Adjoin the inverses, derive T^-1 and sdetM.

    Returns:
        tuple: (Localization, Superdeterminant, list of checks).

    Raises:
        TwistlabError: if a step of the localization fails.
    """
    loc, checks = adjoin_inverses(system)
    L = derive_t_inverse(loc)
    sdet = derive_sdet(loc, L)
    logger.info(f"sdetM numerator has {len(sdet.numerator.terms)} terms")
    return loc, sdet, checks

