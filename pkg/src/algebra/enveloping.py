"""
Enveloping Algebra Module

Universal enveloping algebras of the presentations in ``superalgebra``:
PBW normal forms, graded tensor products of rank 2 and 3, truncated
exponentials and the undeformed Hopf structure (coproduct, counit,
antipode). Coefficients are polynomials in h, g truncated at a total
degree carried by every element.
"""

import logging
from fractions import Fraction

from sympy import QQ

from src.algebra.scalars import (
    DEFAULT_ORDER,
    HG,
    ONE,
    ZERO,
    format_poly,
    low_degree,
    poly_from_json,
    poly_to_json,
    qq,
    specialize,
    truncate,
)
from src.algebra.superalgebra import GENERATOR_ORDER, ODD, bracket
from src.errors import PresentationError, ScalarError, TensorRankError, TruncationError, UsageError

logger = logging.getLogger(__name__)


def _coerce_scalar(value):
    if isinstance(value, (int, Fraction)):
        return HG.ground_new(qq(value))
    return value


class EnvelopingAlgebra:
    """
    U(L) for a presentation L, with PBW monomials as exponent tuples.

    Generators are ordered by GENERATOR_ORDER restricted to L, so gl(2) is a
    prefix of sl(1/2). Products of monomials are memoized per algebra.
    Parameters named in ``vanishing`` are set to zero in every coefficient,
    together with the truncation.
    """

    def __init__(self, presentation, vanishing=()):
        self.presentation = presentation
        self.vanishing = tuple(sorted(vanishing))
        self.names = tuple(n for n in GENERATOR_ORDER if n in presentation.names)
        extra = [n for n in presentation.names if n not in GENERATOR_ORDER]
        self.names += tuple(extra)
        self.index = {name: i for i, name in enumerate(self.names)}
        self.parities = tuple(presentation.parity(n) for n in self.names)
        self.unit = (0,) * len(self.names)
        self._gen_cache = {}
        self._mono_cache = {}
        self._brackets = {}
        for j, x in enumerate(self.names):
            for k, y in enumerate(self.names):
                rhs = bracket(presentation, x, y)
                self._brackets[(j, k)] = {self.index[n]: qq(c) for n, c in rhs.items()}

    def __repr__(self):
        if self.vanishing:
            return f"U({self.presentation.name}) at {', '.join(f'{p} = 0' for p in self.vanishing)}"
        return f"U({self.presentation.name})"

    # -- monomial level -------------------------------------------------

    def mono_parity(self, m):
        return sum(e for e, p in zip(m, self.parities) if p == ODD) % 2

    def mono_degree(self, m):
        return sum(m)

    def mono_letters(self, m):
        """The generator indices of ``m`` read left to right."""
        letters = []
        for i, e in enumerate(m):
            letters.extend([i] * e)
        return letters

    def _bump(self, m, k, delta):
        return m[:k] + (m[k] + delta,) + m[k + 1:]

    def mul_mono_gen(self, m, k):
        """
        PBW normal form of the monomial ``m`` times the generator ``k``.

        Args:
            m (tuple): Exponent vector.
            k (int): Generator index.

        Returns:
            dict: Monomial -> QQ coefficient.
        """
        key = (m, k)
        cached = self._gen_cache.get(key)
        if cached is not None:
            return cached
        last = max((i for i, e in enumerate(m) if e), default=-1)
        if last < k:
            result = {self._bump(m, k, 1): QQ.one}
        elif last == k:
            if self.parities[k] == ODD:
                # x x = 1/2 [x, x] for odd x
                result = {}
                rest = self._bump(m, k, -1)
                for l, c in self._brackets[(k, k)].items():
                    self._accumulate(result, self.mul_mono_gen(rest, l), c / 2)
            else:
                result = {self._bump(m, k, 1): QQ.one}
        else:
            # m = rest * x_last and x_last x_k = sign x_k x_last + [x_last, x_k]
            rest = self._bump(m, last, -1)
            sign = -QQ.one if self.parities[last] * self.parities[k] else QQ.one
            result = {}
            for mono, c in self.mul_mono_gen(rest, k).items():
                self._accumulate(result, self.mul_mono_gen(mono, last), sign * c)
            for l, c in self._brackets[(last, k)].items():
                self._accumulate(result, self.mul_mono_gen(rest, l), c)
        self._gen_cache[key] = result
        return result

    @staticmethod
    def _accumulate(target, source, factor):
        for mono, c in source.items():
            value = target.get(mono, QQ.zero) + factor * c
            if value:
                target[mono] = value
            else:
                target.pop(mono, None)

    def mul_mono(self, m1, m2):
        """PBW normal form of the product of two monomials."""
        key = (m1, m2)
        cached = self._mono_cache.get(key)
        if cached is not None:
            return cached
        result = {m1: QQ.one}
        for k in self.mono_letters(m2):
            step = {}
            for mono, c in result.items():
                self._accumulate(step, self.mul_mono_gen(mono, k), c)
            result = step
        self._mono_cache[key] = result
        return result

    def mono_name(self, m):
        if not any(m):
            return "1"
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    # -- element constructors --------------------------------------------

    def monomial(self, name, power=1):
        if name not in self.index:
            raise PresentationError(f"Generator {name!r} not in {self.presentation.name}")
        m = [0] * len(self.names)
        m[self.index[name]] = power
        return tuple(m)

    def one(self, order=DEFAULT_ORDER):
        return Element(self, {self.unit: ONE}, order)

    def scalar(self, coeff, order=DEFAULT_ORDER):
        return Element(self, {self.unit: _coerce_scalar(coeff)}, order)

    def gen(self, name, order=DEFAULT_ORDER):
        return Element(self, {self.monomial(name): ONE}, order)

    def zero(self, order=DEFAULT_ORDER):
        return Element(self, {}, order)

    def word(self, names, order=DEFAULT_ORDER):
        """Product of generators given by name, left to right."""
        result = self.one(order)
        for name in names:
            result = result * self.gen(name, order)
        return result

    def tensor_one(self, rank=2, order=DEFAULT_ORDER):
        return TensorElement(self, rank, {(self.unit,) * rank: ONE}, order)


_ALGEBRAS = {}


def enveloping(presentation, vanishing=()):
    """
    The enveloping algebra of a presentation, shared per presentation object.

    Mutated presentations are distinct objects and get their own product cache.
    ``vanishing`` names the parameters set to zero (``"h"``, ``"g"``).
    """
    vanishing = tuple(sorted(set(vanishing)))
    unknown = [p for p in vanishing if p not in ("h", "g")]
    if unknown:
        raise ScalarError(f"Only h and g can be set to zero, not {unknown}")
    key = (id(presentation), vanishing)
    entry = _ALGEBRAS.get(key)
    if entry is None or entry[0] is not presentation:
        entry = (presentation, EnvelopingAlgebra(presentation, vanishing))
        _ALGEBRAS[key] = entry
    return entry[1]


class Element:
    """
    A linear combination of PBW monomials with truncated (h, g) coefficients.
    """

    __slots__ = ("algebra", "terms", "order")

    def __init__(self, algebra, terms, order=DEFAULT_ORDER):
        self.algebra = algebra
        self.order = order
        cleaned = {}
        for mono, c in terms.items():
            c = truncate(c, order, algebra.vanishing)
            if c:
                cleaned[mono] = c
        self.terms = cleaned

    def _wrap(self, other):
        if isinstance(other, Element):
            return other
        return self.algebra.scalar(other, self.order)

    def __add__(self, other):
        other = self._wrap(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            terms[mono] = terms.get(mono, ZERO) + c
        return Element(self.algebra, terms, min(self.order, other.order))

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()}, self.order)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def scale(self, coeff):
        coeff = _coerce_scalar(coeff)
        return Element(self.algebra, {m: c * coeff for m, c in self.terms.items()}, self.order)

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        order = min(self.order, other.order)
        algebra = self.algebra
        acc = {}
        right = [(m2, c2, low_degree(c2)) for m2, c2 in other.terms.items()]
        for m1, c1 in self.terms.items():
            d1 = low_degree(c1)
            for m2, c2, d2 in right:
                if d1 + d2 > order:
                    continue
                c = truncate(c1 * c2, order)
                if not c:
                    continue
                for mono, k in algebra.mul_mono(m1, m2).items():
                    acc[mono] = acc.get(mono, ZERO) + c * k
        return Element(algebra, acc, order)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, Element):
            other = self._wrap(other)
        return (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(sorted(self.terms)))

    def is_zero(self):
        return not self.terms

    def parity(self):
        """Common Z2 degree of the terms (None for inhomogeneous elements)."""
        parities = {self.algebra.mono_parity(m) for m in self.terms}
        if not parities:
            return 0
        if len(parities) > 1:
            return None
        return parities.pop()

    def truncated(self, order):
        return Element(self.algebra, self.terms, min(order, self.order))

    def specialize(self, h_value=None, g_value=None):
        return Element(self.algebra, {m: specialize(c, h_value, g_value) for m, c in self.terms.items()},
                       self.order)

    def coefficient(self, mono):
        return self.terms.get(mono, ZERO)

    def commutator(self, other):
        """Graded commutator [self, other]."""
        p, q = self.parity(), other.parity()
        sign = -1 if (p or 0) * (q or 0) else 1
        return self * other - (other * self).scale(sign)

    def anticommutator(self, other):
        return self * other + other * self

    def low_degree(self):
        degrees = [low_degree(c) for c in self.terms.values()]
        return min(degrees) if degrees else None

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: (sum(item[0]), item[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            parts.append(f"({format_poly(c)})*{self.algebra.mono_name(mono)}")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self):
        return {
            "order": self.order,
            "generators": list(self.algebra.names),
            "terms": [{"monomial": list(m), "coeff": poly_to_json(c)} for m, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, algebra, data):
        terms = {tuple(t["monomial"]): poly_from_json(t["coeff"]) for t in data["terms"]}
        return cls(algebra, terms, int(data["order"]))


class TensorElement:
    """
    An element of the graded tensor power U^{(x)rank}, rank 2 or 3.

    Multiplication carries the Koszul sign
    (a1 (x) a2)(b1 (x) b2) = (-1)^{|a2||b1|} a1 b1 (x) a2 b2.
    """

    __slots__ = ("algebra", "rank", "terms", "order")

    def __init__(self, algebra, rank, terms, order=DEFAULT_ORDER):
        if rank not in (2, 3):
            raise TensorRankError(f"Unsupported tensor rank {rank}")
        self.algebra = algebra
        self.rank = rank
        self.order = order
        cleaned = {}
        for monos, c in terms.items():
            c = truncate(c, order, algebra.vanishing)
            if c:
                cleaned[monos] = c
        self.terms = cleaned

    @classmethod
    def pure(cls, *elements):
        """Tensor product of Elements, one per slot."""
        algebra = elements[0].algebra
        order = min(e.order for e in elements)
        terms = {(): ONE}
        for e in elements:
            step = {}
            for monos, c in terms.items():
                for m, d in e.terms.items():
                    key = monos + (m,)
                    step[key] = step.get(key, ZERO) + truncate(c * d, order)
            terms = step
        return cls(algebra, len(elements), terms, order)

    def _check(self, other):
        if not isinstance(other, TensorElement):
            raise TensorRankError("Tensor elements can only be combined with tensor elements")
        if other.rank != self.rank:
            raise TensorRankError(f"Rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for monos, c in other.terms.items():
            terms[monos] = terms.get(monos, ZERO) + c
        return TensorElement(self.algebra, self.rank, terms, min(self.order, other.order))

    def __neg__(self):
        return TensorElement(self.algebra, self.rank, {k: -c for k, c in self.terms.items()}, self.order)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff):
        coeff = _coerce_scalar(coeff)
        return TensorElement(self.algebra, self.rank, {k: c * coeff for k, c in self.terms.items()}, self.order)

    def __mul__(self, other):
        if not isinstance(other, TensorElement):
            return self.scale(other)
        return tensor_multiply(self, other)

    def __eq__(self, other):
        return (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(sorted(self.terms)))

    def is_zero(self):
        return not self.terms

    def truncated(self, order):
        return TensorElement(self.algebra, self.rank, self.terms, min(order, self.order))

    def specialize(self, h_value=None, g_value=None):
        return TensorElement(self.algebra, self.rank,
                             {k: specialize(c, h_value, g_value) for k, c in self.terms.items()}, self.order)

    def low_degree(self):
        degrees = [low_degree(c) for c in self.terms.values()]
        return min(degrees) if degrees else None

    def parity(self):
        parities = {sum(self.algebra.mono_parity(m) for m in k) % 2 for k in self.terms}
        if len(parities) > 1:
            return None
        return parities.pop() if parities else 0

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: (sum(map(sum, item[0])), item[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.algebra.mono_name
        return " + ".join(
            f"({format_poly(c)})*" + " (x) ".join(names(m) for m in monos) for monos, c in self.sorted_terms()
        )

    __repr__ = __str__

    def to_json(self):
        return {
            "rank": self.rank,
            "order": self.order,
            "generators": list(self.algebra.names),
            "terms": [
                {"monomials": [list(m) for m in monos], "coeff": poly_to_json(c)} for monos, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, algebra, data):
        terms = {tuple(tuple(m) for m in t["monomials"]): poly_from_json(t["coeff"]) for t in data["terms"]}
        return cls(algebra, int(data["rank"]), terms, int(data["order"]))


def pbw_normal_form(a, b):
    """
    Product of two Elements in PBW normal form.

    Args:
        a (Element): Left factor.
        b (Element): Right factor, over the same presentation.

    Returns:
        Element: The normalized product.
    """
    if a.algebra is not b.algebra:
        raise PresentationError("Elements belong to different enveloping algebras")
    return a * b


def koszul_exponent(algebra, left, right):
    """Sum over crossings |left_i||right_j| for i > j, as used in tensor products."""
    parity = algebra.mono_parity
    total = 0
    for i in range(1, len(left)):
        pi = parity(left[i])
        if not pi:
            continue
        for j in range(i):
            total += parity(right[j])
    return total % 2


def tensor_multiply(a, b):
    """
    Graded product of two tensor elements of equal rank.

    Args:
        a (TensorElement): Left factor.
        b (TensorElement): Right factor.

    Returns:
        TensorElement: Slotwise PBW-normalized product with Koszul signs.
    """
    if not isinstance(b, TensorElement) or a.rank != b.rank:
        raise TensorRankError(f"Rank mismatch: {a.rank} vs {getattr(b, 'rank', None)}")
    algebra = a.algebra
    order = min(a.order, b.order)
    acc = {}
    right = [(k2, c2, low_degree(c2)) for k2, c2 in b.terms.items()]
    for k1, c1 in a.terms.items():
        d1 = low_degree(c1)
        for k2, c2, d2 in right:
            if d1 + d2 > order:
                continue
            c = truncate(c1 * c2, order)
            if not c:
                continue
            if koszul_exponent(algebra, k1, k2):
                c = -c
            slots = [algebra.mul_mono(x, y) for x, y in zip(k1, k2)]
            partial = {(): QQ.one}
            for slot in slots:
                step = {}
                for prefix, p in partial.items():
                    for mono, q in slot.items():
                        step[prefix + (mono,)] = p * q
                partial = step
            for key, k in partial.items():
                acc[key] = acc.get(key, ZERO) + c * k
    return TensorElement(algebra, a.rank, acc, order)


def tensor_exp(t):
    """
    Truncated exponential of a tensor element without degree-0 terms.

    Args:
        t (TensorElement): Argument whose coefficients all vanish at h = g = 0.

    Returns:
        TensorElement: sum_{k <= N} t**k / k!.
    """
    if t.terms and t.low_degree() == 0:
        raise TruncationError("tensor_exp argument has a term of (h, g)-degree 0")
    one = t.algebra.tensor_one(t.rank, t.order)
    result = one
    power = one
    for k in range(1, t.order + 1):
        power = (power * t).scale(Fraction(1, k))
        if power.is_zero():
            break
        result = result + power
    return result


def element_exp(x):
    """Truncated exponential of an Element without degree-0 terms."""
    if x.terms and x.low_degree() == 0:
        raise TruncationError("exponential argument has a term of (h, g)-degree 0")
    result = x.algebra.one(x.order)
    power = result
    for k in range(1, x.order + 1):
        power = (power * x).scale(Fraction(1, k))
        if power.is_zero():
            break
        result = result + power
    return result


def unipotent_inverse(x):
    """
    Inverse of an element of the form 1 + (terms of positive degree).

    Works for Elements and TensorElements alike via the geometric series.
    """
    if isinstance(x, TensorElement):
        one = x.algebra.tensor_one(x.rank, x.order)
    else:
        one = x.algebra.one(x.order)
    nil = one - x
    if nil.terms and nil.low_degree() == 0:
        raise TruncationError("inverse needs an element congruent to 1 modulo (h, g)")
    result = one
    power = one
    for _ in range(x.order):
        power = power * nil
        if power.is_zero():
            break
        result = result + power
    return result


# -- undeformed Hopf structure ------------------------------------------------


def coproduct0(x):
    """
    Primitive coproduct extended multiplicatively: Delta0(x) = x (x) 1 + 1 (x) x.

    Args:
        x (Element): Element of the enveloping algebra.

    Returns:
        TensorElement: Delta0(x) in the graded tensor square.
    """
    algebra = x.algebra
    order = x.order
    cache = {}
    acc = TensorElement(algebra, 2, {}, order)
    for mono, c in x.terms.items():
        image = cache.get(mono)
        if image is None:
            image = _coproduct0_monomial(algebra, mono, order)
            cache[mono] = image
        acc = acc + image.scale(c)
    return acc


def _coproduct0_monomial(algebra, mono, order):
    result = algebra.tensor_one(2, order)
    unit = algebra.unit
    for k in algebra.mono_letters(mono):
        gen = tuple(1 if i == k else 0 for i in range(len(unit)))
        prim = TensorElement(algebra, 2, {(gen, unit): ONE, (unit, gen): ONE}, order)
        result = result * prim
    return result


def counit0(x):
    """Counit: the coefficient of the unit monomial (a polynomial in h, g)."""
    return x.coefficient(x.algebra.unit)


def antipode0(x):
    """
    Graded anti-automorphism with S0(generator) = -generator.

    S0(a b) = (-1)^{|a||b|} S0(b) S0(a).
    """
    algebra = x.algebra
    order = x.order
    acc = algebra.zero(order)
    for mono, c in x.terms.items():
        image = algebra.one(order)
        parity_so_far = 0
        for k in algebra.mono_letters(mono):
            pk = algebra.parities[k]
            gen = Element(algebra, {tuple(1 if i == k else 0 for i in range(len(algebra.unit))): ONE}, order)
            sign = -1 if (parity_so_far * pk) % 2 == 0 else 1
            image = (gen * image).scale(sign)
            parity_so_far = (parity_so_far + pk) % 2
        acc = acc + image.scale(c)
    return acc


def hopf0_apply(which, x):
    """
    Apply one of the undeformed Hopf maps.

    Args:
        which (str): ``coproduct``, ``counit`` or ``antipode``.
        x (Element): The argument.

    Returns:
        TensorElement, PolyElement or Element depending on ``which``.

    Raises:
        UsageError: for any other map name.
    """
    if which in ("coproduct", "delta0"):
        return coproduct0(x)
    if which in ("counit", "epsilon0"):
        return counit0(x)
    if which in ("antipode", "s0"):
        return antipode0(x)
    raise UsageError(f"Unknown Hopf map: {which}")


# -- slot maps on tensors -------------------------------------------------------


def multiply_slots(t):
    """m: U (x) U -> U on a rank-2 tensor."""
    algebra = t.algebra
    acc = {}
    for (m1, m2), c in t.terms.items():
        for mono, k in algebra.mul_mono(m1, m2).items():
            acc[mono] = acc.get(mono, ZERO) + c * k
    return Element(algebra, acc, t.order)


def map_slot(t, slot, func):
    """
    Apply a linear map Element -> Element to one slot of a tensor.

    Only even maps are supported, so no Koszul sign arises.
    """
    algebra = t.algebra
    acc = {}
    cache = {}
    for monos, c in t.terms.items():
        mono = monos[slot]
        image = cache.get(mono)
        if image is None:
            image = func(Element(algebra, {mono: ONE}, t.order))
            cache[mono] = image
        for m, d in image.terms.items():
            key = monos[:slot] + (m,) + monos[slot + 1:]
            acc[key] = acc.get(key, ZERO) + truncate(c * d, t.order)
    return TensorElement(algebra, t.rank, acc, t.order)


def flip(t):
    """Graded flip tau(a (x) b) = (-1)^{|a||b|} b (x) a."""
    algebra = t.algebra
    acc = {}
    for (m1, m2), c in t.terms.items():
        sign = -1 if algebra.mono_parity(m1) * algebra.mono_parity(m2) else 1
        acc[(m2, m1)] = acc.get((m2, m1), ZERO) + c * sign
    return TensorElement(algebra, 2, acc, t.order)


def embed(t, positions):
    """
    Place a rank-2 tensor into rank 3 at the given slot positions.

    ``embed(F, (0, 1))`` is F12, ``(1, 2)`` is F23 and ``(0, 2)`` is F13.
    Inserting the even unit in the middle introduces no sign.
    """
    unit = t.algebra.unit
    acc = {}
    for (m1, m2), c in t.terms.items():
        key = [unit, unit, unit]
        key[positions[0]] = m1
        key[positions[1]] = m2
        acc[tuple(key)] = c
    return TensorElement(t.algebra, 3, acc, t.order)


def apply_coproduct_to_slot(t, slot, coproduct):
    """
    Apply a coproduct to one slot of a rank-2 tensor, giving rank 3.

    Args:
        t (TensorElement): Rank-2 tensor.
        slot (int): 0 for (Delta (x) id), 1 for (id (x) Delta).
        coproduct (callable): Element -> rank-2 TensorElement.

    Returns:
        TensorElement: The rank-3 image.
    """
    algebra = t.algebra
    acc = {}
    cache = {}
    for (m1, m2), c in t.terms.items():
        mono = (m1, m2)[slot]
        image = cache.get(mono)
        if image is None:
            image = coproduct(Element(algebra, {mono: ONE}, t.order))
            cache[mono] = image
        for (a, b), d in image.terms.items():
            key = (a, b, m2) if slot == 0 else (m1, a, b)
            acc[key] = acc.get(key, ZERO) + truncate(c * d, t.order)
    return TensorElement(algebra, 3, acc, t.order)


def counit_slot(t, slot):
    """(eps0 (x) id) or (id (x) eps0) applied to a rank-2 tensor."""
    algebra = t.algebra
    acc = {}
    for (m1, m2), c in t.terms.items():
        if (m1, m2)[slot] != algebra.unit:
            continue
        keep = m2 if slot == 0 else m1
        acc[keep] = acc.get(keep, ZERO) + c
    return Element(algebra, acc, t.order)
