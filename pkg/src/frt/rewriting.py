"""
Rewriting Module

Words in the nine entries of the quantum supermatrix

    M = | e      xi   eta |
        | gamma  a    b   |
        | delta  c    d   |

noncommutative polynomials over QQ[h, g], oriented quadratic relation sets
and a budgeted rewriting system with an overlap audit.

Words are tuples of generator indices. Rules are oriented by the word order
(length, weight, lex), where the weight of the entry in row i and column j is
2 + j - i and lex uses e < xi < eta < gamma < delta < a < b < c < d. The
deformation terms of every relation have strictly smaller weight than its
undeformed part, so the leading words are the unsorted pairs and the odd
squares and the normal words are the sorted words without repeated odd
letters.
"""

import heapq
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction

from sympy.polys.matrices import DomainMatrix

from src.algebra.scalars import (
    FRAC_DOMAIN,
    ONE,
    ZERO,
    constant,
    format_poly,
    frac_to_ratfun,
    poly_from_json,
    poly_to_json,
    specialize,
    to_frac,
)
from src.errors import BudgetExceeded, RelationError

logger = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 100000
DEFAULT_MAX_LENGTH = 8


@dataclass(frozen=True)
class FRTGenerator:
    """An entry of M with its position and parity."""

    name: str
    row: int
    col: int

    @property
    def parity(self):
        return ((self.row > 0) + (self.col > 0)) % 2

    @property
    def weight(self):
        return 2 + self.col - self.row


GENERATORS = (
    FRTGenerator("e", 0, 0),
    FRTGenerator("xi", 0, 1),
    FRTGenerator("eta", 0, 2),
    FRTGenerator("gamma", 1, 0),
    FRTGenerator("delta", 2, 0),
    FRTGenerator("a", 1, 1),
    FRTGenerator("b", 1, 2),
    FRTGenerator("c", 2, 1),
    FRTGenerator("d", 2, 2),
)
NAMES = tuple(gen.name for gen in GENERATORS)
INDEX = {gen.name: i for i, gen in enumerate(GENERATORS)}
ENTRY = {(gen.row, gen.col): i for i, gen in enumerate(GENERATORS)}
PARITY = tuple(gen.parity for gen in GENERATORS)
WEIGHT = tuple(gen.weight for gen in GENERATORS)
T_SECTOR = ("a", "b", "c", "d")


def word(*names):
    """Word from generator names."""
    return tuple(INDEX[name] for name in names)


def word_names(w):
    return [NAMES[i] for i in w]


def word_parity(w):
    return sum(PARITY[i] for i in w) % 2


def word_key(w):
    return (len(w), sum(WEIGHT[i] for i in w), w)


def _heap_key(w):
    return (-len(w), -sum(WEIGHT[i] for i in w), tuple(-i for i in w))


def is_normal_word(w):
    """Sorted, with no odd letter repeated."""
    return all(x < y or (x == y and not PARITY[x]) for x, y in zip(w, w[1:]))


def normal_words(length, letters=None):
    """All normal words of a given length over the given letters (default: all nine)."""
    letters = sorted(INDEX[n] for n in (letters or NAMES))
    return [w for w in itertools.combinations_with_replacement(letters, length) if is_normal_word(w)]


def _coerce(coeff):
    if isinstance(coeff, (int, Fraction)):
        return constant(coeff)
    return coeff


class NCPoly:
    """
    A noncommutative polynomial in the entries of M: words -> PolyHG.

    Products concatenate words; normal forms come from a RewriteSystem.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def gen(cls, name):
        return cls({word(name): ONE})

    @classmethod
    def one(cls):
        return cls({(): ONE})

    @classmethod
    def scalar(cls, coeff):
        return cls({(): _coerce(coeff)})

    @classmethod
    def from_word(cls, w, coeff=ONE):
        return cls({tuple(w): _coerce(coeff)})

    @classmethod
    def from_names(cls, *names):
        return cls({word(*names): ONE})

    def _wrap(self, other):
        if isinstance(other, NCPoly):
            return other
        return NCPoly.scalar(other)

    def __add__(self, other):
        other = self._wrap(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, ZERO) + c
        return NCPoly(terms)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def scale(self, coeff):
        coeff = _coerce(coeff)
        return NCPoly({w: c * coeff for w, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            return self.scale(other)
        terms = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                terms[w] = terms.get(w, ZERO) + c1 * c2
        return NCPoly(terms)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            other = self._wrap(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def letters(self):
        return {i for w in self.terms for i in w}

    def degree(self):
        return max((len(w) for w in self.terms), default=0)

    def parity(self):
        """Common parity of the terms, or None when mixed or zero."""
        parities = {word_parity(w) for w in self.terms}
        return parities.pop() if len(parities) == 1 else None

    def coefficient(self, w):
        return self.terms.get(tuple(w), ZERO)

    def specialize(self, h_value=None, g_value=None):
        return NCPoly({w: specialize(c, h_value, g_value) for w, c in self.terms.items()})

    def substitute(self, images):
        """
        Algebra map on letters.

        Args:
            images (dict): generator index -> NCPoly (missing letters are kept).
        """
        result = NCPoly()
        for w, c in self.terms.items():
            term = NCPoly.scalar(c)
            for i in w:
                term = term * images.get(i, NCPoly.from_word((i,)))
            result = result + term
        return result

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: word_key(item[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            letters = "*".join(word_names(w)) or "1"
            parts.append(f"({format_poly(c)})*{letters}")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self):
        return [{"coeff": poly_to_json(c), "word": word_names(w)} for w, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, records):
        return cls({word(*r["word"]): poly_from_json(r["coeff"]) for r in records})


def poly_coefficient(entry):
    f = frac_to_ratfun(entry)
    if not f.is_polynomial():
        raise RelationError(f"Relation coefficient {f} is not a polynomial in h, g")
    return f.num


def row_reduce(relations):
    """
    Reduced row echelon form of a list of NCPolys over QQ(h, g).

    Columns are ordered by decreasing word order, so every pivot is the
    leading word of its row.

    Returns:
        list: (pivot word, NCPoly with pivot coefficient 1) pairs.
    """
    relations = [r for r in relations if not r.is_zero()]
    if not relations:
        return []
    columns = sorted({w for r in relations for w in r.terms}, key=word_key, reverse=True)
    position = {w: k for k, w in enumerate(columns)}
    rows = []
    for r in relations:
        row = [FRAC_DOMAIN.zero] * len(columns)
        for w, c in r.terms.items():
            row[position[w]] = to_frac(c)
        rows.append(row)
    reduced, pivots = DomainMatrix(rows, (len(rows), len(columns)), FRAC_DOMAIN).rref()
    dense = reduced.to_dense().to_list()
    result = []
    for r, col in enumerate(pivots):
        terms = {columns[k]: poly_coefficient(v) for k, v in enumerate(dense[r]) if v}
        result.append((columns[col], NCPoly(terms)))
    return result


class RelationSet:
    """
    Oriented relations ``lhs -> rhs`` with each lhs a word of length 2.

    ``rules`` maps the leading word to its replacement; the relation itself is
    ``lhs - rhs = 0``.
    """

    def __init__(self, rules, name=""):
        self.rules = dict(rules)
        self.name = name

    @classmethod
    def from_relations(cls, relations, name=""):
        """
        Orient a spanning list of relations into an independent rule set.

        Raises:
            RelationError: if a relation mixes parities, forces a scalar to
                vanish or has a leading word that is not quadratic.
        """
        relations = list(relations)
        for r in relations:
            if not r.is_zero() and r.parity() is None:
                raise RelationError(f"Relation mixes parities: {r}")
        rules = {}
        for lead, row in row_reduce(relations):
            if len(lead) == 0:
                raise RelationError(f"Inconsistent relations in {name or 'relation set'}: 1 = 0")
            if len(lead) != 2:
                raise RelationError(f"Leading word {word_names(lead)} is not quadratic")
            rules[lead] = NCPoly.from_word(lead) - row
        logger.debug(f"{name}: {len(relations)} relations, {len(rules)} independent")
        return cls(rules, name)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(sorted(self.rules.items(), key=lambda item: word_key(item[0])))

    def relations(self):
        """The relations as polynomials lhs - rhs."""
        return [NCPoly.from_word(lhs) - rhs for lhs, rhs in self]

    def leading_words(self):
        return set(self.rules)

    def restrict(self, names, name=None):
        """The rules among the given generators only."""
        allowed = {INDEX[n] for n in names}
        rules = {lhs: rhs for lhs, rhs in self.rules.items()
                 if set(lhs) <= allowed and rhs.letters() <= allowed}
        return RelationSet(rules, name or f"{self.name}|{','.join(names)}")

    def specialize(self, h_value=None, g_value=None):
        relations = [r.specialize(h_value, g_value) for r in self.relations()]
        return RelationSet.from_relations(relations, f"{self.name}@h={h_value},g={g_value}")

    def to_json(self):
        return [{"lhs": word_names(lhs), "rhs": rhs.to_json()} for lhs, rhs in self]

    @classmethod
    def from_json(cls, records, name=""):
        return cls({word(*r["lhs"]): NCPoly.from_json(r["rhs"]) for r in records}, name)


def expected_leading_words(names=NAMES):
    """Unsorted pairs and odd squares over the given generators."""
    letters = [INDEX[n] for n in names]
    return {(x, y) for x in letters for y in letters if x > y or (x == y and PARITY[x])}


class RewriteSystem:
    """
    Normal forms modulo a RelationSet.

    Reduction always rewrites the largest remaining word, so every rewrite
    step strictly decreases the word order; ``max_steps`` and ``max_length``
    bound each reduction.
    """

    def __init__(self, relations, max_steps=DEFAULT_MAX_STEPS, max_length=DEFAULT_MAX_LENGTH):
        self.relations = relations
        self.rules = {lhs: rhs.terms for lhs, rhs in relations.rules.items()}
        self.max_steps = max_steps
        self.max_length = max_length

    def with_budget(self, max_steps=None, max_length=None):
        return RewriteSystem(self.relations,
                             self.max_steps if max_steps is None else max_steps,
                             self.max_length if max_length is None else max_length)

    def redex(self, w):
        """Position of the leftmost reducible pair of ``w``, or None."""
        for k in range(len(w) - 1):
            if w[k:k + 2] in self.rules:
                return k
        return None

    def is_normal(self, w):
        return self.redex(w) is None

    def normal_form(self, p):
        """
        Reduce a polynomial to a combination of irreducible words.

        Raises:
            BudgetExceeded: if a word is longer than ``max_length`` or more than
                ``max_steps`` rewrite steps are needed.
        """
        if not isinstance(p, NCPoly):
            p = NCPoly.scalar(p)
        longest = p.degree()
        if longest > self.max_length:
            raise BudgetExceeded(f"word of length {longest} exceeds the length budget {self.max_length}")
        todo = dict(p.terms)
        heap = [(_heap_key(w), w) for w in todo]
        heapq.heapify(heap)
        result = {}
        steps = 0
        while heap:
            _, w = heapq.heappop(heap)
            c = todo.pop(w, None)
            if c is None:
                continue
            k = self.redex(w)
            if k is None:
                result[w] = result.get(w, ZERO) + c
                continue
            steps += 1
            if steps > self.max_steps:
                raise BudgetExceeded(f"normal form needs more than {self.max_steps} rewrite steps", steps)
            head, tail = w[:k], w[k + 2:]
            for r, rc in self.rules[w[k:k + 2]].items():
                nw = head + r + tail
                nc = todo.get(nw, ZERO) + c * rc
                if nc:
                    if nw not in todo:
                        heapq.heappush(heap, (_heap_key(nw), nw))
                    todo[nw] = nc
                else:
                    todo.pop(nw, None)
        return NCPoly(result)

    def reduces_to_zero(self, p):
        return self.normal_form(p).is_zero()

    def commutator(self, x, y, graded=True):
        """Normal form of xy - (-1)^{|x||y|} yx."""
        sign = -1 if graded and x.parity() == 1 and y.parity() == 1 else 1
        return self.normal_form(x * y - (y * x).scale(sign))

    def overlap_audit(self):
        """
        Resolve every overlap ambiguity xyz with rules on xy and yz.

        Returns:
            tuple: (number of overlaps, list of failing overlaps with their
            residual normal forms).
        """
        failures = []
        count = 0
        for (x, y), rhs1 in self.rules.items():
            for (y2, z), rhs2 in self.rules.items():
                if y2 != y:
                    continue
                count += 1
                left = NCPoly({w + (z,): c for w, c in rhs1.items()})
                right = NCPoly({(x,) + w: c for w, c in rhs2.items()})
                residual = self.normal_form(left - right)
                if not residual.is_zero():
                    failures.append({"word": word_names((x, y, z)), "residual": str(residual)})
        logger.debug(f"overlap audit: {count} overlaps, {len(failures)} unresolved")
        return count, failures


def equivalent(first, second):
    """
    Two-way implication between relation sets.

    Returns:
        tuple: (relations of ``second`` not implied by ``first``, relations of
        ``first`` not implied by ``second``), as lists of NCPolys.
    """
    a, b = RewriteSystem(first), RewriteSystem(second)
    missing_in_first = [r for r in second.relations() if not a.reduces_to_zero(r)]
    missing_in_second = [r for r in first.relations() if not b.reduces_to_zero(r)]
    return missing_in_first, missing_in_second
