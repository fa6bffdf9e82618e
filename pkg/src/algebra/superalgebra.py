"""
Superalgebra Module

Presentations of Lie superalgebras by generators, parities and rational
structure constants, with audits of graded antisymmetry and the graded
Jacobi identity. The gl(2) and sl(1/2) instances are loaded from the JSON
files in ``data/presentations``.
"""

import itertools
import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from src.errors import PresentationError
from src.reports.report import Check

logger = logging.getLogger(__name__)

EVEN, ODD = 0, 1

ANCHOR_TABLE = 'sl(1/2) bracket table'
ANCHOR_SUBALGEBRA = 'even part {Z, H, X+, X-} = gl(2)'

# Fixed PBW order of every generator the engine knows about
GENERATOR_ORDER = ("Z", "H", "Xp", "Xm", "vp", "vm", "vbp", "vbm")

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))),
                        "data", "presentations")


@dataclass(frozen=True)
class GeneratorId:
    """A named generator together with its Z2 degree."""

    name: str
    parity: int

    @property
    def is_odd(self):
        return self.parity == ODD


def combination(pairs):
    """Build a linear combination dict, dropping zero coefficients."""
    out = {}
    for name, coeff in pairs:
        out[name] = out.get(name, Fraction(0)) + Fraction(coeff)
    return {name: c for name, c in out.items() if c != 0}


@dataclass(frozen=True)
class Presentation:
    """
    A Lie superalgebra given by generators and structure constants.

    Brackets are stored once per unordered pair; the other orientation
    follows from graded antisymmetry [x, y] = -(-1)^{|x||y|} [y, x].
    Pairs that are absent bracket to zero.
    """

    name: str
    generators: tuple
    brackets: dict = field(default_factory=dict, hash=False, compare=False)

    def __post_init__(self):
        names = [gen.name for gen in self.generators]
        if len(set(names)) != len(names):
            raise PresentationError(f"Duplicate generator names in {self.name}")
        for (x, y), rhs in self.brackets.items():
            for gen in (x, y, *rhs):
                if gen not in names:
                    raise PresentationError(f"Unknown generator {gen!r} in {self.name} bracket table")

    @property
    def names(self):
        return tuple(gen.name for gen in self.generators)

    def generator(self, name):
        for gen in self.generators:
            if gen.name == name:
                return gen
        raise PresentationError(f"Generator {name!r} does not belong to {self.name}")

    def parity(self, name):
        return self.generator(name).parity

    def restrict(self, names, name=None):
        """
        Presentation on a subset of generators keeping sup's brackets verbatim.

        Brackets whose right-hand side leaves the subset are kept as they are,
        so that ``subalgebra_check`` can see the missing closure.
        """
        gens = tuple(self.generator(n) for n in names)
        kept = set(names)
        brackets = {(x, y): rhs for (x, y), rhs in self.brackets.items() if x in kept and y in kept}
        sub = Presentation.__new__(Presentation)
        object.__setattr__(sub, "name", name or f"{self.name}|{','.join(names)}")
        object.__setattr__(sub, "generators", gens)
        object.__setattr__(sub, "brackets", brackets)
        return sub

    def with_bracket(self, x, y, rhs):
        """Copy of the presentation with one bracket replaced (used by mutation tests)."""
        brackets = {k: v for k, v in self.brackets.items() if k not in ((x, y), (y, x))}
        brackets[(x, y)] = combination(rhs.items())
        return Presentation(f"{self.name}*", self.generators, brackets)

    def to_json(self):
        return {
            "name": self.name,
            "generators": [{"name": g.name, "parity": "odd" if g.is_odd else "even"} for g in self.generators],
            "brackets": [
                {"x": x, "y": y, "rhs": [{"gen": gen, "coeff": str(c)} for gen, c in rhs.items()]}
                for (x, y), rhs in self.brackets.items()
            ],
        }

    @classmethod
    def from_json(cls, data):
        try:
            gens = tuple(
                GeneratorId(item["name"], ODD if item["parity"] == "odd" else EVEN)
                for item in data["generators"]
            )
            brackets = {}
            for item in data.get("brackets", []):
                brackets[(item["x"], item["y"])] = combination(
                    (term["gen"], Fraction(term["coeff"])) for term in item["rhs"]
                )
        except (KeyError, TypeError, ValueError) as e:
            raise PresentationError(f"Malformed presentation data: {e}") from e
        return cls(data.get("name", "anonymous"), gens, brackets)

    def dump(self, path):
        with open(path, "w") as f:
            json.dump(self.to_json(), f, indent=2)


def load_presentation(path):
    """
    Load a presentation from a JSON file.

    Args:
        path (str): Path of the JSON file.

    Returns:
        Presentation: The parsed presentation.
    """
    with open(path) as f:
        return Presentation.from_json(json.load(f))


@lru_cache(maxsize=None)
def gl2():
    """The Lie algebra gl(2) on Z, H, Xp, Xm."""
    return load_presentation(os.path.join(DATA_DIR, "gl2.json"))


@lru_cache(maxsize=None)
def sl12():
    """The Lie superalgebra sl(1/2) on four even and four odd generators."""
    return load_presentation(os.path.join(DATA_DIR, "sl12.json"))


def bracket(p, x, y):
    """
    Graded bracket of two generators as a linear combination of generators.

    Args:
        p (Presentation): The presentation.
        x (str): Left generator.
        y (str): Right generator.

    Returns:
        dict: Generator name -> Fraction coefficient.
    """
    px, py = p.parity(x), p.parity(y)
    if (x, y) in p.brackets:
        return dict(p.brackets[(x, y)])
    if (y, x) in p.brackets:
        sign = Fraction(-1) if px * py == 0 else Fraction(1)
        return {gen: sign * c for gen, c in p.brackets[(y, x)].items()}
    return {}


def bracket_combination(p, u, v):
    """Bilinear extension of ``bracket`` to linear combinations of generators."""
    out = {}
    for x, cx in u.items():
        for y, cy in v.items():
            for gen, c in bracket(p, x, y).items():
                out[gen] = out.get(gen, Fraction(0)) + cx * cy * c
    return {gen: c for gen, c in out.items() if c != 0}


def antisymmetry_violations(p):
    """Pairs stored in both orientations that disagree with graded antisymmetry."""
    bad = []
    for (x, y), rhs in p.brackets.items():
        if (y, x) in p.brackets and x != y:
            sign = -1 if p.parity(x) * p.parity(y) == 0 else 1
            other = {gen: sign * c for gen, c in p.brackets[(y, x)].items()}
            if combination(rhs.items()) != combination(other.items()):
                bad.append((x, y))
        if x == y and p.parity(x) == EVEN and rhs:
            bad.append((x, y))
    return bad


def jacobi_residual(p, x, y, z):
    """
    Residual of the graded Jacobi identity for one generator triple.

    (-1)^{|x||z|}[x,[y,z]] + (-1)^{|y||x|}[y,[z,x]] + (-1)^{|z||y|}[z,[x,y]]
    """
    px, py, pz = p.parity(x), p.parity(y), p.parity(z)
    total = {}
    for sign_exp, a, b, c in ((px * pz, x, y, z), (py * px, y, z, x), (pz * py, z, x, y)):
        inner = bracket(p, b, c)
        outer = bracket_combination(p, {a: Fraction(1)}, inner)
        sign = -1 if sign_exp % 2 else 1
        for gen, coeff in outer.items():
            total[gen] = total.get(gen, Fraction(0)) + sign * coeff
    return {gen: c for gen, c in total.items() if c != 0}


def validate_presentation(p):
    """
    Audit graded antisymmetry and the graded Jacobi identity.

    Args:
        p (Presentation): The presentation to audit.

    Returns:
        dict: ``{"antisymmetry": [...], "jacobi": [((x, y, z), residual), ...]}``;
        both lists are empty for a valid presentation.
    """
    residuals = []
    for x, y, z in itertools.product(p.names, repeat=3):
        res = jacobi_residual(p, x, y, z)
        if res:
            residuals.append(((x, y, z), res))
    report = {"antisymmetry": antisymmetry_violations(p), "jacobi": residuals}
    logger.debug(f"{p.name}: {len(residuals)} Jacobi residuals")
    return report


def subalgebra_check(sub, sup):
    """
    Decide whether ``sub`` is a subalgebra of ``sup``.

    Every bracket among sub's generators must agree with sup's and close
    inside the span of sub's generators.

    Args:
        sub (Presentation): Candidate subalgebra.
        sup (Presentation): Ambient superalgebra.

    Returns:
        bool: True iff the brackets agree and close.
    """
    names = sub.names
    for name in names:
        if name not in sup.names or sup.parity(name) != sub.parity(name):
            return False
    for x, y in itertools.product(names, repeat=2):
        in_sup = bracket(sup, x, y)
        if combination(bracket(sub, x, y).items()) != combination(in_sup.items()):
            return False
        if any(gen not in names for gen in in_sup):
            return False
    return True


def algebra_checks():
    """Audit both built-in presentations and the embedding gl(2) in sl(1/2)."""
    checks = []
    for presentation in (gl2(), sl12()):
        audit = validate_presentation(presentation)
        checks.append(Check.from_residual(f"{presentation.name}: graded antisymmetry", audit["antisymmetry"],
                                          ANCHOR_TABLE))
        checks.append(Check.from_residual(f"{presentation.name}: graded Jacobi identity", audit["jacobi"],
                                          ANCHOR_TABLE, detail=f"{len(presentation.names) ** 3} triples"))
    checks.append(Check.from_bool("gl(2) is a subalgebra of sl(1/2)", subalgebra_check(gl2(), sl12()),
                                  ANCHOR_SUBALGEBRA))
    return checks
