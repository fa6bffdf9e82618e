"""
FRT Kit Module

Entry relations of the quantum supergroup SL_{h,g}(1/2) derived from the
graded RMM equation R M1 M2 = M2 M1 R for the fundamental 9x9 R-matrix,
their cross-check against the printed block form, the detT commutator
table and the bialgebra maps of M.

The graded FRT convention is

    (M1 M2)_{ik,jl} = (-1)^{(|i|+|j|)|k|} t_ij t_kl
    (M2 M1)_{ik,jl} = (-1)^{(|i|+|j|)|l|} t_kl t_ij

with the tensor basis of V (x) V ordered lexicographically, as in the
representations module.
"""

import itertools
import logging
from functools import lru_cache

from src.algebra.scalars import ZERO, g, h, specialize
from src.errors import BudgetExceeded, TwistlabError
from src.frt.rewriting import (
    ENTRY,
    GENERATORS,
    NAMES,
    PARITY,
    T_SECTOR,
    NCPoly,
    RelationSet,
    RewriteSystem,
    equivalent,
    expected_leading_words,
    normal_words,
    word_names,
    word_parity,
)
from src.reports.report import Check
from src.representations.representations import entries, expected_blocks, map_entries, r_matrix_fundamental

logger = logging.getLogger(__name__)

ANCHOR_FRT = 'Rh M1 M2 = M2 M1 Rh (graded)'
ANCHOR_RELATIONS = 'relations among the entries of M'
ANCHOR_HOPF = 'Delta(M) = M (x) M, eps(M) = I3'
ANCHOR_DET = 'det T = ad - bc - (h+g)ac'
ANCHOR_DET_TABLE = '[eta, detT] = -2g xi detT'
ANCHOR_H_FREE = 'detT commutator coefficients are h-free'
ANCHOR_GL2 = 'T block satisfies the GL_{h,g}(2) relations'

FUNDAMENTAL_PARITIES = (0, 1, 1)


# -- relations from the RMM equation ---------------------------------------------


def _sign(exponent):
    return -1 if exponent % 2 else 1


def rmm_equations(R, parities=FUNDAMENTAL_PARITIES, offset=0):
    """
    Expand R M1 M2 - M2 M1 R entrywise.

    Args:
        R: n^2 x n^2 DomainMatrix over QQ[h, g].
        parities (tuple): Parities of the basis of V.
        offset (int): Row/column offset of the block of M that plays the
            role of the matrix (1 for the T block alone).

    Returns:
        dict: (i, k, j, l) -> NCPoly, one equation per entry.
    """
    n = len(parities)
    rows = entries(R)

    def t(r, c):
        return ENTRY[(r + offset, c + offset)]

    equations = {}
    for i, k, j, l in itertools.product(range(n), repeat=4):
        terms = {}
        for m, p in itertools.product(range(n), repeat=2):
            left = rows[i * n + k][m * n + p]
            if left:
                w = (t(m, j), t(p, l))
                terms[w] = terms.get(w, ZERO) + left * _sign((parities[m] + parities[j]) * parities[p])
            right = rows[m * n + p][j * n + l]
            if right:
                w = (t(k, p), t(i, m))
                terms[w] = terms.get(w, ZERO) - right * _sign((parities[i] + parities[m]) * parities[p])
        equations[(i, k, j, l)] = NCPoly(terms)
    return equations


def derive_rmm_relations(R, parities=FUNDAMENTAL_PARITIES, offset=0, name="RMM"):
    """
    Independent oriented relations equivalent to the graded RMM equation.

    Raises:
        RelationError: if the equations are inconsistent or mix parities.
    """
    equations = rmm_equations(R, parities, offset)
    relations = RelationSet.from_relations(equations.values(), name)
    logger.info(f"{name}: {sum(1 for e in equations.values() if not e.is_zero())} nonzero equations, "
                f"{len(relations)} independent relations")
    return relations


@lru_cache(maxsize=None)
def frt_relations(h_value=None, g_value=None):
    """Relations of SL_{h,g}(1/2) from the fundamental R-matrix, optionally specialized."""
    fundamental = r_matrix_fundamental(h_value=h_value, g_value=g_value)
    return derive_rmm_relations(fundamental.R)


def frt_system(max_steps=None, max_length=None, h_value=None, g_value=None):
    """The rewriting system of SL_{h,g}(1/2) with the given budgets."""
    system = RewriteSystem(frt_relations(h_value, g_value))
    return system.with_budget(max_steps, max_length)


# -- the printed block relations ------------------------------------------------


def _w(*names):
    return NCPoly.from_names(*names)


def printed_r_blocks(h_value=None, g_value=None):
    """R-check and R-bar as printed, optionally specialized."""
    blocks = expected_blocks()
    if h_value is not None or g_value is not None:
        blocks = {k: map_entries(M, lambda v: specialize(v, h_value, g_value)) for k, M in blocks.items()}
    return blocks


def _lmul(S, A):
    """Scalar matrix times NCPoly matrix."""
    return [[sum((A[k][j].scale(S[i][k]) for k in range(len(A)) if S[i][k]), NCPoly())
             for j in range(len(A[0]))] for i in range(len(S))]


def _rmul(A, S):
    """NCPoly matrix times scalar matrix."""
    return [[sum((A[i][k].scale(S[k][j]) for k in range(len(S)) if S[k][j]), NCPoly())
             for j in range(len(S[0]))] for i in range(len(A))]


def _difference(A, B, sign=1):
    """Entries of A - sign * B as a flat list."""
    return [A[i][j] - B[i][j].scale(sign) for i in range(len(A)) for j in range(len(A[0]))]


def _printed_blocks(theta_sign, mixed_reading, h_value, g_value):
    blocks = printed_r_blocks(h_value, g_value)
    Rc, Rb = entries(blocks["eo"]), entries(blocks["oo"])
    T = [["a", "b"], ["c", "d"]]
    Psi, Theta = ["xi", "eta"], ["gamma", "delta"]

    e_psi = [[_w("e", x) for x in Psi]]
    psi_e = [[_w(x, "e") for x in Psi]]
    e_theta = [[_w("e", x)] for x in Theta]
    theta_e = [[_w(x, "e")] for x in Theta]
    e_t = [[_w("e", x) for x in row] for row in T]
    t_e = [[_w(x, "e") for x in row] for row in T]
    psi_psi_left = [[_w(x, y) for x in Psi for y in Psi]]
    psi_psi_right = [[_w(y, x) for x in Psi for y in Psi]]
    theta_theta_left = [[_w(x, y)] for x in Theta for y in Theta]
    theta_theta_right = [[_w(y, x)] for x in Theta for y in Theta]
    if mixed_reading == "transposed":
        psi_theta = [[_w(x, y) for y in Theta] for x in Psi]
    else:
        psi_theta = [[_w(x, y) for x in Psi] for y in Theta]
    theta_psi = [[_w(y, x) for x in Psi] for y in Theta]
    theta_t = [[_w(y, x) for x in row] for y in Theta for row in T]
    t_theta = [[_w(x, y) for x in row] for y in Theta for row in T]
    psi_t = [[_w(x, row[j]) for x in Psi for j in range(2)] for row in T]
    t_psi = [[_w(row[j], x) for x in Psi for j in range(2)] for row in T]
    t1t2 = [[_w(T[i][j], T[k][l]) for j in range(2) for l in range(2)] for i in range(2) for k in range(2)]
    t2t1 = [[_w(T[k][l], T[i][j]) for j in range(2) for l in range(2)] for i in range(2) for k in range(2)]

    return {
        "e Psi = Psi e R-check": _difference(e_psi, _rmul(psi_e, Rc)),
        "R-check e Theta = Theta e": _difference(_lmul(Rc, e_theta), theta_e),
        "R-check e T = T e R-check": _difference(_lmul(Rc, e_t), _rmul(t_e, Rc)),
        "(xi Psi  eta Psi) = -(Psi xi  Psi eta) R-bar": _difference(psi_psi_left, _rmul(psi_psi_right, Rb), -1),
        "R-bar (gamma Theta; delta Theta) = -(Theta gamma; Theta delta)":
            _difference(_lmul(Rb, theta_theta_left), theta_theta_right, theta_sign),
        "R-check (xi Theta  eta Theta) R-check = -(gamma Psi; delta Psi)":
            _difference(_rmul(_lmul(Rc, psi_theta), Rc), theta_psi, -1),
        "R-bar (gamma T; delta T) = (T gamma; T delta) R-check": _difference(_lmul(Rb, theta_t), _rmul(t_theta, Rc)),
        "R-check (xi T  eta T) = (T xi  T eta) R-bar": _difference(_lmul(Rc, psi_t), _rmul(t_psi, Rb)),
        "R-bar T1 T2 = T2 T1 R-bar": _difference(_lmul(Rb, t1t2), _rmul(t2t1, Rb)),
    }


def printed_block_relations(theta_sign=-1, mixed_reading="printed", h_value=None, g_value=None):
    """
    The nine block equations of the printed relation table, entrywise.

    Args:
        theta_sign (int): Sign in front of the Theta-Theta right-hand side
            (-1 as printed; +1 gives the sign-dropped mutant).
        mixed_reading (str): ``printed`` or ``transposed`` arrangement of the
            2x2 block (xi Theta  eta Theta).

    Returns:
        dict: block label -> list of NCPoly relations.
    """
    return {label: [r for r in rels if not r.is_zero()]
            for label, rels in _printed_blocks(theta_sign, mixed_reading, h_value, g_value).items()}


def _block_pairs(relations):
    return {frozenset(w) for r in relations for w in r.terms}


def cross_check_block_relations(derived, theta_sign=-1, h_value=None, g_value=None):
    """
    Two-way implication between every printed block and the derived relations.

    For each block the derived rules on the generator pairs the block covers
    must reduce to zero under the block's own relations, and every block
    relation must reduce to zero under the derived rules. The union of all
    blocks is then compared with the whole derived set.

    Returns:
        list: Checks, one per block plus one for the union.
    """
    derived_system = RewriteSystem(derived)
    checks = []
    union = []
    readings = {reading: printed_block_relations(theta_sign, reading, h_value, g_value)
                for reading in ("printed", "transposed")}
    for label in readings["printed"]:
        outcome = None
        for reading, blocks in readings.items():
            relations = blocks[label]
            if reading != "printed" and relations == readings["printed"][label]:
                continue
            pairs = _block_pairs(relations)
            block_set = RelationSet.from_relations(relations, label)
            block_system = RewriteSystem(block_set)
            forward = [r for r in relations if not derived_system.reduces_to_zero(r)]
            backward = [lhs for lhs, rhs in derived if frozenset(lhs) in pairs
                        and not block_system.reduces_to_zero(NCPoly.from_word(lhs) - rhs)]
            count = len(forward) + len(backward)
            if outcome is None or count < outcome[1]:
                outcome = (reading, count, relations)
            if count == 0:
                break
        reading, count, relations = outcome
        union.extend(relations)
        detail = f"reading: {reading}" if count == 0 else f"best reading {reading}: {count} relations not implied"
        checks.append(Check.from_residual(f"block {label}", count, ANCHOR_RELATIONS, detail))
    missing_printed, missing_derived = equivalent(derived, RelationSet.from_relations(union, "printed"))
    checks.append(Check.from_residual(
        "printed blocks <=> derived relations", len(missing_printed) + len(missing_derived), ANCHOR_RELATIONS,
        "" if not (missing_printed or missing_derived) else
        f"{len(missing_derived)} derived relations not implied by the blocks, "
        f"{len(missing_printed)} block relations not implied by the derived set"))
    return checks


# -- structural checks ----------------------------------------------------------


def supercommutativity_residual(relations):
    """Rules of an h = g = 0 relation set that are not xy -> +-yx or an odd square -> 0."""
    bad = []
    for (x, y), rhs in relations:
        expected = NCPoly() if x == y else NCPoly.from_word((y, x), _sign(PARITY[x] * PARITY[y]))
        if rhs != expected:
            bad.append(word_names((x, y)))
    return bad


def parity_residual(relations):
    return [word_names(lhs) for lhs, rhs in relations
            if not rhs.is_zero() and rhs.parity() != word_parity(lhs)]


def structure_checks(relations, system):
    """Size, orientation, parity, confluence and PBW checks of a relation set."""
    checks = [
        Check.from_bool("40 independent relations", len(relations) == 40, ANCHOR_RELATIONS,
                        f"{len(relations)} relations"),
        Check.from_bool("leading words are the unsorted pairs and odd squares",
                        relations.leading_words() == expected_leading_words(), ANCHOR_FRT),
        Check.from_residual("relations preserve parity", parity_residual(relations), ANCHOR_FRT),
    ]
    try:
        count, failures = system.overlap_audit()
        checks.append(Check.from_residual("overlaps of length 3 resolve", len(failures), ANCHOR_FRT,
                                          f"{count} overlaps" + (f"; first: {failures[0]}" if failures else "")))
    except BudgetExceeded as error:
        checks.append(Check.inconclusive("overlaps of length 3 resolve", ANCHOR_FRT, str(error)))
    words = normal_words(3)
    distinct = {tuple(system.normal_form(NCPoly.from_word(w)).terms) for w in words}
    checks.append(Check.from_bool("normal words of length 3 stay distinct", len(distinct) == len(words) == 129,
                                  ANCHOR_FRT, f"{len(words)} normal words"))
    return checks


def classical_limit_check(relations):
    try:
        limit = relations.specialize(0, 0)
    except TwistlabError as error:
        return Check.failure("h = g = 0 gives supercommutativity", error, ANCHOR_FRT)
    bad = supercommutativity_residual(limit)
    return Check.from_residual("h = g = 0 gives supercommutativity", bad, ANCHOR_FRT,
                               f"first: {bad[0]}" if bad else "")


# -- bialgebra maps of M ---------------------------------------------------------


def matrix_coproduct(index, signed=False, inner=(0, 1, 2)):
    """
    Delta(t_ij) = sum_k t_ik (x) t_kj.

    Returns:
        list: (left index, right index, sign) triples; the signed convention
        puts (-1)^{|t_ik||t_kj|} on each term.
    """
    gen = GENERATORS[index]
    result = []
    for k in inner:
        left, right = ENTRY[(gen.row, k)], ENTRY[(k, gen.col)]
        result.append((left, right, _sign(PARITY[left] * PARITY[right]) if signed else 1))
    return result


def coproduct_residual(system, relation, signed=False, inner=(0, 1, 2)):
    """
    Normal form of Delta(relation) in the graded tensor square.

    Returns:
        dict: (left word, right word) -> nonzero coefficient.
    """
    expanded = {}
    for w, coeff in relation.terms.items():
        partial = {((), ()): coeff}
        for x in w:
            grown = {}
            for (u, v), c in partial.items():
                pv = word_parity(v)
                for left, right, sign in matrix_coproduct(x, signed, inner):
                    key = (u + (left,), v + (right,))
                    grown[key] = grown.get(key, ZERO) + c * (sign * _sign(pv * PARITY[left]))
            partial = grown
        for key, c in partial.items():
            expanded[key] = expanded.get(key, ZERO) + c
    cache = {}

    def nf(u):
        if u not in cache:
            cache[u] = system.normal_form(NCPoly.from_word(u)).terms
        return cache[u]

    result = {}
    for (u, v), c in expanded.items():
        if not c:
            continue
        for wu, cu in nf(u).items():
            for wv, cv in nf(v).items():
                key = (wu, wv)
                result[key] = result.get(key, ZERO) + c * cu * cv
    return {k: c for k, c in result.items() if c}


def counit_residual(relations):
    """eps(t_ij) = delta_ij applied to every relation."""
    bad = []
    for r in relations.relations():
        value = ZERO
        for w, c in r.terms.items():
            if all(GENERATORS[i].row == GENERATORS[i].col for i in w):
                value = value + c
        if value:
            bad.append(str(r))
    return bad


def coproduct_checks(relations, system, inner=(0, 1, 2), label="M"):
    """
    Try both matrix coproduct conventions and name the homomorphic one.

    Returns:
        list: Checks for Delta on every relation and for eps.
    """
    working = []
    failures = {}
    for convention, signed in (("unsigned", False), ("Koszul-signed", True)):
        bad = sum(1 for r in relations.relations() if coproduct_residual(system, r, signed, inner))
        failures[convention] = bad
        if not bad:
            working.append(convention)
    detail = (f"algebra map with the {' and '.join(working)} convention" if working
              else f"failing relations: {failures}")
    return [
        Check.from_bool(f"Delta({label}) = {label} (x) {label} is an algebra map", bool(working), ANCHOR_HOPF, detail),
        Check.from_residual(f"eps({label}) = I is an algebra map", counit_residual(relations), ANCHOR_HOPF),
    ]


def gl2_sub_bialgebra(relations, h_value=None, g_value=None):
    """
    The T block alone: its relations, their derivation from R-bar and closure
    under Delta(T) = T (x) T.
    """
    t_relations = relations.restrict(T_SECTOR, "GL_{h,g}(2)")
    t_system = RewriteSystem(t_relations)
    from_rbar = derive_rmm_relations(printed_r_blocks(h_value, g_value)["oo"], parities=(0, 0), offset=1,
                                     name="R-bar T1 T2")
    missing_a, missing_b = equivalent(t_relations, from_rbar)
    closed = sum(1 for r in t_relations.relations() if coproduct_residual(t_system, r, False, inner=(1, 2)))
    return [
        Check.from_bool("T block has 6 relations", len(t_relations) == 6
                        and t_relations.leading_words() == expected_leading_words(T_SECTOR), ANCHOR_GL2,
                        f"{len(t_relations)} relations"),
        Check.from_residual("T block relations = R-bar T1 T2 = T2 T1 R-bar", len(missing_a) + len(missing_b),
                            ANCHOR_GL2),
        Check.from_residual("T block closed under Delta(T) = T (x) T", closed, ANCHOR_GL2),
    ]


def relations_suite(system, h_value=None, g_value=None):
    """
    Every check on the derived relation set of SL_{h,g}(1/2).

    Args:
        system (RewriteSystem): Built from the derived relations.
        h_value, g_value: Specializations the relations were derived at.

    Returns:
        list: Checks.
    """
    relations = system.relations
    checks = structure_checks(relations, system)
    checks.append(classical_limit_check(relations))
    checks.extend(cross_check_block_relations(relations, h_value=h_value, g_value=g_value))
    checks.extend(gl2_sub_bialgebra(relations, h_value, g_value))
    return checks


# -- detT ------------------------------------------------------------------------


def det_t():
    """detT = ad - bc - (h+g) ac."""
    return _w("a", "d") - _w("b", "c") - _w("a", "c").scale(h + g)


def det_table(D):
    """
    The printed commutators [x, detT], with detT given as a polynomial.

    Returns:
        dict: generator name -> (scalar coefficient or None, expected NCPoly).
    """
    x = NCPoly.gen
    return {
        "e": (None, NCPoly()),
        "xi": (None, NCPoly()),
        "delta": (None, NCPoly()),
        "c": (None, NCPoly()),
        "eta": (-2 * g, (x("xi") * D).scale(-2 * g)),
        "gamma": (2 * g, (x("delta") * D).scale(2 * g)),
        "a": (2 * g, (x("c") * D).scale(2 * g)),
        # printed as [detT, d] = 2g c detT
        "d": (2 * g, (x("c") * D).scale(-2 * g)),
        "b": (2 * g, (D * x("d") - x("a") * D).scale(2 * g)),
    }


def h_free_multiple_of_g(coeff):
    return all(i == 0 and j >= 1 for i, j in coeff.keys())


def det_t_suite(system, classical_system=None, h_value=None, g_value=None):
    """
    Compare [x, detT] with the printed table for all nine generators.

    Args:
        system (RewriteSystem): The rewriting system of SL_{h,g}(1/2).
        classical_system (RewriteSystem): The same at g = 0, for the
            centrality check; skipped when None.
        h_value, g_value: Specializations the system was derived at.

    Returns:
        list: Checks.
    """
    D = det_t().specialize(h_value, g_value)
    checks = [Check.from_bool("detT is in normal form", system.normal_form(D) == D, ANCHOR_DET)]
    table = det_table(D)
    for name in NAMES:
        coeff, expected = table[name]
        gen = NCPoly.gen(name)
        try:
            residual = system.normal_form(gen * D - D * gen - expected.specialize(h_value, g_value))
            checks.append(Check.from_residual(f"[{name}, detT]", residual, ANCHOR_DET_TABLE))
        except BudgetExceeded as error:
            checks.append(Check.inconclusive(f"[{name}, detT]", ANCHOR_DET_TABLE, str(error)))
    coefficients = [coeff for coeff, _ in table.values() if coeff is not None]
    checks.append(Check.from_bool("commutator coefficients are h-free multiples of g",
                                  all(h_free_multiple_of_g(c) for c in coefficients), ANCHOR_H_FREE))
    if classical_system is not None:
        D0 = classical_system.normal_form(det_t().specialize(g_value=0))
        bad = [name for name in NAMES
               if not classical_system.normal_form(NCPoly.gen(name) * D0 - D0 * NCPoly.gen(name)).is_zero()]
        checks.append(Check.from_residual("g = 0 makes detT central", bad, ANCHOR_H_FREE,
                                          f"not central with: {bad}" if bad else ""))
    return checks

