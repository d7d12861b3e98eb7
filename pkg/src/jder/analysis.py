"""Structural analysis of Jordan derivations.

Everything here sits on top of the solver: corner restrictions d_e and
d_x, the blockwise reconstruction d', the extension of a map along an
isolated point, exact bimodule faithfulness, the structural verdict for
incidence rings, and an executable suite of the orthogonal-idempotent
identities that drive the whole reduction.
"""

import random
from dataclasses import dataclass

import numpy as np

from .incidence import IncidenceRing, fi_ring
from .preorders import Preorder
from .rings import (
    Bimodule,
    RingElement,
    StructureRing,
    are_orthogonal,
    corner_of,
    is_idempotent,
    matrix_bimodule,
)
from .solver import (
    DERIVATION,
    JORDAN,
    AdditiveMap,
    SpaceComparison,
    check_map,
    compare_spaces,
)
from .zmodlin import ZmMatrix, kernel

__all__ = [
    "ALL_JORDAN_ARE_DERIVATIONS",
    "CONDITIONAL_ON_COEFFICIENT_RING",
    "UNKNOWN",
    "ClassFact",
    "CrossCheckReport",
    "FaithfulnessReport",
    "IdentityOutcome",
    "IdentitySuiteReport",
    "SizeBudgetError",
    "StructuralVerdict",
    "bimodule_faithful",
    "construct_dprime",
    "cross_check",
    "extend_isolated",
    "identity_suite",
    "restrict_corner",
    "restrict_to_class",
    "theorem_verdict",
]

ALL_JORDAN_ARE_DERIVATIONS = "AllJordanAreDerivations"
CONDITIONAL_ON_COEFFICIENT_RING = "ConditionalOnCoefficientRing"
UNKNOWN = "Unknown"


class SizeBudgetError(ValueError):
    """An instance needs more unknowns than the caller allowed."""

    def __init__(self, required_rank: int, budget: int):
        self.required_rank = required_rank
        self.budget = budget
        super().__init__(
            f"instance needs rank {required_rank}, exceeding the budget of {budget}"
        )


# -- corner restrictions -------------------------------------------------------

def restrict_corner(d: AdditiveMap, e: RingElement) -> AdditiveMap:
    """d_e(r) = e d(r) e as a map of the corner ring eRe."""
    ring = d.ring
    if not e.ring.same_presentation(ring):
        raise ValueError("idempotent does not belong to the map's ring")
    corner = corner_of(ring, e)
    cols = []
    for g in corner.ring.basis():
        image = e * d(corner.embed(g)) * e
        cols.append(corner.project(image).coeffs)
    return AdditiveMap.from_array(corner.ring, np.array(cols, dtype=np.int64).T)


def restrict_to_class(fi: IncidenceRing, d: AdditiveMap, ci: int) -> AdditiveMap:
    """d_x on the class matrix ring, read directly off the (x, x) block.

    This is restrict_corner along e_x transported through the isomorphism
    e_x FI e_x = M_{|x|}(R), but computed independently by block
    extraction rather than through the corner presentation.
    """
    if not d.ring.same_presentation(fi.ring):
        raise ValueError("map does not live on the incidence ring")
    if not 0 <= ci < fi.quotient.size:
        raise ValueError(f"no class with index {ci}")
    mr = fi.class_matrix_ring(ci)
    members = fi.quotient.classes[ci]
    cols = []
    for p in members:
        for q in members:
            for t in range(fi.coefficients.rank):
                alpha = fi.ring.basis_element(fi.basis_index(p, q, t))
                grid = fi.extract_block(d(alpha), ci, ci)
                cols.append(mr.from_entries(grid).coeffs)
    return AdditiveMap.from_array(mr, np.array(cols, dtype=np.int64).T)


# -- d' reconstruction ---------------------------------------------------------

def _validate_family(ring: StructureRing, family) -> list:
    family = list(family)
    if not family:
        raise ValueError("the idempotent family is empty")
    for e in family:
        if not e.ring.same_presentation(ring):
            raise ValueError("family members must belong to the ring")
        if not is_idempotent(e):
            raise ValueError(f"family member {e!r} is not idempotent")
    for i, e in enumerate(family):
        for f in family[i + 1:]:
            if not are_orthogonal(e, f):
                raise ValueError(f"family members {e!r} and {f!r} are not orthogonal")
    return family


def construct_dprime(ring: StructureRing, family, d: AdditiveMap) -> AdditiveMap:
    """The blockwise reconstruction e d'(r) f = e d(erf) f - e d(e) r f - e r d(f) f.

    The family must be complete (sum to the unit); then the displayed
    blocks determine d'(r) uniquely as their sum over all (e, f).
    """
    if not d.ring.same_presentation(ring):
        raise ValueError("map belongs to a different ring")
    family = _validate_family(ring, family)
    total = ring.zero()
    for e in family:
        total = total + e
    if not ring.is_unital or total != ring.one():
        raise ValueError("the idempotent family must sum to the unit")
    images_of_family = [d(e) for e in family]
    cols = []
    for j in range(ring.rank):
        b = ring.basis_element(j)
        acc = ring.zero()
        for e, de in zip(family, images_of_family):
            eb = e * b
            for f, df in zip(family, images_of_family):
                acc = acc + e * d(eb * f) * f - e * de * b * f - eb * df * f
        cols.append(acc.coeffs)
    return AdditiveMap.from_array(ring, np.array(cols, dtype=np.int64).T)


# -- isolated-point extension --------------------------------------------------

def extend_isolated(fi: IncidenceRing, ci: int, d_x: AdditiveMap) -> AdditiveMap:
    """Extend a map of R along an isolated singleton class, zero elsewhere.

    The (x, x) entry of the image is d_x of the (x, x) entry of the
    argument and every other coefficient maps to zero.  Since x is
    comparable to nothing else, FI splits as e_x FI e_x times its
    complement, so the extension is a (Jordan) derivation exactly when
    d_x is one.
    """
    q = fi.quotient
    if not 0 <= ci < q.size:
        raise ValueError(f"no class with index {ci}")
    if ci not in q.isolated_classes():
        raise ValueError(f"class {q.class_label(ci)} is not isolated")
    if len(q.classes[ci]) != 1:
        raise ValueError(f"class {q.class_label(ci)} is not a singleton")
    if not d_x.ring.same_presentation(fi.coefficients):
        raise ValueError("the map must act on the coefficient ring")
    p = q.classes[ci][0]
    k_r = fi.coefficients.rank
    base = fi.basis_index(p, p, 0)
    mat = np.zeros((fi.rank, fi.rank), dtype=np.int64)
    mat[base:base + k_r, base:base + k_r] = d_x.as_array()
    return AdditiveMap.from_array(fi.ring, mat)


# -- bimodule faithfulness -----------------------------------------------------

@dataclass(frozen=True)
class FaithfulnessReport:
    """Annihilator test for both sides of a bimodule."""

    left: bool
    right: bool
    left_annihilator: RingElement | None
    right_annihilator: RingElement | None


def _annihilator(side_ring: StructureRing, action: np.ndarray) -> RingElement | None:
    """First nonzero ring element killing the whole module, if any.

    ``action`` has shape (ring rank, module rank, module rank): entry
    [i, j, t] is the t-th coefficient of basis_i acting on module basis_j.
    """
    k = side_ring.rank
    rows = action.transpose(1, 2, 0).reshape(-1, k)
    if rows.shape[0] == 0:
        # Rank-0 module: no constraint, everything annihilates.
        rows = np.zeros((1, k), dtype=np.int64)
    ann = kernel(ZmMatrix.from_array(side_ring.modulus, rows))
    for g in ann.generators:
        if any(g.entries):
            return side_ring.element(g.entries)
    return None


def bimodule_faithful(bim: Bimodule) -> FaithfulnessReport:
    """Exact annihilator computation on both sides of a bimodule."""
    left_witness = _annihilator(bim.left, bim.left_action)
    right_witness = _annihilator(bim.right, bim.right_action.transpose(1, 0, 2))
    return FaithfulnessReport(
        left=left_witness is None,
        right=right_witness is None,
        left_annihilator=left_witness,
        right_annihilator=right_witness,
    )


# -- structural verdict --------------------------------------------------------

@dataclass(frozen=True)
class ClassFact:
    """How one quotient class is discharged in the structural criterion."""

    class_index: int
    members: tuple
    kind: str  # "matrix-theorem" | "faithful-partner" | "conditional"
    partner: int | None = None
    faithful: tuple | None = None


@dataclass(frozen=True)
class StructuralVerdict:
    outcome: str
    isolated_elements: tuple
    facts: tuple


def theorem_verdict(preorder: Preorder, coefficients: StructureRing) -> StructuralVerdict:
    """Structural criterion for FI(P, R).

    Every Jordan derivation of FI(P, R) is a derivation when P has no
    isolated element.  Otherwise the question is equivalent to the same
    question for R itself.  Per class the justification records which
    case applied: an isolated class of size > 1 falls to the matrix-ring
    theorem; a non-isolated class is discharged through a comparable
    partner whose morphism bimodule is checked faithful on both sides;
    an isolated singleton is the conditional case.
    """
    if not coefficients.is_unital:
        raise ValueError("the coefficient ring must be unital")
    quotient = preorder.quotient()
    isolated = tuple(preorder.isolated_elements())
    facts = []
    hypotheses_hold = True
    for ci in range(quotient.size):
        members = quotient.members(ci)
        if ci in quotient.isolated_classes():
            kind = "matrix-theorem" if len(members) > 1 else "conditional"
            facts.append(ClassFact(ci, members, kind))
            continue
        cj = quotient.comparable_partner(ci)
        if quotient.leq(ci, cj):
            bim = matrix_bimodule(coefficients, len(members), len(quotient.classes[cj]))
        else:
            bim = matrix_bimodule(coefficients, len(quotient.classes[cj]), len(members))
        report = bimodule_faithful(bim)
        if not (report.left and report.right):
            hypotheses_hold = False
        facts.append(
            ClassFact(ci, members, "faithful-partner", partner=cj,
                      faithful=(report.left, report.right))
        )
    if not hypotheses_hold:
        outcome = UNKNOWN
    elif isolated:
        outcome = CONDITIONAL_ON_COEFFICIENT_RING
    else:
        outcome = ALL_JORDAN_ARE_DERIVATIONS
    return StructuralVerdict(outcome, isolated, tuple(facts))


@dataclass(frozen=True)
class CrossCheckReport:
    """Both solver runs next to the structural verdict."""

    verdict: StructuralVerdict
    fi_comparison: SpaceComparison
    ring_comparison: SpaceComparison
    fi_rank: int
    consistent: bool


def cross_check(preorder: Preorder, coefficients: StructureRing,
                budget: int = 32) -> CrossCheckReport:
    """Solve both FI(P, R) and R and test them against the verdict.

    The verdict claims nothing about R when P has no isolated elements,
    so consistency there means Equal on FI; in the conditional case it
    means the two Equal answers coincide.
    """
    fi = fi_ring(preorder, coefficients)
    if fi.rank > budget:
        raise SizeBudgetError(fi.rank, budget)
    verdict = theorem_verdict(preorder, coefficients)
    fi_cmp = compare_spaces(fi.ring)
    ring_cmp = compare_spaces(coefficients)
    if verdict.outcome == ALL_JORDAN_ARE_DERIVATIONS:
        consistent = fi_cmp.equal
    elif verdict.outcome == CONDITIONAL_ON_COEFFICIENT_RING:
        consistent = fi_cmp.equal == ring_cmp.equal
    else:
        consistent = True
    return CrossCheckReport(verdict, fi_cmp, ring_cmp, fi.rank, consistent)


# -- identity suite ------------------------------------------------------------

@dataclass(frozen=True)
class IdentityOutcome:
    name: str
    applicable: bool
    passed: bool
    checks: int
    witness: tuple | None = None


@dataclass(frozen=True)
class IdentitySuiteReport:
    ok: bool
    outcomes: tuple

    def outcome(self, name: str) -> IdentityOutcome:
        for entry in self.outcomes:
            if entry.name == name:
                return entry
        raise KeyError(name)


def identity_suite(ring: StructureRing, family, d: AdditiveMap,
                   mode: str = "basis", seed: int = 0, trials: int = 200,
                   fi: IncidenceRing | None = None) -> IdentitySuiteReport:
    """Evaluate the orthogonal-idempotent identities satisfied by Jordan derivations.

    mode "basis" quantifies free ring variables over all basis tuples;
    mode "randomized" draws ``trials`` seeded coefficient tuples instead.
    The map must be a Jordan derivation (the identities presuppose it);
    one identity holds for derivations only and is skipped otherwise, and
    the blockwise identity needs the incidence presentation ``fi``.
    """
    if mode not in ("basis", "randomized"):
        raise ValueError(f"unknown mode {mode!r}")
    if not d.ring.same_presentation(ring):
        raise ValueError("map belongs to a different ring")
    verdict = check_map(ring, d, JORDAN)
    if not verdict.ok:
        raise ValueError(
            f"map is not a Jordan derivation (violates {verdict.identity} "
            f"at {verdict.indices})"
        )
    family = _validate_family(ring, family)
    if fi is not None and not fi.ring.same_presentation(ring):
        raise ValueError("incidence presentation does not match the ring")

    if mode == "basis":
        def samples(arity):
            pool = ring.basis()
            if arity == 1:
                return ((r,) for r in pool)
            if arity == 2:
                return ((r, s) for r in pool for s in pool)
            return ((r, s, t) for r in pool for s in pool for t in pool)
    else:
        rng = random.Random(seed)

        def samples(arity):
            for _ in range(trials):
                yield tuple(
                    ring.element([rng.randrange(ring.modulus) for _ in range(ring.rank)])
                    for _ in range(arity)
                )

    outcomes = []

    def run(name, applicable, cases):
        if not applicable:
            outcomes.append(IdentityOutcome(name, False, True, 0))
            return
        checks = 0
        for lhs, rhs, witness in cases():
            checks += 1
            if lhs != rhs:
                outcomes.append(IdentityOutcome(name, True, False, checks, witness))
                return
        outcomes.append(IdentityOutcome(name, True, True, checks))

    d_of = {e: d(e) for e in family}
    pairs = [(e, f) for e in family for f in family if e != f]

    def polarized_product():
        for (r, s) in samples(2):
            dr, ds = d(r), d(s)
            yield (d(r * s + s * r), dr * s + r * ds + ds * r + s * dr,
                   (r.coeffs, s.coeffs))

    run("polarized-product", True, polarized_product)

    def herstein():
        for (r, s, t) in samples(3):
            dr, ds, dt = d(r), d(s), d(t)
            lhs = d(r * s * t + t * s * r)
            rhs = (dr * s * t + r * ds * t + r * s * dt
                   + dt * s * r + t * ds * r + t * s * dr)
            yield lhs, rhs, (r.coeffs, s.coeffs, t.coeffs)

    run("herstein", True, herstein)

    def orthogonal_sandwich():
        for e, f in pairs:
            de, df = d_of[e], d_of[f]
            for (r,) in samples(1):
                lhs = e * d(r) * f
                rhs = (e * d(e * r * f) * f - e * de * r * f
                       - e * r * df * f + e * d(f * r * e) * f)
                yield lhs, rhs, (e.coeffs, f.coeffs, r.coeffs)

    run("orthogonal-sandwich", True, orthogonal_sandwich)

    def same_idempotent_sandwich():
        for e in family:
            de = d_of[e]
            for (r,) in samples(1):
                lhs = e * d(r) * e
                rhs = e * d(e * r * e) * e - e * de * r * e - e * r * de * e
                yield lhs, rhs, (e.coeffs, r.coeffs)

    run("same-idempotent-sandwich", True, same_idempotent_sandwich)

    def orthogonal_corner_vanishing():
        zero = ring.zero()
        for e, f in pairs:
            for (r,) in samples(1):
                yield e * d(f * r * f) * e, zero, (e.coeffs, f.coeffs, r.coeffs)

    run("orthogonal-corner-vanishing", True, orthogonal_corner_vanishing)

    def idempotent_image_pairing():
        zero = ring.zero()
        for e in family:
            for f in family:
                yield (e * d_of[e] * f + e * d_of[f] * f, zero,
                       (e.coeffs, f.coeffs))

    run("idempotent-image-pairing", True, idempotent_image_pairing)

    def triple_composition():
        for e in family:
            for g in family:
                for f in family:
                    if e == g == f:
                        continue
                    for (r, s) in samples(2):
                        erg = e * r * g
                        gsf = g * s * f
                        lhs = e * d(erg * gsf) * f
                        rhs = e * d(erg) * gsf + erg * d(gsf) * f
                        yield lhs, rhs, (e.coeffs, g.coeffs, f.coeffs,
                                         r.coeffs, s.coeffs)

    run("triple-composition", True, triple_composition)

    def derivation_remark():
        zero = ring.zero()
        for e, f in pairs:
            for (r,) in samples(1):
                yield e * d(f * r * e) * f, zero, (e.coeffs, f.coeffs, r.coeffs)

    run("derivation-remark", check_map(ring, d, DERIVATION).ok, derivation_remark)

    def incidence_block():
        quotient = fi.quotient
        exs = fi.class_idempotents()
        d_of_ex = [d(e) for e in exs]
        for (alpha,) in samples(1):
            d_alpha = d(alpha)
            for x in range(quotient.size):
                for y in range(quotient.size):
                    if not quotient.leq(x, y):
                        continue
                    axy = fi.block_element(x, y, fi.extract_block(alpha, x, y))
                    lhs = d_alpha
                    rhs = d(axy) - d_of_ex[x] * alpha - alpha * d_of_ex[y]
                    yield (fi.extract_block(lhs, x, y), fi.extract_block(rhs, x, y),
                           (alpha.coeffs, x, y))

    run("incidence-block", fi is not None, incidence_block)

    ok = all(entry.passed for entry in outcomes)
    return IdentitySuiteReport(ok, tuple(outcomes))
