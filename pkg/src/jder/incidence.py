"""Incidence rings of finite preordered sets over structure-constant rings.

For a preorder P and coefficient ring R the incidence ring lives on the
comparable pairs of P: an element assigns an R-coefficient to every pair
(p, q) with p <= q, and multiplication is convolution,

    (ab)[p, q] = sum over p <= z <= q of a[p, z] * b[z, q].

Equivalently it is the pocategory picture: one matrix block Mor(x, y) per
comparable pair of quotient classes x <= y, with Mor(x, x) a full matrix
ring over R.  The flattened basis used here is (p, q, t) for comparable
element pairs and t running over R's basis, ordered by (class of p,
class of q, p, q, t) so corner extraction cuts out contiguous blocks.

Everything is finite, so every element trivially has finite support; the
finitary predicate is exposed for interface completeness and always holds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .preorders import Preorder, QuotientPoset
from .rings import MatrixRing, RingElement, StructureRing, matrix_ring

__all__ = ["IncidenceRing", "fi_ring", "FamilyConditionsReport", "verify_family_conditions"]


class IncidenceRing:
    """FI(P, R): the incidence ring of a finite preorder over a finite ring."""

    def __init__(self, preorder: Preorder, coefficients: StructureRing):
        if not coefficients.is_unital:
            raise ValueError("incidence rings need a unital coefficient ring")
        self.preorder = preorder
        self.quotient: QuotientPoset = preorder.quotient()
        self.coefficients = coefficients
        k_r = coefficients.rank
        cls = {
            i: self.quotient.class_of(lbl) for i, lbl in enumerate(preorder.labels)
        }
        pairs = sorted(
            preorder.comparable_pairs(),
            key=lambda pq: (cls[pq[0]], cls[pq[1]], pq[0], pq[1]),
        )
        self.pairs = tuple(pairs)
        self._pair_pos = {pq: n for n, pq in enumerate(pairs)}
        self._leq = preorder.as_array()
        k = len(pairs) * k_r
        m = coefficients.modulus
        c = np.zeros((k, k, k), dtype=np.int64)
        for n1, (p, q) in enumerate(pairs):
            for n2, (q2, q3) in enumerate(pairs):
                if q2 != q:
                    continue
                n3 = self._pair_pos[(p, q3)]
                for t in range(k_r):
                    for s in range(k_r):
                        c[n1 * k_r + t, n2 * k_r + s, n3 * k_r:(n3 + 1) * k_r] += \
                            coefficients.constants[t, s]
        c %= m
        unit = np.zeros(k, dtype=np.int64)
        for i in range(preorder.size):
            n = self._pair_pos[(i, i)]
            unit[n * k_r:(n + 1) * k_r] = coefficients.unit
        labels = []
        for (p, q) in pairs:
            lp, lq = preorder.labels[p], preorder.labels[q]
            for t in range(k_r):
                suffix = "" if k_r == 1 else f"*{coefficients.labels[t]}"
                labels.append(f"[{lp},{lq}]{suffix}")
        self.ring = StructureRing(
            m, c, unit=tuple(int(x) for x in unit), labels=labels
        )
        self._class_rings: dict[int, MatrixRing] = {}

    # -- basis bookkeeping --------------------------------------------------

    @property
    def rank(self) -> int:
        return self.ring.rank

    def basis_index(self, p: int, q: int, t: int = 0) -> int:
        if (p, q) not in self._pair_pos:
            raise KeyError(
                f"({self.preorder.labels[p]}, {self.preorder.labels[q]}) is not comparable"
            )
        return self._pair_pos[(p, q)] * self.coefficients.rank + t

    def element(self, entries: dict) -> RingElement:
        """Build an element from {(p_label, q_label): R-element} support."""
        coeffs = [0] * self.rank
        k_r = self.coefficients.rank
        for (pl, ql), val in entries.items():
            p, q = self.preorder.index(pl), self.preorder.index(ql)
            if not val.ring.same_presentation(self.coefficients):
                raise ValueError("entry values must belong to the coefficient ring")
            n = self.basis_index(p, q, 0)
            for t, ct in enumerate(val.coeffs):
                coeffs[n + t] = ct
        return self.ring.element(coeffs)

    def entry(self, elem: RingElement, pl: str, ql: str) -> RingElement:
        """The R-coefficient of an element at an element pair (zero if incomparable)."""
        p, q = self.preorder.index(pl), self.preorder.index(ql)
        if (p, q) not in self._pair_pos:
            return self.coefficients.zero()
        n = self.basis_index(p, q, 0)
        return self.coefficients.element(
            elem.coeffs[n:n + self.coefficients.rank]
        )

    def support(self, elem: RingElement) -> list[tuple[str, str]]:
        out = []
        k_r = self.coefficients.rank
        for n, (p, q) in enumerate(self.pairs):
            if any(elem.coeffs[n * k_r:(n + 1) * k_r]):
                out.append((self.preorder.labels[p], self.preorder.labels[q]))
        return out

    def is_finitary(self, elem: RingElement) -> bool:
        """Finite support predicate; trivially true on a finite preorder."""
        return True

    # -- convolution ----------------------------------------------------------

    def convolve(self, a: RingElement, b: RingElement) -> RingElement:
        """Convolution product computed directly from the sum formula.

        This is an independent evaluation route: it never touches the
        assembled structure constants, only R's multiplication, and must
        agree with ``a * b``.
        """
        labels = self.preorder.labels
        out = {}
        for (p, q) in self.pairs:
            acc = self.coefficients.zero()
            for z in range(self.preorder.size):
                if self._leq[p, z] and self._leq[z, q]:
                    acc = acc + self.entry(a, labels[p], labels[z]) * self.entry(
                        b, labels[z], labels[q]
                    )
            if not acc.is_zero():
                out[(labels[p], labels[q])] = acc
        return self.element(out)

    # -- classes and corners ---------------------------------------------------

    def class_idempotent(self, ci: int) -> RingElement:
        """e_x: the identity concentrated on the diagonal of one class."""
        coeffs = [0] * self.rank
        k_r = self.coefficients.rank
        for i in self.quotient.classes[ci]:
            n = self.basis_index(i, i, 0)
            for t, ct in enumerate(self.coefficients.unit):
                coeffs[n + t] = ct
        return self.ring.element(coeffs)

    def class_idempotents(self) -> list[RingElement]:
        return [self.class_idempotent(ci) for ci in range(self.quotient.size)]

    def class_matrix_ring(self, ci: int) -> MatrixRing:
        """Mor(x, x) presented as a matrix ring over R (cached)."""
        if ci not in self._class_rings:
            self._class_rings[ci] = matrix_ring(
                self.coefficients, len(self.quotient.classes[ci])
            )
        return self._class_rings[ci]

    def extract_block(self, elem: RingElement, ci: int, cj: int) -> list[list[RingElement]]:
        """The Mor(x, y) block of an element as a grid of R-entries.

        Incomparable class pairs yield the zero block of the right shape.
        """
        rows = self.quotient.classes[ci]
        cols = self.quotient.classes[cj]
        labels = self.preorder.labels
        if not self.quotient.leq(ci, cj):
            zero = self.coefficients.zero()
            return [[zero for _ in cols] for _ in rows]
        return [
            [self.entry(elem, labels[p], labels[q]) for q in cols] for p in rows
        ]

    def block_element(self, ci: int, cj: int, grid) -> RingElement:
        """Embed a grid of R-entries as an element supported on one block."""
        rows = self.quotient.classes[ci]
        cols = self.quotient.classes[cj]
        labels = self.preorder.labels
        entries = {}
        for a, p in enumerate(rows):
            for b, q in enumerate(cols):
                if not grid[a][b].is_zero():
                    entries[(labels[p], labels[q])] = grid[a][b]
        return self.element(entries)


def fi_ring(preorder: Preorder, coefficients: StructureRing) -> IncidenceRing:
    """Assemble the incidence ring FI(P, R)."""
    return IncidenceRing(preorder, coefficients)


@dataclass(frozen=True)
class FamilyConditionsReport:
    """Outcome of the summability check for a family of orthogonal idempotents."""

    ok: bool
    checked: int
    failures: tuple[tuple[int, int, int, int], ...]
    # Each failure is (e_index, f_index, r_basis_index, s_basis_index).


def verify_family_conditions(
    ring: StructureRing, family: list[RingElement]
) -> FamilyConditionsReport:
    """Check e r s f = sum over g in E of e r g s f for all basis r, s.

    The family must consist of pairwise orthogonal idempotents.  Both sides
    are bilinear in (r, s), so checking ring basis elements decides the
    condition for the whole ring.  On a finite ring the defining finiteness
    conditions of the family framework are automatic; what can genuinely
    fail is the displayed summation identity, e.g. when the family does not
    cover enough of the ring.
    """
    from .rings import are_orthogonal, is_idempotent

    for e in family:
        if not e.ring.same_presentation(ring):
            raise ValueError("family members must belong to the ring")
        if not is_idempotent(e):
            raise ValueError(f"family member {e!r} is not idempotent")
    for i, e in enumerate(family):
        for f in family[i + 1:]:
            if not are_orthogonal(e, f):
                raise ValueError(f"family members {e!r} and {f!r} are not orthogonal")
    checked = 0
    failures = []
    basis = ring.basis()
    for ei, e in enumerate(family):
        for fi, f in enumerate(family):
            for i, r in enumerate(basis):
                er = e * r
                for j, s in enumerate(basis):
                    lhs = er * s * f
                    acc = ring.zero()
                    for g in family:
                        acc = acc + er * g * s * f
                    checked += 1
                    if lhs != acc:
                        failures.append((ei, fi, i, j))
    return FamilyConditionsReport(not failures, checked, tuple(failures))
