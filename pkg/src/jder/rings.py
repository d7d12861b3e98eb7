"""Finite rings presented by structure constants over Z/m.

A ring here is the additive group (Z/m)^k with a bilinear multiplication
given by constants c[i][j] in (Z/m)^k (the coefficient vector of b_i * b_j).
Associativity is verified on all k^3 basis triples at construction time, so
an instance that exists is a ring.  Units are optional and verified when
given.

Constructors cover the shapes the derivation machinery needs: Z/m itself,
dual numbers, full matrix rings M_n(R), direct products, triangular rings
built from a bimodule, and corner rings eRe cut out by an idempotent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .zmodlin import ZmMatrix, _validate_modulus, howell_form

__all__ = [
    "RingConstructionError",
    "AssociativityError",
    "UnitLawError",
    "CornerNotFreeError",
    "StructureRing",
    "RingElement",
    "MatrixRing",
    "ProductRing",
    "TriangularRing",
    "Bimodule",
    "Corner",
    "build_ring",
    "zmod",
    "dual_numbers",
    "matrix_ring",
    "direct_product",
    "triangular_ring",
    "regular_bimodule",
    "matrix_bimodule",
    "corner_of",
    "is_idempotent",
    "are_orthogonal",
]


class RingConstructionError(ValueError):
    """The presented data does not define the requested structure."""


class AssociativityError(RingConstructionError):
    def __init__(self, triple: tuple[int, int, int]):
        self.triple = triple
        super().__init__(
            f"multiplication is not associative: (b{triple[0]}*b{triple[1]})*b{triple[2]} "
            f"!= b{triple[0]}*(b{triple[1]}*b{triple[2]})"
        )


class UnitLawError(RingConstructionError):
    def __init__(self, index: int, side: str):
        self.index = index
        self.side = side
        super().__init__(f"claimed unit fails {side} unit law on basis element {index}")


class CornerNotFreeError(RingConstructionError):
    """The corner subgroup eRe is not free over Z/m and cannot be presented."""


class StructureRing:
    """Finite ring on (Z/m)^k with explicit structure constants."""

    def __init__(self, modulus, constants, unit=None, labels=None, validate=True):
        _validate_modulus(modulus)
        c = np.asarray(constants, dtype=np.int64)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise RingConstructionError(
                f"structure constants must have shape (k, k, k), got {c.shape}"
            )
        self.modulus = int(modulus)
        self.rank = int(c.shape[0])
        self.constants = c % self.modulus
        self.constants.setflags(write=False)
        if labels is None:
            labels = tuple(f"b{i}" for i in range(self.rank))
        labels = tuple(str(s) for s in labels)
        if len(labels) != self.rank:
            raise RingConstructionError("one label per basis element is required")
        self.labels = labels
        self.unit = None if unit is None else tuple(
            int(u) % self.modulus for u in unit
        )
        if self.unit is not None and len(self.unit) != self.rank:
            raise RingConstructionError("unit vector length must equal the rank")
        if validate:
            self._validate()
        # Left/right multiplication matrices of the basis elements, used by
        # the derivation solver: L[i] @ y = b_i * y, R[j] @ x = x * b_j.
        self.left_matrices = np.transpose(self.constants, (0, 2, 1)).copy()
        self.right_matrices = np.transpose(self.constants, (1, 2, 0)).copy()
        self.left_matrices.setflags(write=False)
        self.right_matrices.setflags(write=False)

    def _validate(self) -> None:
        c, m = self.constants, self.modulus
        if self.rank:
            lhs = np.einsum("ijs,slt->ijlt", c, c) % m
            rhs = np.einsum("jls,ist->ijlt", c, c) % m
            bad = np.argwhere((lhs != rhs).any(axis=3))
            if bad.size:
                raise AssociativityError(tuple(int(x) for x in bad[0]))
        if self.unit is not None and self.rank:
            u = np.array(self.unit, dtype=np.int64)
            ident = np.eye(self.rank, dtype=np.int64)
            left = np.einsum("i,ijt->jt", u, c) % m
            if (left != ident).any():
                raise UnitLawError(int(np.argwhere((left != ident).any(axis=1))[0][0]), "left")
            right = np.einsum("j,ijt->it", u, c) % m
            if (right != ident).any():
                raise UnitLawError(int(np.argwhere((right != ident).any(axis=1))[0][0]), "right")

    # -- identity of presentations ------------------------------------------

    @property
    def signature(self) -> tuple:
        sig = getattr(self, "_signature", None)
        if sig is None:
            sig = (self.modulus, self.rank, self.constants.tobytes(), self.unit)
            self._signature = sig
        return sig

    def same_presentation(self, other: "StructureRing") -> bool:
        return self is other or self.signature == other.signature

    # -- elements -------------------------------------------------------------

    @property
    def is_unital(self) -> bool:
        return self.unit is not None

    @property
    def cardinality(self) -> int:
        return self.modulus ** self.rank

    def element(self, coeffs) -> "RingElement":
        coeffs = tuple(int(x) % self.modulus for x in coeffs)
        if len(coeffs) != self.rank:
            raise ValueError(f"expected {self.rank} coefficients, got {len(coeffs)}")
        return RingElement(self, coeffs)

    def basis_element(self, i: int) -> "RingElement":
        coeffs = [0] * self.rank
        coeffs[i] = 1
        return RingElement(self, tuple(coeffs))

    def basis(self) -> list["RingElement"]:
        return [self.basis_element(i) for i in range(self.rank)]

    def zero(self) -> "RingElement":
        return RingElement(self, (0,) * self.rank)

    def one(self) -> "RingElement":
        if self.unit is None:
            raise RingConstructionError("ring has no unit")
        return RingElement(self, self.unit)

    def mul_vec(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64) % self.modulus
        y = np.asarray(y, dtype=np.int64) % self.modulus
        if self.rank == 0:
            return np.zeros(0, dtype=np.int64)
        return np.einsum("i,j,ijt->t", x, y, self.constants) % self.modulus

    def left_mul_matrix(self, x) -> np.ndarray:
        """Matrix L with L @ y = x * y on coefficient vectors."""
        x = np.asarray(x, dtype=np.int64) % self.modulus
        if self.rank == 0:
            return np.zeros((0, 0), dtype=np.int64)
        return np.einsum("i,ist->ts", x, self.constants) % self.modulus

    def right_mul_matrix(self, y) -> np.ndarray:
        """Matrix R with R @ x = x * y on coefficient vectors."""
        y = np.asarray(y, dtype=np.int64) % self.modulus
        if self.rank == 0:
            return np.zeros((0, 0), dtype=np.int64)
        return np.einsum("j,sjt->ts", y, self.constants) % self.modulus

    def multiplication_table(self) -> tuple:
        """Basis-by-basis product table, for presentation comparisons."""
        return tuple(
            tuple(tuple(int(x) for x in self.constants[i, j]) for j in range(self.rank))
            for i in range(self.rank)
        )

    def __repr__(self) -> str:
        unital = "unital " if self.is_unital else ""
        return f"<{unital}ring of rank {self.rank} over Z/{self.modulus}>"


class RingElement:
    """An element of a StructureRing, carried as a reduced coefficient tuple."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: StructureRing, coeffs: tuple[int, ...]):
        self.ring = ring
        self.coeffs = coeffs

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    def _coerce(self, other: "RingElement") -> "RingElement":
        if not isinstance(other, RingElement):
            raise TypeError(f"cannot combine RingElement with {type(other).__name__}")
        if not self.ring.same_presentation(other.ring):
            raise ValueError("elements belong to different rings")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        m = self.ring.modulus
        return RingElement(
            self.ring, tuple((a + b) % m for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other):
        other = self._coerce(other)
        m = self.ring.modulus
        return RingElement(
            self.ring, tuple((a - b) % m for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self):
        m = self.ring.modulus
        return RingElement(self.ring, tuple((-a) % m for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            m = self.ring.modulus
            return RingElement(self.ring, tuple((other * a) % m for a in self.coeffs))
        other = self._coerce(other)
        prod = self.ring.mul_vec(self.as_array(), other.as_array())
        return RingElement(self.ring, tuple(int(x) for x in prod))

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.__mul__(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring.same_presentation(other.ring) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring.signature, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self) -> str:
        terms = []
        for coeff, label in zip(self.coeffs, self.ring.labels):
            if coeff == 0:
                continue
            terms.append(label if coeff == 1 else f"{coeff}*{label}")
        return " + ".join(terms) if terms else "0"


def is_idempotent(e: RingElement) -> bool:
    """Whether e*e = e (zero counts as idempotent)."""
    return e * e == e


def are_orthogonal(e: RingElement, f: RingElement) -> bool:
    """Whether ef = fe = 0; both elements must be idempotent."""
    if not (is_idempotent(e) and is_idempotent(f)):
        raise ValueError("orthogonality is defined for idempotents")
    return (e * f).is_zero() and (f * e).is_zero()


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def build_ring(modulus, constants, unit=None, labels=None) -> StructureRing:
    """Validate and build the ring presented by the structure constants."""
    return StructureRing(modulus, constants, unit=unit, labels=labels)


def zmod(m: int) -> StructureRing:
    """Z/m as a rank-1 structure ring."""
    return StructureRing(m, [[[1]]], unit=(1,), labels=("1",))


def dual_numbers(m: int) -> StructureRing:
    """Z/m[x]/(x^2): rank 2, basis {1, x} with x^2 = 0."""
    c = np.zeros((2, 2, 2), dtype=np.int64)
    c[0, 0, 0] = 1
    c[0, 1, 1] = 1
    c[1, 0, 1] = 1
    return StructureRing(m, c, unit=(1, 0), labels=("1", "x"))


class MatrixRing(StructureRing):
    """M_n(R) for a structure ring R, with matrix-unit accessors.

    Basis elements are triples (i, j, t): the matrix with R-basis element t
    in entry (i, j).  Basis order is lexicographic in (i, j, t).
    """

    def __init__(self, base: StructureRing, size: int):
        if size < 1:
            raise RingConstructionError("matrix size must be at least 1")
        self.base = base
        self.size = size
        k_r = base.rank
        k = size * size * k_r
        c = np.zeros((k, k, k), dtype=np.int64)
        for i in range(size):
            for j in range(size):
                for q in range(size):
                    for t in range(k_r):
                        for s in range(k_r):
                            u = (i * size + j) * k_r + t
                            v = (j * size + q) * k_r + s
                            w0 = (i * size + q) * k_r
                            c[u, v, w0:w0 + k_r] = base.constants[t, s]
        unit = None
        if base.unit is not None:
            uv = np.zeros(k, dtype=np.int64)
            for i in range(size):
                w0 = (i * size + i) * k_r
                uv[w0:w0 + k_r] = base.unit
            unit = tuple(int(x) for x in uv)
        if k_r == 1:
            labels = [f"e[{i},{j}]" for i in range(size) for j in range(size)]
        else:
            labels = [
                f"e[{i},{j}]*{base.labels[t]}"
                for i in range(size)
                for j in range(size)
                for t in range(k_r)
            ]
        super().__init__(base.modulus, c, unit=unit, labels=labels)

    def flat_index(self, i: int, j: int, t: int = 0) -> int:
        if not (0 <= i < self.size and 0 <= j < self.size and 0 <= t < self.base.rank):
            raise IndexError("matrix-unit index out of range")
        return (i * self.size + j) * self.base.rank + t

    def matrix_unit(self, i: int, j: int, scalar: RingElement | None = None) -> RingElement:
        """The matrix with the given R-scalar (default 1_R) in entry (i, j)."""
        if scalar is None:
            scalar = self.base.one()
        elif not scalar.ring.same_presentation(self.base):
            raise ValueError("scalar must belong to the base ring")
        coeffs = [0] * self.rank
        w0 = self.flat_index(i, j, 0)
        for t, ct in enumerate(scalar.coeffs):
            coeffs[w0 + t] = ct
        return self.element(coeffs)

    def entry(self, elem: RingElement, i: int, j: int) -> RingElement:
        """The (i, j) entry of a matrix-ring element, as a base-ring element."""
        w0 = self.flat_index(i, j, 0)
        return self.base.element(elem.coeffs[w0:w0 + self.base.rank])

    def from_entries(self, grid) -> RingElement:
        """Build an element from an n x n grid of base-ring elements."""
        coeffs = [0] * self.rank
        for i in range(self.size):
            for j in range(self.size):
                cell = grid[i][j]
                if not cell.ring.same_presentation(self.base):
                    raise ValueError("grid entries must belong to the base ring")
                w0 = self.flat_index(i, j, 0)
                for t, ct in enumerate(cell.coeffs):
                    coeffs[w0 + t] = ct
        return self.element(coeffs)


def matrix_ring(base: StructureRing, size: int) -> MatrixRing:
    return MatrixRing(base, size)


class ProductRing(StructureRing):
    """Direct product A x B with componentwise operations."""

    def __init__(self, left: StructureRing, right: StructureRing):
        if left.modulus != right.modulus:
            raise RingConstructionError("product factors must share the modulus")
        self.left = left
        self.right = right
        ka, kb = left.rank, right.rank
        k = ka + kb
        c = np.zeros((k, k, k), dtype=np.int64)
        c[:ka, :ka, :ka] = left.constants
        c[ka:, ka:, ka:] = right.constants
        unit = None
        if left.unit is not None and right.unit is not None:
            unit = left.unit + right.unit
        labels = [f"{lab}.L" for lab in left.labels] + [f"{lab}.R" for lab in right.labels]
        super().__init__(left.modulus, c, unit=unit, labels=labels)

    def pair(self, x: RingElement, y: RingElement) -> RingElement:
        if not (x.ring.same_presentation(self.left) and y.ring.same_presentation(self.right)):
            raise ValueError("components belong to the wrong factors")
        return self.element(x.coeffs + y.coeffs)

    def split(self, e: RingElement) -> tuple[RingElement, RingElement]:
        ka = self.left.rank
        return self.left.element(e.coeffs[:ka]), self.right.element(e.coeffs[ka:])


def direct_product(left: StructureRing, right: StructureRing) -> ProductRing:
    return ProductRing(left, right)


@dataclass
class Bimodule:
    """An (A, B)-bimodule on (Z/m)^rank given by action constants.

    left_action[i][j] is the coefficient vector of a_i . m_j and
    right_action[j][i] that of m_j . b_i.  Both module axioms and the
    compatibility (a m) b = a (m b) are verified on basis triples; if a side
    is unital its unit must act as the identity.
    """

    left: StructureRing
    right: StructureRing
    rank: int
    left_action: np.ndarray
    right_action: np.ndarray

    def __post_init__(self):
        if self.left.modulus != self.right.modulus:
            raise RingConstructionError("bimodule sides must share the modulus")
        m = self.left.modulus
        la = np.asarray(self.left_action, dtype=np.int64) % m
        ra = np.asarray(self.right_action, dtype=np.int64) % m
        if la.shape != (self.left.rank, self.rank, self.rank):
            raise RingConstructionError(
                f"left action must have shape (k_A, k_M, k_M) = "
                f"({self.left.rank}, {self.rank}, {self.rank}), got {la.shape}"
            )
        if ra.shape != (self.rank, self.right.rank, self.rank):
            raise RingConstructionError(
                f"right action must have shape (k_M, k_B, k_M) = "
                f"({self.rank}, {self.right.rank}, {self.rank}), got {ra.shape}"
            )
        self.left_action = la
        self.right_action = ra
        self._validate()

    def _validate(self):
        m = self.left.modulus
        la, ra = self.left_action, self.right_action
        ca, cb = self.left.constants, self.right.constants
        # (a a') m = a (a' m)
        lhs = np.einsum("xys,sjt->xyjt", ca, la) % m
        rhs = np.einsum("yju,xut->xyjt", la, la) % m
        bad = np.argwhere((lhs != rhs).any(axis=3))
        if bad.size:
            raise RingConstructionError(
                f"left action is not associative on basis triple {tuple(int(v) for v in bad[0])}"
            )
        # m (b b') = (m b) b'
        lhs = np.einsum("xys,jst->jxyt", cb, ra) % m
        rhs = np.einsum("jxu,uyt->jxyt", ra, ra) % m
        bad = np.argwhere((lhs != rhs).any(axis=3))
        if bad.size:
            raise RingConstructionError(
                f"right action is not associative on basis triple {tuple(int(v) for v in bad[0])}"
            )
        # (a m) b = a (m b)
        lhs = np.einsum("iju,uyt->ijyt", la, ra) % m
        rhs = np.einsum("jyu,iut->ijyt", ra, la) % m
        bad = np.argwhere((lhs != rhs).any(axis=3))
        if bad.size:
            raise RingConstructionError(
                f"actions do not commute on basis triple {tuple(int(v) for v in bad[0])}"
            )
        ident = np.eye(self.rank, dtype=np.int64)
        if self.left.unit is not None and self.rank:
            u = np.array(self.left.unit, dtype=np.int64)
            if ((np.einsum("i,ijt->jt", u, la) % m) != ident).any():
                raise RingConstructionError("left unit does not act as identity")
        if self.right.unit is not None and self.rank:
            u = np.array(self.right.unit, dtype=np.int64)
            if ((np.einsum("i,jit->jt", u, ra) % m) != ident).any():
                raise RingConstructionError("right unit does not act as identity")

    @property
    def modulus(self) -> int:
        return self.left.modulus

    def act_left(self, a_vec, m_vec) -> np.ndarray:
        m = self.modulus
        return np.einsum(
            "i,j,ijt->t",
            np.asarray(a_vec, dtype=np.int64) % m,
            np.asarray(m_vec, dtype=np.int64) % m,
            self.left_action,
        ) % m

    def act_right(self, m_vec, b_vec) -> np.ndarray:
        m = self.modulus
        return np.einsum(
            "j,i,jit->t",
            np.asarray(m_vec, dtype=np.int64) % m,
            np.asarray(b_vec, dtype=np.int64) % m,
            self.right_action,
        ) % m


def regular_bimodule(ring: StructureRing) -> Bimodule:
    """The ring itself as an (R, R)-bimodule via its own multiplication."""
    return Bimodule(ring, ring, ring.rank, ring.constants, ring.constants)


def matrix_bimodule(base: StructureRing, n: int, p: int) -> Bimodule:
    """n x p matrices over R as an (M_n(R), M_p(R))-bimodule."""
    left = matrix_ring(base, n)
    right = matrix_ring(base, p)
    k_r = base.rank
    rank = n * p * k_r

    def midx(i, j, t):
        return (i * p + j) * k_r + t

    la = np.zeros((left.rank, rank, rank), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            for u in range(k_r):
                for j in range(p):
                    for t in range(k_r):
                        la[left.flat_index(a, b, u), midx(b, j, t),
                           midx(a, j, 0):midx(a, j, 0) + k_r] = base.constants[u, t]
    ra = np.zeros((rank, right.rank, rank), dtype=np.int64)
    for i in range(n):
        for j in range(p):
            for t in range(k_r):
                for d in range(p):
                    for v in range(k_r):
                        ra[midx(i, j, t), right.flat_index(j, d, v),
                           midx(i, d, 0):midx(i, d, 0) + k_r] = base.constants[t, v]
    return Bimodule(left, right, rank, la, ra)


class TriangularRing(StructureRing):
    """Tri(A, M, B): pairs over the diagonal with (a, m, b)(a', m', b') =
    (aa', am' + mb', bb')."""

    def __init__(self, bimodule: Bimodule):
        a_ring, b_ring = bimodule.left, bimodule.right
        if a_ring.unit is None or b_ring.unit is None:
            raise RingConstructionError("triangular ring requires unital corner rings")
        self.bimodule = bimodule
        self.corner_left = a_ring
        self.corner_right = b_ring
        ka, km, kb = a_ring.rank, bimodule.rank, b_ring.rank
        k = ka + km + kb
        c = np.zeros((k, k, k), dtype=np.int64)
        c[:ka, :ka, :ka] = a_ring.constants
        c[ka + km:, ka + km:, ka + km:] = b_ring.constants
        c[:ka, ka:ka + km, ka:ka + km] = bimodule.left_action
        c[ka:ka + km, ka + km:, ka:ka + km] = bimodule.right_action
        unit = tuple(a_ring.unit) + (0,) * km + tuple(b_ring.unit)
        labels = (
            [f"{lab}.A" for lab in a_ring.labels]
            + [f"m{j}" for j in range(km)]
            + [f"{lab}.B" for lab in b_ring.labels]
        )
        super().__init__(a_ring.modulus, c, unit=unit, labels=labels)

    def triple(self, a: RingElement, m_vec, b: RingElement) -> RingElement:
        if not a.ring.same_presentation(self.corner_left):
            raise ValueError("first component must belong to the left corner ring")
        if not b.ring.same_presentation(self.corner_right):
            raise ValueError("third component must belong to the right corner ring")
        m_vec = tuple(int(x) % self.modulus for x in m_vec)
        if len(m_vec) != self.bimodule.rank:
            raise ValueError("middle component has wrong length")
        return self.element(a.coeffs + m_vec + b.coeffs)

    def parts(self, e: RingElement) -> tuple[RingElement, tuple[int, ...], RingElement]:
        ka, km = self.corner_left.rank, self.bimodule.rank
        return (
            self.corner_left.element(e.coeffs[:ka]),
            e.coeffs[ka:ka + km],
            self.corner_right.element(e.coeffs[ka + km:]),
        )


def triangular_ring(a: StructureRing, bimodule: Bimodule, b: StructureRing) -> TriangularRing:
    if not (bimodule.left.same_presentation(a) and bimodule.right.same_presentation(b)):
        raise RingConstructionError("bimodule sides do not match the given corner rings")
    return TriangularRing(bimodule)


@dataclass
class Corner:
    """The corner ring eRe of an idempotent e, with transport maps.

    embed is an injective ring homomorphism onto the subset eRe of the
    parent; project inverts it on eRe and rejects anything outside.
    """

    ring: StructureRing
    parent: StructureRing
    idempotent: RingElement
    embed_matrix: np.ndarray = field(repr=False)
    project_matrix: np.ndarray = field(repr=False)

    def embed(self, x: RingElement) -> RingElement:
        if not x.ring.same_presentation(self.ring):
            raise ValueError("element does not belong to the corner ring")
        m = self.parent.modulus
        vec = (self.embed_matrix @ x.as_array()) % m
        return self.parent.element(tuple(int(v) for v in vec))

    def project(self, x: RingElement) -> RingElement:
        if not x.ring.same_presentation(self.parent):
            raise ValueError("element does not belong to the parent ring")
        m = self.parent.modulus
        coords = (self.project_matrix @ x.as_array()) % m
        back = (self.embed_matrix @ coords) % m
        if (back != x.as_array() % m).any():
            raise ValueError("element lies outside the corner subring eRe")
        return self.ring.element(tuple(int(v) for v in coords))

    def compress(self, x: RingElement) -> RingElement:
        """project(e x e) for an arbitrary parent element."""
        e = self.idempotent
        return self.project(e * x * e)


def corner_of(parent: StructureRing, e: RingElement) -> Corner:
    """Present eRe as its own structure ring, with embed/project transports."""
    if not e.ring.same_presentation(parent):
        raise ValueError("idempotent does not belong to the ring")
    if not is_idempotent(e):
        raise ValueError("corner rings require an idempotent element")
    m = parent.modulus
    images = [(e * b * e).coeffs for b in parent.basis()]
    basis = howell_form(ZmMatrix(m, tuple(images) if images else ((0,) * parent.rank,)))
    pivots = basis.pivots()
    if any(d != 1 for _, d in pivots):
        raise CornerNotFreeError(
            "corner subgroup is not free over Z/m: pivots "
            f"{[d for _, d in pivots]} (only unit pivots can be presented)"
        )
    gens = [g.as_array() for g in basis.generators]
    s = len(gens)
    embed = np.zeros((parent.rank, s), dtype=np.int64)
    for j, g in enumerate(gens):
        embed[:, j] = g
    # Coordinate extraction is linear when all pivots are 1: peel generators
    # off greedily and record the linear functional used at each step.
    project = np.zeros((s, parent.rank), dtype=np.int64)
    residual = np.eye(parent.rank, dtype=np.int64)
    for j, g in enumerate(gens):
        p = int(np.nonzero(g)[0][0])
        project[j] = residual[p]
        residual = (residual - np.outer(g, residual[p])) % m
    if s and ((project @ embed) % m != np.eye(s, dtype=np.int64)).any():
        raise AssertionError("corner projection failed to invert the embedding")
    constants = np.zeros((s, s, s), dtype=np.int64)
    for a in range(s):
        for b in range(s):
            prod = parent.mul_vec(gens[a], gens[b])
            constants[a, b] = (project @ prod) % m
            if (((embed @ constants[a, b]) % m) != prod % m).any():
                raise CornerNotFreeError("corner subgroup is not closed under products")
    e_coords = (project @ e.as_array()) % m
    if (((embed @ e_coords) % m) != e.as_array()).any():
        raise AssertionError("idempotent escaped its own corner")
    labels = [f"g{j}" for j in range(s)]
    ring = StructureRing(m, constants, unit=tuple(int(x) for x in e_coords), labels=labels)
    return Corner(ring, parent, e, embed, project)
