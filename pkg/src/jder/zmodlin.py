"""Exact linear algebra over Z/m: Howell forms, kernels, subgroup arithmetic.

Subgroups of (Z/m)^N are represented by generating sets in Howell normal
form, which is canonical for the row span: two generating sets describe the
same subgroup if and only if their Howell forms are identical.  Over prime m
this is the familiar reduced row echelon form; over composite m the form
additionally contains "annihilator" rows that make membership testing and
span comparison exact (a row with pivot d also contributes (m/d) times
itself, whose leading entry vanishes mod m).

All arithmetic is exact on 64-bit integers.  Moduli up to 2^31 are accepted;
every product is reduced mod m before it can overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MAX_MODULUS",
    "DimensionMismatch",
    "ZmVector",
    "ZmMatrix",
    "SubgroupBasis",
    "howell_form",
    "kernel",
    "subgroup_contains",
    "subgroup_coordinates",
    "subgroup_equal",
    "subgroup_cardinality",
]

MAX_MODULUS = 1 << 31


class DimensionMismatch(ValueError):
    """Operands disagree on modulus or ambient dimension."""


def _validate_modulus(m: int) -> None:
    if not isinstance(m, int) or isinstance(m, bool) or not 2 <= m <= MAX_MODULUS:
        raise ValueError(f"modulus must be an integer in [2, 2^31], got {m!r}")


@dataclass(frozen=True)
class ZmVector:
    """Residue vector over Z/m; entries are kept reduced to [0, m)."""

    modulus: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        _validate_modulus(self.modulus)
        object.__setattr__(
            self, "entries", tuple(int(e) % self.modulus for e in self.entries)
        )

    def __len__(self) -> int:
        return len(self.entries)

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)


@dataclass(frozen=True)
class ZmMatrix:
    """Rectangular residue matrix over Z/m (a tuple of equal-length rows)."""

    modulus: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        _validate_modulus(self.modulus)
        reduced = tuple(
            tuple(int(e) % self.modulus for e in row) for row in self.rows
        )
        widths = {len(row) for row in reduced}
        if len(widths) > 1:
            raise ValueError("matrix rows must all have the same length")
        object.__setattr__(self, "rows", reduced)

    @classmethod
    def from_array(cls, modulus: int, arr) -> "ZmMatrix":
        a = np.asarray(arr, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls(modulus, tuple(tuple(int(x) for x in row) for row in a))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(self.nrows, self.ncols)


@dataclass(frozen=True)
class SubgroupBasis:
    """Canonical (Howell-form) generating set of a subgroup of (Z/m)^dim.

    Instances are produced by :func:`howell_form` and :func:`kernel`; equality
    of two bases is equality of the subgroups they span.
    """

    modulus: int
    dim: int
    generators: tuple[ZmVector, ...]

    def contains(self, v: ZmVector) -> bool:
        return subgroup_contains(self, v)

    def coordinates(self, v: ZmVector) -> tuple[int, ...] | None:
        return subgroup_coordinates(self, v)

    def cardinality(self) -> int:
        return subgroup_cardinality(self)

    def pivots(self) -> tuple[tuple[int, int], ...]:
        """(column, value) of each generator's leading entry."""
        out = []
        for g in self.generators:
            j = next(i for i, e in enumerate(g.entries) if e != 0)
            out.append((j, g.entries[j]))
        return tuple(out)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _unit_for(a: int, m: int) -> int:
    """A unit u mod m with u*a = gcd(a, m) (mod m); requires a != 0 mod m.

    With g = gcd(a, m) and n = m/g, the inverse of a/g mod n lifts to a unit
    of Z/m after adding a suitable multiple of n; a valid multiple exists
    below g (one congruence class per prime dividing m but not n is excluded).
    """
    a %= m
    g = math.gcd(a, m)
    n = m // g
    if n == 1:
        raise ValueError("zero entry has no normalizing unit")
    u = pow((a // g) % n, -1, n)
    for _ in range(g + 1):
        if math.gcd(u, m) == 1:
            return u % m
        u += n
    raise AssertionError("unit normalization failed")  # unreachable


def _howell_rows(arr: np.ndarray, m: int) -> list[np.ndarray]:
    """Howell-form rows (ascending pivot columns) spanning the same row space.

    Worklist elimination: rows are merged into an echelon basis with xgcd
    combinations (unimodular over Z, hence span-preserving mod m); whenever a
    pivot value g is created, the annihilator multiple (m/g)*row re-enters the
    worklist so that the span of trailing columns is fully represented.
    Pivots shrink along the divisor lattice of m, so the loop terminates.
    """
    ncols = arr.shape[1]
    if ncols == 0:
        return []
    basis: dict[int, np.ndarray] = {}
    pending: list[np.ndarray] = [
        np.array(row, dtype=np.int64)
        for row in sorted({tuple(int(x) for x in r) for r in arr % m})
        if any(row)
    ]

    def push_annihilator(row: np.ndarray, pivot: int) -> None:
        if pivot != 1:
            ann = (row * (m // pivot)) % m
            if ann.any():
                pending.append(ann)

    while pending:
        v = pending.pop()
        while v is not None:
            nz = np.nonzero(v)[0]
            if nz.size == 0:
                break
            j = int(nz[0])
            if j not in basis:
                u = _unit_for(int(v[j]), m)
                v = (v * u) % m
                basis[j] = v
                push_annihilator(v, int(v[j]))
                break
            h = basis[j]
            a, b = int(h[j]), int(v[j])
            if b % a == 0:
                v = (v - (b // a) * h) % m
            else:
                g, s, t = _xgcd(a, b)
                new_h = ((s % m) * h + (t % m) * v) % m
                v = ((a // g) * v - (b // g) * h) % m
                basis[j] = new_h
                push_annihilator(new_h, g)

    # Reduce entries above each pivot into [0, pivot).
    cols = sorted(basis)
    for j in cols:
        d = int(basis[j][j])
        for i in cols:
            if i < j:
                q = int(basis[i][j]) // d
                if q:
                    basis[i] = (basis[i] - q * basis[j]) % m
    return [basis[j] for j in cols]


def howell_form(matrix: ZmMatrix) -> SubgroupBasis:
    """Canonical basis of the row span of ``matrix`` over Z/m."""
    m = matrix.modulus
    rows = _howell_rows(matrix.as_array(), m)
    gens = tuple(ZmVector(m, tuple(int(x) for x in r)) for r in rows)
    return SubgroupBasis(m, matrix.ncols, gens)


def kernel(matrix: ZmMatrix) -> SubgroupBasis:
    """Canonical basis of {v : matrix @ v = 0 (mod m)}.

    The row span of [M^T | I] consists of all pairs (x M^T | x); in its
    Howell form the rows whose left block vanishes therefore carry exactly
    the kernel of M, and the Howell property guarantees they generate all of
    it.  Each generator is re-checked by multiplication before returning.
    """
    m = matrix.modulus
    a = matrix.as_array()
    nrows, ncols = a.shape
    aug = np.zeros((ncols, nrows + ncols), dtype=np.int64)
    if nrows and ncols:
        aug[:, :nrows] = a.T % m
    aug[:, nrows:] = np.eye(ncols, dtype=np.int64)
    gens = []
    for row in _howell_rows(aug, m):
        if not row[:nrows].any():
            gens.append(row[nrows:])
    rows = _howell_rows(np.array(gens, dtype=np.int64).reshape(len(gens), ncols), m)
    out = tuple(ZmVector(m, tuple(int(x) for x in r)) for r in rows)
    if nrows:
        for g in out:
            if ((a @ g.as_array()) % m).any():
                raise AssertionError("kernel generator failed re-multiplication check")
    return SubgroupBasis(m, ncols, out)


def _check_compatible(basis: SubgroupBasis, v: ZmVector) -> None:
    if basis.modulus != v.modulus:
        raise DimensionMismatch(
            f"modulus mismatch: basis over Z/{basis.modulus}, vector over Z/{v.modulus}"
        )
    if basis.dim != len(v):
        raise DimensionMismatch(
            f"dimension mismatch: basis ambient {basis.dim}, vector length {len(v)}"
        )


def subgroup_coordinates(basis: SubgroupBasis, v: ZmVector) -> tuple[int, ...] | None:
    """Coefficients expressing v over the generators, or None if v is outside.

    Greedy reduction against the Howell form: at each pivot column the
    residual entry must be divisible by the pivot; by the Howell property
    this greedy pass is complete.
    """
    _check_compatible(basis, v)
    cur = v.as_array()
    coeffs = []
    m = basis.modulus
    for g in basis.generators:
        row = g.as_array()
        j = int(np.nonzero(row)[0][0])
        d = int(row[j])
        r = int(cur[j])
        if r % d != 0:
            return None
        q = r // d
        coeffs.append(q)
        if q:
            cur = (cur - q * row) % m
    if cur.any():
        return None
    return tuple(coeffs)


def subgroup_contains(basis: SubgroupBasis, v: ZmVector) -> bool:
    """Exact membership of v in the subgroup spanned by the basis."""
    return subgroup_coordinates(basis, v) is not None


def subgroup_equal(a: SubgroupBasis, b: SubgroupBasis) -> bool:
    """Whether two canonical bases span the same subgroup."""
    if a.modulus != b.modulus or a.dim != b.dim:
        raise DimensionMismatch(
            "subgroups live in different ambient groups: "
            f"(Z/{a.modulus})^{a.dim} vs (Z/{b.modulus})^{b.dim}"
        )
    return a.generators == b.generators


def subgroup_cardinality(basis: SubgroupBasis) -> int:
    """Number of elements in the subgroup: the product of m/pivot over rows."""
    m = basis.modulus
    card = 1
    for _, d in basis.pivots():
        card *= m // d
    return card
