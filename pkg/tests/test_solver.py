"""Solver vs direct axiom checks and exhaustive map enumeration."""

import random

import numpy as np
import pytest

from jder.incidence import fi_ring
from jder.preorders import Preorder
from jder.rings import build_ring, dual_numbers, matrix_ring, regular_bimodule, triangular_ring, zmod
from jder.solver import (
    DERIVATION,
    JORDAN,
    AdditiveMap,
    check_map,
    compare_spaces,
    inner_derivation,
    solve_derivations,
    solve_jordan_derivations,
)
from jder.zmodlin import ZmMatrix, howell_form

from oracles import brute_force_maps, is_derivation_map, is_jordan_map


def t2(m):
    z = zmod(m)
    return triangular_ring(z, regular_bimodule(z), z)


class TestAdditiveMap:
    def test_flat_round_trip_is_column_major(self):
        r = dual_numbers(2)
        d = AdditiveMap.from_array(r, [[0, 1], [1, 0]])
        assert d.to_flat() == (0, 1, 1, 0)
        d2 = AdditiveMap.from_array(r, [[0, 1], [0, 0]])
        # column-major: first k entries form column 0
        assert d2.to_flat() == (0, 0, 1, 0)
        assert AdditiveMap.from_flat(r, d2.to_flat()) == d2

    def test_images_and_apply(self):
        r = dual_numbers(2)
        one, x = r.basis()
        d = AdditiveMap.from_images(r, [r.zero(), one + x])
        assert d.image(1) == one + x
        assert d(one + x) == one + x
        assert (d + d).is_zero()

    def test_shape_rejected(self):
        with pytest.raises(ValueError):
            AdditiveMap(zmod(2), ((0, 0),))


class TestCheckMap:
    def test_zero_map_passes_both_kinds(self):
        for r in (zmod(4), matrix_ring(zmod(2), 2)):
            z = AdditiveMap.zero(r)
            assert check_map(r, z, DERIVATION).ok
            assert check_map(r, z, JORDAN).ok

    def test_unit_image_violation_located(self):
        r = zmod(4)
        d = AdditiveMap.from_array(r, [[2]])
        res = check_map(r, d, DERIVATION)
        assert (res.ok, res.identity, res.indices) == (False, "product", (0, 0))
        res = check_map(r, d, JORDAN)
        assert (res.ok, res.identity, res.indices) == (False, "square", (0,))
        assert not bool(res)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            check_map(zmod(2), AdditiveMap.zero(zmod(2)), "lie")


class TestInnerDerivation:
    def test_matrix_units(self):
        r = matrix_ring(zmod(2), 2)
        d = inner_derivation(r, r.matrix_unit(0, 1))
        # [e12, e21] = e11 + e22
        assert d(r.matrix_unit(1, 0)) == r.one()
        assert check_map(r, d, DERIVATION).ok

    def test_central_element_gives_zero(self):
        r = matrix_ring(zmod(3), 2)
        assert inner_derivation(r, r.one()).is_zero()

    def test_additive_in_the_element(self):
        r = t2(4)
        rng = random.Random(1)
        for _ in range(5):
            a = r.element([rng.randrange(4) for _ in range(r.rank)])
            b = r.element([rng.randrange(4) for _ in range(r.rank)])
            assert inner_derivation(r, a) + inner_derivation(r, b) == inner_derivation(r, a + b)


class TestSolveSpaces:
    def test_zmod_p_has_only_zero(self):
        for p in (2, 3, 5):
            space = solve_derivations(zmod(p))
            assert space.cardinality() == 1
            assert solve_jordan_derivations(zmod(p)).cardinality() == 1

    def test_dual_numbers_derivations(self):
        # d(1) = 0 while d(x) is unconstrained: 4 maps over Z/2.
        space = solve_derivations(dual_numbers(2))
        assert space.cardinality() == 4
        r = dual_numbers(2)
        assert space.contains(AdditiveMap.from_array(r, [[0, 1], [0, 1]]))
        assert not space.contains(AdditiveMap.from_array(r, [[0, 0], [1, 0]]))

    def test_matrix_ring_z2_count(self):
        assert solve_derivations(matrix_ring(zmod(2), 2)).cardinality() == 8

    def test_triangular_z2_count(self):
        assert solve_derivations(t2(2)).cardinality() == 4

    def test_inner_derivations_are_contained(self):
        rng = random.Random(5)
        for r in (matrix_ring(zmod(4), 2), t2(3)):
            der = solve_derivations(r)
            jder = solve_jordan_derivations(r)
            for _ in range(5):
                a = r.element([rng.randrange(r.modulus) for _ in range(r.rank)])
                d = inner_derivation(r, a)
                assert der.contains(d) and jder.contains(d)

    def test_derivations_inside_jordan_space(self):
        for r in (zmod(6), dual_numbers(3), matrix_ring(zmod(2), 2), t2(2)):
            der = solve_derivations(r)
            jder = solve_jordan_derivations(r)
            for g in der.generators():
                assert jder.contains(g)

    def test_zero_multiplication_ring_is_unconstrained(self):
        r = build_ring(2, [[[0]]])
        assert solve_derivations(r).cardinality() == 2
        assert solve_jordan_derivations(r).cardinality() == 2


BRUTE_RINGS = [
    zmod(2),
    zmod(4),
    zmod(6),
    dual_numbers(2),
    dual_numbers(3),
    t2(2),
    matrix_ring(zmod(2), 2),
]


class TestExhaustiveAgreement:
    @pytest.mark.parametrize("ring", BRUTE_RINGS, ids=lambda r: f"k{r.rank}m{r.modulus}")
    @pytest.mark.parametrize("kind", [DERIVATION, JORDAN])
    def test_solver_matches_enumeration(self, ring, kind):
        maps = brute_force_maps(ring.constants, ring.modulus, kind)
        flats = [mat.flatten(order="F") for mat in maps]
        enumerated = howell_form(ZmMatrix.from_array(ring.modulus, np.array(flats)))
        solver = solve_derivations(ring) if kind == DERIVATION else solve_jordan_derivations(ring)
        assert solver.basis.generators == enumerated.generators
        assert solver.cardinality() == len(maps)


class TestCompare:
    def test_equal_instances(self):
        for r in (matrix_ring(zmod(3), 2), dual_numbers(2), zmod(4), t2(2)):
            cmp = compare_spaces(r)
            assert cmp.equal and cmp.witness is None
            assert cmp.verdict == "Equal"
            assert cmp.derivations.kind == DERIVATION and cmp.jordan.kind == JORDAN

    def test_zero_multiplication_ring_equal(self):
        cmp = compare_spaces(build_ring(2, [[[0]]]))
        assert cmp.equal
        assert cmp.jordan.cardinality() == 2


def random_element(rng, ring):
    return ring.element([rng.randrange(ring.modulus) for _ in range(ring.rank)])


class TestPolarizationCompleteness:
    """Kernel membership implies the quantified axioms on arbitrary elements."""

    @pytest.mark.parametrize(
        "ring",
        [
            matrix_ring(zmod(2), 2),
            zmod(4),
            dual_numbers(2),
            t2(4),
            fi_ring(Preorder.from_pairs("abc", [("a", "b"), ("b", "c")]), zmod(4)).ring,
        ],
        ids=lambda r: f"k{r.rank}m{r.modulus}",
    )
    def test_axioms_hold_on_random_elements(self, ring):
        rng = random.Random(99)
        gens = solve_jordan_derivations(ring).generators()
        for d in gens:
            for _ in range(40):
                r = random_element(rng, ring)
                s = random_element(rng, ring)
                t = random_element(rng, ring)
                dr, ds, dt = d(r), d(s), d(t)
                assert d(r * r) == dr * r + r * dr
                assert d(r * s * r) == dr * s * r + r * ds * r + r * s * dr
                lhs = d(r * s * t + t * s * r)
                rhs = dr * s * t + r * ds * t + r * s * dt + dt * s * r + t * ds * r + t * s * dr
                assert lhs == rhs

    def test_oracle_membership_matches_solver_on_random_maps(self):
        ring = dual_numbers(2)
        der = solve_derivations(ring)
        jder = solve_jordan_derivations(ring)
        elements = [ring.element(v) for v in np.ndindex(2, 2)]
        vecs = [np.array(e.coeffs) for e in elements]
        rng = random.Random(3)
        for _ in range(30):
            mat = np.array([[rng.randrange(2) for _ in range(2)] for _ in range(2)])
            d = AdditiveMap.from_array(ring, mat)
            assert der.contains(d) == is_derivation_map(ring.constants, 2, mat, vecs)
            assert jder.contains(d) == is_jordan_map(ring.constants, 2, mat, vecs)
