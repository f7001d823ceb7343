import json
import random
from itertools import product
from math import gcd

import pytest

from fibercover.exact_linalg import IntMatrix, solve_mod
from fibercover.groups import (
    FGAbelianGroup,
    GroupPresentation,
    Manifold3Data,
    abelianization,
    builtin_manifold,
    group_from_invariant_factors,
    hom_to_zn,
    reduce_mod_n,
)


def count_homs_brute_force(group, n):
    """Count maps to Z_n by enumerating value tuples on canonical generators.

    A tuple is a homomorphism iff each torsion generator of order d maps to
    a value killed by d.  Independent of the gcd bookkeeping in HomGroup.
    """
    orders = list(group.torsion) + [0] * group.rank
    count = 0
    for values in product(range(n), repeat=len(orders)):
        if all(d == 0 or (d * v) % n == 0 for d, v in zip(orders, values)):
            count += 1
    return count


def commutator(i, j):
    return (i, j, -i, -j)


class TestFGAbelianGroup:
    def test_chain_enforced(self):
        with pytest.raises(ValueError):
            FGAbelianGroup(0, (3, 2))
        with pytest.raises(ValueError):
            FGAbelianGroup(0, (1,))

    def test_element_reduction(self):
        G = FGAbelianGroup(1, (4,))
        e = G.element((6, -3))
        assert e.coords == (2, -3)
        assert (e + e).coords == (0, -6)
        assert (3 * e).coords == (2, -9)
        assert (-e).coords == (2, 3)

    def test_order(self):
        assert FGAbelianGroup(0, (2, 4)).order() == 8
        assert FGAbelianGroup(2).order() is None
        assert FGAbelianGroup(0).order() == 1

    def test_elements_enumeration(self):
        G = FGAbelianGroup(0, (2, 4))
        assert len(list(G.elements())) == 8


class TestAbelianization:
    def test_four_torus_group(self):
        # pi1 of the product of a 3-torus with a circle: four commuting generators
        rels = [commutator(i, j) for i in range(1, 5) for j in range(i + 1, 5)]
        p = GroupPresentation(generators=("x", "y", "z", "t"), relators=tuple(rels))
        g = abelianization(p)
        assert g.rank == 4
        assert g.torsion == ()

    def test_cyclic(self):
        p = GroupPresentation(generators=("g",), relators=((1, 1, 1, 1),))
        g = abelianization(p)
        assert (g.rank, g.torsion) == (0, (4,))

    def test_central_extension_style(self):
        # <x, y, t | [x,y] t^-2, t central>: rank 2 with a Z_2 factor
        rels = ((1, 2, -1, -2, -3, -3), commutator(1, 3), commutator(2, 3))
        p = GroupPresentation(generators=("x", "y", "t"), relators=rels)
        g = abelianization(p)
        assert (g.rank, g.torsion) == (2, (2,))

    def test_invariant_under_relator_shuffle_and_inversion(self):
        rng = random.Random(5)
        base = GroupPresentation(
            generators=("a", "b", "c"),
            relators=((1, 1, 2, -3), (2, 2, 2), (3, 1, -2)),
        )
        expected = abelianization(base)
        for _ in range(10):
            rels = list(base.relators)
            rng.shuffle(rels)
            rels = [tuple(-s for s in reversed(w)) if rng.random() < 0.5 else w for w in rels]
            g = abelianization(GroupPresentation(generators=base.generators, relators=tuple(rels)))
            assert g.same_structure(expected)

    def test_project_and_lift_are_inverse(self):
        p = GroupPresentation(generators=("g",), relators=((1, 1, 1, 1),))
        g = abelianization(p)
        # the canonical generator lifts to a word whose projection is that generator
        for j in range(g.ngens):
            lift = g.lift_generator(j)
            coords = g.project(lift).coords
            unit = tuple(int(i == j) for i in range(g.ngens))
            assert coords == unit


class TestHomToZn:
    def test_free_case(self):
        G = FGAbelianGroup(3, name="H1(T3)")
        H = hom_to_zn(G, 5)
        assert H.torsion == (5, 5, 5)
        assert H.order() == 125

    def test_torsion_case(self):
        assert hom_to_zn(FGAbelianGroup(0, (4,)), 2).torsion == (2,)

    def test_trivial(self):
        H = hom_to_zn(FGAbelianGroup(0), 3)
        assert H.is_trivial()
        assert H.order() == 1

    def test_counts_match_brute_force(self):
        cases = [
            FGAbelianGroup(0),
            FGAbelianGroup(0, (2,)),
            FGAbelianGroup(0, (4,)),
            FGAbelianGroup(0, (2, 4)),
            FGAbelianGroup(0, (2, 2, 2)),
            FGAbelianGroup(0, (3, 3)),
            FGAbelianGroup(0, (16,)),
            FGAbelianGroup(1, (2,)),
            FGAbelianGroup(2),
        ]
        for G in cases:
            for n in range(2, 7):
                assert hom_to_zn(G, n).order() == count_homs_brute_force(G, n)

    def test_evaluation(self):
        G = FGAbelianGroup(0, (4,))
        H = hom_to_zn(G, 2)
        nonzero = H.element((1,))
        # the hom sends the order-4 generator to 1 * 2/gcd... = n/gcd(4,2) = 1
        assert H.evaluate(nonzero, G.element((1,))) == 1
        assert H.evaluate(nonzero, G.element((2,))) == 0
        assert H.values_on_generators(nonzero) == (1,)

    def test_evaluation_is_homomorphism(self):
        G = FGAbelianGroup(1, (6,))
        H = hom_to_zn(G, 4)
        rng = random.Random(9)
        homs = list(H.elements())
        for _ in range(50):
            h = rng.choice(homs)
            a = G.element((rng.randrange(6), rng.randrange(-5, 6)))
            b = G.element((rng.randrange(6), rng.randrange(-5, 6)))
            assert H.evaluate(h, a + b) == (H.evaluate(h, a) + H.evaluate(h, b)) % 4


class TestReduceModN:
    def test_free_examples(self):
        T3 = builtin_manifold("T3")
        assert reduce_mod_n(T3.h2.element((4, 0, 0)), 4).is_zero
        assert not reduce_mod_n(T3.h2.element((1, 0, 0)), 3).is_zero

    def test_torsion_example(self):
        # 2x = 2 has the solution x = 1 in Z_4
        Z4 = FGAbelianGroup(0, (4,))
        assert reduce_mod_n(Z4.element((2,)), 2).is_zero
        assert not reduce_mod_n(Z4.element((1,)), 2).is_zero
        assert not reduce_mod_n(Z4.element((2,)), 4).is_zero

    def test_rejects_small_modulus(self):
        with pytest.raises(ValueError):
            reduce_mod_n(FGAbelianGroup(1).element((1,)), 1)

    def test_matches_solve_mod(self):
        # zero test <=> n*x = e solvable in the canonical presentation,
        # checked through the exact solver on [n*I | diag(d)] over Z
        groups = [
            FGAbelianGroup(0, (4,)),
            FGAbelianGroup(0, (2, 4)),
            FGAbelianGroup(0, (2, 2, 2)),
            FGAbelianGroup(0, (3, 9)),
            FGAbelianGroup(0, (32,)),
            FGAbelianGroup(0, (2, 12)),
        ]
        for G in groups:
            k = len(G.torsion)
            for e in G.elements():
                for n in range(2, 7):
                    rows = [
                        [n * int(i == j) for j in range(k)] + [G.torsion[j] * int(i == j) for j in range(k)]
                        for i in range(k)
                    ]
                    A = IntMatrix(rows, shape=(k, 2 * k))
                    solvable = solve_mod(A, list(e.coords), 0) is not None
                    assert reduce_mod_n(e, n).is_zero == solvable

    def test_reduction_is_homomorphism(self):
        G = FGAbelianGroup(1, (4,))
        rng = random.Random(3)
        for _ in range(50):
            a = G.element((rng.randrange(4), rng.randrange(-9, 10)))
            b = G.element((rng.randrange(4), rng.randrange(-9, 10)))
            for n in (2, 3, 4, 6):
                assert reduce_mod_n(a + b, n) == reduce_mod_n(a, n) + reduce_mod_n(b, n)


class TestManifoldData:
    def test_t3(self):
        M = builtin_manifold("T3")
        assert M.h1.rank == 3 and M.h1.torsion == ()
        assert M.h2.same_structure(M.h1)
        assert M.relator_pairing == IntMatrix.identity(3)

    def test_l4(self):
        M = builtin_manifold("L4")
        assert (M.h1.rank, M.h1.torsion) == (0, (4,))
        assert M.h2.torsion == (4,)

    def test_s3(self):
        M = builtin_manifold("S3")
        assert M.h1.is_trivial() and M.h2.is_trivial()

    def test_unknown_builtin(self):
        with pytest.raises(KeyError):
            builtin_manifold("RP3")

    def test_json_roundtrip(self):
        M = builtin_manifold("L4")
        doc = json.dumps(M.to_json())
        M2 = Manifold3Data.from_json(doc)
        assert M2.name == "L4"
        assert M2.h1.same_structure(M.h1)
        assert M2.relator_pairing == M.relator_pairing

    def test_poincare_duality_enforced(self):
        pi1 = GroupPresentation(generators=("g",), relators=((1, 1, 1, 1),))
        with pytest.raises(ValueError):
            Manifold3Data.build("bad", pi1, [0], [[1]])

    def test_invariant_factor_order_enforced(self):
        with pytest.raises(ValueError):
            group_from_invariant_factors([0, 4])
