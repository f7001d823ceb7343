import random
from itertools import product
from math import cos, pi, sin

import pytest

from fibercover.torus_coverings import (
    BlackBoxCovering,
    TorusPoint,
    build_phi_alpha,
    classify_covering_map,
    classify_sampled_loops,
    equivalence_test,
)
from fibercover.winding import (
    RefinementLimitError,
    StepTooLargeError,
    closed_loop_winding,
    projective_half_turns,
    winding_number,
)


class TestWindingCore:
    def test_simple_loops(self):
        for k in (-3, -1, 0, 1, 2, 5):
            assert winding_number(lambda s, k=k: (k * s) % 1.0) == k

    def test_wrapping_is_fine(self):
        # a loop crossing the branch cut many times
        assert winding_number(lambda s: (0.9 + 2 * s) % 1.0) == 2

    def test_refinement_kicks_in(self):
        # winding 20 needs more than 64 samples to certify
        assert winding_number(lambda s: (20 * s) % 1.0, samples=64) == 20

    def test_refinement_limit(self):
        rng = random.Random(0)
        with pytest.raises(RefinementLimitError):
            winding_number(lambda s: rng.random(), samples=64, max_samples=256)

    def test_closed_loop_winding_rejects_sparse(self):
        with pytest.raises(StepTooLargeError):
            closed_loop_winding([0.0, 0.4, 0.8, 0.2, 0.6])

    def test_projective_half_turns(self):
        # a line rotating by pi over one period makes exactly one half-turn
        assert projective_half_turns(lambda s: (cos(pi * s), sin(pi * s))) == 1
        assert projective_half_turns(lambda s: (cos(3 * pi * s), sin(3 * pi * s))) == 3
        assert projective_half_turns(lambda s: (1.0, 0.0)) == 0


class TestTorusPoint:
    def test_normalization(self):
        p = TorusPoint(1.5, -0.25, 2.0, 0.75)
        assert (p.x, p.y, p.z, p.theta) == (0.5, 0.75, 0.0, 0.75)


class TestBuildPhiAlpha:
    def test_zero_class_multiplies_fiber(self):
        phi = build_phi_alpha(3, (0, 0, 0))
        q = phi(TorusPoint(0.2, 0.4, 0.6, 0.5))
        assert q.base == (0.2, 0.4, 0.6)
        assert q.theta == pytest.approx(0.5)  # 1.5 mod 1

    def test_direct_substitution(self):
        phi = build_phi_alpha(2, (1, 0, 0))
        q = phi(TorusPoint(0.5, 0.0, 0.0, 0.0))
        assert q.theta == pytest.approx(0.5)

    def test_alpha_reduced(self):
        assert build_phi_alpha(2, (3, -1, 4)).alpha == (1, 1, 0)

    def test_degree_validated(self):
        with pytest.raises(ValueError):
            build_phi_alpha(1, (0, 0, 0))


class TestClassify:
    def test_roundtrip_sample(self):
        assert classify_covering_map(build_phi_alpha(3, (1, 2, 0))) == (1, 2, 0)
        assert classify_covering_map(build_phi_alpha(4, (0, 0, 0))) == (0, 0, 0)

    def test_exhaustive_roundtrip_small(self):
        for n in (2, 3):
            for alpha in product(range(n), repeat=3):
                assert classify_covering_map(build_phi_alpha(n, alpha)) == alpha

    def test_black_box(self):
        phi = BlackBoxCovering(2, lambda p: TorusPoint(p.x, p.y, p.z, 2 * p.theta + p.x + p.y))
        assert classify_covering_map(phi) == (1, 1, 0)

    def test_black_box_nonlinear(self):
        # fiberwise degree 2 with a continuous nonlinear twist; the twist is
        # nullhomotopic in the base directions so it cannot change the class
        def sampler(p):
            bump = 0.1 * sin(2 * pi * p.x) * cos(2 * pi * p.z)
            return TorusPoint(p.x, p.y, p.z, 2 * p.theta + p.y + bump)

        assert classify_covering_map(BlackBoxCovering(2, sampler)) == (0, 1, 0)

    def test_basepoint_independence(self):
        rng = random.Random(11)
        phi = build_phi_alpha(3, (2, 1, 0))
        for _ in range(5):
            basepoint = tuple(rng.random() for _ in range(3))
            theta0 = rng.random()
            assert classify_covering_map(phi, basepoint=basepoint, lift_theta=theta0) == (2, 1, 0)

    def test_discontinuous_sampler_rejected(self):
        def bad(p):
            # fiber degree 2 but with a jump in the x direction
            jump = 0.5 if p.x > 0.5 else 0.0
            return TorusPoint(p.x, p.y, p.z, 2 * p.theta + jump)

        with pytest.raises(RefinementLimitError):
            classify_covering_map(BlackBoxCovering(2, bad))


class TestEquivalence:
    def test_reflexive(self):
        assert equivalence_test((1, 2, 0), (1, 2, 0), 3) == (True, (0, 0, 0))

    def test_raw_vectors_differing_by_n(self):
        assert equivalence_test((0, 0, 0), (2, 0, 0), 2) == (True, (1, 0, 0))
        assert equivalence_test((1, 5, -2), (7, -1, 4), 3) == (True, (2, -2, 2))

    def test_distinct_classes(self):
        assert equivalence_test((1, 0, 0), (0, 0, 0), 2) == (False, None)

    def test_partitions_into_n_cubed_classes(self):
        for n in (2, 3):
            triples = list(product(range(-n, n + 1), repeat=3))
            reps = set()
            for t in triples:
                reps.add(tuple(v % n for v in t))
                # consistency: equivalent to its own reduction
                ok, _ = equivalence_test(t, tuple(v % n for v in t), n)
                assert ok
            assert len(reps) == n**3

    def test_is_equivalence_relation(self):
        rng = random.Random(4)
        n = 4
        triples = [tuple(rng.randint(-8, 8) for _ in range(3)) for _ in range(12)]
        for a in triples:
            assert equivalence_test(a, a, n)[0]
            for b in triples:
                ab = equivalence_test(a, b, n)[0]
                assert ab == equivalence_test(b, a, n)[0]
                for c in triples:
                    if ab and equivalence_test(b, c, n)[0]:
                        assert equivalence_test(a, c, n)[0]


class TestSampledLoops:
    def test_uniform_samples(self):
        m = 64
        loops = {
            "x": [(1 * i / m) % 1.0 for i in range(m)],
            "y": [(2 * i / m) % 1.0 for i in range(m)],
            "z": [0.25] * m,
        }
        assert classify_sampled_loops(loops, 3) == (1, 2, 0)

    def test_pair_samples_sorted(self):
        m = 32
        pairs = [[i / m, (3 * i / m) % 1.0] for i in range(m)]
        random.Random(2).shuffle(pairs)
        loops = {"x": pairs, "y": [0.0] * m, "z": [0.0] * m}
        assert classify_sampled_loops(loops, 2) == (1, 0, 0)

    def test_sparse_samples_fail_loudly(self):
        loops = {"x": [(5 * i / 8) % 1.0 for i in range(8)], "y": [0.0] * 8, "z": [0.0] * 8}
        with pytest.raises(StepTooLargeError):
            classify_sampled_loops(loops, 5)

    def test_missing_loop(self):
        with pytest.raises(ValueError):
            classify_sampled_loops({"x": [0.0] * 8}, 2)
