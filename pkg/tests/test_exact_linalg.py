import random
from itertools import product

import pytest

from fibercover.exact_linalg import IntMatrix, ModularSolution, smith_normal_form, solve_mod


def brute_force_solutions(A, b, m):
    """All x in (Z_m)^cols with A x = b (mod m).  Independent of solve_mod."""
    sols = []
    for x in product(range(m), repeat=A.cols):
        img = A.apply(x)
        if all((u - w) % m == 0 for u, w in zip(img, b)):
            sols.append(x)
    return sorted(sols)


class TestIntMatrix:
    def test_shape_and_access(self):
        A = IntMatrix([[1, 2], [3, 4], [5, 6]])
        assert (A.rows, A.cols) == (3, 2)
        assert A[2, 1] == 6
        assert A.column(0) == (1, 3, 5)

    def test_matmul_and_apply(self):
        A = IntMatrix([[1, 2], [3, 4]])
        B = IntMatrix([[0, 1], [1, 0]])
        assert A @ B == IntMatrix([[2, 1], [4, 3]])
        assert A.apply((1, 1)) == (3, 7)

    def test_det(self):
        assert IntMatrix.identity(4).det() == 1
        assert IntMatrix([[2, 0], [0, 3]]).det() == 6
        assert IntMatrix([[1, 2], [2, 4]]).det() == 0
        assert IntMatrix([[0, 1], [1, 0]]).det() == -1

    def test_inverse_unimodular(self):
        U = IntMatrix([[1, 5], [0, 1]])
        assert U.inverse_unimodular() @ U == IntMatrix.identity(2)
        with pytest.raises(ValueError):
            IntMatrix([[2, 0], [0, 1]]).inverse_unimodular()

    def test_degenerate_shapes(self):
        Z = IntMatrix.zeros(0, 3)
        assert (Z.rows, Z.cols) == (0, 3)
        assert Z.apply((1, 2, 3)) == ()

    def test_ragged_rejected(self):
        with pytest.raises(ValueError):
            IntMatrix([[1, 2], [3]])


class TestSmithNormalForm:
    def test_identity(self):
        I3 = IntMatrix.identity(3)
        snf = smith_normal_form(I3)
        assert snf.D == I3
        assert snf.U == I3
        assert snf.V == I3

    def test_row_vector(self):
        # (4 2) has gcd 2
        snf = smith_normal_form(IntMatrix([[4, 2]]))
        assert snf.diagonal == (2,)
        assert snf.D == IntMatrix([[2, 0]])
        assert snf.verify()

    def test_diag_2_3(self):
        snf = smith_normal_form(IntMatrix([[2, 0], [0, 3]]))
        assert snf.diagonal == (1, 6)
        assert snf.verify()

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            smith_normal_form(IntMatrix.zeros(0, 2))

    def test_random_matrices(self):
        rng = random.Random(20240901)
        for _ in range(1000):
            r = rng.randint(1, 6)
            c = rng.randint(1, 6)
            A = IntMatrix([[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)])
            snf = smith_normal_form(A)
            # recomposition is exact and the diagonal is a divisibility chain
            assert snf.U @ A @ snf.V == snf.D
            assert snf.U.det() in (1, -1)
            assert snf.V.det() in (1, -1)
            d = snf.diagonal
            assert all(x >= 0 for x in d)
            for a, b in zip(d, d[1:]):
                assert (a == 0 and b == 0) or (a != 0 and b % a == 0)
            # off-diagonal entries vanish
            for i in range(r):
                for j in range(c):
                    if i != j:
                        assert snf.D[i, j] == 0


class TestSolveMod:
    def test_zero_rhs_has_zero_solution(self):
        for n in (2, 3, 7):
            for m in (0, 2, 5):
                sol = solve_mod(IntMatrix([[n]]), [0], m)
                assert sol is not None
                assert sol.particular == (0,)

    def test_modular_example(self):
        # 2x = 2 (mod 4): brute force gives {1, 3}
        A = IntMatrix([[2]])
        expected = brute_force_solutions(A, [2], 4)
        assert expected == [(1,), (3,)]
        sol = solve_mod(A, [2], 4)
        assert sol is not None
        assert sol.particular == (1,)
        assert sol.kernel == ((2,),)
        assert sol.all_solutions() == expected

    def test_unsolvable_over_z(self):
        assert solve_mod(IntMatrix([[3]]), [1], 0) is None

    def test_solvable_over_z(self):
        sol = solve_mod(IntMatrix([[3]]), [12], 0)
        assert sol is not None
        assert sol.particular == (4,)
        assert sol.kernel == ()

    def test_underdetermined_over_z(self):
        sol = solve_mod(IntMatrix([[2, 4]]), [6], 0)
        assert sol is not None
        x = sol.particular
        assert 2 * x[0] + 4 * x[1] == 6
        assert len(sol.kernel) == 1
        k = sol.kernel[0]
        assert 2 * k[0] + 4 * k[1] == 0 and any(k)

    def test_matches_brute_force(self):
        rng = random.Random(77)
        for _ in range(300):
            r = rng.randint(1, 3)
            c = rng.randint(1, 3)
            m = rng.randint(2, 6)
            A = IntMatrix([[rng.randint(-4, 4) for _ in range(c)] for _ in range(r)])
            b = [rng.randint(-4, 4) for _ in range(r)]
            expected = brute_force_solutions(A, b, m)
            sol = solve_mod(A, b, m)
            if not expected:
                assert sol is None
            else:
                assert sol is not None
                assert sol.all_solutions() == expected

    def test_empty_columns(self):
        assert solve_mod(IntMatrix.zeros(2, 0), [0, 0], 0) == ModularSolution((), (), 0)
        assert solve_mod(IntMatrix.zeros(2, 0), [0, 1], 0) is None
