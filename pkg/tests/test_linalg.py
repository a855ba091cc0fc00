import numpy as np
import pytest

from xalign.errors import SingularMatrixError
from xalign.linalg import cond_estimate, det, rank_tol, solve_consistent, solve_square

RNG = np.random.default_rng(20240811)


def random_complex(shape, rng=RNG):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def well_conditioned(n, rng=RNG):
    """Singular values pinned to [0.5, 2], so cond <= 4."""
    q1, _ = np.linalg.qr(random_complex((n, n), rng))
    q2, _ = np.linalg.qr(random_complex((n, n), rng))
    s = rng.uniform(0.5, 2.0, size=n)
    return q1 @ np.diag(s) @ q2


class TestSolveSquare:
    def test_identity(self):
        b = random_complex((4, 2))
        assert np.allclose(solve_square(np.eye(4), b), b)

    def test_constructed_solution_recovered(self):
        a = well_conditioned(5)
        x0 = random_complex(5)
        x = solve_square(a, a @ x0)
        assert np.max(np.abs(x - x0)) <= 1e-10

    def test_duplicated_rows_raise(self):
        a = random_complex((3, 3))
        a[2] = a[0]
        with pytest.raises(SingularMatrixError) as info:
            solve_square(a, random_complex(3))
        assert info.value.pivot >= 0.0

    def test_zero_matrix_raises_with_zero_pivot(self):
        with pytest.raises(SingularMatrixError) as info:
            solve_square(np.zeros((2, 2)), np.ones(2))
        assert info.value.pivot == 0.0

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            solve_square(np.ones((2, 3)), np.ones(2))

    def test_residual_sweep(self):
        # 1000 random well-conditioned instances, sizes 1..16
        rng = np.random.default_rng(7)
        for trial in range(1000):
            n = int(rng.integers(1, 17))
            a = well_conditioned(n, rng)
            b = random_complex((n,), rng)
            x = solve_square(a, b)
            assert np.linalg.norm(a @ x - b) <= 1e-10 * max(np.linalg.norm(b), 1e-30)


class TestRank:
    def test_zero_matrix(self):
        assert rank_tol(np.zeros((3, 5))) == 0

    def test_identity(self):
        assert rank_tol(np.eye(4)) == 4

    def test_outer_product_is_rank_one(self):
        u, v = random_complex(6), random_complex(4)
        assert rank_tol(np.outer(u, v)) == 1

    def test_rank_equals_rank_of_transpose(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            rows, cols, r = rng.integers(1, 8, size=3)
            a = random_complex((rows, r), rng) @ random_complex((r, cols), rng)
            assert rank_tol(a) == rank_tol(a.T)


class TestDet:
    def test_identity(self):
        assert det(np.eye(3)) == pytest.approx(1.0)

    def test_diagonal(self):
        assert det(np.diag([2.0, 3.0])) == pytest.approx(6.0)

    def test_equal_columns_give_zero(self):
        a = random_complex((4, 4))
        a[:, 3] = a[:, 1]
        assert abs(det(a)) <= 1e-12

    def test_multiplicative(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            n = int(rng.integers(2, 9))
            a, b = well_conditioned(n, rng), well_conditioned(n, rng)
            lhs, rhs = det(a @ b), det(a) * det(b)
            assert abs(lhs - rhs) <= 1e-8 * abs(rhs)

    def test_permutation_parity(self):
        p = np.array([[0, 1], [1, 0]], dtype=float)
        assert det(p) == pytest.approx(-1.0)


class TestCond:
    def test_identity_is_one(self):
        assert cond_estimate(np.eye(5)) == pytest.approx(1.0)

    def test_singular_is_inf(self):
        assert cond_estimate(np.zeros((2, 2))) == np.inf

    def test_scales_with_diagonal_spread(self):
        assert cond_estimate(np.diag([1.0, 100.0])) == pytest.approx(100.0)


class TestSolveConsistent:
    def test_square_path(self):
        a = well_conditioned(4)
        x0 = random_complex(4)
        assert np.allclose(solve_consistent(a, a @ x0), x0)

    def test_tall_consistent_system(self):
        a = random_complex((7, 4))
        x0 = random_complex(4)
        x = solve_consistent(a, a @ x0)
        assert np.max(np.abs(x - x0)) <= 1e-9
