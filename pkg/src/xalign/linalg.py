"""Dense complex matrix kernel for the small systems this package builds.

Everything here is sized for matrices of a few tens of rows, generically
well-conditioned; partial-pivoted LU (LAPACK via scipy) does all the work.
Tolerances live in one record so test suites can tighten or loosen them
uniformly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .errors import SingularMatrixError


@dataclass(frozen=True)
class Tolerances:
    pivot_rel: float = 1e-12   # pivot below pivot_rel * max|entry| counts as singular
    rank_rel: float = 1e-9     # singular values below rank_rel * s_max do not count
    solve_residual: float = 1e-10


DEFAULT_TOLERANCES = Tolerances()


def as_cmatrix(a) -> np.ndarray:
    """Coerce to a 2-D complex array (vectors become single columns)."""
    m = np.asarray(a, dtype=complex)
    if m.ndim == 1:
        m = m[:, None]
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def _lu(a: np.ndarray, tol: Tolerances):
    """LU factor with a singularity check; returns (lu, piv, pivot magnitudes)."""
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    if scale == 0.0:
        raise SingularMatrixError("matrix is exactly zero", pivot=0.0)
    with warnings.catch_warnings():
        # exact singularity is detected below from the pivots themselves
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    worst = float(pivots.min())
    if worst < tol.pivot_rel * scale:
        raise SingularMatrixError(
            f"numerically singular: pivot {worst:.3e} below {tol.pivot_rel:.0e} * max|entry| "
            f"({tol.pivot_rel * scale:.3e})",
            pivot=worst,
        )
    return lu, piv, pivots


def solve_square(a, b, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Solve A X = b for square A by partial-pivoted elimination.

    Raises :class:`SingularMatrixError` (carrying the pivot magnitude) when a
    pivot falls below ``tol.pivot_rel`` times the largest entry of A.
    """
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"solve_square needs a square matrix, got {a.shape}")
    b = np.asarray(b, dtype=complex)
    squeeze = b.ndim == 1
    rhs = b[:, None] if squeeze else b
    if rhs.shape[0] != a.shape[0]:
        raise ValueError(f"rhs has {rhs.shape[0]} rows, expected {a.shape[0]}")
    lu, piv, _ = _lu(a, tol)
    x = lu_solve((lu, piv), rhs, check_finite=False)
    return x[:, 0] if squeeze else x


def det(a) -> complex:
    """Determinant from the same pivoted elimination (0 for singular input)."""
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"det needs a square matrix, got {a.shape}")
    try:
        lu, piv, _ = _lu(a, DEFAULT_TOLERANCES)
    except SingularMatrixError:
        return 0j
    sign = 1 if np.count_nonzero(piv != np.arange(len(piv))) % 2 == 0 else -1
    return complex(sign * np.prod(np.diag(lu)))


def cond_estimate(a) -> float:
    """Cheap conditioning estimate: ratio of extreme pivot magnitudes."""
    a = as_cmatrix(a)
    try:
        _, _, pivots = _lu(a, DEFAULT_TOLERANCES)
    except SingularMatrixError:
        return np.inf
    return float(pivots.max() / pivots.min())


def rank_tol(a, tol: float = DEFAULT_TOLERANCES.rank_rel) -> int:
    """Numerical rank: singular values above ``tol`` times the largest one."""
    a = as_cmatrix(a)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def solve_consistent(a, b, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Solve a (possibly overdetermined but consistent) full-column-rank system.

    Square systems go through :func:`solve_square`; tall ones through least
    squares, which is exact here because all stacked systems in this package
    are noiseless.
    """
    a = as_cmatrix(a)
    if a.shape[0] == a.shape[1]:
        return solve_square(a, b, tol=tol)
    x, *_ = np.linalg.lstsq(a, np.asarray(b, dtype=complex), rcond=None)
    return x
