"""Precoder constructions for space-time and retrospective alignment.

The central construction is cyclic zero-padding: an A x A precoder whose
column j carries exactly B nonzeros on a cyclically shifting band, chosen so
that ``H_now @ V == H_target`` for wide B x A channel matrices while V stays
full rank almost surely.  Column 1 occupies rows 1..B; each following column's
band shifts up by one, wrapping at the top.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateChannelError, SingularMatrixError
from .linalg import as_cmatrix, det, solve_square


@dataclass(frozen=True)
class ZeroPattern:
    """Support pattern of a cyclic zero-padded A x A matrix with band size B."""

    size: int  # A
    band: int  # B

    def __post_init__(self):
        if not 1 <= self.band <= self.size:
            raise ValueError(f"need 1 <= B <= A, got A={self.size}, B={self.band}")

    def rows(self, col: int) -> tuple[int, ...]:
        """1-based nonzero rows of 1-based column ``col``, ascending."""
        if not 1 <= col <= self.size:
            raise IndexError(f"column {col} outside 1..{self.size}")
        return tuple(sorted(((r - col) % self.size) + 1 for r in range(1, self.band + 1)))

    def mask(self) -> np.ndarray:
        """Boolean (A, A) array, True where entries may be nonzero."""
        m = np.zeros((self.size, self.size), dtype=bool)
        for j in range(1, self.size + 1):
            for r in self.rows(j):
                m[r - 1, j - 1] = True
        return m


def czp_pattern(size: int, band: int) -> ZeroPattern:
    """Cyclic zero-padding pattern for an A x A precoder with B-row bands.

    Unsupported for band > size; the tall-receiver case is handled upstream by
    switching receive antennas off, never here.
    """
    if band > size:
        raise ValueError(f"cyclic zero-padding needs B <= A, got A={size}, B={band}")
    return ZeroPattern(size=size, band=band)


@dataclass(frozen=True)
class Precoder:
    """A constructed precoding matrix plus the alignment it encodes.

    ``source_slots`` is (target slot, current slot) when the precoder replays
    a previously observed interference shape.
    """

    matrix: np.ndarray
    pattern: ZeroPattern | None = None
    source_slots: tuple[int, int] | None = None


def czp_precoder(h_now, h_target, source_slots: tuple[int, int] | None = None) -> Precoder:
    """Solve H_now @ V = H_target with V on the cyclic zero-padding pattern.

    ``h_now`` and ``h_target`` are B x A with B <= A.  Column j of V solves the
    B x B subsystem restricted to the pattern's row set, so the alignment holds
    exactly; V is full rank with probability 1 for continuously distributed
    channels.  A singular subsystem (a probability-zero event) raises
    :class:`DegenerateChannelError`.
    """
    h_now = as_cmatrix(h_now)
    h_target = as_cmatrix(h_target)
    if h_now.shape != h_target.shape:
        raise ValueError(f"shape mismatch: {h_now.shape} vs {h_target.shape}")
    b, a = h_now.shape
    pattern = czp_pattern(a, b)
    v = np.zeros((a, a), dtype=complex)
    try:
        if b == a:
            v = solve_square(h_now, h_target)
        else:
            for j in range(1, a + 1):
                rows = [r - 1 for r in pattern.rows(j)]
                v[rows, j - 1] = solve_square(h_now[:, rows], h_target[:, j - 1])
    except SingularMatrixError as exc:
        raise DegenerateChannelError(f"degenerate channel in zero-padded solve: {exc}") from exc
    return Precoder(matrix=v, pattern=pattern, source_slots=source_slots)


def scalar_ratio_precoder(h_target: complex, h_now: complex, min_magnitude: float = 1e-12) -> complex:
    """SISO alignment coefficient h_target / h_now."""
    if abs(h_now) < min_magnitude:
        raise DegenerateChannelError(f"coefficient magnitude {abs(h_now):.3e} below {min_magnitude:.0e}")
    return complex(h_target) / complex(h_now)


def misox_precoder(rows_now, rows_t1, source_slots: tuple[int, int] | None = None) -> Precoder:
    """Inverse-based MISO X precoder V = stack(rows_now)^-1 @ stack(rows_t1).

    ``rows_now`` / ``rows_t1`` are the N-1 current / reference channel rows of
    all receivers except the intended one, in receiver order.  With A = N-1
    transmit antennas the stack is square, and every excluded receiver sees
    row_now @ V == row_t1.
    """
    now = np.vstack([np.atleast_2d(np.asarray(r, dtype=complex)) for r in rows_now])
    ref = np.vstack([np.atleast_2d(np.asarray(r, dtype=complex)) for r in rows_t1])
    if now.shape != ref.shape or now.shape[0] != now.shape[1]:
        raise ValueError(f"need square stacks of equal shape, got {now.shape} and {ref.shape}")
    try:
        v = solve_square(now, ref)
    except SingularMatrixError as exc:
        raise DegenerateChannelError(f"degenerate channel stack: {exc}") from exc
    return Precoder(matrix=v, pattern=None, source_slots=source_slots)


def alignment_residual(h_now, precoder: Precoder, h_target) -> float:
    """Relative alignment error ||H_now V - H_target|| / ||H_target||."""
    h_now = as_cmatrix(h_now)
    h_target = as_cmatrix(h_target)
    num = np.linalg.norm(h_now @ precoder.matrix - h_target)
    den = np.linalg.norm(h_target)
    return float(num / den) if den > 0 else float(num)


def cramer_column_check(h_now, h_target, col: int) -> bool:
    """Cross-check one zero-padded column against Cramer's rule.

    Returns True when every Cramer determinant for the column's B x B
    subsystem is nonzero (the almost-sure case).
    """
    h_now = as_cmatrix(h_now)
    h_target = as_cmatrix(h_target)
    b, a = h_now.shape
    rows = [r - 1 for r in czp_pattern(a, b).rows(col)]
    sub = h_now[:, rows]
    if abs(det(sub)) == 0.0:
        return False
    for m in range(b):
        patched = sub.copy()
        patched[:, m] = h_target[:, col - 1]
        if abs(det(patched)) == 0.0:
            return False
    return True
