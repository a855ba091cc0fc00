"""Closed-form sum-DoF trade-off regions, baselines and asymptotics.

Every value is computed in exact rational arithmetic (``fractions.Fraction``);
floats appear only when a caller renders a point.  Each achievable region is a
piecewise-linear function of the normalized feedback delay lambda = T_fb/T_c:
a plateau up to 2/T, a time-sharing line to the completely-delayed point at
lambda = 1, and a constant afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import UnsupportedCaseError


def _render(x: float) -> float:
    """Fixed-precision rendering used at every serialization boundary."""
    return float(f"{float(x):.12g}")

PLATEAU = "plateau"
TIMESHARE = "timeshare"
SATURATED = "saturated"


def _frac(x) -> Fraction:
    """Exact coercion; floats are converted exactly (use strings like '1/3'
    for non-dyadic values)."""
    return x if isinstance(x, Fraction) else Fraction(x)


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class TradeoffPoint:
    """One sampled point (lambda, sum-DoF) of an achievable region."""

    lam: Fraction
    dof: Fraction
    regime: str

    @property
    def dof_real(self) -> float:
        return float(self.dof)

    def to_json(self) -> dict:
        return {
            "lambda": {"num": self.lam.numerator, "den": self.lam.denominator,
                       "real": _render(self.lam)},
            "dof": {"num": self.dof.numerator, "den": self.dof.denominator,
                    "real": _render(self.dof)},
            "regime": self.regime,
        }


def _piecewise(lam: Fraction, breakpoint: Fraction, plateau: Fraction,
               slope: Fraction, intercept: Fraction, floor: Fraction) -> TradeoffPoint:
    if lam <= breakpoint:
        return TradeoffPoint(lam, plateau, PLATEAU)
    if lam < 1:
        return TradeoffPoint(lam, slope * lam + intercept, TIMESHARE)
    return TradeoffPoint(lam, floor, SATURATED)


def two_user_scheme_length(A: int, B: int) -> int:
    """T_AB = 2 + ceil((2A - B)/B), the two-user slot budget (B <= 2A)."""
    return 2 + ceil_div(2 * A - B, B)


def theorem1_region(A: int, B: int, lam) -> TradeoffPoint:
    """Two-user MIMO X with local CSIT.

    Plateau 4A/T_AB up to lambda = 2/T_AB, then the line to min(2A, B) at
    lambda = 1.  For B >= 2A no time sharing is needed and the region is the
    constant 2A everywhere.
    """
    lam = _frac(lam)
    if A < 1 or B < 1 or lam < 0:
        raise ValueError(f"need A, B >= 1 and lambda >= 0, got A={A}, B={B}, lambda={lam}")
    if B >= 2 * A:
        return TradeoffPoint(lam, Fraction(2 * A), PLATEAU)
    T = two_user_scheme_length(A, B)
    floor = Fraction(min(2 * A, B))
    a = Fraction(4 * A - T * min(2 * A, B), 2 - T)
    b = Fraction(2 * min(2 * A, B) - 4 * A, 2 - T)
    return _piecewise(lam, Fraction(2, T), Fraction(4 * A, T), a, b, floor)


def theorem2_region(K: int, lam) -> TradeoffPoint:
    """K-user SISO X with local CSIT: plateau 2(2K-1)/(3K-1), line -lambda/3 + 4/3,
    saturated at 1."""
    lam = _frac(lam)
    if K < 2 or lam < 0:
        raise ValueError(f"need K >= 2 and lambda >= 0, got K={K}, lambda={lam}")
    return _piecewise(lam, Fraction(2, 3 * K - 1), Fraction(2 * (2 * K - 1), 3 * K - 1),
                      Fraction(-1, 3), Fraction(4, 3), Fraction(1))


def theorem3_region(M: int, N: int, lam) -> TradeoffPoint:
    """M x N MISO X (A = N-1 transmit antennas) with local CSIT."""
    lam = _frac(lam)
    if N < 3 or M < 1 or lam < 0:
        raise ValueError(f"need M >= 1, N >= 3 and lambda >= 0, got M={M}, N={N}, lambda={lam}")
    T = M * (N - 1) + 1
    c = Fraction(1 - M * (N - 1) ** 2, M * (N - 1) - 1)
    d = Fraction(M * N * (N - 1) - 2, M * (N - 1) - 1)
    return _piecewise(lam, Fraction(2, T), Fraction(M * N * (N - 1), T), c, d, Fraction(1))


def corollary1_region(A: int, B: int, lam) -> TradeoffPoint:
    """Two-user MIMO X with *global* CSIT for 2B <= A: the same plateau, then a
    time-sharing line down to the completely-delayed value 4B/3."""
    lam = _frac(lam)
    if 2 * B > A:
        raise UnsupportedCaseError(f"corollary requires 2B <= A, got A={A}, B={B}")
    if lam < 0:
        raise ValueError(f"need lambda >= 0, got {lam}")
    T = two_user_scheme_length(A, B)
    e = Fraction(4 * B * T - 12 * A, 3 * (T - 2))
    f = Fraction(12 * A - 8 * B, 3 * (T - 2))
    return _piecewise(lam, Fraction(2, T), Fraction(4 * A, T), e, f, Fraction(4 * B, 3))


@dataclass(frozen=True)
class Table1Row:
    """Sum-DoFs of the two-user MIMO X channel under the four CSIT assumptions."""

    case: str
    stia: Fraction   # local, temperately delayed CSIT (this package's scheme)
    gak: Fraction    # global, completely delayed CSIT
    ia: Fraction     # full CSIT interference alignment
    vv: Fraction     # no CSIT

    def to_json(self) -> dict:
        cols = {}
        for name in ("stia", "gak", "ia", "vv"):
            val: Fraction = getattr(self, name)
            cols[name] = {"num": val.numerator, "den": val.denominator, "real": _render(val)}
        return {"case": self.case, **cols}


def table1_row(A: int, B: int) -> Table1Row:
    """Evaluate the comparison-table row that matches (A, B)."""
    if A < 1 or B < 1:
        raise ValueError(f"need A, B >= 1, got A={A}, B={B}")
    if 2 * B <= A:
        return Table1Row(
            case="2B <= A",
            stia=Fraction(4 * A, two_user_scheme_length(A, B)),
            gak=Fraction(4 * B, 3),
            ia=Fraction(2 * B),
            vv=Fraction(B),
        )
    if B < A < 2 * B:
        return Table1Row(
            case="B < A < 2B",
            stia=Fraction(4 * A, two_user_scheme_length(A, B)),
            gak=Fraction(2 * B * (A + 2 * B), A + 4 * B),
            ia=min(Fraction(2 * B), Fraction(4 * A, 3)),
            vv=Fraction(B),
        )
    if 4 * A > 3 * B:  # 3B/4 < A <= B
        return Table1Row(
            case="3B/4 < A <= B",
            stia=Fraction(4 * A, 3),
            gak=Fraction(6 * B, 5),
            ia=min(Fraction(2 * A), Fraction(4 * B, 3)),
            vv=Fraction(B),
        )
    if 2 * A > B:  # B/2 < A <= 3B/4
        return Table1Row(
            case="B/2 < A <= 3B/4",
            stia=Fraction(4 * A, 3),
            gak=Fraction(4 * A * B, 2 * A + B),
            ia=min(Fraction(2 * A), Fraction(4 * B, 3)),
            vv=Fraction(B),
        )
    return Table1Row(case="A <= B/2", stia=Fraction(2 * A), gak=Fraction(2 * A),
                     ia=Fraction(2 * A), vv=Fraction(2 * A))


def timeshare(p1: TradeoffPoint, p2: TradeoffPoint, lam) -> TradeoffPoint:
    """Linear interpolation between two operating points, exact in lambda."""
    lam = _frac(lam)
    if not p1.lam < p2.lam:
        raise ValueError(f"need p1.lam < p2.lam, got {p1.lam} and {p2.lam}")
    if not p1.lam <= lam <= p2.lam:
        raise ValueError(f"lambda {lam} outside segment [{p1.lam}, {p2.lam}]")
    w = (lam - p1.lam) / (p2.lam - p1.lam)
    return TradeoffPoint(lam, p1.dof + w * (p2.dof - p1.dof), TIMESHARE)


def asymptotic_dof_t1(A: int, B: int, n: int) -> Fraction:
    """Finite-horizon sum-DoF of the two-user scheme with TDMA filler slots:
    (4An + min(2A,B) T(T-1)) / (Tn + T(T-1))."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    T = two_user_scheme_length(A, B)
    filler = T * (T - 1)
    return Fraction(4 * A * n + min(2 * A, B) * filler, T * n + filler)


def asymptotic_dof_t3(M: int, N: int, n: int) -> Fraction:
    """Finite-horizon sum-DoF of the MISO X scheme with TDMA filler slots:
    (MN(N-1) n + T(T-1)) / (Tn + T(T-1))."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    T = M * (N - 1) + 1
    filler = T * (T - 1)
    return Fraction(M * N * (N - 1) * n + filler, T * n + filler)


def scale_dof(point: TradeoffPoint, q: int) -> TradeoffPoint:
    """Spatial scaling: q antennas everywhere multiplies the DoF by q."""
    if q < 1 or q != int(q):
        raise ValueError(f"need integer q >= 1, got {q}")
    return TradeoffPoint(point.lam, point.dof * q, point.regime)


def sample_region(region, grid) -> list[TradeoffPoint]:
    """Evaluate a region callable over a lambda grid of exact values."""
    return [region(_frac(lam)) for lam in grid]
