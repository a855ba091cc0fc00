"""K-user SISO X retrospective interference alignment.

The run has K dedicated phases of K slots (phase j delivers 2K-1 fresh symbols
toward receiver j) followed by K(K-1)/2 side-information slots, one per
unordered transmitter pair.  During phase j every other transmitter repeats
its single symbol behind a channel-ratio coefficient so that one chosen
unintended receiver can cancel it; the cancellation value doubles as side
information that the dedicated transmitter can rebuild from local CSIT alone
and deliver in the final phase.

Phase slots come from staggered slot sets (distinct blocks, current CSIT from
the second slot on); the final slots need no CSIT at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .channel import ChannelProcess, CsitView, NetworkConfig, SlotSet, received_signal, schedule_slot_sets
from .errors import ConfigurationError, SchedulingError
from .linalg import rank_tol, solve_square
from .precoding import Precoder
from .records import DecodeReport, Transcript


@dataclass(frozen=True)
class RiaPlan:
    """Slot layout for one run: K dedicated phases plus the pair slots."""

    K: int
    phase_slots: tuple[SlotSet, ...]
    final_slots: tuple[tuple[int, tuple[int, int]], ...]  # (slot, (p, q)) with p < q
    coherence: int
    feedback_delay: int

    @property
    def total_symbols(self) -> int:
        return self.K * (2 * self.K - 1)

    @property
    def total_slots(self) -> int:
        return self.K * (3 * self.K - 1) // 2

    def all_slots(self) -> tuple[int, ...]:
        slots = [s for ss in self.phase_slots for s in ss.slots]
        slots.extend(n for n, _ in self.final_slots)
        return tuple(slots)


def blocked_receivers(K: int, phase: int) -> tuple[int, ...]:
    """Receivers other than the dedicated one, in the fixed ascending order
    that assigns them to phase slots 2..K."""
    return tuple(r for r in range(1, K + 1) if r != phase)


def assigned_slot_index(K: int, phase: int, rx: int) -> int:
    """1-based phase-slot index in which receiver ``rx`` cancels interference."""
    return 2 + blocked_receivers(K, phase).index(rx)


def plan_ria(K: int, coherence: int | None = None, feedback_delay: int = 2) -> RiaPlan:
    """Lay out the K(3K-1)/2 channel uses of one run.

    Defaults put the network at the plateau edge: T_c = 3K - 1, T_fb = 2.
    """
    if K < 2:
        raise ConfigurationError(f"need K >= 2 users, got K={K}")
    if coherence is None:
        coherence = 3 * K - 1
    if feedback_delay >= coherence:
        raise SchedulingError(f"need T_fb < T_c, got {feedback_delay} >= {coherence}")
    if K > coherence - feedback_delay:
        raise SchedulingError(
            f"{K} interleaved phases do not fit: T_c - T_fb = {coherence - feedback_delay}"
        )
    phases = tuple(schedule_slot_sets(coherence, feedback_delay, K, n_sets=K, phase_one_len=1))
    # Side-info reconstruction reads phase CSI, so the pair slots start one
    # feedback delay after the last phase slot; they need no CSIT themselves.
    start = max(s for ss in phases for s in ss.slots) + feedback_delay
    pairs = [(p, q) for p in range(1, K + 1) for q in range(p + 1, K + 1)]
    final = tuple((start + idx, pair) for idx, pair in enumerate(pairs))
    return RiaPlan(K=K, phase_slots=phases, final_slots=final,
                   coherence=coherence, feedback_delay=feedback_delay)


def plateau(K: int) -> Fraction:
    return Fraction(2 * (2 * K - 1), 3 * K - 1)


def ria_network(K: int, coherence: int | None = None, feedback_delay: int = 2,
                seed: int = 0, magnitude_bounds=None) -> NetworkConfig:
    if coherence is None:
        coherence = 3 * K - 1
    kwargs = {}
    if magnitude_bounds is not None:
        kwargs["magnitude_bounds"] = magnitude_bounds
    return NetworkConfig(num_tx=K, num_rx=K, tx_antennas=1, rx_antennas=1,
                         coherence=coherence, feedback_delay=feedback_delay, seed=seed, **kwargs)


@dataclass
class RiaPayload:
    """``dedicated[j]`` holds transmitter j's K phase-j symbols; ``cross[(j, p)]``
    the single symbol transmitter p sends toward receiver j in phase j."""

    dedicated: dict[int, np.ndarray]
    cross: dict[tuple[int, int], complex]

    @classmethod
    def random(cls, K: int, rng: np.random.Generator) -> "RiaPayload":
        dedicated = {j: rng.standard_normal(K) + 1j * rng.standard_normal(K)
                     for j in range(1, K + 1)}
        cross = {(j, p): complex(rng.standard_normal() + 1j * rng.standard_normal())
                 for j in range(1, K + 1) for p in range(1, K + 1) if p != j}
        return cls(dedicated=dedicated, cross=cross)

    def receiver_truth(self, j: int, K: int) -> np.ndarray:
        others = [self.cross[(j, p)] for p in range(1, K + 1) if p != j]
        return np.concatenate([self.dedicated[j], np.asarray(others, dtype=complex)])


@dataclass(frozen=True)
class SideInfo:
    """A blocked receiver's cancellation value, rebuilt by the transmitter.

    ``value`` equals coeff_new * sym_new - coeff_old * sym_old where the two
    (slot, coefficient, symbol) triples are ``composition``; every coefficient
    is a channel of ``origin_tx`` only.
    """

    value: complex
    origin_tx: int
    blocked_rx: int
    composition: tuple[tuple[int, complex, complex], tuple[int, complex, complex]]


def reconstruct_side_info(plan: RiaPlan, view: CsitView, own_symbols: np.ndarray) -> list[SideInfo]:
    """Side information transmitter ``view.tx`` owes, from its local CSI only.

    ``own_symbols`` are its K dedicated-phase symbols.  Raises
    :class:`NotReadyError` while the needed feedback has not arrived.
    """
    p = view.tx
    K = plan.K
    slots = plan.phase_slots[p - 1].slots
    own = np.asarray(own_symbols, dtype=complex)
    if own.shape != (K,):
        raise ConfigurationError(f"expected {K} dedicated symbols, got shape {own.shape}")
    out = []
    for r in blocked_receivers(K, p):
        m = assigned_slot_index(K, p, r)
        coeff_new = complex(view.channel(r, slots[m - 1])[0, 0])
        coeff_old = complex(view.channel(r, slots[0])[0, 0])
        value = coeff_new * own[m - 1] - coeff_old * own[0]
        out.append(SideInfo(
            value=value, origin_tx=p, blocked_rx=r,
            composition=((slots[m - 1], coeff_new, complex(own[m - 1])),
                         (slots[0], coeff_old, complex(own[0]))),
        ))
    return out


def run_ria(plan: RiaPlan, process: ChannelProcess, payload: RiaPayload,
            recorder: list | None = None) -> Transcript:
    """Execute all phases; encoders consume CSI through views only (ratio
    values during the dedicated phases, raw coefficients for side-info
    reconstruction)."""
    net = process.config
    if net.num_tx != plan.K or net.num_rx != plan.K:
        raise ConfigurationError(f"plan is for K={plan.K}, network is {net.num_tx}x{net.num_rx}")
    if any(a != 1 for a in net.tx_antennas + net.rx_antennas):
        raise ConfigurationError("retrospective scheme is single-antenna only")
    if (net.coherence, net.feedback_delay) != (plan.coherence, plan.feedback_delay):
        raise SchedulingError("plan and network disagree on T_c / T_fb")

    K = plan.K
    sent: dict[int, dict[int, np.ndarray]] = {}
    received: dict[int, dict[int, np.ndarray]] = {}
    precoders: dict[tuple, Precoder] = {}

    for j in range(1, K + 1):
        slots = plan.phase_slots[j - 1].slots
        t1 = slots[0]
        sent[t1] = {j: np.array([payload.dedicated[j][0]])}
        for p in range(1, K + 1):
            if p != j:
                sent[t1][p] = np.array([payload.cross[(j, p)]])
        for m in range(2, K + 1):
            n = slots[m - 1]
            if not process.has_current_csit(n):
                raise SchedulingError(f"phase slot {n} has no current CSIT")
            r = blocked_receivers(K, j)[m - 2]
            sent[n] = {j: np.array([payload.dedicated[j][m - 1]])}
            for p in range(1, K + 1):
                if p == j:
                    continue
                view = process.csit_view(p, n, recorder=recorder)
                coeff = view.ratio(r, t1)
                precoders[(n, p)] = Precoder(matrix=np.array([[coeff]]), source_slots=(t1, n))
                sent[n][p] = np.array([coeff * payload.cross[(j, p)]])

    side: dict[tuple[int, int], SideInfo] = {}
    for n, (p, q) in plan.final_slots:
        for origin, blocked in ((p, q), (q, p)):
            view = process.csit_view(origin, n, recorder=recorder)
            infos = reconstruct_side_info(plan, view, payload.dedicated[origin])
            info = next(s for s in infos if s.blocked_rx == blocked)
            side[(origin, blocked)] = info
        sent[n] = {p: np.array([side[(p, q)].value]),
                   q: np.array([side[(q, p)].value])}

    for n in sorted(sent):
        received[n] = {j: received_signal(process, sent[n], j, n) for j in range(1, K + 1)}

    audit = []
    for (origin, blocked), info in sorted(side.items()):
        slots = plan.phase_slots[origin - 1].slots
        m = assigned_slot_index(K, origin, blocked)
        rx_value = complex(received[slots[m - 1]][blocked][0] - received[slots[0]][blocked][0])
        audit.append({
            "origin_tx": origin, "blocked_rx": blocked,
            "tx_value": info.value, "rx_value": rx_value,
        })

    meta = {
        "K": K,
        "phase_slots": [list(ss.slots) for ss in plan.phase_slots],
        "final_slots": [[n, list(pair)] for n, pair in plan.final_slots],
        "side_info": audit,
    }
    all_slots = plan.all_slots()
    return Transcript(scheme="ria", slots=all_slots, sent=sent, received=received,
                      precoders=precoders, payload=payload, meta=meta)


def decode_ria_receiver(transcript: Transcript, process: ChannelProcess, receiver: int) -> DecodeReport:
    """Recover the 2K-1 symbols intended for one receiver.

    The receiver strips its own previously computed cancellation value from
    each pair slot it appears in (dividing by its direct channel), then solves
    the stacked (2K-1) x (2K-1) system.
    """
    K = transcript.meta["K"]
    if not 1 <= receiver <= K:
        raise IndexError(f"receiver must be in 1..{K}")
    payload: RiaPayload = transcript.payload
    phase_slots = [tuple(s) for s in transcript.meta["phase_slots"]]
    final_slots = {tuple(pair): n for n, pair in transcript.meta["final_slots"]}
    j = receiver
    mine = phase_slots[j - 1]
    t1 = mine[0]
    others = blocked_receivers(K, j)
    dim = 2 * K - 1

    def h(tx: int, rx: int, slot: int) -> complex:
        return complex(process.channel_at(tx, rx, slot)[0, 0])

    rows = np.zeros((dim, dim), dtype=complex)
    rhs = np.zeros(dim, dtype=complex)
    for m in range(1, K + 1):
        n = mine[m - 1]
        rows[m - 1, m - 1] = h(j, j, n)
        for idx, p in enumerate(others):
            if m == 1:
                rows[0, K + idx] = h(p, j, t1)
            else:
                r = others[m - 2]
                rows[m - 1, K + idx] = h(p, j, n) * (h(p, r, t1) / h(p, r, n))
        rhs[m - 1] = transcript.received[n][j][0]

    for idx, r in enumerate(others):
        pair = (min(j, r), max(j, r))
        n_f = final_slots[pair]
        # own cancellation value from phase r, recomputed from received signals
        theirs = phase_slots[r - 1]
        m_self = assigned_slot_index(K, r, j)
        known = transcript.received[theirs[m_self - 1]][j][0] - transcript.received[theirs[0]][j][0]
        recovered_side = (transcript.received[n_f][j][0] - h(r, j, n_f) * known) / h(j, j, n_f)
        m_r = assigned_slot_index(K, j, r)
        rows[K + idx, m_r - 1] = h(j, r, mine[m_r - 1])
        rows[K + idx, 0] = -h(j, r, t1)
        rhs[K + idx] = recovered_side

    rank = rank_tol(rows)
    truth = payload.receiver_truth(j, K)
    if rank < dim:
        return DecodeReport(receiver=j, effective_matrix=rows, rank=rank,
                            recovered=np.full(dim, np.nan, dtype=complex),
                            max_residual=float("inf"), success=False)
    recovered = solve_square(rows, rhs)
    return DecodeReport.from_solution(j, rows, rank, recovered, truth)
