"""Two-user MIMO X space-time interference alignment.

Both transmitters have A antennas, both receivers B.  Phase one sends the
symbol vectors uncoded (one slot per receiver); in phase two every transmitter
superposes both vectors behind precoders chosen so each receiver sees exactly
the interference shape it already observed in phase one and can subtract it.

Antenna cases:

* wide (B <= A): T = 2 + ceil((2A - B)/B) slots, cyclic zero-padded precoders.
* tall (A < B < 2A): each receiver switches off its last B - A antennas and the
  square A x A scheme runs in T = 3 slots.
* very tall (B >= 2A): a receiver already collects 2A independent equations in
  one use, so slots stay uncoded and alternate between the receivers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .channel import ChannelProcess, NetworkConfig, SlotSet, received_signal, schedule_slot_sets
from .dof import asymptotic_dof_t1
from .errors import ConfigurationError, SchedulingError
from .linalg import rank_tol, solve_consistent, solve_square
from .precoding import czp_precoder
from .records import DecodeReport, Transcript

WIDE = "wide"
TALL = "tall"
VERY_TALL = "very_tall"


@dataclass(frozen=True)
class Stia2Config:
    """Antenna classification and scheme length for the two-user MIMO X run."""

    A: int
    B: int
    case: str
    T: int
    eff_rx: int  # receive antennas actually used (tall case switches some off)


def scheme_length(A: int, B: int) -> int:
    """T_AB = 2 + ceil((2A - B)/B) for B <= 2A."""
    return 2 + -(-(2 * A - B) // B)


def stia_case(A: int, B: int) -> Stia2Config:
    """Classify an (A, B) antenna pair and fix the slot budget."""
    if A < 1 or B < 1:
        raise ConfigurationError(f"antenna counts must be >= 1, got A={A}, B={B}")
    if B >= 2 * A:
        return Stia2Config(A=A, B=B, case=VERY_TALL, T=1, eff_rx=B)
    if B > A:
        return Stia2Config(A=A, B=B, case=TALL, T=3, eff_rx=A)
    return Stia2Config(A=A, B=B, case=WIDE, T=scheme_length(A, B), eff_rx=B)


def plateau(config: Stia2Config) -> Fraction:
    """Symbols decoded per channel use for one slot set, exact."""
    if config.case == VERY_TALL:
        return Fraction(2 * config.A, 1)
    return Fraction(4 * config.A, config.T)


def filled_dof(config: Stia2Config, n_sets: int) -> Fraction:
    """Finite-horizon rate over ``n_sets`` slot sets with the leftover slots
    served by time division; approaches the plateau as n_sets grows."""
    return asymptotic_dof_t1(config.A, config.B, n_sets)


def stia2_network(A: int, B: int, coherence: int | None = None, feedback_delay: int = 2,
                  seed: int = 0, magnitude_bounds=None) -> NetworkConfig:
    """Network config for this scheme; default T_c equals the scheme length."""
    cfg = stia_case(A, B)
    if coherence is None:
        coherence = max(cfg.T, feedback_delay + 1)
    kwargs = {}
    if magnitude_bounds is not None:
        kwargs["magnitude_bounds"] = magnitude_bounds
    return NetworkConfig(num_tx=2, num_rx=2, tx_antennas=A, rx_antennas=B,
                         coherence=coherence, feedback_delay=feedback_delay, seed=seed, **kwargs)


def schedule(config: Stia2Config, network: NetworkConfig, n_sets: int = 1, batch: int = 0) -> list[SlotSet]:
    """Slot sets for this scheme over the given network."""
    phase_one = config.T if config.case == VERY_TALL else 2
    return schedule_slot_sets(network.coherence, network.feedback_delay, config.T,
                              n_sets=n_sets, phase_one_len=phase_one, batch=batch)


@dataclass
class Stia2Payload:
    """Ground truth: u vectors are receiver 1's symbols, v vectors receiver 2's."""

    u1: np.ndarray
    u2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray

    @classmethod
    def random(cls, A: int, rng: np.random.Generator) -> "Stia2Payload":
        draw = lambda: rng.standard_normal(A) + 1j * rng.standard_normal(A)
        return cls(u1=draw(), u2=draw(), v1=draw(), v2=draw())


def _check_network(config: Stia2Config, process: ChannelProcess) -> None:
    net = process.config
    if net.num_tx != 2 or net.num_rx != 2:
        raise ConfigurationError("two-user scheme needs a 2x2 network")
    if net.tx_antennas != (config.A, config.A) or net.rx_antennas != (config.B, config.B):
        raise ConfigurationError(
            f"network antennas {net.tx_antennas}/{net.rx_antennas} do not match "
            f"scheme A={config.A}, B={config.B}"
        )


def run_stia_two_user(config: Stia2Config, process: ChannelProcess, slot_set: SlotSet,
                      payload: Stia2Payload, recorder: list | None = None) -> Transcript:
    """Execute one slot set of the scheme; encoders touch CSI only via views.

    Precoder keys in the transcript are ``(slot, tx, j)`` where j = 1 precodes
    the u vector (aligned at receiver 2) and j = 2 the v vector (aligned at
    receiver 1).
    """
    _check_network(config, process)
    t = slot_set.slots
    if len(t) != config.T and config.case != VERY_TALL:
        raise SchedulingError(f"scheme needs {config.T} slots, slot set has {len(t)}")

    sent: dict[int, dict[int, np.ndarray]] = {}
    received: dict[int, dict[int, np.ndarray]] = {}
    precoders: dict[tuple, object] = {}
    meta: dict = {"case": config.case, "eff_rx": config.eff_rx, "A": config.A, "B": config.B}

    if config.case == VERY_TALL:
        if slot_set.phase_one_len != len(t):
            raise SchedulingError("very-tall slots are all uncoded (phase_one_len == T)")
        targets = {}
        for idx, n in enumerate(t):
            target = 1 if idx % 2 == 0 else 2
            targets[n] = target
            if target == 1:
                sent[n] = {1: payload.u1.copy(), 2: payload.u2.copy()}
            else:
                sent[n] = {1: payload.v1.copy(), 2: payload.v2.copy()}
        meta["slot_targets"] = targets
    else:
        if slot_set.phase_one_len != 2:
            raise SchedulingError("two-user scheme needs phase_one_len == 2")
        t1, t2 = t[0], t[1]
        sent[t1] = {1: payload.u1.copy(), 2: payload.u2.copy()}
        sent[t2] = {1: payload.v1.copy(), 2: payload.v2.copy()}
        eff = config.eff_rx
        for n in t[2:]:
            if not process.has_current_csit(n):
                raise SchedulingError(f"phase-two slot {n} has no current CSIT")
            sent[n] = {}
            for i in (1, 2):
                view = process.csit_view(i, n, recorder=recorder)
                # v interference must replay slot t2's shape at receiver 1...
                v2 = czp_precoder(view.current(1)[:eff, :], view.channel(1, t2)[:eff, :],
                                  source_slots=(t2, n))
                # ...and u interference slot t1's shape at receiver 2.
                v1 = czp_precoder(view.current(2)[:eff, :], view.channel(2, t1)[:eff, :],
                                  source_slots=(t1, n))
                precoders[(n, i, 1)] = v1
                precoders[(n, i, 2)] = v2
                u_i = payload.u1 if i == 1 else payload.u2
                v_i = payload.v1 if i == 1 else payload.v2
                sent[n][i] = v1.matrix @ u_i + v2.matrix @ v_i

    for n in t:
        received[n] = {j: received_signal(process, sent[n], j, n, rx_antennas=config.eff_rx)
                       for j in (1, 2)}

    return Transcript(scheme="stia2", slots=tuple(t), sent=sent, received=received,
                      precoders=precoders, payload=payload, meta=meta)


def decode_stia_receiver(transcript: Transcript, process: ChannelProcess, receiver: int) -> DecodeReport:
    """Stack the receiver's interference-cancelled equations and solve them.

    Receiver 1 keeps Y(t1) and subtracts Y(t2) from every phase-two slot;
    receiver 2 does the mirror image.  Rank deficiency is recorded in the
    report, never raised.
    """
    if receiver not in (1, 2):
        raise IndexError(f"receiver must be 1 or 2, got {receiver}")
    payload: Stia2Payload = transcript.payload
    t = transcript.slots
    eff = transcript.meta["eff_rx"]
    A = transcript.meta["A"]

    if transcript.meta["case"] == VERY_TALL:
        return _decode_very_tall(transcript, process, receiver)

    if receiver == 1:
        anchor_keep, anchor_sub = t[0], t[1]
        truth = np.concatenate([payload.u1, payload.u2])
    else:
        anchor_keep, anchor_sub = t[1], t[0]
        truth = np.concatenate([payload.v1, payload.v2])

    rows = [np.hstack([process.channel_at(1, receiver, anchor_keep)[:eff, :],
                       process.channel_at(2, receiver, anchor_keep)[:eff, :]])]
    rhs = [transcript.received[anchor_keep][receiver]]
    for n in t[2:]:
        blocks = []
        for i in (1, 2):
            pre = transcript.precoders[(n, i, receiver)]
            blocks.append(process.channel_at(i, receiver, n)[:eff, :] @ pre.matrix)
        rows.append(np.hstack(blocks))
        rhs.append(transcript.received[n][receiver] - transcript.received[anchor_sub][receiver])

    effective = np.vstack(rows)
    stacked = np.concatenate(rhs)
    rank = rank_tol(effective)
    if rank < 2 * A:
        recovered = np.full(2 * A, np.nan, dtype=complex)
        report = DecodeReport(receiver=receiver, effective_matrix=effective, rank=rank,
                              recovered=recovered, max_residual=float("inf"), success=False)
        return report
    recovered = solve_consistent(effective, stacked)
    return DecodeReport.from_solution(receiver, effective, rank, recovered, truth)


def _decode_very_tall(transcript: Transcript, process: ChannelProcess, receiver: int) -> DecodeReport:
    payload: Stia2Payload = transcript.payload
    A = transcript.meta["A"]
    targets = transcript.meta["slot_targets"]
    mine = [n for n in transcript.slots if targets[n] == receiver]
    if not mine:
        return DecodeReport(receiver=receiver, effective_matrix=np.zeros((0, 0), dtype=complex),
                            rank=0, recovered=np.zeros(0, dtype=complex), max_residual=0.0,
                            success=True)
    n = mine[0]
    # B >= 2A: the first 2A receive antennas already give a square system.
    effective = np.hstack([process.channel_at(1, receiver, n)[: 2 * A, :],
                           process.channel_at(2, receiver, n)[: 2 * A, :]])
    rhs = transcript.received[n][receiver][: 2 * A]
    rank = rank_tol(effective)
    if receiver == 1:
        truth = np.concatenate([payload.u1, payload.u2])
    else:
        truth = np.concatenate([payload.v1, payload.v2])
    if rank < 2 * A:
        return DecodeReport(receiver=receiver, effective_matrix=effective, rank=rank,
                            recovered=np.full(2 * A, np.nan, dtype=complex),
                            max_residual=float("inf"), success=False)
    recovered = solve_square(effective, rhs)
    return DecodeReport.from_solution(receiver, effective, rank, recovered, truth)


def alignment_gap(transcript: Transcript, process: ChannelProcess, receiver: int) -> float:
    """Worst relative mismatch between a phase-two slot's interference and the
    phase-one shape it must replay (0 for a perfectly aligned run)."""
    if transcript.meta["case"] == VERY_TALL:
        return 0.0
    payload: Stia2Payload = transcript.payload
    t = transcript.slots
    eff = transcript.meta["eff_rx"]
    other = 2 if receiver == 1 else 1
    anchor = t[1] if receiver == 1 else t[0]
    if receiver == 1:
        vecs = {1: payload.v1, 2: payload.v2}
    else:
        vecs = {1: payload.u1, 2: payload.u2}
    ref = sum(process.channel_at(i, receiver, anchor)[:eff, :] @ vecs[i] for i in (1, 2))
    worst = 0.0
    for n in t[2:]:
        seen = sum(
            process.channel_at(i, receiver, n)[:eff, :]
            @ transcript.precoders[(n, i, other)].matrix @ vecs[i]
            for i in (1, 2)
        )
        denom = np.linalg.norm(ref)
        gap = np.linalg.norm(seen - ref) / denom if denom > 0 else np.linalg.norm(seen - ref)
        worst = max(worst, float(gap))
    return worst
