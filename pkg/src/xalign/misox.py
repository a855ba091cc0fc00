"""M x N user MISO X space-time interference alignment.

Each of the M transmitters carries A = N - 1 antennas, each of the N >= 3
receivers a single one.  Slot t1 sends the plain superposition of all message
vectors; every later slot resends it behind precoders V_k built so that all
receivers except the intended one see exactly the channel rows they saw at t1.
Subtracting y(t1) then hands every receiver M(N-1) clean equations in its own
MA symbols over T = M(N-1) + 1 channel uses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .channel import ChannelProcess, NetworkConfig, SlotSet, received_signal, schedule_slot_sets
from .dof import asymptotic_dof_t3
from .errors import ConfigurationError, SchedulingError, UnsupportedCaseError
from .linalg import rank_tol, solve_square
from .precoding import misox_precoder
from .records import DecodeReport, Transcript


@dataclass(frozen=True)
class MisoxConfig:
    M: int
    N: int

    def __post_init__(self):
        if self.N < 3:
            raise UnsupportedCaseError(
                f"MISO X scheme needs N >= 3 receivers (got N={self.N}); "
                "two receivers route to the two-user scheme"
            )
        if self.M < 1:
            raise ConfigurationError(f"need M >= 1 transmitters, got {self.M}")

    @property
    def A(self) -> int:
        return self.N - 1

    @property
    def T(self) -> int:
        return self.M * (self.N - 1) + 1


def plateau(config: MisoxConfig) -> Fraction:
    return Fraction(config.M * config.N * (config.N - 1), config.T)


def filled_dof(config: MisoxConfig, n_sets: int) -> Fraction:
    """Finite-horizon rate over ``n_sets`` slot sets when the leftover
    T(T-1) slots fall back to one symbol per use; approaches the plateau."""
    return asymptotic_dof_t3(config.M, config.N, n_sets)


def misox_network(config: MisoxConfig, coherence: int | None = None, feedback_delay: int = 2,
                  seed: int = 0, magnitude_bounds=None) -> NetworkConfig:
    """Network for the scheme; default coherence is the scheme length itself."""
    if coherence is None:
        coherence = config.T
    kwargs = {}
    if magnitude_bounds is not None:
        kwargs["magnitude_bounds"] = magnitude_bounds
    return NetworkConfig(num_tx=config.M, num_rx=config.N, tx_antennas=config.A, rx_antennas=1,
                         coherence=coherence, feedback_delay=feedback_delay, seed=seed, **kwargs)


def schedule(config: MisoxConfig, network: NetworkConfig, n_sets: int = 1, batch: int = 0) -> list[SlotSet]:
    return schedule_slot_sets(network.coherence, network.feedback_delay, config.T,
                              n_sets=n_sets, phase_one_len=1, batch=batch)


@dataclass
class MisoxPayload:
    """``vectors[(j, i)]`` is the A-symbol message from transmitter i to receiver j."""

    vectors: dict[tuple[int, int], np.ndarray]

    @classmethod
    def random(cls, config: MisoxConfig, rng: np.random.Generator) -> "MisoxPayload":
        vecs = {}
        for j in range(1, config.N + 1):
            for i in range(1, config.M + 1):
                vecs[(j, i)] = rng.standard_normal(config.A) + 1j * rng.standard_normal(config.A)
        return cls(vectors=vecs)

    def receiver_truth(self, j: int, M: int) -> np.ndarray:
        return np.concatenate([self.vectors[(j, i)] for i in range(1, M + 1)])


def run_misox(config: MisoxConfig, process: ChannelProcess, slot_set: SlotSet,
              payload: MisoxPayload, recorder: list | None = None) -> Transcript:
    """Execute one slot set.  Precoder keys are ``(slot, tx, k)`` where k is
    the receiver whose message the precoder carries (the one excluded from the
    alignment stack)."""
    net = process.config
    if net.num_tx != config.M or net.num_rx != config.N:
        raise ConfigurationError(f"network is {net.num_tx}x{net.num_rx}, scheme wants {config.M}x{config.N}")
    if net.tx_antennas != (config.A,) * config.M or net.rx_antennas != (1,) * config.N:
        raise ConfigurationError(f"scheme needs {config.A} tx antennas and single-antenna receivers")
    t = slot_set.slots
    if len(t) != config.T or slot_set.phase_one_len != 1:
        raise SchedulingError(f"scheme needs {config.T} slots with phase_one_len=1")

    t1 = t[0]
    sent: dict[int, dict[int, np.ndarray]] = {}
    precoders: dict[tuple, object] = {}
    sent[t1] = {i: sum(payload.vectors[(j, i)] for j in range(1, config.N + 1))
                for i in range(1, config.M + 1)}
    for n in t[1:]:
        if not process.has_current_csit(n):
            raise SchedulingError(f"alignment slot {n} has no current CSIT")
        sent[n] = {}
        for i in range(1, config.M + 1):
            view = process.csit_view(i, n, recorder=recorder)
            x = np.zeros(config.A, dtype=complex)
            for k in range(1, config.N + 1):
                rows_now = [view.current(j) for j in range(1, config.N + 1) if j != k]
                rows_t1 = [view.channel(j, t1) for j in range(1, config.N + 1) if j != k]
                pre = misox_precoder(rows_now, rows_t1, source_slots=(t1, n))
                precoders[(n, i, k)] = pre
                x += pre.matrix @ payload.vectors[(k, i)]
            sent[n][i] = x

    received = {n: {j: received_signal(process, sent[n], j, n) for j in range(1, config.N + 1)}
                for n in t}
    meta = {"M": config.M, "N": config.N, "A": config.A}
    return Transcript(scheme="misox", slots=tuple(t), sent=sent, received=received,
                      precoders=precoders, payload=payload, meta=meta)


def decode_misox_receiver(transcript: Transcript, process: ChannelProcess, receiver: int) -> DecodeReport:
    """Subtract y(t1) from every alignment slot and solve the MA x MA system."""
    M = transcript.meta["M"]
    N = transcript.meta["N"]
    A = transcript.meta["A"]
    if not 1 <= receiver <= N:
        raise IndexError(f"receiver must be in 1..{N}")
    payload: MisoxPayload = transcript.payload
    t = transcript.slots
    t1 = t[0]
    j = receiver

    rows = []
    rhs = []
    for n in t[1:]:
        blocks = []
        for i in range(1, M + 1):
            h_n = process.channel_at(i, j, n)
            h_1 = process.channel_at(i, j, t1)
            pre = transcript.precoders[(n, i, j)]
            blocks.append(h_n @ pre.matrix - h_1)
        rows.append(np.hstack(blocks))
        rhs.append(transcript.received[n][j][0] - transcript.received[t1][j][0])

    effective = np.vstack(rows)
    rank = rank_tol(effective)
    truth = payload.receiver_truth(j, M)
    if rank < M * A:
        return DecodeReport(receiver=j, effective_matrix=effective, rank=rank,
                            recovered=np.full(M * A, np.nan, dtype=complex),
                            max_residual=float("inf"), success=False)
    recovered = solve_square(effective, np.asarray(rhs, dtype=complex))
    return DecodeReport.from_solution(j, effective, rank, recovered, truth)


def interference_gap(transcript: Transcript, process: ChannelProcess, receiver: int) -> float:
    """Worst relative mismatch between a slot's undesired part and slot t1's."""
    M = transcript.meta["M"]
    N = transcript.meta["N"]
    payload: MisoxPayload = transcript.payload
    t = transcript.slots
    t1 = t[0]
    j = receiver

    def undesired(n: int, with_precoding: bool) -> complex:
        total = 0j
        for i in range(1, M + 1):
            h = process.channel_at(i, j, n)
            for k in range(1, N + 1):
                if k == j:
                    continue
                s = payload.vectors[(k, i)]
                if with_precoding:
                    s = transcript.precoders[(n, i, k)].matrix @ s
                total += complex((h @ s)[0])
        return total

    ref = undesired(t1, with_precoding=False)
    worst = 0.0
    for n in t[1:]:
        gap = abs(undesired(n, with_precoding=True) - ref) / max(abs(ref), 1e-300)
        worst = max(worst, float(gap))
    return worst
