"""Ideal block-fading channel process, local delayed-CSIT views, slot scheduling.

The channel stays constant over coherence blocks of ``T_c`` slots and redraws
independently between blocks.  Receivers feed CSI back over error-free links
with a delay of ``T_fb < T_c`` slots, so for the tail of every block each
transmitter can read the *current* channel out of its delayed feedback.
Transmitters only ever see their own outgoing channels (local CSIT); that
restriction is enforced structurally by :class:`CsitView`.

Slot indices are 1-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConfigurationError, DegenerateChannelError, NotReadyError, SchedulingError

DEFAULT_MAGNITUDE_BOUNDS = (0.1, 10.0)


def _as_antenna_tuple(value, count: int, label: str) -> tuple[int, ...]:
    if isinstance(value, (int, np.integer)):
        value = (int(value),) * count
    out = tuple(int(v) for v in value)
    if len(out) != count:
        raise ConfigurationError(f"{label} must have {count} entries, got {len(out)}")
    if any(v < 1 for v in out):
        raise ConfigurationError(f"{label} must all be >= 1, got {out}")
    return out


@dataclass(frozen=True)
class NetworkConfig:
    """Static description of one M x N X-network simulation.

    ``tx_antennas`` / ``rx_antennas`` accept a single int (uniform antennas)
    or one count per node.  ``feedback_delay`` must be smaller than
    ``coherence`` and every channel magnitude is kept inside
    ``magnitude_bounds`` (nonzero minimum, finite maximum).
    """

    num_tx: int
    num_rx: int
    tx_antennas: tuple[int, ...]
    rx_antennas: tuple[int, ...]
    coherence: int
    feedback_delay: int
    magnitude_bounds: tuple[float, float] = DEFAULT_MAGNITUDE_BOUNDS
    seed: int = 0

    def __post_init__(self):
        if self.num_tx < 1 or self.num_rx < 1:
            raise ConfigurationError("need at least one transmitter and one receiver")
        object.__setattr__(
            self, "tx_antennas", _as_antenna_tuple(self.tx_antennas, self.num_tx, "tx_antennas")
        )
        object.__setattr__(
            self, "rx_antennas", _as_antenna_tuple(self.rx_antennas, self.num_rx, "rx_antennas")
        )
        if self.coherence < 1:
            raise ConfigurationError(f"coherence must be >= 1, got {self.coherence}")
        if not 0 <= self.feedback_delay < self.coherence:
            raise ConfigurationError(
                f"feedback delay must satisfy 0 <= T_fb < T_c, got "
                f"T_fb={self.feedback_delay}, T_c={self.coherence}"
            )
        lo, hi = self.magnitude_bounds
        if not (0.0 < lo < hi < np.inf):
            raise ConfigurationError(f"magnitude bounds must be 0 < min < max < inf, got {self.magnitude_bounds}")
        object.__setattr__(self, "magnitude_bounds", (float(lo), float(hi)))
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError("seed must be a non-negative 64-bit integer")

    @property
    def normalized_delay(self) -> Fraction:
        """lambda = T_fb / T_c as an exact rational."""
        return Fraction(self.feedback_delay, self.coherence)


def derive_seed(base_seed: int, stream: int) -> int:
    """Deterministic 64-bit seed for an independent stream (e.g. trial index)."""
    ss = np.random.SeedSequence(entropy=int(base_seed), spawn_key=(int(stream),))
    return int(ss.generate_state(1, np.uint64)[0])


def _bounded_complex(rng: np.random.Generator, shape, lo: float, hi: float) -> np.ndarray:
    """i.i.d. complex Gaussian entries (unit variance per real part),
    rejection-sampled until every magnitude lies in [lo, hi]."""
    h = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    mag = np.abs(h)
    bad = (mag < lo) | (mag > hi)
    while np.any(bad):
        k = int(bad.sum())
        repl = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        h[bad] = repl
        mag = np.abs(h)
        bad = (mag < lo) | (mag > hi)
    return h


class ChannelProcess:
    """One realization of the block-fading process for a :class:`NetworkConfig`.

    Blocks are materialized lazily; each block's matrices come from an RNG
    derived from ``(config.seed, block_index)``, so contents do not depend on
    access order and two processes with equal configs are bit-identical.
    The returned matrices are read-only.
    """

    def __init__(self, config: NetworkConfig, num_blocks: int = 0):
        self.config = config
        self._blocks: dict[int, dict[tuple[int, int], np.ndarray]] = {}
        for b in range(num_blocks):
            self._block(b)

    # -- block bookkeeping -------------------------------------------------

    def block_of(self, slot: int) -> int:
        """0-based coherence-block index of a 1-based slot."""
        if slot < 1:
            raise ValueError(f"slots are 1-based, got {slot}")
        return (slot - 1) // self.config.coherence

    @property
    def num_blocks(self) -> int:
        return len(self._blocks)

    def _block(self, index: int) -> dict[tuple[int, int], np.ndarray]:
        blk = self._blocks.get(index)
        if blk is None:
            cfg = self.config
            rng = np.random.default_rng([cfg.seed, index])
            lo, hi = cfg.magnitude_bounds
            blk = {}
            for i in range(1, cfg.num_tx + 1):
                for j in range(1, cfg.num_rx + 1):
                    shape = (cfg.rx_antennas[j - 1], cfg.tx_antennas[i - 1])
                    mat = _bounded_complex(rng, shape, lo, hi)
                    mat.setflags(write=False)
                    blk[(i, j)] = mat
            self._blocks[index] = blk
        return blk

    # -- queries -----------------------------------------------------------

    def channel_at(self, tx: int, rx: int, slot: int) -> np.ndarray:
        """Channel matrix H^[rx,tx](slot), shape (B_rx, A_tx); block-constant."""
        cfg = self.config
        if not 1 <= tx <= cfg.num_tx:
            raise IndexError(f"tx index {tx} outside 1..{cfg.num_tx}")
        if not 1 <= rx <= cfg.num_rx:
            raise IndexError(f"rx index {rx} outside 1..{cfg.num_rx}")
        return self._block(self.block_of(slot))[(tx, rx)]

    def has_current_csit(self, slot: int) -> bool:
        """True iff the CSI fed back ``T_fb`` slots ago belongs to this slot's
        block, i.e. H(slot) == H(slot - T_fb)."""
        if slot < 1:
            raise ValueError(f"slots are 1-based, got {slot}")
        return (slot - 1) % self.config.coherence >= self.config.feedback_delay

    def csit_view(self, tx: int, slot: int, recorder: list | None = None) -> "CsitView":
        """Local delayed-CSI window of transmitter ``tx`` at time ``slot``."""
        return CsitView(self, tx, slot, recorder=recorder)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        """Snapshot of config plus all materialized blocks ([re, im] pairs)."""
        cfg = self.config
        blocks = {}
        for b in sorted(self._blocks):
            for (i, j), mat in self._blocks[b].items():
                key = f"{b}:{i}:{j}"
                blocks[key] = [[[float(z.real), float(z.imag)] for z in row] for row in mat]
        return {
            "config": {
                "num_tx": cfg.num_tx,
                "num_rx": cfg.num_rx,
                "tx_antennas": list(cfg.tx_antennas),
                "rx_antennas": list(cfg.rx_antennas),
                "coherence": cfg.coherence,
                "feedback_delay": cfg.feedback_delay,
                "magnitude_bounds": list(cfg.magnitude_bounds),
                "seed": cfg.seed,
            },
            "blocks": blocks,
        }


def process_from_json(doc: dict) -> ChannelProcess:
    """Rebuild a process from :meth:`ChannelProcess.to_json` output."""
    c = doc["config"]
    cfg = NetworkConfig(
        num_tx=c["num_tx"],
        num_rx=c["num_rx"],
        tx_antennas=tuple(c["tx_antennas"]),
        rx_antennas=tuple(c["rx_antennas"]),
        coherence=c["coherence"],
        feedback_delay=c["feedback_delay"],
        magnitude_bounds=tuple(c["magnitude_bounds"]),
        seed=c["seed"],
    )
    proc = ChannelProcess(cfg)
    for key, rows in doc["blocks"].items():
        b, i, j = (int(p) for p in key.split(":"))
        mat = np.array([[complex(re, im) for re, im in row] for row in rows])
        mat.setflags(write=False)
        proc._blocks.setdefault(b, {})[(i, j)] = mat
    return proc


def sample_network(config: NetworkConfig, num_blocks: int = 0) -> ChannelProcess:
    """Draw a fresh block-fading realization; deterministic given config.seed.

    ``num_blocks`` pre-materializes that many blocks (workers sharing the
    process read-only should pre-materialize everything they will touch);
    further blocks are filled in lazily on access.
    """
    return ChannelProcess(config, num_blocks=num_blocks)


@dataclass(frozen=True)
class CsitAccess:
    """One CSI read served by a view (for locality / feedback-volume audits)."""

    tx: int
    rx: int
    slot: int
    kind: str  # "matrix", "current" or "ratio"
    now: int


class CsitView:
    """What transmitter ``tx`` knows at time ``now``: its own outgoing channels
    H^[j,tx](m) for every receiver j and every slot m <= now - T_fb.

    Scheme encoders are written against this interface only, which makes CSIT
    locality structural: there is no way to reach another transmitter's
    channels through a view.  An optional ``recorder`` list collects every
    served read as a :class:`CsitAccess`.
    """

    def __init__(self, process: ChannelProcess, tx: int, now: int, recorder: list | None = None):
        if not 1 <= tx <= process.config.num_tx:
            raise IndexError(f"tx index {tx} outside 1..{process.config.num_tx}")
        if now < 1:
            raise ValueError(f"slots are 1-based, got {now}")
        self._process = process
        self.tx = tx
        self.now = now
        self._recorder = recorder

    @property
    def horizon(self) -> int:
        """Newest slot whose CSI has arrived (0 means the view is empty)."""
        return max(self.now - self._process.config.feedback_delay, 0)

    def available_slots(self) -> range:
        return range(1, self.horizon + 1)

    def _record(self, rx: int, slot: int, kind: str) -> None:
        if self._recorder is not None:
            self._recorder.append(CsitAccess(self.tx, rx, slot, kind, self.now))

    def channel(self, rx: int, slot: int) -> np.ndarray:
        """Delayed CSI H^[rx,tx](slot); only slots up to now - T_fb are served."""
        if not 1 <= slot <= self.horizon:
            raise NotReadyError(
                f"tx {self.tx} at slot {self.now} has CSI only for slots 1..{self.horizon}, "
                f"requested {slot}"
            )
        self._record(rx, slot, "matrix")
        return self._process.channel_at(self.tx, rx, slot)

    def current(self, rx: int) -> np.ndarray:
        """Current CSI H^[rx,tx](now), recovered from delayed feedback.

        Only valid when the slot fed back T_fb ago lies in the same coherence
        block, i.e. ``has_current_csit(now)``.
        """
        if not self._process.has_current_csit(self.now):
            raise NotReadyError(f"slot {self.now} has no current CSIT (delayed-only slot)")
        self._record(rx, self.now, "current")
        return self._process.channel_at(self.tx, rx, self.now - self._process.config.feedback_delay)

    def ratio(self, rx: int, target_slot: int, row: int = 0, col: int = 0) -> complex:
        """One fed-back complex value: h^[rx,tx](target_slot) / h^[rx,tx](now).

        This is the only CSI the retrospective SISO scheme ever asks for
        (the ratio itself, not raw matrices); it counts as a single access.
        """
        if not 1 <= target_slot <= self.horizon:
            raise NotReadyError(
                f"tx {self.tx} at slot {self.now} cannot form a ratio against slot {target_slot}"
            )
        if not self._process.has_current_csit(self.now):
            raise NotReadyError(f"slot {self.now} has no current CSIT (delayed-only slot)")
        num = self._process.channel_at(self.tx, rx, target_slot)[row, col]
        den = self._process.channel_at(self.tx, rx, self.now - self._process.config.feedback_delay)[row, col]
        # sampled coefficients always respect the bound; this guards processes
        # rebuilt from external snapshots
        if abs(den) < self._process.config.magnitude_bounds[0]:
            raise DegenerateChannelError(f"current coefficient magnitude {abs(den):.3e} below bound")
        self._record(rx, target_slot, "ratio")
        return complex(num / den)


@dataclass(frozen=True)
class SlotSet:
    """Ordered slots t_1..t_T consumed by one scheme run.

    The first ``phase_one_len`` slots carry uncoded transmissions (no CSIT
    needed); every later slot must have current CSIT available.  All slots of
    a set lie in pairwise-distinct coherence blocks.
    """

    slots: tuple[int, ...]
    phase_one_len: int
    coherence: int

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(int(s) for s in self.slots))
        if any(s < 1 for s in self.slots):
            raise SchedulingError(f"slots are 1-based, got {self.slots}")
        if not 0 <= self.phase_one_len <= len(self.slots):
            raise SchedulingError("phase_one_len outside 0..T")
        if len(set(self.blocks)) != len(self.slots):
            raise SchedulingError(f"slot set {self.slots} reuses a coherence block")

    @property
    def scheme_length(self) -> int:
        return len(self.slots)

    @property
    def blocks(self) -> tuple[int, ...]:
        return tuple((s - 1) // self.coherence for s in self.slots)


def schedule_slot_sets(
    coherence: int,
    feedback_delay: int,
    scheme_length: int,
    n_sets: int = 1,
    phase_one_len: int = 2,
    batch: int = 0,
) -> list[SlotSet]:
    """Stagger ``n_sets`` interleaved slot sets over ``scheme_length`` blocks.

    Set l uses t_{l,k} = (k-1)*T_c + l for the first ``phase_one_len`` slots and
    t_{l,k} = (k-1)*T_c + T_fb + l afterwards, which puts every slot of a set in
    its own block and gives every post-phase-one slot current CSIT.  At most
    ``T_c - T_fb`` sets fit in one batch; pass ``batch`` >= 1 to lay out further
    sets over the next ``scheme_length`` fresh blocks.
    """
    if feedback_delay >= coherence:
        raise SchedulingError(f"need T_fb < T_c, got T_fb={feedback_delay}, T_c={coherence}")
    if scheme_length < 1 or n_sets < 1:
        raise SchedulingError("scheme_length and n_sets must be >= 1")
    if phase_one_len > scheme_length:
        raise SchedulingError("phase_one_len exceeds scheme length")
    capacity = coherence - feedback_delay
    if n_sets > capacity:
        raise SchedulingError(
            f"{n_sets} sets do not fit in one batch (T_c - T_fb = {capacity}); "
            "schedule the rest with batch >= 1"
        )
    offset = batch * scheme_length * coherence
    sets = []
    for l in range(1, n_sets + 1):
        slots = []
        for k in range(1, scheme_length + 1):
            t = (k - 1) * coherence + l
            if k > phase_one_len:
                t += feedback_delay
            slots.append(t + offset)
        sets.append(SlotSet(slots=tuple(slots), phase_one_len=phase_one_len, coherence=coherence))
    return sets


def received_signal(process: ChannelProcess, sent: dict[int, np.ndarray], rx: int, slot: int,
                    rx_antennas: int | None = None) -> np.ndarray:
    """Noiseless superposition sum_i H^[rx,i](slot) x_i at receiver ``rx``.

    ``sent`` maps transmitter index -> transmitted vector for this slot.
    ``rx_antennas`` truncates to the first rows (receive-antenna switch-off).
    """
    cfg = process.config
    rows = cfg.rx_antennas[rx - 1] if rx_antennas is None else rx_antennas
    y = np.zeros(rows, dtype=complex)
    for i, x in sent.items():
        h = process.channel_at(i, rx, slot)[:rows, :]
        y += h @ np.asarray(x, dtype=complex)
    return y
