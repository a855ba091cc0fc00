"""Run transcripts and decode reports shared by all three schemes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .precoding import Precoder

# Receivers declare a decode successful only below this recovery error.
DECODE_RESIDUAL_TOL = 1e-8


def fixed_float(x: float) -> float:
    """Fixed-precision float for byte-stable JSON output."""
    return float(f"{float(x):.12g}")


def complex_to_json(z: complex) -> list[float]:
    return [fixed_float(z.real), fixed_float(z.imag)]


def array_to_json(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        return [complex_to_json(z) for z in a]
    return [[complex_to_json(z) for z in row] for row in a]


def value_to_json(v):
    """Recursively convert arrays/complex/floats to JSON-able structures."""
    if isinstance(v, np.ndarray):
        return array_to_json(v)
    if isinstance(v, (complex, np.complexfloating)):
        return complex_to_json(complex(v))
    if isinstance(v, (float, np.floating)):
        return fixed_float(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, dict):
        return {str(k): value_to_json(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [value_to_json(x) for x in v]
    return v


@dataclass
class Transcript:
    """Everything one scheme run produced.

    ``sent`` and ``received`` map slot -> node index -> vector; ``precoders``
    keys are scheme-specific tuples (documented by each scheme module);
    ``payload`` is the scheme's ground-truth payload object and ``meta`` holds
    per-scheme labels (case, slot roles, side-information audit, ...).
    """

    scheme: str
    slots: tuple[int, ...]
    sent: dict[int, dict[int, np.ndarray]]
    received: dict[int, dict[int, np.ndarray]]
    precoders: dict[tuple, Precoder]
    payload: object
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        precoders = {
            "|".join(str(p) for p in key): array_to_json(pre.matrix)
            for key, pre in sorted(self.precoders.items())
        }
        meta = {k: value_to_json(v) for k, v in self.meta.items()}
        return {
            "scheme": self.scheme,
            "slots": list(self.slots),
            "sent": {str(n): {str(i): array_to_json(x) for i, x in sorted(by_tx.items())}
                     for n, by_tx in sorted(self.sent.items())},
            "received": {str(n): {str(j): array_to_json(y) for j, y in sorted(by_rx.items())}
                         for n, by_rx in sorted(self.received.items())},
            "precoders": precoders,
            "meta": meta,
        }


@dataclass
class DecodeReport:
    """Outcome of one receiver's decode: the stacked effective system, its
    numerical rank, the recovered symbols and the worst-case recovery error.
    """

    receiver: int
    effective_matrix: np.ndarray
    rank: int
    recovered: np.ndarray
    max_residual: float
    success: bool

    @classmethod
    def from_solution(cls, receiver: int, effective_matrix: np.ndarray, rank: int,
                      recovered: np.ndarray, truth: np.ndarray) -> "DecodeReport":
        recovered = np.asarray(recovered, dtype=complex).ravel()
        truth = np.asarray(truth, dtype=complex).ravel()
        residual = float(np.max(np.abs(recovered - truth))) if truth.size else 0.0
        success = rank == truth.size and residual <= DECODE_RESIDUAL_TOL
        return cls(receiver=receiver, effective_matrix=effective_matrix, rank=rank,
                   recovered=recovered, max_residual=residual, success=success)

    @property
    def num_symbols(self) -> int:
        return int(self.recovered.size)

    def to_json(self) -> dict:
        return {
            "receiver": self.receiver,
            "rank": self.rank,
            "num_symbols": self.num_symbols,
            "max_residual": fixed_float(self.max_residual),
            "success": bool(self.success),
            "effective_matrix": array_to_json(self.effective_matrix),
            "recovered": array_to_json(self.recovered),
        }
