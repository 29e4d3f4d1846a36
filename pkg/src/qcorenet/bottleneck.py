"""System size at which classical transmission outlasts the quantum stages of a teleportation."""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field
from typing import IO, Iterable

from .netsim import TimingParams, classical_latency, packet_size, teleport_stages

MAX_LOG2 = 128
WIDTH_RANGE = (1, 15)
FREQ_RANGE = (10e6, 1e9)


@dataclass(frozen=True)
class BottleneckQuery:
    link_width: int
    clock_freq: float
    delta_time: float = 1.0
    base: TimingParams = field(default_factory=TimingParams)

    def __post_init__(self):
        if not WIDTH_RANGE[0] <= self.link_width <= WIDTH_RANGE[1]:
            raise ValueError(f"link_width must be in {WIDTH_RANGE}")
        if not FREQ_RANGE[0] <= self.clock_freq <= FREQ_RANGE[1]:
            raise ValueError(f"clock_freq must be in [{FREQ_RANGE[0]:g}, {FREQ_RANGE[1]:g}] Hz")
        if self.delta_time < 1:
            raise ValueError("delta_time must be >= 1")

    @property
    def timing(self) -> TimingParams:
        return self.base.with_(link_width=self.link_width, clock_freq=self.clock_freq,
                               delta_time=self.delta_time)


def classical_dominates(q: BottleneckQuery, num_qubits: int) -> bool:
    p = q.timing
    st = teleport_stages(p, num_qubits)
    return classical_latency(packet_size(num_qubits), p) > st.quantum


def bottleneck_size(q: BottleneckQuery, max_log2: int = MAX_LOG2) -> int | None:
    """Smallest power-of-two qubit count where classical latency exceeds the
    summed entanglement, preprocessing and postprocessing times; None if none
    up to ``2**max_log2``."""
    for k in range(1, max_log2 + 1):
        if classical_dominates(q, 1 << k):
            return 1 << k
    return None


FREQ_SAMPLES = (10e6, 20e6, 50e6, 100e6, 200e6, 500e6, 1e9)
DELTA_SAMPLES = (1, 2, 5, 10, 20, 50, 100)


def sweep_bottleneck(widths: Iterable[int] = range(1, 16), freqs: Iterable[float] = FREQ_SAMPLES,
                     deltas: Iterable[float] = DELTA_SAMPLES,
                     base: TimingParams | None = None) -> list[dict]:
    base = base or TimingParams()
    rows = []
    for w, f, d in itertools.product(list(widths), list(freqs), list(deltas)):
        n = bottleneck_size(BottleneckQuery(int(w), float(f), float(d), base))
        rows.append({"width": int(w), "freq": float(f), "delta_time": float(d),
                     "qubits_log2": None if n is None else n.bit_length() - 1})
    return rows


def write_bottleneck_csv(fh: IO[str], rows: Iterable[dict]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["width", "freq", "delta_time", "qubits_log2"])
    for r in rows:
        w.writerow([r["width"], f"{r['freq']:g}", f"{r['delta_time']:g}",
                    "none" if r["qubits_log2"] is None else r["qubits_log2"]])
