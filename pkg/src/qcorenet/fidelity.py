"""Analytic fidelity: coherence decay over the makespan times per-operation survival.

The operational term is a product of per-operation survival probabilities
``(1 - e)^count`` over the four operation classes. It is a first-order
stand-in for a full depolarizing-channel model.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

from .circuit import Circuit, op_counts
from .netsim import ScheduleResult, TimingParams


@dataclass(frozen=True)
class NoiseParams:
    """Effective error rates; ``delta_improv`` records the improvement already applied."""

    e_1q: float = 7.42e-5
    e_2q: float = 7e-4
    e_meas: float = 1.67e-4
    e_epr: float = 9e-3
    T1: float = 1.2e6  # ns
    T2: float = 1.16e6  # ns
    delta_improv: float = 1.0

    def __post_init__(self):
        for name in ("e_1q", "e_2q", "e_meas", "e_epr"):
            if not 0 <= getattr(self, name) < 1:
                raise ValueError(f"{name} must be in [0, 1)")
        if self.T1 <= 0 or self.T2 <= 0:
            raise ValueError("T1 and T2 must be positive")
        if self.delta_improv < 1:
            raise ValueError("delta_improv must be >= 1")


@dataclass(frozen=True)
class OpCounts:
    single: int = 0
    two: int = 0
    measure: int = 0
    epr: int = 0

    def __add__(self, other: "OpCounts") -> "OpCounts":
        return OpCounts(self.single + other.single, self.two + other.two,
                        self.measure + other.measure, self.epr + other.epr)

    def scale(self, k: int) -> "OpCounts":
        return OpCounts(self.single * k, self.two * k, self.measure * k, self.epr * k)


# One teleportation: EPR pair, CNOT + H, two measurements, conditional X and Z,
# and a 3-CNOT SWAP out of the buffer qubit.
TELEPORT_OPS = OpCounts(single=3, two=4, measure=2, epr=1)


def circuit_counts(c: Circuit) -> OpCounts:
    d = op_counts(c.gates)
    return OpCounts(d["single"], d["two"], d["measure"], 0)


def teleport_counts(hops: int) -> OpCounts:
    return TELEPORT_OPS.scale(hops)


@dataclass(frozen=True)
class FidelityReport:
    coherence: float
    operational: float
    overall: float
    makespan_ns: float
    counts: OpCounts

    def to_dict(self) -> dict:
        d = asdict(self)
        d["counts"] = asdict(self.counts)
        return d


def coherence(t: float, T1: float, T2: float) -> float:
    if t < 0:
        raise ValueError("t must be non-negative")
    return math.exp(-t / T1) * (0.5 * math.exp(-t / T2) + 0.5)


def operational_fidelity(counts: OpCounts, noise: NoiseParams) -> float:
    # log1p keeps precision for long products of near-one factors
    log_f = (counts.single * math.log1p(-noise.e_1q)
             + counts.two * math.log1p(-noise.e_2q)
             + counts.measure * math.log1p(-noise.e_meas)
             + counts.epr * math.log1p(-noise.e_epr))
    return math.exp(log_f)


def apply_improvement(p: TimingParams, noise: NoiseParams, delta: float
                      ) -> tuple[TimingParams, NoiseParams]:
    """Divide gate, measurement and EPR durations and error rates by ``delta``."""
    if delta < 1:
        raise ValueError("improvement factor must be >= 1")
    p2 = replace(p, t_1q=p.t_1q / delta, t_2q=p.t_2q / delta,
                 t_meas=p.t_meas / delta, t_epr=p.t_epr / delta)
    n2 = replace(noise, e_1q=noise.e_1q / delta, e_2q=noise.e_2q / delta,
                 e_meas=noise.e_meas / delta, e_epr=noise.e_epr / delta,
                 delta_improv=noise.delta_improv * delta)
    return p2, n2


def estimate(sr: ScheduleResult, counts: OpCounts, noise: NoiseParams) -> FidelityReport:
    c = coherence(sr.makespan, noise.T1, noise.T2)
    op = operational_fidelity(counts, noise)
    return FidelityReport(c, op, c * op, sr.makespan, counts)
