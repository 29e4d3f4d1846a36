"""Teleportation timing and round-based scheduling over parallel QLinks."""

from __future__ import annotations

import csv
import heapq
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import IO, NamedTuple, Sequence

from .circuit import MEASURE, SINGLE, TWO_QUBIT_WEIGHT, SlicedCircuit
from .mapper import Transfer
from .topology import CoreGraph, route


@dataclass(frozen=True)
class TimingParams:
    """Operation durations in ns; ``delta_time`` divides all quantum durations."""

    t_1q: float = 7.9
    t_2q: float = 30.0
    t_meas: float = 40.0
    t_epr: float = 130.0
    clock_freq: float = 200e6
    link_width: int = 10
    delta_time: float = 1.0

    def __post_init__(self):
        for name in ("t_1q", "t_2q", "t_meas", "t_epr", "clock_freq", "link_width"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.delta_time < 1:
            raise ValueError("delta_time must be >= 1")

    def scaled(self, name: str) -> float:
        return getattr(self, name) / self.delta_time

    def with_(self, **changes) -> "TimingParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class TeleportStages:
    t_entangle: float
    t_pre: float
    t_classical: float
    t_post: float

    @property
    def quantum(self) -> float:
        return self.t_entangle + self.t_pre + self.t_post

    @property
    def total(self) -> float:
        return self.quantum + self.t_classical


def packet_size(num_physical_qubits: int) -> int:
    """Bits per teleportation message: two qubit identifiers plus two outcome bits."""
    if num_physical_qubits < 2:
        raise ValueError("need at least 2 physical qubits")
    return 2 * (num_physical_qubits - 1).bit_length() + 2


def classical_latency(bits: int, p: TimingParams) -> float:
    """ns to move ``bits`` one hop: 2 routing/arbitration cycles plus transmission."""
    cycles = 2 + -(-bits // p.link_width)
    return cycles * 1e9 / p.clock_freq


def teleport_stages(p: TimingParams, num_physical_qubits: int) -> TeleportStages:
    return TeleportStages(
        t_entangle=p.scaled("t_epr"),
        # CNOT, H, then both measurements in parallel
        t_pre=(p.t_2q + p.t_1q + p.t_meas) / p.delta_time,
        t_classical=classical_latency(packet_size(num_physical_qubits), p),
        # conditional X and Z, then a buffer-to-slot SWAP
        t_post=(2 * p.t_1q + 3 * p.t_2q) / p.delta_time,
    )


# ---------------------------------------------------------------- slice timing

def slice_profile(sc: SlicedCircuit) -> list[dict[str, int]]:
    """Per-slice operation counts, keyed by timing class."""
    out = []
    for gates in sc.slices:
        prof = {"single": 0, "two": 0, "swap": 0, "measure": 0}
        for g in gates:
            if g.kind == SINGLE:
                prof["single"] += 1
            elif g.kind == MEASURE:
                prof["measure"] += 1
            elif g.label in TWO_QUBIT_WEIGHT:
                prof["swap"] += 1
            else:
                prof["two"] += 1
        out.append(prof)
    return out


def profile_durations(profile: Sequence[dict[str, int]], p: TimingParams) -> list[float]:
    """Slice duration is its longest gate; gates in a slice never share a qubit."""
    dur = {"single": p.t_1q, "two": p.t_2q, "swap": TWO_QUBIT_WEIGHT["swap"] * p.t_2q,
           "measure": p.t_meas}
    return [max((dur[k] for k, v in prof.items() if v), default=0.0) / p.delta_time
            for prof in profile]


def slice_durations(sc: SlicedCircuit, p: TimingParams) -> list[float]:
    return profile_durations(slice_profile(sc), p)


# ---------------------------------------------------------------- scheduling

class HopEvent(NamedTuple):
    transfer_id: int
    qubit: int
    hop: int
    src_core: int
    dst_core: int
    link: tuple[int, int, int]  # (core a, core b, parallel link index), a < b
    start: float
    end: float
    boundary: int
    round: int

    @property
    def link_id(self) -> str:
        a, b, k = self.link
        return f"{a}-{b}/{k}"


@dataclass
class ScheduleResult:
    events: list[HopEvent]
    makespan: float
    total_tlp: int
    sequential_tlp: int
    slice_times: list[float] = field(default_factory=list)
    hop_time: float = 0.0
    stages: TeleportStages | None = None

    @property
    def compute_time(self) -> float:
        return math.fsum(self.slice_times)

    @property
    def communication_time(self) -> float:
        return self.makespan - self.compute_time

    def summary(self) -> dict:
        return {"total_tlp": self.total_tlp, "sequential_tlp": self.sequential_tlp,
                "makespan": self.makespan}


class ScheduleError(ValueError):
    pass


# (transfer id, transfer, hop index, from core, to core, parallel link index)
Grant = tuple[int, Transfer, int, int, int, int]


@dataclass
class HopPlan:
    """Arbitration outcome per slice boundary, independent of timing."""

    rounds: dict[int, list[list[Grant]]]
    num_boundaries: int

    @property
    def total_tlp(self) -> int:
        return sum(len(r) for rs in self.rounds.values() for r in rs)

    @property
    def sequential_tlp(self) -> int:
        return sum(len(rs) for rs in self.rounds.values())


def _arbitrate(transfers: Sequence[tuple[int, Transfer]], g: CoreGraph) -> list[list[Grant]]:
    paths = {}
    for tid, t in transfers:
        if not (0 <= t.src_core < g.num_cores and 0 <= t.dst_core < g.num_cores):
            raise ScheduleError(f"transfer {t} references a core outside the topology")
        paths[tid] = route(g, t.src_core, t.dst_core)
    # a waiting hop keeps its key, so each edge queue is a heap ordered by
    # (most remaining hops, lowest qubit index)
    queues: dict[tuple[int, int], list] = defaultdict(list)

    def enqueue(tid: int, t: Transfer, i: int) -> None:
        path = paths[tid]
        u, v = path[i], path[i + 1]
        heapq.heappush(queues[(u, v) if u < v else (v, u)],
                       (i + 1 - len(path), t.qubit, tid, t, i, u, v))

    for tid, t in transfers:
        enqueue(tid, t, 0)
    rounds = []
    while queues:
        granted = []
        for edge in list(queues):
            q = queues[edge]
            for k in range(min(g.parallel_links, len(q))):
                _, _, tid, t, i, u, v = heapq.heappop(q)
                granted.append((tid, t, i, u, v, k))
            if not q:
                del queues[edge]
        for tid, t, i, _, _, _ in granted:
            if i + 2 < len(paths[tid]):
                enqueue(tid, t, i + 1)
        granted.sort(key=lambda x: x[0])
        rounds.append(granted)
    return rounds


def plan_hops(transfers: Sequence[Transfer], g: CoreGraph, num_slices: int) -> HopPlan:
    """Expand transfers into hops and arbitrate QLinks round by round.

    In each round every QLink of an edge goes to the waiting hop whose transfer
    has the most hops left (ties: lower qubit index). A transfer advances at
    most one hop per round.
    """
    by_boundary: dict[int, list[tuple[int, Transfer]]] = defaultdict(list)
    for tid, t in enumerate(transfers):
        if not 0 <= t.slice_boundary < num_slices - 1:
            raise ScheduleError(f"transfer {t} has no slice boundary in a {num_slices}-slice circuit")
        by_boundary[t.slice_boundary].append((tid, t))
    return HopPlan({k: _arbitrate(ts, g) for k, ts in sorted(by_boundary.items())},
                   max(num_slices - 1, 0))


def time_plan(plan: HopPlan, g: CoreGraph, p: TimingParams, slice_times: Sequence[float],
              with_events: bool = True) -> ScheduleResult:
    """Lay the plan out in time; each round lasts one full teleportation."""
    stages = teleport_stages(p, g.num_physical_qubits)
    hop_time = stages.total
    events: list[HopEvent] = []
    clock = 0.0
    sequential = total = 0
    for k, st in enumerate(slice_times):
        clock += st
        rounds = plan.rounds.get(k)
        if not rounds:
            continue
        if with_events:
            for r, granted in enumerate(rounds):
                start = clock + r * hop_time
                end = start + hop_time
                for tid, t, hop, u, v, link in granted:
                    events.append(HopEvent(tid, t.qubit, hop, u, v,
                                           (u, v, link) if u < v else (v, u, link),
                                           start, end, k, r))
        total += sum(len(r) for r in rounds)
        sequential += len(rounds)
        clock += len(rounds) * hop_time
    return ScheduleResult(events, clock, total, sequential, list(slice_times), hop_time, stages)


def schedule(transfers: Sequence[Transfer], g: CoreGraph, p: TimingParams,
             slice_times: Sequence[float]) -> ScheduleResult:
    """Time every teleportation hop between computation slices.

    Boundaries act as barriers: slice ``k + 1`` starts once every transfer of
    boundary ``k`` has arrived.
    """
    return time_plan(plan_hops(transfers, g, len(slice_times)), g, p, slice_times)


def count_stats(r: ScheduleResult) -> tuple[int, int, float]:
    """Recompute (total_tlp, sequential_tlp, makespan) from the event list alone."""
    rounds: dict[int, int] = {}
    span: dict[int, tuple[float, float]] = {}
    for e in r.events:
        rounds[e.boundary] = max(rounds.get(e.boundary, 0), e.round + 1)
        lo, hi = span.get(e.boundary, (e.start, e.end))
        span[e.boundary] = (min(lo, e.start), max(hi, e.end))
    comm = math.fsum(hi - lo for lo, hi in span.values())
    return len(r.events), sum(rounds.values()), r.compute_time + comm


def link_conflicts(events: Sequence[HopEvent]) -> list[tuple[HopEvent, HopEvent]]:
    by_link: dict[tuple, list[HopEvent]] = defaultdict(list)
    for e in events:
        by_link[e.link].append(e)
    bad = []
    for evs in by_link.values():
        evs.sort(key=lambda e: (e.start, e.end))
        for a, b in zip(evs, evs[1:]):
            if b.start < a.end - 1e-9 * max(1.0, abs(a.end)):
                bad.append((a, b))
    return bad


def write_trace_csv(fh: IO[str], r: ScheduleResult) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["transfer_id", "qubit", "hop", "src_core", "dst_core", "link_id",
                "start_ns", "end_ns"])
    for e in r.events:
        w.writerow([e.transfer_id, e.qubit, e.hop, e.src_core, e.dst_core, e.link_id,
                    repr(e.start), repr(e.end)])


def write_summary_json(fh: IO[str], r: ScheduleResult) -> None:
    json.dump(r.summary(), fh, indent=2)
    fh.write("\n")
