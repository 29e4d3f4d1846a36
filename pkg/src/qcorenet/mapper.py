"""Hungarian Qubit Assignment: per-timeslice placement of virtual qubits onto cores.

Each slice is placed in two assignment passes against the previous slice's
placement. Gate pairs go first, onto "pair slots" (``capacity // 2`` per core)
with cost ``d(c_A, c) + d(c_B, c)``; the remaining qubits then fill the free
slots with cost ``d(c_prev, c)``.

Two exact reductions keep the matrices small. A pair whose operands already
share a core stays there, and within the lone pass each core keeps as many of
its previous residents as it has free slots (lowest qubit index first). Both
follow from the triangle inequality on route distances, so the optimal total
cost is unchanged; only the overflow is handed to the solver.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .assignment import INF, InfeasibleAssignment, pad_square, solve_assignment
from .circuit import SlicedCircuit, TWO
from .topology import CoreGraph, distance


class MappingError(ValueError):
    pass


@dataclass(frozen=True)
class Placement:
    slice_index: int
    qubit_core: tuple[int, ...]

    def occupancy(self, num_cores: int) -> list[int]:
        occ = [0] * num_cores
        for c in self.qubit_core:
            occ[c] += 1
        return occ


@dataclass(frozen=True)
class Transfer:
    qubit: int
    src_core: int
    dst_core: int
    slice_boundary: int

    def __post_init__(self):
        if self.src_core == self.dst_core:
            raise ValueError("transfer must change core")


def op_cost(operands: Sequence[int], core: int, prev: Placement, g: CoreGraph,
            full: bool = False) -> float:
    """Cost of placing a gate pair (or a lone qubit) on ``core``."""
    if full:
        return INF
    if len(operands) == 1:
        return distance(g, prev.qubit_core[operands[0]], core)
    qa, qb = operands
    ca, cb = prev.qubit_core[qa], prev.qubit_core[qb]
    if ca == core:
        return distance(g, cb, core)
    if cb == core:
        return distance(g, ca, core)
    return distance(g, ca, core) + distance(g, cb, core)


def _slot_columns(free: Sequence[int], rows: int) -> np.ndarray:
    # a core never needs more columns than there are rows to place
    return np.repeat(np.arange(len(free)), [min(f, rows) for f in free])


def _solve(costs: np.ndarray, rng) -> list[int]:
    return solve_assignment(pad_square(costs), rng)[: costs.shape[0]]


def _initial_placement(pairs, caps: Sequence[int], n: int, k: int) -> list[int]:
    # With no prior placement every cost is zero; the lowest-index optimum
    # fills cores in index order, pairs first.
    assign = [-1] * n
    pair_slots = [c for c, cap in enumerate(caps) for _ in range(cap // 2)]
    if len(pairs) > len(pair_slots):
        raise MappingError(f"slice {k}: {len(pairs)} gate pairs exceed {len(pair_slots)} pair slots")
    used = [0] * len(caps)
    for (a, b), c in zip(pairs, pair_slots):
        assign[a] = assign[b] = c
        used[c] += 2
    slots = (c for c, cap in enumerate(caps) for _ in range(cap - used[c]))
    for q in range(n):
        if assign[q] < 0:
            assign[q] = next(slots)
    return assign


def _place_slice(pairs, prev: Sequence[int], caps: Sequence[int], dist: np.ndarray,
                 rng, k: int) -> list[int]:
    n, ncores = len(prev), len(caps)
    assign = [-1] * n
    used = [0] * ncores

    moving = []
    for a, b in pairs:
        if prev[a] == prev[b]:
            assign[a] = assign[b] = prev[a]
            used[prev[a]] += 2
        else:
            moving.append((a, b))
    if moving:
        free_pairs = [caps[c] // 2 - used[c] // 2 for c in range(ncores)]
        cols = _slot_columns(free_pairs, len(moving))
        if len(moving) > len(cols):
            raise MappingError(f"slice {k}: {len(pairs)} gate pairs exceed the available pair slots")
        ca = np.array([prev[a] for a, _ in moving])
        cb = np.array([prev[b] for _, b in moving])
        costs = dist[ca][:, cols] + dist[cb][:, cols]
        for (a, b), j in zip(moving, _solve(costs, rng)):
            c = int(cols[j])
            assign[a] = assign[b] = c
            used[c] += 2

    free = [caps[c] - used[c] for c in range(ncores)]
    overflow = []
    for q in range(n):
        if assign[q] >= 0:
            continue
        home = prev[q]
        if free[home] > 0:
            assign[q] = home
            free[home] -= 1
        else:
            overflow.append(q)
    if overflow:
        cols = _slot_columns(free, len(overflow))
        if len(overflow) > len(cols):
            raise MappingError(f"slice {k}: not enough free slots for {len(overflow)} qubits")
        homes = np.array([prev[q] for q in overflow])
        costs = dist[homes][:, cols].astype(float)
        for q, j in zip(overflow, _solve(costs, rng)):
            assign[q] = int(cols[j])
    return assign


def map_circuit(sc: SlicedCircuit, g: CoreGraph, seed: int | None = None
                ) -> tuple[list[Placement], list[Transfer]]:
    """Place every slice so all two-qubit gates are core-local.

    ``seed`` perturbs assignment ties; ``None`` keeps the solver's fixed order.
    """
    n = sc.circuit.num_qubits
    caps = g.capacities
    if min(caps) < 1:
        raise MappingError(f"core capacities {caps} include a core with no computation qubits")
    if sum(caps) < n:
        raise MappingError(f"{n} qubits do not fit in total capacity {sum(caps)}")
    dist = g.distances
    rng = np.random.default_rng(seed) if seed is not None else None

    placements: list[Placement] = []
    prev: list[int] | None = None
    for k in range(sc.depth):
        pairs = sc.pairs(k)
        try:
            if prev is None:
                cur = _initial_placement(pairs, caps, n, k)
            elif not pairs:
                cur = prev
            else:
                cur = _place_slice(pairs, prev, caps, dist, rng, k)
        except InfeasibleAssignment as exc:
            raise MappingError(f"slice {k}: {exc}") from None
        placements.append(Placement(k, tuple(cur)))
        prev = cur
    return placements, extract_transfers(placements)


def extract_transfers(placements: Sequence[Placement]) -> list[Transfer]:
    if len(placements) < 2:
        return []
    grid = np.array([p.qubit_core for p in placements])
    # row-major nonzero keeps (boundary, qubit) order
    ks, qs = np.nonzero(grid[:-1] != grid[1:])
    return [Transfer(int(q), int(grid[k, q]), int(grid[k + 1, q]), placements[k].slice_index)
            for k, q in zip(ks, qs)]


def placement_violations(sc: SlicedCircuit, g: CoreGraph,
                         placements: Sequence[Placement]) -> list[str]:
    """Locality and capacity violations; empty when the mapping is valid."""
    problems = []
    if len(placements) != sc.depth:
        problems.append(f"{len(placements)} placements for {sc.depth} slices")
    caps = g.capacities
    for p, gates in zip(placements, sc.slices):
        if len(p.qubit_core) != sc.circuit.num_qubits:
            problems.append(f"slice {p.slice_index}: placement covers {len(p.qubit_core)} qubits")
            continue
        for c, occ in enumerate(p.occupancy(g.num_cores)):
            if occ > caps[c]:
                problems.append(f"slice {p.slice_index}: core {c} holds {occ} > {caps[c]}")
        for gate in gates:
            if gate.kind == TWO:
                a, b = gate.qubits
                if p.qubit_core[a] != p.qubit_core[b]:
                    problems.append(f"slice {p.slice_index}: {gate.label}{gate.qubits} is not core-local")
    return problems


# ---------------------------------------------------------------- JSON lines

def dump_mapping(fh: IO[str], g: CoreGraph, placements: Iterable[Placement],
                 transfers: Iterable[Transfer], slice_ops: Sequence[dict] | None = None) -> None:
    """Write topology, placements and transfers as JSON lines."""
    fh.write(json.dumps({"type": "topology", **g.to_dict()}) + "\n")
    for p in placements:
        rec = {"type": "placement", "slice": p.slice_index, "qubit_core": list(p.qubit_core)}
        if slice_ops is not None:
            rec["ops"] = slice_ops[p.slice_index]
        fh.write(json.dumps(rec) + "\n")
    for t in transfers:
        fh.write(json.dumps({"type": "transfer", "qubit": t.qubit, "src_core": t.src_core,
                             "dst_core": t.dst_core, "slice_boundary": t.slice_boundary}) + "\n")


def load_mapping(fh: IO[str]) -> dict:
    """Inverse of :func:`dump_mapping`."""
    out = {"topology": None, "placements": [], "transfers": [], "slice_ops": []}
    for lineno, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        rec = json.loads(line)
        kind = rec.pop("type", None)
        if kind == "topology":
            out["topology"] = rec
        elif kind == "placement":
            out["placements"].append(Placement(rec["slice"], tuple(rec["qubit_core"])))
            if "ops" in rec:
                out["slice_ops"].append(rec["ops"])
        elif kind == "transfer":
            out["transfers"].append(Transfer(rec["qubit"], rec["src_core"],
                                             rec["dst_core"], rec["slice_boundary"]))
        else:
            raise ValueError(f"line {lineno}: unknown record type {kind!r}")
    return out
