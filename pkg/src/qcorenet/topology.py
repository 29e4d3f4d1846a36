"""Inter-core topologies, per-core computation capacity and deterministic routing."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class TopologyKind(str, enum.Enum):
    LINE = "line"
    RING = "ring"
    STAR = "star"
    GRID = "grid"
    ALL_TO_ALL = "all-to-all"

    @classmethod
    def parse(cls, value: "str | TopologyKind") -> "TopologyKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {"alltoall": "all-to-all", "a2a": "all-to-all", "all": "all-to-all"}
        return cls(aliases.get(key, key))


ALL_KINDS = tuple(TopologyKind)

DEFAULT_MAX_CORES = 1024


def grid_dims(num_cores: int) -> tuple[int, int]:
    """(rows, cols) of the square or almost-square lattice holding ``num_cores``."""
    cols = math.isqrt(num_cores - 1) + 1 if num_cores > 1 else 1
    rows = -(-num_cores // cols)
    return rows, cols


def _edges(kind: TopologyKind, n: int) -> set[tuple[int, int]]:
    if kind is TopologyKind.LINE:
        return {(i, i + 1) for i in range(n - 1)}
    if kind is TopologyKind.RING:
        return {(i, i + 1) for i in range(n - 1)} | {(0, n - 1)}
    if kind is TopologyKind.STAR:
        return {(0, i) for i in range(1, n)}
    if kind is TopologyKind.ALL_TO_ALL:
        return {(i, j) for i in range(n) for j in range(i + 1, n)}
    rows, cols = grid_dims(n)
    edges = set()
    for v in range(n):
        r, c = divmod(v, cols)
        if c + 1 < cols and v + 1 < n:
            edges.add((v, v + 1))
        if v + cols < n:
            edges.add((v, v + cols))
    return edges


def _degrees(kind: TopologyKind, n: int) -> list[int]:
    """Core degrees without materialising the edge set."""
    if n == 1:
        return [0]
    if kind is TopologyKind.LINE:
        return [1] + [2] * (n - 2) + [1]
    if kind is TopologyKind.RING:
        return [2] * n
    if kind is TopologyKind.STAR:
        return [n - 1] + [1] * (n - 1)
    if kind is TopologyKind.ALL_TO_ALL:
        return [n - 1] * n
    deg = [0] * n
    for a, b in _edges(kind, n):
        deg[a] += 1
        deg[b] += 1
    return deg


@dataclass(frozen=True)
class CoreGraph:
    kind: TopologyKind
    num_cores: int
    edges: frozenset
    parallel_links: int
    qubits_per_core: int
    grid_dims: tuple[int, int] | None = None
    _routes: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @cached_property
    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.num_cores)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for lst in adj:
            lst.sort()
        return adj

    def degree(self, core: int) -> int:
        return len(self.adjacency[core])

    @property
    def capacities(self) -> list[int]:
        return [core_capacity(self, c) for c in range(self.num_cores)]

    @property
    def num_physical_qubits(self) -> int:
        return self.num_cores * self.qubits_per_core

    @cached_property
    def distances(self) -> np.ndarray:
        n = self.num_cores
        d = np.zeros((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(n):
                if a != b:
                    d[a, b] = len(route(self, a, b)) - 1
        return d

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "num_cores": self.num_cores,
                "parallel_links": self.parallel_links, "qubits_per_core": self.qubits_per_core}


def build_topology(kind, num_cores: int, parallel_links: int = 1,
                   qubits_per_core: int = 64) -> CoreGraph:
    kind = TopologyKind.parse(kind)
    if num_cores < 1:
        raise ValueError("num_cores must be >= 1")
    if parallel_links < 1:
        raise ValueError("parallel_links must be >= 1")
    if qubits_per_core < 1:
        raise ValueError("qubits_per_core must be >= 1")
    if kind is TopologyKind.RING and num_cores < 3:
        raise ValueError("ring topology needs at least 3 cores")
    dims = grid_dims(num_cores) if kind is TopologyKind.GRID else None
    return CoreGraph(kind, num_cores, frozenset(_edges(kind, num_cores)),
                     parallel_links, qubits_per_core, dims)


def topology_from_dict(d: dict) -> CoreGraph:
    return build_topology(d["kind"], int(d["num_cores"]), int(d["parallel_links"]),
                          int(d["qubits_per_core"]))


def core_capacity(g: CoreGraph, core: int) -> int:
    """Computation qubits left after one communication and one buffer qubit per incident QLink."""
    if not 0 <= core < g.num_cores:
        raise IndexError(f"core {core} out of range")
    return g.qubits_per_core - 2 * g.parallel_links * g.degree(core)


def capacities_for(kind, num_cores: int, qubits_per_core: int, parallel_links: int) -> list[int]:
    kind = TopologyKind.parse(kind)
    return [qubits_per_core - 2 * parallel_links * d for d in _degrees(kind, num_cores)]


def min_cores(kind, qubits_per_core: int, parallel_links: int, num_virtual: int,
              max_cores: int = DEFAULT_MAX_CORES) -> int | None:
    """Smallest core count that fits ``num_virtual`` qubits, or None if infeasible."""
    kind = TopologyKind.parse(kind)
    start = 3 if kind is TopologyKind.RING else 2
    for n in range(start, max_cores + 1):
        caps = capacities_for(kind, n, qubits_per_core, parallel_links)
        if min(caps) < 1:
            # star hub and all-to-all degrees only grow with n
            if kind in (TopologyKind.STAR, TopologyKind.ALL_TO_ALL):
                return None
            continue
        if sum(caps) >= num_virtual:
            return n
    return None


def route(g: CoreGraph, src: int, dst: int) -> list[int]:
    if src == dst:
        raise ValueError("route needs src != dst")
    for v in (src, dst):
        if not 0 <= v < g.num_cores:
            raise IndexError(f"core {v} out of range")
    key = (src, dst)
    cached = g._routes.get(key)
    if cached is None:
        cached = g._routes[key] = _route(g, src, dst)
    return list(cached)


def _route(g: CoreGraph, src: int, dst: int) -> list[int]:
    n = g.num_cores
    kind = g.kind
    if kind is TopologyKind.ALL_TO_ALL:
        return [src, dst]
    if kind is TopologyKind.STAR:
        if src == 0 or dst == 0:
            return [src, dst]
        return [src, 0, dst]
    if kind is TopologyKind.LINE:
        step = 1 if dst > src else -1
        return list(range(src, dst + step, step))
    if kind is TopologyKind.RING:
        fwd = (dst - src) % n
        step = 1 if fwd <= n - fwd else -1
        path = [src]
        while path[-1] != dst:
            path.append((path[-1] + step) % n)
        return path
    return _xy_route(g, src, dst)


def _xy_route(g: CoreGraph, src: int, dst: int) -> list[int]:
    rows, cols = g.grid_dims
    sr, sc = divmod(src, cols)
    dr, dc = divmod(dst, cols)
    x_first = sr * cols + dc < g.num_cores
    # The last row may be partial; if the X-first corner is missing go Y-first,
    # which stays inside the complete rows above it.
    path = [src]
    r, c = sr, sc
    legs = ("x", "y") if x_first else ("y", "x")
    for leg in legs:
        if leg == "x":
            while c != dc:
                c += 1 if dc > c else -1
                path.append(r * cols + c)
        else:
            while r != dr:
                r += 1 if dr > r else -1
                path.append(r * cols + c)
    return path


def distance(g: CoreGraph, a: int, b: int) -> int:
    if a == b:
        return 0
    return len(route(g, a, b)) - 1
