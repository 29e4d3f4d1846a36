"""Acceptance criteria, one test per criterion.

Each test prints a PASS/FAIL line; the lines are repeated in the pytest
terminal summary. Criterion 9 runs the default sweep twice (a few minutes).
"""

import itertools
import random
import time
from collections import deque

import mpmath
import pytest

from qcorenet.assignment import INF, InfeasibleAssignment, assignment_cost, solve_assignment
from qcorenet.bottleneck import BottleneckQuery, bottleneck_size
from qcorenet.circuit import make_benchmark, slice_circuit
from qcorenet.config import ExperimentConfig
from qcorenet.experiment import emit_dataset, run_experiment
from qcorenet.fidelity import (NoiseParams, apply_improvement, circuit_counts, coherence,
                               estimate, teleport_counts)
from qcorenet.mapper import map_circuit, placement_violations
from qcorenet.netsim import (TimingParams, classical_latency, packet_size, plan_hops,
                             slice_durations, teleport_stages, time_plan)
from qcorenet.topology import ALL_KINDS, TopologyKind, build_topology, capacities_for, min_cores

Q = 64
BENCHES = ("qft", "qvol", "ghz", "cuccaro")
DELTAS = (1, 10, 100, 1e3, 1e4)


def test_c1_classical_bottleneck(report):
    t0 = time.perf_counter()
    q = BottleneckQuery(10, 100e6, 1)
    p = q.timing
    n = 2 ** 20
    classical = classical_latency(packet_size(n), p)
    quantum = teleport_stages(p, n).quantum
    size = bottleneck_size(q)
    elapsed = time.perf_counter() - t0
    ok = (classical == 70.0 and abs(quantum - 313.7) < 1e-9 and classical < quantum
          and (size is None or size > n) and elapsed < 1.0)
    report(1, ok, f"classical {classical} ns < quantum {quantum:.1f} ns at 2^20; "
                  f"bottleneck_size={'none' if size is None else size}; {elapsed:.3f}s")
    assert ok


def test_c2_formula_goldens(report):
    base = TimingParams()
    got = (packet_size(320), classical_latency(20, base.with_(link_width=10, clock_freq=200e6)),
           packet_size(2 ** 20), classical_latency(42, base.with_(link_width=10, clock_freq=100e6)))
    ok = got == (20, 20.0, 42, 70.0)
    report(2, ok, f"(bits, ns) at 320 qubits = {got[:2]}, at 2^20 = {got[2:]}")
    assert ok


def test_c3_coherence(report):
    mpmath.mp.dps = 50
    rng = random.Random(2024)
    T1, T2 = NoiseParams().T1, NoiseParams().T2
    worst = 0.0
    ts = [rng.uniform(0, 1e7) for _ in range(1000)]
    for t in ts:
        exact = mpmath.exp(-mpmath.mpf(t) / T1) * (mpmath.exp(-mpmath.mpf(t) / T2) / 2 + 0.5)
        worst = max(worst, float(abs((coherence(t, T1, T2) - exact) / exact)))
    grid = sorted(set(ts))
    cs = [coherence(t, T1, T2) for t in grid]
    monotone = all(b < a for a, b in zip(cs, cs[1:]))
    ok = worst < 1e-12 and coherence(0.0, T1, T2) == 1.0 and monotone
    report(3, ok, f"max rel err vs mpmath {worst:.2e}; C(0)=1; strictly decreasing on "
                  f"{len(grid)} points: {monotone}")
    assert ok


def test_c4_assignment_oracle(report):
    t0 = time.perf_counter()
    rng = random.Random(4)
    bad = 0
    for k in range(500):
        n = rng.randint(1, 7)
        p_inf = (0.0, 0.15, 0.4)[k % 3]
        m = [[INF if rng.random() < p_inf else rng.randint(0, 20) for _ in range(n)]
             for _ in range(n)]
        best = min(sum(m[i][p[i]] for i in range(n)) for p in itertools.permutations(range(n)))
        try:
            got = assignment_cost(m, solve_assignment(m))
        except InfeasibleAssignment:
            got = INF
        bad += got != best
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 10
    report(4, ok, f"500 matrices up to 7x7, mismatches={bad}, {elapsed:.2f}s")
    assert ok


def _bfs(g, src):
    adj = {v: [] for v in range(g.num_cores)}
    for a, b in g.edges:
        adj[a].append(b)
        adj[b].append(a)
    dist, todo = {src: 0}, deque([src])
    while todo:
        v = todo.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                todo.append(w)
    return dist


def test_c5_routing_oracle(report):
    t0 = time.perf_counter()
    bad = pairs = 0
    for kind in ALL_KINDS:
        for n in range(3 if kind is TopologyKind.RING else 1, 65):
            g = build_topology(kind, n)
            d = g.distances
            for a in range(n):
                ref = _bfs(g, a)
                for b in range(n):
                    pairs += 1
                    bad += int(d[a, b]) != ref[b]
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 10
    report(5, ok, f"{pairs} pairs over 5 topologies, N<=64, mismatches={bad}, {elapsed:.2f}s")
    assert ok


def _exhaustive_feasible(kind, l, n, limit):
    start = 3 if kind is TopologyKind.RING else 2
    return any(min(c) >= 1 and sum(c) >= n
               for c in (capacities_for(kind, N, Q, l) for N in range(start, limit + 1)))


@pytest.fixture(scope="module")
def mapped_cells():
    """Map every (benchmark, topology, l) cell at 256 qubits once, shared by criteria 6 and 7."""
    cfg = ExperimentConfig()
    cells = {}
    for name in BENCHES:
        sc = slice_circuit(make_benchmark(name, 256, seed=cfg.seed))
        for kind in ALL_KINDS:
            for l in range(1, 6):
                cores = min_cores(kind, Q, l, 256)
                if cores is None:
                    cells[(name, kind, l)] = None
                    continue
                g = build_topology(kind, cores, l, Q)
                placements, transfers = map_circuit(sc, g, cfg.seed)
                cells[(name, kind, l)] = (sc, g, placements, transfers)
    return cells


def test_c6_mapping_validity(report, mapped_cells):
    t0 = time.perf_counter()
    problems = []
    feasible = infeasible = 0
    for (name, kind, l), cell in mapped_cells.items():
        if cell is None:
            infeasible += 1
            if _exhaustive_feasible(kind, l, 256, 1024):
                problems.append(f"{name}/{kind.value}/l={l} wrongly flagged infeasible")
            continue
        feasible += 1
        sc, g, placements, _ = cell
        problems += placement_violations(sc, g, placements)[:3]
    a2a_bad = sorted({l for (_, k, l), c in mapped_cells.items()
                      if c is None and k is TopologyKind.ALL_TO_ALL})
    elapsed = time.perf_counter() - t0
    ok = not problems and feasible > 0 and a2a_bad == [3, 4, 5]
    report(6, ok, f"{feasible} feasible cells valid, {infeasible} infeasible "
                  f"(all-to-all l={a2a_bad}), problems={len(problems)}; check {elapsed:.1f}s")
    assert ok, problems[:5]


def test_c7_parallelism(report, mapped_cells):
    bad = []
    checked = 0
    for (name, kind, l), cell in mapped_cells.items():
        if l != 1 or cell is None:
            continue
        sc, g1, _, transfers = cell
        seqs = []
        for links in range(1, 6):
            g = build_topology(kind, g1.num_cores, links, Q)
            plan = plan_hops(transfers, g, sc.depth)
            if plan.sequential_tlp > plan.total_tlp:
                bad.append((name, kind.value, links, "seq > total"))
            seqs.append(plan.sequential_tlp)
        checked += 1
        if any(b > a for a, b in zip(seqs, seqs[1:])):
            bad.append((name, kind.value, seqs))
    ok = not bad and checked == 4 * 5
    report(7, ok, f"{checked} fixed transfer sets rescheduled at l=1..5, violations={len(bad)}")
    assert ok, bad


def test_c8_plateau(report):
    c = make_benchmark("qft", 256)
    sc = slice_circuit(c)
    l = 2
    g = build_topology("line", min_cores("line", Q, l, 256), l, Q)
    _, transfers = map_circuit(sc, g, 0)
    plan = plan_hops(transfers, g, sc.depth)
    counts = circuit_counts(c) + teleport_counts(plan.total_tlp)
    coh, ops = [], []
    for d in DELTAS:
        p, noise = apply_improvement(TimingParams(), NoiseParams(), d)
        rep = estimate(time_plan(plan, g, p, slice_durations(sc, p), False), counts, noise)
        coh.append(rep.coherence)
        ops.append(rep.operational)
    stages = teleport_stages(TimingParams(), g.num_physical_qubits)
    limit = coherence(plan.sequential_tlp * stages.t_classical, NoiseParams().T1, NoiseParams().T2)
    top_step = abs(coh[-1] - coh[-2])
    ok = (top_step < 1e-3 and limit > 0 and abs(coh[-1] - limit) < 1e-3
          and all(b > a for a, b in zip(ops, ops[1:])) and ops[-1] > 0.99)
    report(8, ok, f"QFT(256) line l={l}: coherence {[round(x, 4) for x in coh]} -> "
                  f"C(classical-only)={limit:.4f}, top step {top_step:.1e}; "
                  f"operational {[round(x, 4) for x in ops]}")
    assert ok


@pytest.mark.slow
def test_c9_determinism(report, tmp_path):
    t0 = time.perf_counter()
    cfg = ExperimentConfig()
    a = emit_dataset(run_experiment(cfg), cfg, str(tmp_path / "a"))
    b = emit_dataset(run_experiment(cfg), cfg, str(tmp_path / "b"))
    names = ("fig5", "fig7", "fig8", "fig9")
    same = {}
    for name in names:
        with open(a[name], "rb") as fa, open(b[name], "rb") as fb:
            same[name] = fa.read() == fb.read()
    elapsed = time.perf_counter() - t0
    ok = all(same.values())
    report(9, ok, f"two full default sweeps, byte-identical CSVs {same}; {elapsed:.0f}s")
    assert ok


def test_c10_min_cores_golden(report):
    got = min_cores("all-to-all", 64, 1, 256)
    ok = got == 5
    report(10, ok, f"min_cores(all-to-all, Q=64, l=1, n=256) = {got}")
    assert ok
