import io
import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcorenet.assignment import INF
from qcorenet.circuit import Circuit, gen_ghz, make_benchmark, make_gate, slice_circuit
from qcorenet.mapper import (MappingError, Placement, Transfer, _place_slice, dump_mapping,
                             extract_transfers, load_mapping, map_circuit, op_cost,
                             placement_violations)
from qcorenet.netsim import slice_profile
from qcorenet.topology import ALL_KINDS, build_topology, distance


def hamming_total(placements):
    return sum(sum(a != b for a, b in zip(p.qubit_core, q.qubit_core))
               for p, q in zip(placements, placements[1:]))


def brute_pairs(pairs, prev, caps, d):
    best = INF
    for cores in itertools.product(range(len(caps)), repeat=len(pairs)):
        if any(cores.count(c) > caps[c] // 2 for c in range(len(caps))):
            continue
        best = min(best, sum(d[prev[a], c] + d[prev[b], c] for (a, b), c in zip(pairs, cores)))
    return best


def brute_lone(lone, prev, free, d):
    best = INF
    for cores in itertools.product(range(len(free)), repeat=len(lone)):
        if any(cores.count(c) > free[c] for c in range(len(free))):
            continue
        best = min(best, sum(d[prev[q], c] for q, c in zip(lone, cores)))
    return best


class TestOpCost:
    def test_examples(self):
        g = build_topology("line", 4)
        prev = Placement(0, (1, 3))
        assert op_cost((0, 1), 1, prev, g) == distance(g, 3, 1) == 2
        assert op_cost((0, 1), 3, prev, g) == 2
        assert op_cost((0, 1), 2, prev, g) == 2
        assert op_cost((0, 1), 0, prev, g) == 1 + 3
        assert op_cost((0, 1), 2, prev, g, full=True) == INF
        assert op_cost((1,), 0, prev, g) == 3

    def test_all_to_all_reduces_to_unit_costs(self):
        g = build_topology("all-to-all", 5)
        prev = Placement(0, (0, 1, 1))
        assert op_cost((0, 1), 3, prev, g) == 2
        assert op_cost((0, 1), 1, prev, g) == 1
        assert op_cost((1, 2), 1, prev, g) == 0

    @given(st.sampled_from(ALL_KINDS), st.integers(3, 9), st.data())
    def test_case_form_equals_sum(self, kind, n, data):
        g = build_topology(kind, n)
        ca, cb, c = (data.draw(st.integers(0, n - 1)) for _ in range(3))
        prev = Placement(0, (ca, cb))
        assert op_cost((0, 1), c, prev, g) == distance(g, ca, c) + distance(g, cb, c)


class TestPlaceSliceOracle:
    @pytest.mark.parametrize("seed", [None, 1])
    def test_matches_brute_force(self, seed):
        rng = random.Random(11)
        gen = np.random.default_rng(seed) if seed is not None else None
        checked = 0
        while checked < 150:
            kind = rng.choice(ALL_KINDS)
            ncores = rng.randint(3, 4)
            g = build_topology(kind, ncores, 1, rng.randint(4, 8) + 2 * (ncores - 1))
            caps = g.capacities
            slots = [c for c in range(ncores) for _ in range(caps[c])]
            n = rng.randint(2, min(8, len(slots)))
            rng.shuffle(slots)
            prev = slots[:n]
            qs = list(range(n))
            rng.shuffle(qs)
            npairs = rng.randint(1, n // 2)
            pairs = [tuple(sorted(qs[2 * i:2 * i + 2])) for i in range(npairs)]
            d = g.distances
            best_pairs = brute_pairs(pairs, prev, caps, d)
            if best_pairs == INF:
                with pytest.raises(MappingError):
                    _place_slice(pairs, prev, caps, d, gen, 1)
                continue
            cur = _place_slice(pairs, prev, caps, d, gen, 1)
            assert all(cur[a] == cur[b] for a, b in pairs)
            assert all(cur.count(c) <= caps[c] for c in range(ncores))
            assert sum(d[prev[a], cur[a]] + d[prev[b], cur[a]] for a, b in pairs) == best_pairs
            paired = {q for p in pairs for q in p}
            lone = [q for q in range(n) if q not in paired]
            free = [caps[c] - 2 * sum(cur[a] == c for a, _ in pairs) for c in range(ncores)]
            assert sum(d[prev[q], cur[q]] for q in lone) == brute_lone(lone, prev, free, d)
            checked += 1


def four_qubit_circuit():
    return Circuit(4, (make_gate("cx", 0, 1), make_gate("cx", 2, 3), make_gate("cx", 0, 2),
                       make_gate("cx", 1, 3), make_gate("cx", 0, 3), make_gate("cx", 1, 2)))


class TestMapCircuit:
    def test_two_core_scenario(self):
        sc = slice_circuit(four_qubit_circuit())
        g = build_topology("line", 2, 1, 4)
        assert g.capacities == [2, 2]
        placements, transfers = map_circuit(sc, g)
        assert len(placements) == 3
        assert placement_violations(sc, g, placements) == []
        # every slice pairs each qubit with a new partner, so each boundary moves 2 qubits
        assert len(transfers) == hamming_total(placements) == 4

    def test_slice0_fill(self):
        sc = slice_circuit(Circuit(6, (make_gate("cx", 4, 5), make_gate("h", 0))))
        g = build_topology("line", 3, 1, 6)  # capacities 4, 2, 4
        placements, _ = map_circuit(sc, g)
        assert placements[0].qubit_core == (0, 0, 1, 1, 0, 0)

    def test_single_core_sufficient(self):
        c = make_benchmark("qft", 30)
        sc = slice_circuit(c)
        placements, transfers = map_circuit(sc, build_topology("all-to-all", 2, 1, 64))
        assert transfers == []
        assert set(placements[-1].qubit_core) == {0}

    def test_ghz256_line_regression(self):
        sc = slice_circuit(gen_ghz(256))
        g = build_topology("line", 5, 1, 64)
        placements, transfers = map_circuit(sc, g)
        assert placement_violations(sc, g, placements) == []
        # the chain must cross at least every core boundary once
        assert len(transfers) >= g.num_cores - 1
        assert len(transfers) == 388
        assert len(map_circuit(sc, g, seed=0)[1]) == 27

    def test_infeasible(self):
        sc = slice_circuit(gen_ghz(10))
        with pytest.raises(MappingError):
            map_circuit(sc, build_topology("line", 2, 1, 6))
        with pytest.raises(MappingError):
            map_circuit(sc, build_topology("star", 3, 4, 16))
        # 3 simultaneous pairs on two cores of capacity 3 (one pair slot each)
        c = Circuit(6, (make_gate("cx", 0, 1), make_gate("cx", 2, 3), make_gate("cx", 4, 5)))
        with pytest.raises(MappingError):
            map_circuit(slice_circuit(c), build_topology("line", 2, 1, 5))

    @pytest.mark.parametrize("name", ["qft", "ghz", "cuccaro", "qvol"])
    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_benchmarks_valid(self, name, kind):
        sc = slice_circuit(make_benchmark(name, 24, seed=2, depth=6))
        g = build_topology(kind, 4, 1, 12)
        placements, transfers = map_circuit(sc, g, seed=3)
        assert placement_violations(sc, g, placements) == []
        assert len(transfers) == hamming_total(placements)

    def test_determinism(self):
        sc = slice_circuit(make_benchmark("qvol", 20, seed=1, depth=5))
        g = build_topology("grid", 5, 1, 10)
        assert map_circuit(sc, g) == map_circuit(sc, g)
        assert map_circuit(sc, g, seed=4) == map_circuit(sc, g, seed=4)

    @given(st.integers(4, 12), st.lists(st.tuples(st.integers(0, 11), st.integers(0, 11)),
                                        max_size=40), st.sampled_from(ALL_KINDS))
    @settings(max_examples=60, deadline=None)
    def test_random_circuits_valid(self, n, raw, kind):
        gates = [make_gate("cx", a % n, b % n) for a, b in raw if a % n != b % n]
        sc = slice_circuit(Circuit(n, tuple(gates)))
        g = build_topology(kind, 3, 1, 8)
        placements, transfers = map_circuit(sc, g, seed=0)
        assert placement_violations(sc, g, placements) == []
        assert len(transfers) == hamming_total(placements)


class TestTransfers:
    def test_identical(self):
        p = Placement(0, (0, 1, 2))
        assert extract_transfers([p, Placement(1, (0, 1, 2))]) == []

    def test_single_move(self):
        ps = [Placement(0, (0, 0, 1, 0)), Placement(1, (0, 0, 1, 0)), Placement(2, (0, 0, 1, 2))]
        assert extract_transfers(ps) == [Transfer(3, 0, 2, 1)]

    def test_order(self):
        ps = [Placement(0, (0, 1, 2)), Placement(1, (1, 0, 2)), Placement(2, (1, 2, 0))]
        assert [(t.slice_boundary, t.qubit) for t in extract_transfers(ps)] == [
            (0, 0), (0, 1), (1, 1), (1, 2)]

    def test_no_self_transfer(self):
        with pytest.raises(ValueError):
            Transfer(0, 1, 1, 0)


def test_jsonl_round_trip():
    sc = slice_circuit(four_qubit_circuit())
    g = build_topology("line", 2, 1, 4)
    placements, transfers = map_circuit(sc, g)
    buf = io.StringIO()
    dump_mapping(buf, g, placements, transfers, slice_profile(sc))
    buf.seek(0)
    m = load_mapping(buf)
    assert m["topology"] == g.to_dict()
    assert m["placements"] == placements
    assert m["transfers"] == transfers
    assert m["slice_ops"] == slice_profile(sc)
    with pytest.raises(ValueError, match="line 1"):
        load_mapping(io.StringIO('{"type": "bogus"}\n'))
