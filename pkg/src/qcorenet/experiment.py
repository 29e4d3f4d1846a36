"""Full-stack sweeps: topology x QLinks x improvement factor x repetition.

Each cell (circuit, repetition, topology, links) is a pure function of the
config and its seed. Per cell the pipeline is min_cores -> build_topology ->
circuit + slicing -> map_circuit -> plan_hops, then one timing and fidelity
estimate per improvement factor (the mapping does not depend on timing).
"""

from __future__ import annotations

import csv
import json
import math
import os
import statistics
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .bottleneck import sweep_bottleneck, write_bottleneck_csv
from .circuit import load_circuit, make_benchmark, slice_circuit
from .config import ExperimentConfig, parse_circuit_spec
from .fidelity import apply_improvement, circuit_counts, estimate, teleport_counts
from .mapper import MappingError, map_circuit
from .netsim import plan_hops, profile_durations, slice_profile, time_plan
from .topology import TopologyKind, build_topology, min_cores


@dataclass(frozen=True)
class RunRecord:
    circuit: str
    topology: str
    parallel_links: int
    delta_improv: float
    repetition: int
    seed: int
    qubits_per_core: int
    feasible: bool
    num_qubits: int = 0
    num_cores: int | None = None
    total_tlp: int | None = None
    sequential_tlp: int | None = None
    makespan: float | None = None
    coherence: float | None = None
    operational: float | None = None
    overall: float | None = None
    note: str = ""
    wall_clock: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


@lru_cache(maxsize=4)
def _prepared(spec: str, seed: int, qvol_depth: int | None):
    """Circuit, its slicing, per-slice profile and gate counts (reused across cells)."""
    kind, arg = parse_circuit_spec(spec)
    if kind == "file":
        c = load_circuit(str(arg))
    else:
        c = make_benchmark(kind, int(arg), seed=seed, depth=qvol_depth)
    sc = slice_circuit(c)
    return c, sc, slice_profile(sc), circuit_counts(c)


def _cells(cfg: ExperimentConfig) -> list[tuple[str, int, str, int]]:
    # repetition outside topology so the prepared circuit is reused
    return [(spec, rep, TopologyKind.parse(kind).value, l)
            for spec in cfg.circuits
            for rep in range(cfg.repetitions)
            for kind in cfg.topologies
            for l in cfg.parallel_links]


def run_cell(cfg: ExperimentConfig, spec: str, rep: int, kind: str, links: int) -> list[RunRecord]:
    t0 = time.perf_counter()
    seed = cfg.seed + rep
    circuit, sc, profile, gate_counts = _prepared(spec, seed, cfg.qvol_depth)
    n = circuit.num_qubits
    base = dict(circuit=spec.strip(), topology=kind, parallel_links=links,
                repetition=rep, seed=seed, qubits_per_core=cfg.qubits_per_core, num_qubits=n)

    def infeasible(note: str, cores=None) -> list[RunRecord]:
        return [RunRecord(delta_improv=d, feasible=False, num_cores=cores, note=note, **base)
                for d in cfg.deltas()]

    cores = min_cores(kind, cfg.qubits_per_core, links, n, cfg.max_cores)
    if cores is None:
        return infeasible("no core count satisfies the capacity constraints")
    g = build_topology(kind, cores, links, cfg.qubits_per_core)
    try:
        _, transfers = map_circuit(sc, g, seed if cfg.perturb_mapper else None)
    except MappingError as exc:
        return infeasible(f"mapping failed: {exc}", cores)
    plan = plan_hops(transfers, g, sc.depth)
    counts = gate_counts + teleport_counts(plan.total_tlp)

    out = []
    for d in cfg.deltas():
        timing, noise = apply_improvement(cfg.timing(), cfg.noise(), d)
        sr = time_plan(plan, g, timing, profile_durations(profile, timing), with_events=False)
        rep_ = estimate(sr, counts, noise)
        out.append(RunRecord(delta_improv=d, feasible=True, num_cores=cores,
                             total_tlp=sr.total_tlp, sequential_tlp=sr.sequential_tlp,
                             makespan=sr.makespan, coherence=rep_.coherence,
                             operational=rep_.operational, overall=rep_.overall, **base))
    elapsed = time.perf_counter() - t0
    return [RunRecord(**{**r.to_dict(), "wall_clock": elapsed}) for r in out]


def _run_cell_args(args) -> list[RunRecord]:
    return run_cell(*args)


def run_experiment(cfg: ExperimentConfig) -> list[RunRecord]:
    """Run every sweep cell; records come back in a fixed order regardless of workers."""
    jobs = [(cfg, *cell) for cell in _cells(cfg)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(_run_cell_args, jobs))
    else:
        chunks = [_run_cell_args(j) for j in jobs]
    records = [r for chunk in chunks for r in chunk]
    spec_rank = {s.strip(): i for i, s in enumerate(cfg.circuits)}
    kind_rank = {TopologyKind.parse(k).value: i for i, k in enumerate(cfg.topologies)}
    return sorted(records, key=lambda r: (spec_rank[r.circuit], kind_rank[r.topology],
                                          r.parallel_links, r.delta_improv, r.repetition))


# ---------------------------------------------------------------- datasets

def mean_std(values: Sequence[float]) -> tuple[float, float]:
    """Mean and sample standard deviation (n - 1); std is 0 for one value."""
    values = list(values)
    if not values:
        return math.nan, math.nan
    mean = statistics.fmean(values)
    std = statistics.stdev(values) if len(values) > 1 else 0.0
    return mean, std


def _groups(records: Iterable[RunRecord], delta: float | None = None) -> dict:
    groups: dict[tuple, list[RunRecord]] = defaultdict(list)
    for r in records:
        if delta is None or r.delta_improv == delta:
            groups[(r.circuit, r.topology, r.parallel_links, r.delta_improv)].append(r)
    return groups


def _num(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return repr(x) if isinstance(x, float) else str(x)


def fig7_rows(records: Sequence[RunRecord]) -> list[dict]:
    """Transfer counts per (circuit, topology, links); independent of the improvement factor."""
    if not records:
        return []
    first_delta = min(r.delta_improv for r in records)
    rows = []
    for (circ, kind, l, _), rs in _groups(records, first_delta).items():
        ok = [r for r in rs if r.feasible]
        tot = mean_std([r.total_tlp for r in ok])
        seq = mean_std([r.sequential_tlp for r in ok])
        rows.append({"circuit": circ, "topology": kind, "parallel_links": l,
                     "feasible": int(bool(ok)), "num_cores": ok[0].num_cores if ok else None,
                     "total_tlp_mean": tot[0], "total_tlp_std": tot[1],
                     "sequential_tlp_mean": seq[0], "sequential_tlp_std": seq[1],
                     "repetitions": len(ok)})
    return rows


def fig8_rows(records: Sequence[RunRecord], delta: float) -> list[dict]:
    """Overall fidelity per configuration, normalised to each circuit's best mean."""
    rows = []
    for (circ, kind, l, d), rs in _groups(records, delta).items():
        ok = [r for r in rs if r.feasible]
        m, s = mean_std([r.overall for r in ok])
        rows.append({"circuit": circ, "topology": kind, "parallel_links": l, "delta_improv": d,
                     "feasible": int(bool(ok)), "num_cores": ok[0].num_cores if ok else None,
                     "fidelity_mean": m, "fidelity_std": s})
    best: dict[str, float] = {}
    for r in rows:
        if r["feasible"]:
            best[r["circuit"]] = max(best.get(r["circuit"], 0.0), r["fidelity_mean"])
    for r in rows:
        top = best.get(r["circuit"], 0.0)
        if r["feasible"] and top > 0:
            r["relative_mean"] = r["fidelity_mean"] / top
            r["relative_std"] = r["fidelity_std"] / top
        else:
            r["relative_mean"] = r["relative_std"] = None
    return rows


def fig9_rows(records: Sequence[RunRecord]) -> list[dict]:
    rows = []
    for (circ, kind, l, d), rs in _groups(records).items():
        ok = [r for r in rs if r.feasible]
        row = {"circuit": circ, "topology": kind, "parallel_links": l, "delta_improv": d,
               "feasible": int(bool(ok))}
        for term in ("coherence", "operational", "overall"):
            m, s = mean_std([getattr(r, term) for r in ok])
            row[f"{term}_mean"], row[f"{term}_std"] = m, s
        rows.append(row)
    return rows


def write_table(path: str, rows: list[dict], fmt: str) -> None:
    if fmt == "json":
        clean = [{k: None if isinstance(v, float) and math.isnan(v) else v for k, v in r.items()}
                 for r in rows]
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(clean, fh, indent=1)
            fh.write("\n")
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if not rows:
            return
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(rows[0]))
        for r in rows:
            w.writerow([_num(v) for v in r.values()])


def emit_dataset(records: Sequence[RunRecord], cfg: ExperimentConfig, out_dir: str | None = None,
                 fmt: str = "csv", include_fig5: bool = True) -> dict[str, str]:
    """Write the fig5/7/8/9-style tables plus the raw records; returns name -> path."""
    if fmt not in ("csv", "json"):
        raise ValueError("format must be csv or json")
    out_dir = out_dir or cfg.output_dir
    os.makedirs(out_dir, exist_ok=True)
    paths = {}
    tables = {"fig7": fig7_rows(records), "fig8": fig8_rows(records, cfg.fig8_delta),
              "fig9": fig9_rows(records)}
    for name, rows in tables.items():
        paths[name] = os.path.join(out_dir, f"{name}.{fmt}")
        write_table(paths[name], rows, fmt)
    if include_fig5:
        rows = sweep_bottleneck(base=cfg.timing())
        paths["fig5"] = os.path.join(out_dir, f"fig5.{fmt}")
        if fmt == "csv":
            with open(paths["fig5"], "w", encoding="utf-8", newline="") as fh:
                write_bottleneck_csv(fh, rows)
        else:
            write_table(paths["fig5"], rows, fmt)
    paths["records"] = os.path.join(out_dir, "records.json")
    with open(paths["records"], "w", encoding="utf-8") as fh:
        json.dump({"config": cfg.to_dict(),
                   "metadata": {"fig8_delta_improv": cfg.fig8_delta,
                                "fig8_delta_note": "configurable; set by fig8_delta",
                                "std": "sample standard deviation (n - 1)"},
                   "records": [r.to_dict() for r in records]}, fh, indent=1)
        fh.write("\n")
    return paths
