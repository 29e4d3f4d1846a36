"""Command line entry point: ``qcorenet {run,map,schedule,bottleneck,gen}``."""

from __future__ import annotations

import argparse
import logging
import sys

from . import bottleneck as bn
from .circuit import CircuitError, load_circuit, make_benchmark, render_circuit, render_qasm, slice_circuit
from .config import ConfigError, ExperimentConfig, config_from_dict, load_config, parse_circuit_spec
from .experiment import emit_dataset, run_experiment
from .mapper import MappingError, dump_mapping, load_mapping, map_circuit
from .netsim import (ScheduleError, TimingParams, profile_durations, schedule, slice_profile,
                     write_summary_json, write_trace_csv)
from .topology import ALL_KINDS, build_topology, min_cores, topology_from_dict

log = logging.getLogger("qcorenet")


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _int_range(text: str) -> list[int]:
    """``1-15`` or ``1,2,5``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _circuit_from_spec(spec: str, seed: int):
    kind, arg = parse_circuit_spec(spec)
    if kind == "file":
        return load_circuit(str(arg))
    return make_benchmark(kind, int(arg), seed=seed)


def _add_timing(p: argparse.ArgumentParser) -> None:
    d = TimingParams()
    p.add_argument("--t-1q", type=float, default=d.t_1q, help="single-qubit gate time, ns")
    p.add_argument("--t-2q", type=float, default=d.t_2q, help="two-qubit gate time, ns")
    p.add_argument("--t-meas", type=float, default=d.t_meas, help="measurement time, ns")
    p.add_argument("--t-epr", type=float, default=d.t_epr, help="EPR generation time, ns")
    p.add_argument("--link-width", type=int, default=d.link_width)
    p.add_argument("--clock-freq", type=float, default=d.clock_freq, help="Hz")
    p.add_argument("--delta-time", type=float, default=1.0)


def _timing(a) -> TimingParams:
    return TimingParams(a.t_1q, a.t_2q, a.t_meas, a.t_epr, a.clock_freq, a.link_width, a.delta_time)


def cmd_run(a) -> int:
    cfg = load_config(a.config) if a.config else ExperimentConfig()
    overrides = {k: v for k, v in {
        "circuits": a.circuits, "topologies": a.topologies, "parallel_links": a.links,
        "delta_improv": a.delta_improv, "repetitions": a.repetitions, "seed": a.seed,
        "workers": a.workers, "output_dir": a.out, "link_width": a.link_width,
        "clock_freq": a.clock_freq, "qubits_per_core": a.qubits_per_core,
    }.items() if v is not None}
    if overrides:
        cfg = config_from_dict({**cfg.to_dict(), **overrides})
    log.info("running %d circuit(s) x %d topologies x %d link counts x %d reps",
             len(cfg.circuits), len(cfg.topologies), len(cfg.parallel_links), cfg.repetitions)
    records = run_experiment(cfg)
    paths = emit_dataset(records, cfg, cfg.output_dir, a.format, include_fig5=not a.no_fig5)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def cmd_map(a) -> int:
    circuit = _circuit_from_spec(a.circuit, a.seed)
    sc = slice_circuit(circuit)
    cores = a.cores
    if cores is None:
        cores = min_cores(a.topology, a.qubits_per_core, a.links, circuit.num_qubits)
        if cores is None:
            raise MappingError(f"{a.topology} with {a.links} link(s) cannot host "
                               f"{circuit.num_qubits} qubits")
    g = build_topology(a.topology, cores, a.links, a.qubits_per_core)
    placements, transfers = map_circuit(sc, g, a.seed if a.perturb else None)
    out = open(a.out, "w", encoding="utf-8") if a.out else sys.stdout
    try:
        dump_mapping(out, g, placements, transfers, slice_profile(sc))
    finally:
        if a.out:
            out.close()
    log.info("%s on %d %s cores: %d slices, %d transfers", circuit.name, cores,
             g.kind.value, sc.depth, len(transfers))
    return 0


def cmd_schedule(a) -> int:
    with open(a.mapping, encoding="utf-8") as fh:
        m = load_mapping(fh)
    if m["topology"] is None:
        raise ScheduleError("mapping file has no topology record")
    if len(m["slice_ops"]) != len(m["placements"]):
        raise ScheduleError("mapping file lacks per-slice operation profiles")
    g = topology_from_dict(m["topology"])
    p = _timing(a)
    r = schedule(m["transfers"], g, p, profile_durations(m["slice_ops"], p))
    if a.trace:
        with open(a.trace, "w", encoding="utf-8", newline="") as fh:
            write_trace_csv(fh, r)
    if a.summary:
        with open(a.summary, "w", encoding="utf-8") as fh:
            write_summary_json(fh, r)
    else:
        write_summary_json(sys.stdout, r)
    return 0


def cmd_bottleneck(a) -> int:
    rows = bn.sweep_bottleneck(_int_range(a.widths), _float_list(a.freqs), _float_list(a.deltas))
    if a.out:
        with open(a.out, "w", encoding="utf-8", newline="") as fh:
            bn.write_bottleneck_csv(fh, rows)
    else:
        bn.write_bottleneck_csv(sys.stdout, rows)
    return 0


def cmd_gen(a) -> int:
    c = make_benchmark(a.benchmark, a.qubits, seed=a.seed, depth=a.depth)
    text = render_qasm(c) if a.format == "qasm" else render_circuit(c)
    if a.out:
        with open(a.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcorenet", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    kinds = [k.value for k in ALL_KINDS]

    p = sub.add_parser("run", help="full-stack sweep, writes fig5/7/8/9 datasets")
    p.add_argument("--config", help="key = value or JSON config file")
    p.add_argument("--circuits", help="comma list of name:qubits or file:path")
    p.add_argument("--topologies", help="comma list of " + ", ".join(kinds))
    p.add_argument("--links", help="comma list of parallel QLink counts")
    p.add_argument("--delta-improv", help="comma list of improvement factors")
    p.add_argument("--repetitions", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--link-width", type=int)
    p.add_argument("--clock-freq", type=float)
    p.add_argument("--qubits-per-core", type=int)
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--no-fig5", action="store_true", help="skip the bottleneck table")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("map", help="map one circuit, dump placements/transfers as JSON lines")
    p.add_argument("--circuit", required=True, help="name:qubits or file:path")
    p.add_argument("--topology", choices=kinds, required=True)
    p.add_argument("--links", type=int, default=1)
    p.add_argument("--cores", type=int, help="core count (default: smallest feasible)")
    p.add_argument("--qubits-per-core", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--perturb", action="store_true", help="seeded tie-break perturbation")
    p.add_argument("--out")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("schedule", help="schedule teleportations of a mapping file")
    p.add_argument("--mapping", required=True)
    p.add_argument("--trace", help="event trace CSV")
    p.add_argument("--summary", help="summary JSON (default: stdout)")
    _add_timing(p)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("bottleneck", help="classical bottleneck sweep (CSV)")
    p.add_argument("--widths", default="1-15")
    p.add_argument("--freqs", default=",".join(f"{f:g}" for f in bn.FREQ_SAMPLES))
    p.add_argument("--deltas", default=",".join(f"{d:g}" for d in bn.DELTA_SAMPLES))
    p.add_argument("--out")
    p.set_defaults(func=cmd_bottleneck)

    p = sub.add_parser("gen", help="write a benchmark circuit file")
    p.add_argument("--benchmark", required=True, choices=("qft", "ghz", "cuccaro", "qvol"))
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, help="quantum volume depth (default: qubits)")
    p.add_argument("--format", choices=("native", "qasm"), default="native")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    a = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return a.func(a)
    except (CircuitError, ConfigError, MappingError, ScheduleError, ValueError, OSError) as exc:
        print(f"qcorenet: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
