"""Compiler and simulator for modular (multi-core) quantum architectures."""

from .circuit import (Circuit, Gate, SlicedCircuit, gen_cuccaro, gen_ghz, gen_qft, gen_qvol,
                      make_benchmark, parse_circuit, render_circuit, slice_circuit)
from .topology import (CoreGraph, TopologyKind, build_topology, core_capacity, distance,
                       min_cores, route)
from .assignment import solve_assignment
from .mapper import Placement, Transfer, extract_transfers, map_circuit, op_cost
from .netsim import (ScheduleResult, TeleportStages, TimingParams, classical_latency,
                     count_stats, packet_size, schedule, teleport_stages)
from .fidelity import (FidelityReport, NoiseParams, OpCounts, apply_improvement, coherence,
                       estimate, operational_fidelity)
from .bottleneck import BottleneckQuery, bottleneck_size, sweep_bottleneck

__version__ = "0.1.0"
