"""Experiment configuration.

The text format is one ``key = value`` per line, ``#`` comments, lists
comma-separated. JSON objects with the same keys are accepted too::

    circuits = qft:256, ghz:256
    topologies = line, ring, star, grid, all-to-all
    parallel_links = 1, 2, 3, 4, 5
    delta_improv = 1, 10, 100, 1000, 10000
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields

from .fidelity import NoiseParams
from .netsim import TimingParams
from .topology import ALL_KINDS, DEFAULT_MAX_CORES, TopologyKind

_T = TimingParams()
_N = NoiseParams()


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    circuits: tuple[str, ...] = ("qft:256", "qvol:256", "ghz:256", "cuccaro:256")
    qvol_depth: int | None = None
    qubits_per_core: int = 64
    topologies: tuple[str, ...] = tuple(k.value for k in ALL_KINDS)
    parallel_links: tuple[int, ...] = (1, 2, 3, 4, 5)
    link_width: int = 10
    clock_freq: float = 200e6
    delta_improv: tuple[float, ...] = (1.0, 10.0, 100.0, 1000.0, 10000.0)
    fig8_delta: float = 100.0
    repetitions: int = 5
    seed: int = 0
    perturb_mapper: bool = True
    max_cores: int = DEFAULT_MAX_CORES
    workers: int = 1
    output_dir: str = "results"
    t_1q: float = _T.t_1q
    t_2q: float = _T.t_2q
    t_meas: float = _T.t_meas
    t_epr: float = _T.t_epr
    e_1q: float = _N.e_1q
    e_2q: float = _N.e_2q
    e_meas: float = _N.e_meas
    e_epr: float = _N.e_epr
    T1: float = _N.T1
    T2: float = _N.T2

    def __post_init__(self):
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")
        if not self.circuits:
            raise ConfigError("at least one circuit is required")
        for spec in self.circuits:
            parse_circuit_spec(spec)
        try:
            for k in self.topologies:
                TopologyKind.parse(k)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if any(l < 1 for l in self.parallel_links):
            raise ConfigError("parallel_links must be >= 1")
        if any(d < 1 for d in self.delta_improv) or self.fig8_delta < 1:
            raise ConfigError("improvement factors must be >= 1")
        if self.qubits_per_core < 1 or self.workers < 1 or self.max_cores < 2:
            raise ConfigError("qubits_per_core, workers must be >= 1 and max_cores >= 2")
        try:
            self.timing()
            self.noise()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def timing(self) -> TimingParams:
        return TimingParams(self.t_1q, self.t_2q, self.t_meas, self.t_epr,
                            self.clock_freq, self.link_width)

    def noise(self) -> NoiseParams:
        return NoiseParams(self.e_1q, self.e_2q, self.e_meas, self.e_epr, self.T1, self.T2)

    def deltas(self) -> tuple[float, ...]:
        """Improvement factors to evaluate; always includes ``fig8_delta``."""
        return tuple(sorted(set(self.delta_improv) | {self.fig8_delta}))

    def to_dict(self) -> dict:
        return asdict(self)


def parse_circuit_spec(spec: str) -> tuple[str, str | int]:
    """``name:qubits`` for a generator or ``file:path`` for a circuit file."""
    name, sep, arg = spec.partition(":")
    name = name.strip().lower()
    if not sep or not arg.strip():
        raise ConfigError(f"circuit spec {spec!r} must look like name:qubits or file:path")
    if name == "file":
        return name, arg.strip()
    from .circuit import BENCHMARKS
    if name not in BENCHMARKS:
        raise ConfigError(f"unknown benchmark {name!r}")
    try:
        return name, int(arg)
    except ValueError:
        raise ConfigError(f"qubit count in {spec!r} is not an integer") from None


_FIELDS = {f.name: f for f in fields(ExperimentConfig)}
_TUPLE_TYPES = {"circuits": str, "topologies": str, "parallel_links": int, "delta_improv": float}


def _coerce(key: str, value):
    if key not in _FIELDS:
        raise ConfigError(f"unknown config key {key!r}")
    if key in _TUPLE_TYPES:
        typ = _TUPLE_TYPES[key]
        if isinstance(value, str):
            value = [v for v in (x.strip() for x in value.split(",")) if v]
        elif not isinstance(value, (list, tuple)):
            value = [value]
        try:
            return tuple(typ(v) for v in value)
        except ValueError:
            raise ConfigError(f"bad value for {key}: {value!r}") from None
    default = _FIELDS[key].default
    if key == "qvol_depth":
        return None if value in (None, "", "none", "None") else int(value)
    try:
        if isinstance(default, bool):
            if isinstance(value, str):
                low = value.strip().lower()
                if low not in ("true", "false", "1", "0", "yes", "no"):
                    raise ValueError
                return low in ("true", "1", "yes")
            return bool(value)
        if isinstance(default, int):
            return int(value)
        if isinstance(default, float):
            return float(value)
        return str(value).strip()
    except ValueError:
        raise ConfigError(f"bad value for {key}: {value!r}") from None


def config_from_dict(d: dict) -> ExperimentConfig:
    return ExperimentConfig(**{k: _coerce(k, v) for k, v in d.items()})


def parse_config(text: str) -> ExperimentConfig:
    if text.lstrip().startswith("{"):
        return config_from_dict(json.loads(text))
    items = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key = value")
        key = key.strip()
        if key in items:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        items[key] = value.strip()
    return config_from_dict(items)


def render_config(cfg: ExperimentConfig) -> str:
    lines = []
    for key, value in cfg.to_dict().items():
        if isinstance(value, (list, tuple)):
            value = ", ".join(repr(v) if isinstance(v, float) else str(v) for v in value)
        elif value is None:
            value = "none"
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def load_config(path: str) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
