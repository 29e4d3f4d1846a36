"""Circuit representation, file formats, benchmark generators and timeslicing.

Native format: UTF-8, one gate per line, ``#`` starts a comment::

    name ghz
    qubits 3
    h 0
    cx 0 1
    cp 1 2 0.7853981633974483

Header lines are ``qubits <n>`` (required, before any gate) and an optional
``name <str>``. Gate lines are ``<label> <q0> [q1] [param]``.
"""

from __future__ import annotations

import ast
import math
import operator
import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

SINGLE = "single-qubit"
TWO = "two-qubit"
MEASURE = "measurement"

# label -> (kind, takes a parameter)
GATE_SET: dict[str, tuple[str, bool]] = {
    "h": (SINGLE, False),
    "x": (SINGLE, False),
    "y": (SINGLE, False),
    "z": (SINGLE, False),
    "s": (SINGLE, False),
    "sdg": (SINGLE, False),
    "t": (SINGLE, False),
    "tdg": (SINGLE, False),
    "rx": (SINGLE, True),
    "ry": (SINGLE, True),
    "rz": (SINGLE, True),
    "cx": (TWO, False),
    "cz": (TWO, False),
    "swap": (TWO, False),
    "cp": (TWO, True),
    "measure": (MEASURE, False),
}

# Two-qubit labels that cost more than one native two-qubit gate.
TWO_QUBIT_WEIGHT = {"swap": 3}


class CircuitError(ValueError):
    """Malformed circuit text or invalid gate."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Gate:
    kind: str
    label: str
    qubits: tuple[int, ...]
    param: float | None = None

    def __post_init__(self):
        expected = 2 if self.kind == TWO else 1
        if len(self.qubits) != expected:
            raise CircuitError(f"{self.label} expects {expected} qubit(s), got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"{self.label} has repeated qubit {self.qubits}")


def make_gate(label: str, *qubits: int, param: float | None = None) -> Gate:
    try:
        kind, takes_param = GATE_SET[label]
    except KeyError:
        raise CircuitError(f"unknown gate '{label}'") from None
    if takes_param and param is None:
        raise CircuitError(f"{label} requires a parameter")
    if not takes_param and param is not None:
        raise CircuitError(f"{label} takes no parameter")
    return Gate(kind, label, tuple(int(q) for q in qubits), None if param is None else float(param))


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...]
    name: str = "circuit"

    def __post_init__(self):
        if self.num_qubits < 1:
            raise CircuitError("num_qubits must be positive")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(q < 0 or q >= self.num_qubits for q in g.qubits):
                raise CircuitError(f"{g.label} {g.qubits} out of range for {self.num_qubits} qubits")

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)


@dataclass(frozen=True)
class SlicedCircuit:
    circuit: Circuit
    slices: tuple[tuple[Gate, ...], ...] = field(default_factory=tuple)

    @property
    def depth(self) -> int:
        return len(self.slices)

    def pairs(self, k: int) -> list[tuple[int, int]]:
        """Operand pairs of the two-qubit gates in slice ``k``."""
        return [g.qubits for g in self.slices[k] if g.kind == TWO]


# ---------------------------------------------------------------- parsing

def parse_circuit(text: str, format: str = "native", name: str | None = None) -> Circuit:
    if format == "native":
        return _parse_native(text, name)
    if format in ("qasm", "qasm-subset"):
        return _parse_qasm(text, name)
    raise ValueError(f"unknown circuit format {format!r}")


def load_circuit(path: str) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    fmt = "qasm" if path.endswith(".qasm") or text.lstrip().startswith("OPENQASM") else "native"
    stem = re.sub(r"\.[^.]*$", "", path.replace("\\", "/").rsplit("/", 1)[-1])
    return parse_circuit(text, fmt, name=stem)


def _parse_native(text: str, name: str | None) -> Circuit:
    num_qubits = None
    gates = []
    circ_name = name
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        if head == "qubits":
            if len(tokens) != 2 or num_qubits is not None:
                raise CircuitError("malformed or repeated 'qubits' header", lineno)
            num_qubits = _int(tokens[1], lineno)
            continue
        if head == "name":
            circ_name = line[len("name"):].strip()
            continue
        if num_qubits is None:
            raise CircuitError("gate before 'qubits' header", lineno)
        if head not in GATE_SET:
            raise CircuitError(f"unknown gate '{head}'", lineno)
        kind, takes_param = GATE_SET[head]
        arity = 2 if kind == TWO else 1
        expected = arity + (1 if takes_param else 0)
        if len(tokens) - 1 != expected:
            raise CircuitError(f"{head} expects {expected} argument(s)", lineno)
        qubits = [_int(t, lineno) for t in tokens[1:1 + arity]]
        for q in qubits:
            if not 0 <= q < num_qubits:
                raise CircuitError(f"qubit {q} out of range [0, {num_qubits})", lineno)
        param = _float(tokens[-1], lineno) if takes_param else None
        try:
            gates.append(make_gate(head, *qubits, param=param))
        except CircuitError as exc:
            raise CircuitError(str(exc), lineno) from None
    if num_qubits is None:
        raise CircuitError("missing 'qubits' header")
    return Circuit(num_qubits, tuple(gates), circ_name or "circuit")


def render_circuit(c: Circuit) -> str:
    lines = [f"name {c.name}", f"qubits {c.num_qubits}"]
    for g in c.gates:
        parts = [g.label, *map(str, g.qubits)]
        if g.param is not None:
            parts.append(repr(g.param))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def render_qasm(c: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.num_qubits}];"]
    if c.count(MEASURE):
        lines.append(f"creg c[{c.num_qubits}];")
    for g in c.gates:
        if g.kind == MEASURE:
            q = g.qubits[0]
            lines.append(f"measure q[{q}] -> c[{q}];")
            continue
        head = g.label if g.param is None else f"{g.label}({g.param!r})"
        lines.append(f"{head} " + ", ".join(f"q[{q}]" for q in g.qubits) + ";")
    return "\n".join(lines) + "\n"


_QASM_REG = re.compile(r"^(qreg|creg)\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]$")
_QASM_GATE = re.compile(r"^([A-Za-z_]\w*)\s*(?:\((.*)\))?\s+(.+)$")
_QASM_ARG = re.compile(r"^([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]$")


def _parse_qasm(text: str, name: str | None) -> Circuit:
    qregs: dict[str, tuple[int, int]] = {}
    cregs: dict[str, int] = {}
    total = 0
    gates = []
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        for stmt in filter(None, (s.strip() for s in line.split(";"))):
            if stmt.startswith("OPENQASM"):
                if stmt.split()[1:] != ["2.0"]:
                    raise CircuitError("only OPENQASM 2.0 is supported", lineno)
                seen_header = True
                continue
            if stmt.startswith("include"):
                continue
            m = _QASM_REG.match(stmt)
            if m:
                reg, rname, size = m.group(1), m.group(2), int(m.group(3))
                if reg == "qreg":
                    qregs[rname] = (total, size)
                    total += size
                else:
                    cregs[rname] = size
                continue
            if stmt.startswith("barrier"):
                continue
            if stmt.startswith("measure"):
                parts = stmt[len("measure"):].split("->")
                if len(parts) != 2:
                    raise CircuitError("malformed measure", lineno)
                q = _qasm_qubit(parts[0].strip(), qregs, lineno)
                _qasm_clbit(parts[1].strip(), cregs, lineno)
                gates.append(make_gate("measure", q))
                continue
            m = _QASM_GATE.match(stmt)
            if not m:
                raise CircuitError(f"syntax error: {stmt!r}", lineno)
            label, params, args = m.group(1), m.group(2), m.group(3)
            if label not in GATE_SET or label == "measure":
                raise CircuitError(f"unknown gate '{label}'", lineno)
            qubits = [_qasm_qubit(a.strip(), qregs, lineno) for a in args.split(",")]
            param = _eval_angle(params, lineno) if params is not None else None
            try:
                gates.append(make_gate(label, *qubits, param=param))
            except CircuitError as exc:
                raise CircuitError(str(exc), lineno) from None
    if not seen_header:
        raise CircuitError("missing OPENQASM header")
    if total == 0:
        raise CircuitError("no qreg declared")
    return Circuit(total, tuple(gates), name or "circuit")


def _qasm_qubit(arg: str, qregs: dict[str, tuple[int, int]], lineno: int) -> int:
    m = _QASM_ARG.match(arg)
    if not m:
        raise CircuitError(f"syntax error in operand {arg!r}", lineno)
    reg, idx = m.group(1), int(m.group(2))
    if reg not in qregs:
        raise CircuitError(f"undeclared qreg '{reg}'", lineno)
    offset, size = qregs[reg]
    if idx >= size:
        raise CircuitError(f"qubit {reg}[{idx}] out of range (size {size})", lineno)
    return offset + idx


def _qasm_clbit(arg: str, cregs: dict[str, int], lineno: int) -> None:
    m = _QASM_ARG.match(arg)
    if not m or m.group(1) not in cregs:
        raise CircuitError(f"undeclared classical bit {arg!r}", lineno)
    if int(m.group(2)) >= cregs[m.group(1)]:
        raise CircuitError(f"classical bit {arg} out of range", lineno)


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}


def _eval_angle(expr: str, lineno: int) -> float:
    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError
    try:
        return ev(ast.parse(expr.strip(), mode="eval").body)
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise CircuitError(f"cannot evaluate parameter {expr!r}", lineno) from None


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise CircuitError(f"expected integer, got {tok!r}", lineno) from None


def _float(tok: str, lineno: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise CircuitError(f"expected number, got {tok!r}", lineno) from None


# ---------------------------------------------------------------- slicing

def slice_circuit(c: Circuit) -> SlicedCircuit:
    """ASAP packing: each gate goes one slice after the last gate on any of its qubits."""
    frontier = [0] * c.num_qubits
    slices: list[list[Gate]] = []
    for g in c.gates:
        k = max(frontier[q] for q in g.qubits)
        if k == len(slices):
            slices.append([])
        slices[k].append(g)
        for q in g.qubits:
            frontier[q] = k + 1
    return SlicedCircuit(c, tuple(tuple(s) for s in slices))


# ---------------------------------------------------------------- generators

def gen_ghz(n: int) -> Circuit:
    if n < 1:
        raise ValueError("GHZ needs at least one qubit")
    gates = [make_gate("h", 0)] + [make_gate("cx", i, i + 1) for i in range(n - 1)]
    return Circuit(n, tuple(gates), f"ghz_{n}")


def gen_qft(n: int) -> Circuit:
    if n < 1:
        raise ValueError("QFT needs at least one qubit")
    gates = []
    for j in reversed(range(n)):
        gates.append(make_gate("h", j))
        for k in reversed(range(j)):
            gates.append(make_gate("cp", j, k, param=math.pi / 2 ** (j - k)))
    for i in range(n // 2):
        gates.append(make_gate("swap", i, n - 1 - i))
    return Circuit(n, tuple(gates), f"qft_{n}")


def _toffoli(a: int, b: int, c: int) -> list[Gate]:
    # 6 CNOT + 9 single-qubit gates, target c
    return [
        make_gate("h", c),
        make_gate("cx", b, c), make_gate("tdg", c),
        make_gate("cx", a, c), make_gate("t", c),
        make_gate("cx", b, c), make_gate("tdg", c),
        make_gate("cx", a, c), make_gate("t", b), make_gate("t", c),
        make_gate("h", c),
        make_gate("cx", a, b), make_gate("t", a), make_gate("tdg", b),
        make_gate("cx", a, b),
    ]


def _maj(c: int, b: int, a: int) -> list[Gate]:
    return [make_gate("cx", a, b), make_gate("cx", a, c), *_toffoli(c, b, a)]


def _uma(c: int, b: int, a: int) -> list[Gate]:
    return [*_toffoli(c, b, a), make_gate("cx", a, c), make_gate("cx", c, b)]


def gen_cuccaro(bits: int) -> Circuit:
    """Ripple-carry adder computing b <- a + b.

    Qubit layout: 0 is the carry-in, ``1 + 2i`` holds b_i, ``2 + 2i`` holds
    a_i, and ``2 * bits + 1`` is the carry-out.
    """
    if bits < 1:
        raise ValueError("Cuccaro adder needs bits >= 1")
    b = [1 + 2 * i for i in range(bits)]
    a = [2 + 2 * i for i in range(bits)]
    carry_in, carry_out = 0, 2 * bits + 1
    gates = _maj(carry_in, b[0], a[0])
    for i in range(1, bits):
        gates += _maj(a[i - 1], b[i], a[i])
    gates.append(make_gate("cx", a[-1], carry_out))
    for i in reversed(range(1, bits)):
        gates += _uma(a[i - 1], b[i], a[i])
    gates += _uma(carry_in, b[0], a[0])
    return Circuit(2 * bits + 2, tuple(gates), f"cuccaro_{bits}")


def _su4_block(q0: int, q1: int, rng: random.Random) -> list[Gate]:
    def layer():
        return [make_gate("ry", q0, param=rng.uniform(0, 2 * math.pi)),
                make_gate("ry", q1, param=rng.uniform(0, 2 * math.pi))]
    gates = layer()
    for _ in range(3):
        gates.append(make_gate("cx", q0, q1))
        gates += layer()
    return gates


def gen_qvol(n: int, depth: int | None = None, seed: int = 0) -> Circuit:
    """Quantum-volume style circuit; ``depth`` defaults to ``n``."""
    if n < 2:
        raise ValueError("quantum volume needs n >= 2")
    depth = n if depth is None else depth
    rng = random.Random(seed)
    gates = []
    for _ in range(depth):
        perm = list(range(n))
        rng.shuffle(perm)
        for i in range(n // 2):
            gates += _su4_block(perm[2 * i], perm[2 * i + 1], rng)
    return Circuit(n, tuple(gates), f"qvol_{n}_{depth}_s{seed}")


BENCHMARKS = ("qft", "ghz", "cuccaro", "qvol")


def make_benchmark(name: str, num_qubits: int, seed: int = 0, depth: int | None = None) -> Circuit:
    """Build a benchmark circuit with ``num_qubits`` total qubits."""
    if name == "qft":
        return gen_qft(num_qubits)
    if name == "ghz":
        return gen_ghz(num_qubits)
    if name == "qvol":
        return gen_qvol(num_qubits, depth, seed)
    if name == "cuccaro":
        if num_qubits < 4 or num_qubits % 2:
            raise ValueError("cuccaro needs an even qubit count >= 4")
        return gen_cuccaro((num_qubits - 2) // 2)
    raise ValueError(f"unknown benchmark {name!r}; choose from {', '.join(BENCHMARKS)}")


def op_counts(gates: Iterable[Gate]) -> dict[str, int]:
    """Per-class operation counts; a circuit swap counts as three two-qubit gates."""
    counts = {"single": 0, "two": 0, "measure": 0}
    for g in gates:
        if g.kind == SINGLE:
            counts["single"] += 1
        elif g.kind == TWO:
            counts["two"] += TWO_QUBIT_WEIGHT.get(g.label, 1)
        else:
            counts["measure"] += 1
    return counts


def per_qubit_order(gates: Sequence[Gate], num_qubits: int) -> list[list[Gate]]:
    seqs: list[list[Gate]] = [[] for _ in range(num_qubits)]
    for g in gates:
        for q in g.qubits:
            seqs[q].append(g)
    return seqs
