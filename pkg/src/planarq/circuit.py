"""Quantum circuit intermediate representation and OpenQASM 2.0 subset I/O.

The IR is deliberately small: gates are opaque labels with one or two qubit
operands. Gate semantics (matrices, parameters) are irrelevant to coupling
topology work, so parameters found in source files are discarded.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field

ONE_QUBIT = "one_qubit"
TWO_QUBIT = "two_qubit"
MEASURE = "measure"
BARRIER = "barrier"

# well-known one-qubit gate names accepted without declaration
_KNOWN_1Q = {
    "id", "x", "y", "z", "h", "s", "sdg", "t", "tdg",
    "rx", "ry", "rz", "u1", "u2", "u3", "u", "p", "sx", "sxdg",
}
_KNOWN_2Q = {"cx", "cz", "swap", "cy", "ch", "crz", "cp", "cu1", "rzz", "rxx", "iswap", "ecr"}


@dataclass(frozen=True)
class Gate:
    """One circuit operation: an opaque named gate, measure, or barrier."""

    kind: str
    name: str
    qubits: tuple[int, ...]
    cbit: int | None = None  # measure target, None otherwise

    def __post_init__(self):
        if self.kind == TWO_QUBIT:
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError(f"two-qubit gate needs two distinct qubits, got {self.qubits}")
        elif self.kind in (ONE_QUBIT, MEASURE):
            if len(self.qubits) != 1:
                raise ValueError(f"{self.kind} takes one qubit, got {self.qubits}")

    @property
    def is_two_qubit(self) -> bool:
        return self.kind == TWO_QUBIT


@dataclass(frozen=True)
class Circuit:
    """A gate list over n_qubits wires, executed in list order."""

    n_qubits: int
    gates: tuple[Gate, ...] = ()
    name: str = field(default="circuit", compare=False)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("circuit needs at least one qubit")
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.n_qubits:
                    raise ValueError(f"qubit {q} out of range for n_qubits={self.n_qubits}")

    def two_qubit_gates(self) -> list[Gate]:
        return [g for g in self.gates if g.kind == TWO_QUBIT]

    def depth(self) -> int:
        """Longest qubit-wise dependency chain, counting every gate."""
        level = [0] * self.n_qubits
        for g in self.gates:
            if not g.qubits:
                continue
            start = max(level[q] for q in g.qubits)
            for q in g.qubits:
                level[q] = start + 1
        return max(level, default=0)


def count_two_qubit_gates(c: Circuit) -> int:
    return sum(1 for g in c.gates if g.kind == TWO_QUBIT)


@dataclass(frozen=True)
class RandomCircuitSpec:
    """Layered random circuit parameters.

    Each layer pairs off ~two_qubit_density of the qubits into a random
    matching; every unpaired qubit gets a one-qubit gate so no wire idles.
    """

    n_qubits: int
    depth: int
    two_qubit_density: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if self.n_qubits < 2:
            raise ValueError("random circuits need at least two qubits")
        if self.depth < 1:
            raise ValueError("depth must be positive")
        if not 0.0 <= self.two_qubit_density <= 1.0:
            raise ValueError("two_qubit_density must lie in [0, 1]")


def generate_random_circuit(spec: RandomCircuitSpec) -> Circuit:
    """Deterministic layered random circuit for the given spec."""
    rng = random.Random(spec.seed)
    n = spec.n_qubits
    pairs_per_layer = int(round(spec.two_qubit_density * n / 2))
    pairs_per_layer = min(pairs_per_layer, n // 2)
    gates: list[Gate] = []
    order = list(range(n))
    for _ in range(spec.depth):
        rng.shuffle(order)
        used = 2 * pairs_per_layer
        for i in range(0, used, 2):
            a, b = order[i], order[i + 1]
            gates.append(Gate(TWO_QUBIT, "cx", (a, b)))
        for q in order[used:]:
            gates.append(Gate(ONE_QUBIT, "h", (q,)))
    return Circuit(n, tuple(gates), name=f"rand_q{n}_d{spec.depth}_s{spec.seed}")


class QasmError(ValueError):
    """Raised on unsupported or malformed OpenQASM input."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


_QREG_RE = re.compile(r"^qreg\s+([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(\d+)\s*\]$")
_CREG_RE = re.compile(r"^creg\s+([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(\d+)\s*\]$")
_APP_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*(\(([^)]*)\))?\s*(.*)$")
_OPERAND_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(\d+)\s*\]$")
_MEASURE_RE = re.compile(
    r"^measure\s+([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(\d+)\s*\]\s*->\s*"
    r"([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(\d+)\s*\]$"
)


def _strip_comments(text: str) -> list[tuple[int, str]]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if line:
            out.append((i, line))
    return out


def parse_qasm(text: str, name: str = "circuit") -> Circuit:
    """Parse an OpenQASM 2.0 subset: one qreg, 1q/2q gates, measure, barrier.

    Gate definitions in the source are skipped; applications of unknown names
    are kept as opaque gates classified by operand count. Gates on three or
    more qubits are rejected.
    """
    # join physical lines into ;-terminated statements, tracking line numbers
    statements: list[tuple[int, str]] = []
    buf = ""
    buf_line = 1
    brace_depth = 0
    for lineno, line in _strip_comments(text):
        if not buf:
            buf_line = lineno
        buf += (" " if buf else "") + line
        # gate definition bodies are skipped wholesale
        brace_depth += line.count("{") - line.count("}")
        if brace_depth > 0:
            continue
        if brace_depth == 0 and "{" in buf:
            statements.append((buf_line, buf))
            buf = ""
            continue
        while ";" in buf:
            stmt, buf = buf.split(";", 1)
            stmt = stmt.strip()
            buf = buf.strip()
            if stmt:
                statements.append((buf_line, stmt))
            buf_line = lineno
    if buf.strip():
        raise QasmError("unterminated statement", buf_line)

    qreg: str | None = None
    n_qubits = 0
    cregs: dict[str, int] = {}
    gates: list[Gate] = []

    def parse_operand(tok: str, lineno: int) -> int:
        m = _OPERAND_RE.match(tok.strip())
        if not m:
            raise QasmError(f"expected qubit operand like q[i], got {tok!r}", lineno)
        reg, idx = m.group(1), int(m.group(2))
        if reg != qreg:
            raise QasmError(f"unknown quantum register {reg!r}", lineno)
        if idx >= n_qubits:
            raise QasmError(f"qubit index {idx} out of range", lineno)
        return idx

    for lineno, stmt in statements:
        if stmt.startswith("OPENQASM") or stmt.startswith("include"):
            continue
        if "{" in stmt:  # gate/opaque definition body, ignored
            continue
        if stmt.startswith("opaque"):
            continue
        m = _QREG_RE.match(stmt)
        if m:
            if qreg is not None:
                raise QasmError("only a single qreg is supported", lineno)
            qreg, n_qubits = m.group(1), int(m.group(2))
            if n_qubits < 1:
                raise QasmError("empty quantum register", lineno)
            continue
        m = _CREG_RE.match(stmt)
        if m:
            cregs[m.group(1)] = int(m.group(2))
            continue
        m = _MEASURE_RE.match(stmt)
        if m:
            if qreg is None:
                raise QasmError("measure before qreg", lineno)
            q = parse_operand(f"{m.group(1)}[{m.group(2)}]", lineno)
            if m.group(3) not in cregs:
                raise QasmError(f"unknown classical register {m.group(3)!r}", lineno)
            gates.append(Gate(MEASURE, "measure", (q,), cbit=int(m.group(4))))
            continue
        if qreg is None:
            raise QasmError(f"statement before qreg: {stmt!r}", lineno)
        m = _APP_RE.match(stmt)
        if not m:
            raise QasmError(f"cannot parse statement {stmt!r}", lineno)
        gname, operand_str = m.group(1), m.group(4).strip()
        if gname == "barrier":
            if operand_str:
                qs = tuple(parse_operand(t, lineno) for t in operand_str.split(","))
            else:
                qs = tuple(range(n_qubits))
            gates.append(Gate(BARRIER, "barrier", qs))
            continue
        if not operand_str:
            raise QasmError(f"gate {gname!r} without operands", lineno)
        qs = tuple(parse_operand(t, lineno) for t in operand_str.split(","))
        if len(qs) == 1:
            gates.append(Gate(ONE_QUBIT, gname, qs))
        elif len(qs) == 2:
            if qs[0] == qs[1]:
                raise QasmError("two-qubit gate with repeated operand", lineno)
            gates.append(Gate(TWO_QUBIT, gname, qs))
        else:
            raise QasmError(f"gates on {len(qs)} qubits are not supported", lineno)
    if qreg is None:
        raise QasmError("no qreg declaration found", 1)
    return Circuit(n_qubits, tuple(gates), name=name)


def serialize_qasm(c: Circuit) -> str:
    """Canonical OpenQASM 2.0 text; parse_qasm(serialize_qasm(c)) == c."""
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.n_qubits}];"]
    n_cbits = max((g.cbit for g in c.gates if g.kind == MEASURE), default=-1) + 1
    if n_cbits:
        lines.append(f"creg c[{n_cbits}];")
    for g in c.gates:
        if g.kind == MEASURE:
            lines.append(f"measure q[{g.qubits[0]}] -> c[{g.cbit}];")
        elif g.kind == BARRIER:
            ops = ",".join(f"q[{q}]" for q in g.qubits)
            lines.append(f"barrier {ops};")
        else:
            ops = ",".join(f"q[{q}]" for q in g.qubits)
            lines.append(f"{g.name} {ops};")
    return "\n".join(lines) + "\n"
