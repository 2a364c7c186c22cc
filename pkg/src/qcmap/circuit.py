"""Circuit IR, QASM 2.0 subset parsing and printing, structural stats, random generation.

The accepted QASM subset is deliberately small: one quantum register, lowercase
gate mnemonics from the supported vocabulary, ``//`` comments, an optional
``OPENQASM 2.0;`` header, and ``measure``. Classical registers are tolerated
and ignored; classical control, barriers, custom gate definitions, and
multi-register programs are rejected. The full grammar is documented in the
README.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from math import pi
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exceptions import (
    InvalidArgumentError,
    ParseError,
    QubitIndexError,
    UnsupportedError,
)


class GateKind(str, Enum):
    """Supported gate vocabulary; each value is the QASM mnemonic."""

    I = "id"
    X = "x"
    Y = "y"
    Z = "z"
    H = "h"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    CX = "cx"
    CZ = "cz"
    SWAP = "swap"
    MEASURE = "measure"


TWO_QUBIT_KINDS = frozenset({GateKind.CX, GateKind.CZ, GateKind.SWAP})
ROTATION_KINDS = frozenset({GateKind.RX, GateKind.RY, GateKind.RZ})

#: Algorithm behind generate_random_circuit, recorded in generated-file metadata.
GENERATOR_ALGORITHM = "numpy PCG64"


@dataclass(frozen=True)
class Gate:
    """One gate application: a kind, an operand tuple, and an optional angle."""

    kind: GateKind
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        arity = 2 if self.kind in TWO_QUBIT_KINDS else 1
        if len(self.qubits) != arity:
            raise InvalidArgumentError(
                f"{self.kind.value} takes {arity} qubit(s), got {len(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise InvalidArgumentError(
                f"duplicate qubit operand in {self.kind.value} gate"
            )
        if any(q < 0 for q in self.qubits):
            raise InvalidArgumentError("qubit indices must be non-negative")
        if (self.angle is not None) != (self.kind in ROTATION_KINDS):
            if self.angle is None:
                raise InvalidArgumentError(f"{self.kind.value} requires an angle")
            raise InvalidArgumentError(f"{self.kind.value} takes no angle")
        if self.angle is not None:
            object.__setattr__(self, "angle", float(self.angle))

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT_KINDS


@dataclass(frozen=True)
class Circuit:
    """Immutable gate list over ``n_qubits`` virtual qubits."""

    n_qubits: int
    gates: tuple[Gate, ...] = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n_qubits < 0:
            raise InvalidArgumentError("n_qubits must be non-negative")
        for g in self.gates:
            if max(g.qubits) >= self.n_qubits:
                raise InvalidArgumentError(
                    f"gate {g.kind.value} touches qubit {max(g.qubits)} "
                    f"but the circuit has {self.n_qubits} qubits"
                )

    def __len__(self) -> int:
        return len(self.gates)


def gate_count(c: Circuit) -> int:
    """Number of gates, MEASURE excluded."""
    return sum(1 for g in c.gates if g.kind is not GateKind.MEASURE)


def two_qubit_gate_count(c: Circuit) -> int:
    return sum(1 for g in c.gates if g.kind in TWO_QUBIT_KINDS)


def two_qubit_fraction(c: Circuit) -> float:
    """Share of two-qubit gates among all gates, MEASURE excluded from both counts.

    Returns 0.0 for a circuit with no gates.
    """
    total = gate_count(c)
    if total == 0:
        return 0.0
    return two_qubit_gate_count(c) / total


def without_measurements(c: Circuit) -> Circuit:
    return Circuit(
        c.n_qubits,
        tuple(g for g in c.gates if g.kind is not GateKind.MEASURE),
        c.name,
    )


def circuit_depth(c: Circuit) -> int:
    """ASAP-schedule length of the circuit with measurements stripped.

    Each gate lands on the earliest cycle after the last gate sharing one of
    its qubits. Empty circuits have depth 0.
    """
    last: dict[int, int] = {}
    depth = 0
    for g in c.gates:
        if g.kind is GateKind.MEASURE:
            continue
        cycle = 1 + max(last.get(q, -1) for q in g.qubits)
        for q in g.qubits:
            last[q] = cycle
        depth = max(depth, cycle + 1)
    return depth


def relabel_circuit(c: Circuit, mapping: Sequence[int], n_qubits: int | None = None) -> Circuit:
    """Rewrite every gate operand ``q`` to ``mapping[q]``.

    ``n_qubits`` defaults to the size of ``mapping``; it must cover the image.
    """
    if len(mapping) < c.n_qubits:
        raise InvalidArgumentError(
            f"mapping covers {len(mapping)} qubits, circuit has {c.n_qubits}"
        )
    size = len(mapping) if n_qubits is None else n_qubits
    gates = tuple(
        Gate(g.kind, tuple(mapping[q] for q in g.qubits), g.angle) for g in c.gates
    )
    return Circuit(size, gates, c.name)


# --- parsing ---------------------------------------------------------------

_QREG_RE = re.compile(r"^qreg\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]$")
_CREG_RE = re.compile(r"^creg\s+[A-Za-z_]\w*\s*\[\s*\d+\s*\]$")
_OPERAND_RE = re.compile(r"^([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]$")
_APPLY_RE = re.compile(r"^([A-Za-z_]\w*)\s*(?:\(([^()]*)\))?\s*(.*)$")
_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)"
_PI_RE = re.compile(rf"^([+-]?)(?:({_NUM})\s*\*\s*)?pi(?:\s*/\s*({_NUM}))?$")

_MNEMONIC_TO_KIND = {k.value: k for k in GateKind}
_MNEMONIC_TO_KIND["i"] = GateKind.I

# Recognized but outside the subset: reported as unsupported, not as unknown.
_THREE_QUBIT_NAMES = frozenset({"ccx", "ccz", "cswap", "c3x", "c4x", "rccx", "rc3x", "mcx"})
_UNSUPPORTED_KEYWORDS = ("barrier", "reset", "gate", "opaque", "if")


def _parse_angle(text: str, line: int) -> float:
    text = text.strip()
    m = _PI_RE.match(text)
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        coefficient = float(m.group(2)) if m.group(2) else 1.0
        divisor = float(m.group(3)) if m.group(3) else 1.0
        if divisor == 0:
            raise ParseError(f"zero divisor in angle '{text}'", line)
        return sign * coefficient * pi / divisor
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"cannot parse angle '{text}'", line) from None


class _ParserState:
    __slots__ = ("reg_name", "reg_size", "saw_header", "gates")

    def __init__(self):
        self.reg_name: str | None = None
        self.reg_size = 0
        self.saw_header = False
        self.gates: list[Gate] = []


def _parse_operand(token: str, state: _ParserState, line: int) -> int:
    m = _OPERAND_RE.match(token.strip())
    if not m:
        raise ParseError(f"malformed operand '{token.strip()}'", line)
    reg, idx = m.group(1), int(m.group(2))
    if reg != state.reg_name:
        raise ParseError(f"unknown register '{reg}'", line)
    if idx >= state.reg_size:
        raise QubitIndexError(
            f"qubit index {idx} out of range for register of size {state.reg_size}",
            line,
        )
    return idx


def _parse_statement(stmt: str, state: _ParserState, line: int) -> None:
    lowered = stmt.lower()

    if lowered.startswith("openqasm"):
        if state.saw_header or state.reg_name is not None or state.gates:
            raise ParseError("misplaced OPENQASM header", line)
        version = stmt[len("openqasm"):].strip()
        if version != "2.0":
            raise UnsupportedError(f"only OPENQASM 2.0 is supported, got '{version}'", line)
        state.saw_header = True
        return

    if lowered.startswith("include"):
        target = stmt[len("include"):].strip()
        if target == '"qelib1.inc"':
            return  # standard header; everything it defines that we accept is built in
        raise UnsupportedError(f"include {target} is not supported", line)

    for keyword in _UNSUPPORTED_KEYWORDS:
        if lowered == keyword or lowered.startswith(keyword + " ") or lowered.startswith(keyword + "("):
            raise UnsupportedError(f"'{keyword}' statements are not supported", line)

    m = _QREG_RE.match(stmt)
    if m:
        if state.reg_name is not None:
            raise UnsupportedError("multiple quantum registers are not supported", line)
        size = int(m.group(2))
        if size < 1:
            raise ParseError("quantum register must hold at least one qubit", line)
        state.reg_name = m.group(1)
        state.reg_size = size
        return

    if _CREG_RE.match(stmt):
        return  # classical registers carry no information we track

    m = _APPLY_RE.match(stmt)
    if not m:
        raise ParseError(f"malformed statement '{stmt}'", line)
    mnemonic, params, operand_text = m.group(1).lower(), m.group(2), m.group(3)

    if mnemonic in _THREE_QUBIT_NAMES:
        raise UnsupportedError(f"gate '{mnemonic}' needs 3 or more qubits", line)
    kind = _MNEMONIC_TO_KIND.get(mnemonic)
    if kind is None:
        raise ParseError(f"unknown gate '{mnemonic}'", line)
    if state.reg_name is None:
        raise ParseError("missing qreg declaration before first statement", line)

    if kind is GateKind.MEASURE and "->" in operand_text:
        operand_text, _, classical = operand_text.partition("->")
        if not _OPERAND_RE.match(classical.strip()):
            raise ParseError(f"malformed measure target '{classical.strip()}'", line)

    operand_text = operand_text.strip()
    if not operand_text:
        raise ParseError(f"'{mnemonic}' is missing its operands", line)

    angle: float | None = None
    if kind in ROTATION_KINDS:
        if params is None:
            raise ParseError(f"'{mnemonic}' requires one angle parameter", line)
        angle = _parse_angle(params, line)
    elif params is not None:
        raise ParseError(f"'{mnemonic}' takes no parameters", line)

    qubits = tuple(_parse_operand(tok, state, line) for tok in operand_text.split(","))
    try:
        state.gates.append(Gate(kind, qubits, angle))
    except InvalidArgumentError as exc:
        raise ParseError(str(exc), line) from None


def parse_qasm(text: str, name: str = "") -> Circuit:
    """Parse the supported QASM 2.0 subset into a Circuit.

    Raises ParseError (malformed input), QubitIndexError (operand out of
    range), or UnsupportedError (well-formed but outside the subset). Error
    messages carry 1-based line numbers.
    """
    state = _ParserState()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        for stmt in line.split(";"):
            stmt = stmt.strip()
            if stmt:
                _parse_statement(stmt, state, lineno)
    if state.reg_name is None:
        raise ParseError("no quantum register declared", len(text.splitlines()) or 1)
    return Circuit(state.reg_size, tuple(state.gates), name)


def load_qasm(path: str | Path) -> Circuit:
    path = Path(path)
    return parse_qasm(path.read_text(), name=path.stem)


def emit_qasm(c: Circuit) -> str:
    """Print a circuit in the same subset parse_qasm accepts.

    Angles are printed with repr so that parse(emit(c)) reproduces every gate
    bit for bit.
    """
    lines = ["OPENQASM 2.0;", f"qreg q[{c.n_qubits}];"]
    for g in c.gates:
        operands = ",".join(f"q[{q}]" for q in g.qubits)
        if g.angle is not None:
            lines.append(f"{g.kind.value}({g.angle!r}) {operands};")
        else:
            lines.append(f"{g.kind.value} {operands};")
    return "\n".join(lines) + "\n"


def save_qasm(c: Circuit, path: str | Path, header_comments: Iterable[str] = ()) -> None:
    """Write emit_qasm output to ``path``, preceded by ``//`` comment lines."""
    prefix = "".join(f"// {comment}\n" for comment in header_comments)
    Path(path).write_text(prefix + emit_qasm(c))


# --- generation -------------------------------------------------------------

_TWO_Q_CHOICES = (GateKind.CX, GateKind.CZ)
_ONE_Q_CHOICES = (GateKind.X, GateKind.Y, GateKind.Z, GateKind.H, GateKind.S, GateKind.T)


def generate_random_circuit(
    n_qubits: int, n_gates: int, two_q_fraction: float, seed: int
) -> Circuit:
    """Seeded random circuit with round(two_q_fraction * n_gates) two-qubit gates.

    Two-qubit kinds are drawn uniformly from {CX, CZ} on ordered qubit pairs
    sampled without replacement; single-qubit kinds uniformly from
    {X, Y, Z, H, S, T}. Gate positions are shuffled. The PCG64 stream makes
    equal arguments produce identical circuits on every run.
    """
    if not 0.0 <= two_q_fraction <= 1.0:
        raise InvalidArgumentError("two_q_fraction must lie in [0, 1]")
    if n_qubits < 1:
        raise InvalidArgumentError("n_qubits must be at least 1")
    if n_gates < 0:
        raise InvalidArgumentError("n_gates must be non-negative")
    if two_q_fraction > 0 and n_qubits < 2:
        raise InvalidArgumentError(
            "two-qubit gates require at least 2 qubits"
        )

    n_two = round(two_q_fraction * n_gates)
    rng = np.random.default_rng(seed)
    gates: list[Gate] = []
    for _ in range(n_two):
        kind = _TWO_Q_CHOICES[int(rng.integers(len(_TWO_Q_CHOICES)))]
        pair = rng.choice(n_qubits, size=2, replace=False)
        gates.append(Gate(kind, (int(pair[0]), int(pair[1]))))
    for _ in range(n_gates - n_two):
        kind = _ONE_Q_CHOICES[int(rng.integers(len(_ONE_Q_CHOICES)))]
        gates.append(Gate(kind, (int(rng.integers(n_qubits)),)))
    order = rng.permutation(n_gates)
    shuffled = tuple(gates[i] for i in order)
    name = f"random-{n_qubits}q-{n_gates}g-{two_q_fraction:g}f-s{seed}"
    return Circuit(n_qubits, shuffled, name)
