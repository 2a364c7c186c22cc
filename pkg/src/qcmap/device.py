"""Device coupling graphs, gate fidelity parameters, and hop-distance tables.

Devices are undirected graphs over physical qubits. A plain-text file format
(one `key value` pair or `edge u v [fidelity]` per line, `#` comments)
describes real chips; rectangular grids are built directly.
"""
from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Mapping

import numpy as np

from .exceptions import InvalidArgumentError, ParseError, QcmapError, QubitIndexError

DEFAULT_SINGLE_Q_FIDELITY = 0.999
DEFAULT_TWO_Q_FIDELITY = 0.99


class DeviceWarning(UserWarning):
    """Non-fatal irregularity in a device description (e.g. duplicate edge)."""


@dataclass(frozen=True)
class DistanceMatrix:
    """All-pairs hop distances; ``inf`` marks unreachable pairs."""

    hops: np.ndarray

    @property
    def n(self) -> int:
        return self.hops.shape[0]

    def hop(self, a: int, b: int) -> float:
        return float(self.hops[a, b])

    def reachable(self, a: int, b: int) -> bool:
        return bool(np.isfinite(self.hops[a, b]))


def _check_fidelity(value: float, label: str) -> float:
    value = float(value)
    if not 0.0 < value <= 1.0:
        raise InvalidArgumentError(f"{label} must lie in (0, 1], got {value}")
    return value


@dataclass(frozen=True)
class CouplingGraph:
    """Physical qubit connectivity plus per-gate fidelity parameters.

    ``edges`` hold normalized (u, v) pairs with u < v. ``edge_fidelity``
    overrides the uniform two-qubit fidelity for specific couplers.
    ``defaults_used`` records which fidelity values were not given explicitly.
    """

    n_qubits: int
    edges: frozenset[tuple[int, int]]
    single_q_fidelity: float = DEFAULT_SINGLE_Q_FIDELITY
    two_q_fidelity: float = DEFAULT_TWO_Q_FIDELITY
    edge_fidelity: Mapping[tuple[int, int], float] = field(default_factory=dict)
    name: str = "device"
    defaults_used: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidArgumentError("a device needs at least one qubit")
        object.__setattr__(self, "edges", frozenset(self.edges))
        for u, v in self.edges:
            if u >= v:
                raise InvalidArgumentError(f"edge ({u}, {v}) must be ordered u < v")
            if v >= self.n_qubits or u < 0:
                raise QubitIndexError(f"edge ({u}, {v}) outside device of {self.n_qubits} qubits")
        _check_fidelity(self.single_q_fidelity, "single_q_fidelity")
        _check_fidelity(self.two_q_fidelity, "two_q_fidelity")
        for pair, fidelity in self.edge_fidelity.items():
            if pair not in self.edges:
                raise InvalidArgumentError(f"fidelity override for missing edge {pair}")
            _check_fidelity(fidelity, f"fidelity of edge {pair}")

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n_qubits)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(ns)) for ns in adj)

    @cached_property
    def distances(self) -> DistanceMatrix:
        return all_pairs_distance(self)

    def two_q_fidelity_for(self, a: int, b: int) -> float:
        """Fidelity of a two-qubit gate on coupler (a, b), override-aware."""
        key = (min(a, b), max(a, b))
        return self.edge_fidelity.get(key, self.two_q_fidelity)


def are_adjacent(d: CouplingGraph, a: int, b: int) -> bool:
    """True when a and b share a coupler. A qubit is never adjacent to itself."""
    for q in (a, b):
        if not 0 <= q < d.n_qubits:
            raise QubitIndexError(f"qubit {q} outside device of {d.n_qubits} qubits")
    if a == b:
        return False
    return (min(a, b), max(a, b)) in d.edges


def all_pairs_distance(d: CouplingGraph) -> DistanceMatrix:
    """BFS from every node; symmetric, zero diagonal, inf for unreachable."""
    n = d.n_qubits
    hops = np.full((n, n), np.inf)
    for source in range(n):
        hops[source, source] = 0.0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in d.neighbors[u]:
                if not np.isfinite(hops[source, v]):
                    hops[source, v] = hops[source, u] + 1
                    queue.append(v)
    return DistanceMatrix(hops)


def grid_device(
    rows: int,
    cols: int,
    single_q_fidelity: float | None = None,
    two_q_fidelity: float | None = None,
) -> CouplingGraph:
    """Rectangular lattice with nearest-neighbour couplers, row-major numbering."""
    if rows < 1 or cols < 1:
        raise InvalidArgumentError("grid dimensions must be positive")
    edges = set()
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            if c + 1 < cols:
                edges.add((q, q + 1))
            if r + 1 < rows:
                edges.add((q, q + cols))
    defaults = []
    if single_q_fidelity is None:
        single_q_fidelity = DEFAULT_SINGLE_Q_FIDELITY
        defaults.append("single")
    if two_q_fidelity is None:
        two_q_fidelity = DEFAULT_TWO_Q_FIDELITY
        defaults.append("two")
    return CouplingGraph(
        n_qubits=rows * cols,
        edges=frozenset(edges),
        single_q_fidelity=single_q_fidelity,
        two_q_fidelity=two_q_fidelity,
        name=f"grid{rows}x{cols}",
        defaults_used=tuple(defaults),
    )


def parse_device(text: str, name: str = "device") -> CouplingGraph:
    """Parse the device file format; see load_device."""
    n_qubits: int | None = None
    single: float | None = None
    two: float | None = None
    edges: set[tuple[int, int]] = set()
    edge_fidelity: dict[tuple[int, int], float] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        key, args = fields[0], fields[1:]
        try:
            if key == "name":
                if len(args) != 1:
                    raise ParseError("name takes exactly one token", lineno)
                name = args[0]
            elif key == "n_qubits":
                if len(args) != 1:
                    raise ParseError("n_qubits takes exactly one integer", lineno)
                n_qubits = int(args[0])
            elif key == "single_q_fidelity":
                single = float(args[0]) if len(args) == 1 else None
                if single is None:
                    raise ParseError("single_q_fidelity takes exactly one number", lineno)
            elif key == "two_q_fidelity":
                two = float(args[0]) if len(args) == 1 else None
                if two is None:
                    raise ParseError("two_q_fidelity takes exactly one number", lineno)
            elif key == "edge":
                if len(args) not in (2, 3):
                    raise ParseError("edge takes two qubits and an optional fidelity", lineno)
                if n_qubits is None:
                    raise ParseError("n_qubits must be declared before edges", lineno)
                u, v = int(args[0]), int(args[1])
                if u == v:
                    raise InvalidArgumentError(f"self-loop on qubit {u} (line {lineno})")
                if not (0 <= u < n_qubits and 0 <= v < n_qubits):
                    raise QubitIndexError(
                        f"edge ({u}, {v}) outside device of {n_qubits} qubits", lineno
                    )
                pair = (min(u, v), max(u, v))
                if pair in edges:
                    warnings.warn(
                        f"duplicate edge {pair} on line {lineno}; keeping one",
                        DeviceWarning,
                        stacklevel=2,
                    )
                edges.add(pair)
                if len(args) == 3:
                    edge_fidelity[pair] = float(args[2])
            else:
                raise ParseError(f"unknown directive '{key}'", lineno)
        except QcmapError:
            raise
        except ValueError as exc:
            raise ParseError(f"bad value in '{line}': {exc}", lineno) from None

    if n_qubits is None:
        raise ParseError("device file never declares n_qubits", len(text.splitlines()) or 1)

    defaults = []
    if single is None:
        single = DEFAULT_SINGLE_Q_FIDELITY
        defaults.append("single")
    if two is None:
        two = DEFAULT_TWO_Q_FIDELITY
        defaults.append("two")
    return CouplingGraph(
        n_qubits=n_qubits,
        edges=frozenset(edges),
        single_q_fidelity=single,
        two_q_fidelity=two,
        edge_fidelity=edge_fidelity,
        name=name,
        defaults_used=tuple(defaults),
    )


def load_device(path: str | Path) -> CouplingGraph:
    """Read a device file.

    Format, one directive per line:

        name <identifier>              optional
        n_qubits <N>                   required, before any edge
        single_q_fidelity <f>          optional, default 0.999
        two_q_fidelity <f>             optional, default 0.99
        edge <u> <v> [<fidelity>]      repeated; undirected, duplicate warns

    ``#`` starts a comment.
    """
    path = Path(path)
    return parse_device(path.read_text(), name=path.stem)


def device_text(d: CouplingGraph) -> str:
    """Serialize a device so that load_device reproduces the same graph."""
    lines = [
        f"name {d.name}",
        f"n_qubits {d.n_qubits}",
        f"single_q_fidelity {d.single_q_fidelity!r}",
        f"two_q_fidelity {d.two_q_fidelity!r}",
    ]
    for u, v in sorted(d.edges):
        override = d.edge_fidelity.get((u, v))
        if override is None:
            lines.append(f"edge {u} {v}")
        else:
            lines.append(f"edge {u} {v} {override!r}")
    return "\n".join(lines) + "\n"


def save_device(d: CouplingGraph, path: str | Path) -> None:
    Path(path).write_text(device_text(d))
