"""Mapping pipeline: decompose, place, route with SWAP insertion, schedule.

Routing is greedy and deterministic: for each two-qubit gate whose operands
are not adjacent, the first operand's qubit walks along the lexicographically
smallest shortest hop path toward the second until they meet, one SWAP per
hop. Inserted SWAPs are kept as SWAP gates in the canonical routed circuit;
``routed_output`` expands them to 3 CNOTs under the ``cnot3`` accounting mode.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import Circuit, Gate, GateKind, circuit_depth, gate_count
from .device import CouplingGraph
from .exceptions import (
    CapacityError,
    InvalidArgumentError,
    RoutingError,
    UnsupportedError,
)
from .interaction_graph import build_interaction_graph

#: Gate kinds a target is assumed to run natively unless told otherwise.
DEFAULT_PRIMITIVES = frozenset(
    {
        GateKind.X,
        GateKind.Y,
        GateKind.Z,
        GateKind.H,
        GateKind.S,
        GateKind.SDG,
        GateKind.T,
        GateKind.TDG,
        GateKind.RX,
        GateKind.RY,
        GateKind.RZ,
        GateKind.CX,
        GateKind.MEASURE,
    }
)

SWAP_ACCOUNTING_MODES = ("swap1", "cnot3")
PLACEMENT_STRATEGIES = ("trivial", "degree")


@dataclass(frozen=True)
class Placement:
    """Injective virtual-to-physical assignment; index = virtual qubit."""

    v2p: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "v2p", tuple(int(p) for p in self.v2p))
        if len(set(self.v2p)) != len(self.v2p):
            raise InvalidArgumentError("placement maps two virtual qubits to one physical qubit")
        if any(p < 0 for p in self.v2p):
            raise InvalidArgumentError("physical indices must be non-negative")

    @property
    def n_virtual(self) -> int:
        return len(self.v2p)

    def physical(self, v: int) -> int:
        return self.v2p[v]

    def inverse(self) -> dict[int, int]:
        """physical -> virtual, defined only where a virtual qubit sits."""
        return {p: v for v, p in enumerate(self.v2p)}


@dataclass(frozen=True)
class Schedule:
    """ASAP cycle assignment; ``cycles[i]`` is the cycle of gate i."""

    cycles: tuple[int, ...]
    depth: int


@dataclass(frozen=True)
class MapperOptions:
    """Knobs for map_circuit; the CLI mirrors these one to one."""

    placement: str = "trivial"
    swap_accounting: str = "swap1"
    primitives: frozenset[GateKind] = DEFAULT_PRIMITIVES

    def __post_init__(self):
        if self.placement not in PLACEMENT_STRATEGIES:
            raise InvalidArgumentError(
                f"placement must be one of {PLACEMENT_STRATEGIES}, got '{self.placement}'"
            )
        if self.swap_accounting not in SWAP_ACCOUNTING_MODES:
            raise InvalidArgumentError(
                f"swap_accounting must be one of {SWAP_ACCOUNTING_MODES}, got '{self.swap_accounting}'"
            )
        object.__setattr__(self, "primitives", frozenset(self.primitives))

    def fingerprint(self) -> str:
        names = ",".join(sorted(k.value for k in self.primitives))
        return f"placement={self.placement};swap={self.swap_accounting};primitives={names}"


@dataclass(frozen=True)
class MappedCircuit:
    """Routing result tying the decomposed source to its hardware form.

    ``routed`` lives on physical qubit indices and keeps inserted SWAPs as
    SWAP gates; ``inserted`` flags them gate by gate. ``source`` is the
    decomposed input on virtual indices.
    """

    source: Circuit
    routed: Circuit
    initial_placement: Placement
    final_placement: Placement
    n_swaps_inserted: int
    source_gate_count: int
    inserted: tuple[bool, ...]
    swap_accounting: str = "swap1"

    def routed_output(self) -> Circuit:
        """Hardware-form circuit under the chosen SWAP accounting.

        Under ``cnot3`` every router-inserted SWAP becomes the 3-CNOT ladder;
        SWAPs that were already in the source pass through untouched.
        """
        if self.swap_accounting == "swap1":
            return self.routed
        gates: list[Gate] = []
        for g, was_inserted in zip(self.routed.gates, self.inserted):
            if was_inserted:
                a, b = g.qubits
                gates.append(Gate(GateKind.CX, (a, b)))
                gates.append(Gate(GateKind.CX, (b, a)))
                gates.append(Gate(GateKind.CX, (a, b)))
            else:
                gates.append(g)
        return Circuit(self.routed.n_qubits, tuple(gates), self.routed.name)

    @property
    def depth_before(self) -> int:
        return circuit_depth(self.source)

    @property
    def depth_after(self) -> int:
        return circuit_depth(self.routed_output())


def decompose(c: Circuit, primitives: frozenset[GateKind] = DEFAULT_PRIMITIVES) -> Circuit:
    """Rewrite non-primitive gates into the primitive set.

    Known rewrites: SWAP(a,b) -> CX(a,b) CX(b,a) CX(a,b), and
    CZ(a,b) -> H(b) CX(a,b) H(b) when H is primitive. Anything else without a
    rule raises UnsupportedError. CX must be primitive.
    """
    primitives = frozenset(primitives)
    if GateKind.CX not in primitives:
        raise InvalidArgumentError("the primitive set must contain cx")
    gates: list[Gate] = []
    for g in c.gates:
        if g.kind in primitives:
            gates.append(g)
        elif g.kind is GateKind.SWAP:
            a, b = g.qubits
            gates.extend(
                (Gate(GateKind.CX, (a, b)), Gate(GateKind.CX, (b, a)), Gate(GateKind.CX, (a, b)))
            )
        elif g.kind is GateKind.CZ and GateKind.H in primitives:
            a, b = g.qubits
            gates.extend((Gate(GateKind.H, (b,)), Gate(GateKind.CX, (a, b)), Gate(GateKind.H, (b,))))
        else:
            raise UnsupportedError(
                f"no decomposition of {g.kind.value} into the given primitive set"
            )
    return Circuit(c.n_qubits, tuple(gates), c.name)


def trivial_placement(c: Circuit, d: CouplingGraph) -> Placement:
    """Virtual qubit i sits on physical qubit i."""
    if c.n_qubits > d.n_qubits:
        raise CapacityError(
            f"circuit needs {c.n_qubits} qubits, device has {d.n_qubits}"
        )
    return Placement(tuple(range(c.n_qubits)))


def degree_placement(c: Circuit, d: CouplingGraph) -> Placement:
    """Busiest virtual qubits land on the best-connected physical qubits.

    Virtual qubits are ranked by weighted interaction degree, physical qubits
    by coupler count; ties break toward the smaller index on both sides, so
    an edgeless circuit on a degree-uniform device places identically.
    """
    if c.n_qubits > d.n_qubits:
        raise CapacityError(
            f"circuit needs {c.n_qubits} qubits, device has {d.n_qubits}"
        )
    g = build_interaction_graph(c)
    virtual_order = sorted(range(c.n_qubits), key=lambda v: (-g.weighted_degrees[v], v))
    physical_order = sorted(range(d.n_qubits), key=lambda p: (-len(d.neighbors[p]), p))
    v2p = [0] * c.n_qubits
    for rank, v in enumerate(virtual_order):
        v2p[v] = physical_order[rank]
    return Placement(tuple(v2p))


def schedule_asap(c: Circuit) -> Schedule:
    """Earliest-possible cycle per gate; gates sharing a qubit never share a cycle."""
    last: dict[int, int] = {}
    cycles: list[int] = []
    for g in c.gates:
        cycle = 1 + max(last.get(q, -1) for q in g.qubits)
        for q in g.qubits:
            last[q] = cycle
        cycles.append(cycle)
    depth = max(cycles) + 1 if cycles else 0
    return Schedule(tuple(cycles), depth)


def route(
    c: Circuit,
    d: CouplingGraph,
    placement: Placement,
    swap_accounting: str = "swap1",
) -> MappedCircuit:
    """Make every two-qubit gate nearest-neighbour by inserting SWAPs.

    Works gate by gate in program order. Only the first operand's qubit
    moves; each hop goes to the smallest-index neighbour that stays on a
    shortest path to the second operand, so equal-length routes resolve
    deterministically. Raises RoutingError when operands sit in different
    connectivity components.
    """
    if swap_accounting not in SWAP_ACCOUNTING_MODES:
        raise InvalidArgumentError(
            f"swap_accounting must be one of {SWAP_ACCOUNTING_MODES}, got '{swap_accounting}'"
        )
    if c.n_qubits > d.n_qubits:
        raise CapacityError(f"circuit needs {c.n_qubits} qubits, device has {d.n_qubits}")
    if placement.n_virtual != c.n_qubits:
        raise InvalidArgumentError(
            f"placement covers {placement.n_virtual} qubits, circuit has {c.n_qubits}"
        )
    for p in placement.v2p:
        if p >= d.n_qubits:
            raise InvalidArgumentError(f"placement targets qubit {p} outside the device")

    dist = d.distances.hops
    position = list(placement.v2p)  # virtual -> physical, updated by SWAPs
    occupant = {p: v for v, p in enumerate(position)}  # physical -> virtual
    out_gates: list[Gate] = []
    inserted: list[bool] = []
    n_swaps = 0

    for g in c.gates:
        if len(g.qubits) == 1:
            out_gates.append(Gate(g.kind, (position[g.qubits[0]],), g.angle))
            inserted.append(False)
            continue

        u, v = g.qubits
        target = position[v]
        if not math.isfinite(dist[position[u], target]):
            raise RoutingError(
                f"qubits {position[u]} and {target} are not connected on {d.name}"
            )
        while dist[position[u], target] > 1:
            here = position[u]
            step = min(
                n for n in d.neighbors[here] if dist[n, target] == dist[here, target] - 1
            )
            out_gates.append(Gate(GateKind.SWAP, (here, step)))
            inserted.append(True)
            n_swaps += 1
            displaced = occupant.get(step)
            occupant[step] = u
            position[u] = step
            if displaced is None:
                del occupant[here]
            else:
                occupant[here] = displaced
                position[displaced] = here
        out_gates.append(Gate(g.kind, (position[u], position[v]), g.angle))
        inserted.append(False)

    routed = Circuit(d.n_qubits, tuple(out_gates), c.name)
    return MappedCircuit(
        source=c,
        routed=routed,
        initial_placement=placement,
        final_placement=Placement(tuple(position)),
        n_swaps_inserted=n_swaps,
        source_gate_count=gate_count(c),
        inserted=tuple(inserted),
        swap_accounting=swap_accounting,
    )


def map_circuit(
    c: Circuit, d: CouplingGraph, options: MapperOptions | None = None
) -> MappedCircuit:
    """Full pipeline: decompose, place, route. Deterministic for equal inputs."""
    options = options or MapperOptions()
    decomposed = decompose(c, options.primitives)
    if options.placement == "trivial":
        placement = trivial_placement(decomposed, d)
    else:
        placement = degree_placement(decomposed, d)
    return route(decomposed, d, placement, swap_accounting=options.swap_accounting)
