"""Mapping cost model: gate and depth overheads plus a product fidelity estimate.

"Before" numbers describe the decomposed source circuit; "after" numbers
describe the hardware-form routed circuit under the chosen SWAP accounting.
Measurements never count toward gates, depth, or fidelity.
"""
from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, GateKind, circuit_depth, gate_count, relabel_circuit
from .device import CouplingGraph
from .exceptions import InvalidArgumentError
from .mapper import MappedCircuit

EVAL_FIELD_NAMES = (
    "gate_overhead_pct",
    "depth_overhead_pct",
    "n_swaps",
    "fidelity_before",
    "fidelity_after",
    "fidelity_decrease_pct",
)


@dataclass(frozen=True)
class EvalReport:
    """Cost summary of one mapping run; field order matches EVAL_FIELD_NAMES."""

    gate_overhead_pct: float
    depth_overhead_pct: float
    n_swaps: int
    fidelity_before: float
    fidelity_after: float
    fidelity_decrease_pct: float

    def as_dict(self) -> dict[str, float | int]:
        return {name: getattr(self, name) for name in EVAL_FIELD_NAMES}


def gate_overhead_pct(before: int, after: int) -> float:
    """100 * (after - before) / before. Zero only when no gates were added."""
    if before < 1:
        raise InvalidArgumentError("gate overhead is undefined for an empty circuit")
    return 100.0 * (after - before) / before


def depth_overhead_pct(before: int, after: int) -> float:
    """100 * (after - before) / before over ASAP depths."""
    if before < 1:
        raise InvalidArgumentError("depth overhead is undefined for depth-0 circuits")
    return 100.0 * (after - before) / before


def estimate_fidelity(c: Circuit, d: CouplingGraph) -> float:
    """Product of per-gate fidelities in program order.

    Single-qubit gates contribute the device's single-qubit fidelity;
    two-qubit gates the coupler fidelity (override-aware); measurements
    contribute nothing. The empty circuit scores 1.0.
    """
    fidelity = 1.0
    for g in c.gates:
        if g.kind is GateKind.MEASURE:
            continue
        if g.is_two_qubit:
            fidelity *= d.two_q_fidelity_for(*g.qubits)
        else:
            fidelity *= d.single_q_fidelity
    return fidelity


def evaluate(m: MappedCircuit, d: CouplingGraph) -> EvalReport:
    """Compare the decomposed source against its routed hardware form.

    The before-side fidelity is computed on the source relabeled by the
    initial placement, so per-coupler fidelity overrides apply consistently on
    both sides. Raises InvalidArgumentError for an empty source circuit.
    """
    before_gates = m.source_gate_count
    if before_gates < 1:
        raise InvalidArgumentError("cannot evaluate a mapping of an empty circuit")
    after_circuit = m.routed_output()
    after_gates = gate_count(after_circuit)
    before_depth = circuit_depth(m.source)
    after_depth = circuit_depth(after_circuit)

    placed_source = relabel_circuit(m.source, m.initial_placement.v2p, d.n_qubits)
    fidelity_before = estimate_fidelity(placed_source, d)
    fidelity_after = estimate_fidelity(after_circuit, d)
    decrease = 100.0 * (fidelity_before - fidelity_after) / fidelity_before

    return EvalReport(
        gate_overhead_pct=gate_overhead_pct(before_gates, after_gates),
        depth_overhead_pct=depth_overhead_pct(before_depth, after_depth),
        n_swaps=m.n_swaps_inserted,
        fidelity_before=fidelity_before,
        fidelity_after=fidelity_after,
        fidelity_decrease_pct=decrease,
    )
