"""Connectivity-aware quantum circuit mapping and interaction-graph profiling."""
from .circuit import (
    Circuit,
    Gate,
    GateKind,
    circuit_depth,
    emit_qasm,
    generate_random_circuit,
    load_qasm,
    parse_qasm,
    relabel_circuit,
    two_qubit_fraction,
)
from .device import (
    CouplingGraph,
    DistanceMatrix,
    all_pairs_distance,
    are_adjacent,
    grid_device,
    load_device,
    save_device,
)
from .estimators import (
    CircuitMapper,
    CorrelationFeatureReducer,
    InteractionGraphFeaturizer,
)
from .evaluator import EvalReport, estimate_fidelity, evaluate
from .exceptions import (
    CapacityError,
    CorpusError,
    DegenerateInputError,
    InvalidArgumentError,
    ParseError,
    QcmapError,
    QubitIndexError,
    RoutingError,
    UnknownMetricError,
    UnsupportedError,
)
from .interaction_graph import (
    METRIC_NAMES,
    InteractionGraph,
    MetricVector,
    build_interaction_graph,
    metric_vector,
)
from .mapper import (
    DEFAULT_PRIMITIVES,
    MappedCircuit,
    MapperOptions,
    Placement,
    Schedule,
    decompose,
    degree_placement,
    map_circuit,
    route,
    schedule_asap,
    trivial_placement,
)
from .profiler import (
    BenchmarkRecord,
    CorpusResult,
    CorrelationMatrix,
    export_csv,
    pearson,
    pearson_matrix,
    reduce_features,
    run_corpus,
    scatter_data,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkRecord",
    "CapacityError",
    "Circuit",
    "CircuitMapper",
    "CorpusError",
    "CorpusResult",
    "CorrelationFeatureReducer",
    "CorrelationMatrix",
    "CouplingGraph",
    "DEFAULT_PRIMITIVES",
    "DegenerateInputError",
    "DistanceMatrix",
    "EvalReport",
    "Gate",
    "GateKind",
    "InteractionGraph",
    "InteractionGraphFeaturizer",
    "InvalidArgumentError",
    "METRIC_NAMES",
    "MappedCircuit",
    "MapperOptions",
    "MetricVector",
    "ParseError",
    "Placement",
    "QcmapError",
    "QubitIndexError",
    "RoutingError",
    "Schedule",
    "UnknownMetricError",
    "UnsupportedError",
    "all_pairs_distance",
    "are_adjacent",
    "build_interaction_graph",
    "circuit_depth",
    "decompose",
    "degree_placement",
    "emit_qasm",
    "estimate_fidelity",
    "evaluate",
    "export_csv",
    "generate_random_circuit",
    "grid_device",
    "load_device",
    "load_qasm",
    "map_circuit",
    "metric_vector",
    "parse_qasm",
    "pearson",
    "pearson_matrix",
    "reduce_features",
    "relabel_circuit",
    "route",
    "run_corpus",
    "save_device",
    "scatter_data",
    "schedule_asap",
    "trivial_placement",
    "two_qubit_fraction",
]
