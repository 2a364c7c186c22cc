"""Weighted qubit-interaction graphs and the metric suite computed on them.

Every circuit induces an undirected graph: one node per virtual qubit (idle
qubits included), one edge per interacting pair, weighted by how many
two-qubit gates touch that pair. Shortest-path statistics are hop counts and
average only over reachable pairs, so disconnected graphs still profile.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .circuit import (
    Circuit,
    GateKind,
    circuit_depth,
    gate_count,
    two_qubit_fraction,
)
from .exceptions import InvalidArgumentError

#: Canonical metric ordering used by metric vectors, CSV columns, and reports.
GRAPH_METRIC_NAMES = (
    "n_nodes",
    "n_edges",
    "density",
    "min_degree",
    "max_degree",
    "avg_degree",
    "avg_shortest_path_hop",
    "avg_closeness",
    "global_clustering",
    "adjacency_std_dev",
    "edge_weight_std_dev",
    "largest_component_fraction",
)
CIRCUIT_METRIC_NAMES = ("n_gates", "two_q_fraction", "depth")
METRIC_NAMES = GRAPH_METRIC_NAMES + CIRCUIT_METRIC_NAMES


@dataclass(frozen=True)
class InteractionGraph:
    """Undirected weighted graph on nodes 0..n_nodes-1.

    ``weights`` maps normalized pairs (u, v) with u < v to positive integer
    interaction counts. Treat instances as immutable.
    """

    n_nodes: int
    weights: dict[tuple[int, int], int]

    def __post_init__(self):
        if self.n_nodes < 0:
            raise InvalidArgumentError("n_nodes must be non-negative")
        for (u, v), w in self.weights.items():
            if not 0 <= u < v < self.n_nodes:
                raise InvalidArgumentError(f"edge ({u}, {v}) is not normalized or out of range")
            if w < 1:
                raise InvalidArgumentError(f"edge ({u}, {v}) has non-positive weight {w}")

    @property
    def n_edges(self) -> int:
        return len(self.weights)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for u, v in self.weights:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(ns)) for ns in adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(ns) for ns in self.neighbors)

    @cached_property
    def weighted_degrees(self) -> tuple[int, ...]:
        acc = [0] * self.n_nodes
        for (u, v), w in self.weights.items():
            acc[u] += w
            acc[v] += w
        return tuple(acc)

    def weight(self, u: int, v: int) -> int:
        """Interaction count between u and v (0 when they never interact)."""
        if u == v:
            return 0
        return self.weights.get((min(u, v), max(u, v)), 0)

    def edges(self) -> list[tuple[int, int, int]]:
        """Sorted (u, v, weight) triples."""
        return [(u, v, self.weights[(u, v)]) for u, v in sorted(self.weights)]


def build_interaction_graph(c: Circuit) -> InteractionGraph:
    """Accumulate two-qubit gate counts per qubit pair; MEASURE never contributes."""
    weights: dict[tuple[int, int], int] = {}
    for g in c.gates:
        if g.is_two_qubit:
            u, v = sorted(g.qubits)
            weights[(u, v)] = weights.get((u, v), 0) + 1
    return InteractionGraph(c.n_qubits, weights)


def _bfs_distances(g: InteractionGraph, source: int) -> list[int]:
    dist = [-1] * g.n_nodes
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in g.neighbors[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def degree_stats(g: InteractionGraph) -> tuple[int, int, float]:
    """(min, max, mean) of unweighted node degrees."""
    if g.n_nodes < 1:
        raise InvalidArgumentError("degree_stats needs at least one node")
    degrees = g.degrees
    return min(degrees), max(degrees), sum(degrees) / g.n_nodes


def density(g: InteractionGraph) -> float:
    """Edges present over edges possible; 0.0 when fewer than 2 nodes."""
    if g.n_nodes < 2:
        return 0.0
    return g.n_edges / (g.n_nodes * (g.n_nodes - 1) / 2)


def average_shortest_path_hop(g: InteractionGraph) -> float:
    """Mean hop distance over unordered reachable pairs; 0.0 when none exist."""
    total = 0
    pairs = 0
    for u in range(g.n_nodes):
        dist = _bfs_distances(g, u)
        for v in range(u + 1, g.n_nodes):
            if dist[v] > 0:
                total += dist[v]
                pairs += 1
    return total / pairs if pairs else 0.0


def avg_closeness(g: InteractionGraph) -> float:
    """Mean over nodes of (reachable count / summed hop distance).

    Isolated nodes contribute 0, so the statistic is defined for disconnected
    graphs as well.
    """
    if g.n_nodes < 1:
        return 0.0
    acc = 0.0
    for u in range(g.n_nodes):
        dist = _bfs_distances(g, u)
        reachable = [d for d in dist if d > 0]
        if reachable:
            acc += len(reachable) / sum(reachable)
    return acc / g.n_nodes


def global_clustering(g: InteractionGraph) -> float:
    """Transitivity: 3 * triangles / connected triples; 0.0 when no triples."""
    adj = [set(ns) for ns in g.neighbors]
    triangle_ends = sum(len(adj[u] & adj[v]) for u, v in g.weights)
    triangles = triangle_ends // 3
    triples = sum(d * (d - 1) // 2 for d in g.degrees)
    if triples == 0:
        return 0.0
    return 3 * triangles / triples


def adjacency_std_dev(g: InteractionGraph) -> float:
    """Population standard deviation of the n(n-1)/2 upper-triangle weights.

    Absent edges count as weight 0. Undefined (raises) for fewer than 2 nodes.
    """
    if g.n_nodes < 2:
        raise InvalidArgumentError("adjacency_std_dev needs at least 2 nodes")
    m = g.n_nodes * (g.n_nodes - 1) // 2
    s1 = sum(g.weights.values())
    s2 = sum(w * w for w in g.weights.values())
    mean = s1 / m
    variance = max(s2 / m - mean * mean, 0.0)
    return math.sqrt(variance)


def edge_weight_std_dev(g: InteractionGraph) -> float:
    """Population standard deviation over positive edge weights only.

    0.0 when the graph has fewer than 2 edges.
    """
    if g.n_edges < 2:
        return 0.0
    values = list(g.weights.values())
    mean = sum(values) / len(values)
    variance = max(sum(w * w for w in values) / len(values) - mean * mean, 0.0)
    return math.sqrt(variance)


def connected_components(g: InteractionGraph) -> list[list[int]]:
    seen = [False] * g.n_nodes
    components: list[list[int]] = []
    for start in range(g.n_nodes):
        if seen[start]:
            continue
        seen[start] = True
        component = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in g.neighbors[u]:
                if not seen[v]:
                    seen[v] = True
                    component.append(v)
                    queue.append(v)
        components.append(sorted(component))
    return components


def largest_component_fraction(g: InteractionGraph) -> float:
    """Size of the largest connected component over n_nodes (1.0 for one node)."""
    if g.n_nodes < 1:
        return 0.0
    return max(len(c) for c in connected_components(g)) / g.n_nodes


def edge_list_text(g: InteractionGraph) -> str:
    """Plain-text edge list: a node-count line then sorted 'u v weight' lines."""
    lines = [f"nodes {g.n_nodes}"]
    lines.extend(f"{u} {v} {w}" for u, v, w in g.edges())
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class MetricVector:
    """Per-circuit profile row; field order matches METRIC_NAMES.

    ``adjacency_std_dev`` is None for single-qubit circuits, where the
    statistic has no entries to average.
    """

    n_nodes: int
    n_edges: int
    density: float
    min_degree: int
    max_degree: int
    avg_degree: float
    avg_shortest_path_hop: float
    avg_closeness: float
    global_clustering: float
    adjacency_std_dev: float | None
    edge_weight_std_dev: float
    largest_component_fraction: float
    n_gates: int
    two_q_fraction: float
    depth: int

    def as_dict(self) -> dict[str, float | int | None]:
        return {name: getattr(self, name) for name in METRIC_NAMES}

    def as_row(self) -> list[float | int | None]:
        return [getattr(self, name) for name in METRIC_NAMES]


def metric_vector(c: Circuit) -> MetricVector:
    """Full metric profile of one circuit (graph metrics plus size stats)."""
    g = build_interaction_graph(c)
    min_deg, max_deg, avg_deg = degree_stats(g)
    return MetricVector(
        n_nodes=g.n_nodes,
        n_edges=g.n_edges,
        density=density(g),
        min_degree=min_deg,
        max_degree=max_deg,
        avg_degree=avg_deg,
        avg_shortest_path_hop=average_shortest_path_hop(g),
        avg_closeness=avg_closeness(g),
        global_clustering=global_clustering(g),
        adjacency_std_dev=None if g.n_nodes < 2 else adjacency_std_dev(g),
        edge_weight_std_dev=edge_weight_std_dev(g),
        largest_component_fraction=largest_component_fraction(g),
        n_gates=gate_count(c),
        two_q_fraction=two_qubit_fraction(c),
        depth=circuit_depth(c),
    )
