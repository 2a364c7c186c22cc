"""Corpus profiling: per-circuit records, Pearson correlations, feature reduction.

A corpus item is either a path to a QASM file or an in-memory Circuit. Each
item that parses and maps becomes one BenchmarkRecord holding the full metric
vector plus the mapping cost report; items that fail are collected with their
reason instead of being dropped silently. All numeric serialization goes
through 12-significant-digit formatting so reruns are byte identical.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .circuit import Circuit, load_qasm
from .device import CouplingGraph
from .evaluator import EVAL_FIELD_NAMES, evaluate
from .exceptions import (
    CapacityError,
    CorpusError,
    DegenerateInputError,
    InvalidArgumentError,
    ParseError,
    QubitIndexError,
    RoutingError,
    UnknownMetricError,
    UnsupportedError,
)
from .interaction_graph import GRAPH_METRIC_NAMES, METRIC_NAMES, metric_vector
from .mapper import MapperOptions, map_circuit

PROVENANCE_COLUMNS = ("name", "origin", "device", "options")
NUMERIC_COLUMNS = METRIC_NAMES + EVAL_FIELD_NAMES
CSV_COLUMNS = NUMERIC_COLUMNS + PROVENANCE_COLUMNS

#: Greedy reduction scans graph metrics in this order, so the four
#: headline statistics are retained first and later metrics must earn
#: their place against them.
REDUCTION_ORDER = (
    "avg_shortest_path_hop",
    "max_degree",
    "min_degree",
    "adjacency_std_dev",
) + tuple(
    name
    for name in GRAPH_METRIC_NAMES
    if name not in ("avg_shortest_path_hop", "max_degree", "min_degree", "adjacency_std_dev")
)

_NA = "NA"


def format_number(value: float | int | None) -> str:
    """12-significant-digit text form; None and NaN serialize as NA."""
    if value is None:
        return _NA
    if isinstance(value, bool):
        raise InvalidArgumentError("boolean is not a numeric cell")
    if isinstance(value, int):
        return str(value)
    if math.isnan(value):
        return _NA
    return format(value, ".12g")


@dataclass(frozen=True)
class BenchmarkRecord:
    """One profiled circuit: provenance plus every numeric column."""

    name: str
    origin: str
    device: str
    options: str
    values: dict[str, float | int | None]

    def get(self, column: str) -> float | int | str | None:
        if column in PROVENANCE_COLUMNS:
            return getattr(self, column)
        if column in self.values:
            return self.values[column]
        raise UnknownMetricError(column)


@dataclass(frozen=True)
class SkippedInput:
    source: str
    reason: str


@dataclass(frozen=True)
class CorpusResult:
    records: tuple[BenchmarkRecord, ...]
    skipped: tuple[SkippedInput, ...]


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric Pearson matrix with NaN for undefined cells.

    ``counts[i, j]`` is the number of complete (non-NA) pairs that fed the
    correlation of columns i and j.
    """

    names: tuple[str, ...]
    values: np.ndarray
    counts: np.ndarray

    def value(self, a: str, b: str) -> float:
        i, j = self.names.index(a), self.names.index(b)
        return float(self.values[i, j])


def _synthetic_header(text: str) -> bool:
    for line in text.splitlines()[:12]:
        if line.strip() == "// origin: synthetic":
            return True
    return False


def _profile_one(
    item: str | Path | Circuit, device: CouplingGraph, options: MapperOptions
) -> tuple[str, BenchmarkRecord | SkippedInput]:
    if isinstance(item, Circuit):
        circuit = item
        name = circuit.name or "circuit"
        origin = "synthetic"
        source = name
    else:
        source = str(item)
        try:
            text = Path(item).read_text()
        except OSError as exc:
            return "skip", SkippedInput(source, f"io: {exc}")
        try:
            circuit = load_qasm(item)
        except (ParseError, QubitIndexError, UnsupportedError, InvalidArgumentError) as exc:
            return "skip", SkippedInput(source, f"{type(exc).__name__}: {exc}")
        name = circuit.name
        origin = "synthetic" if _synthetic_header(text) else "real"

    metrics = metric_vector(circuit)
    try:
        mapped = map_circuit(circuit, device, options)
    except (CapacityError, RoutingError, UnsupportedError, InvalidArgumentError) as exc:
        return "skip", SkippedInput(source, f"{type(exc).__name__}: {exc}")

    values: dict[str, float | int | None] = metrics.as_dict()
    try:
        report = evaluate(mapped, device)
        values.update(report.as_dict())
    except InvalidArgumentError:
        values.update({field: None for field in EVAL_FIELD_NAMES})

    record = BenchmarkRecord(
        name=name,
        origin=origin,
        device=device.name,
        options=options.fingerprint(),
        values=values,
    )
    return "ok", record


def run_corpus(
    items: Sequence[str | Path | Circuit],
    device: CouplingGraph,
    options: MapperOptions | None = None,
    jobs: int = 1,
) -> CorpusResult:
    """Profile every corpus item; results keep input order regardless of jobs.

    Failures are recorded per item. Raises CorpusError only when not a single
    item survives.
    """
    options = options or MapperOptions()
    items = list(items)
    if jobs < 1:
        raise InvalidArgumentError("jobs must be at least 1")
    if jobs == 1 or len(items) < 2:
        outcomes = [_profile_one(item, device, options) for item in items]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(
                pool.map(
                    _profile_one,
                    items,
                    [device] * len(items),
                    [options] * len(items),
                    chunksize=max(1, len(items) // (jobs * 4)),
                )
            )
    records = tuple(payload for tag, payload in outcomes if tag == "ok")
    skipped = tuple(payload for tag, payload in outcomes if tag == "skip")
    if items and not records:
        details = "; ".join(f"{s.source}: {s.reason}" for s in skipped[:5])
        raise CorpusError(f"no corpus item could be profiled ({details})")
    return CorpusResult(records, skipped)


def _complete_pairs(
    x: Iterable[float | int | None], y: Iterable[float | int | None]
) -> tuple[list[float], list[float]]:
    xs: list[float] = []
    ys: list[float] = []
    for a, b in zip(x, y, strict=True):
        if a is None or b is None:
            continue
        a, b = float(a), float(b)
        if math.isnan(a) or math.isnan(b):
            continue
        xs.append(a)
        ys.append(b)
    return xs, ys


def pearson(x: Sequence[float | int | None], y: Sequence[float | int | None]) -> float:
    """Pearson correlation with population moments and pairwise NA removal.

    Raises DegenerateInputError when fewer than 2 complete pairs remain or
    either column is constant.
    """
    xs, ys = _complete_pairs(x, y)
    if len(xs) < 2:
        raise DegenerateInputError(f"need at least 2 complete pairs, got {len(xs)}")
    ax = np.asarray(xs, dtype=np.float64)
    ay = np.asarray(ys, dtype=np.float64)
    dx = ax - ax.mean()
    dy = ay - ay.mean()
    sx = math.sqrt(float((dx * dx).mean()))
    sy = math.sqrt(float((dy * dy).mean()))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateInputError("correlation is undefined for a constant column")
    return float((dx * dy).mean() / (sx * sy))


def pearson_matrix(
    records: Sequence[BenchmarkRecord], names: Sequence[str] | None = None
) -> CorrelationMatrix:
    """Pairwise correlations over record columns; undefined cells become NaN."""
    names = tuple(names) if names is not None else NUMERIC_COLUMNS
    for name in names:
        if name not in NUMERIC_COLUMNS:
            raise UnknownMetricError(name)
    columns = {name: [rec.get(name) for rec in records] for name in names}
    n = len(names)
    values = np.full((n, n), np.nan)
    counts = np.zeros((n, n), dtype=int)
    for i in range(n):
        for j in range(i, n):
            xs, ys = _complete_pairs(columns[names[i]], columns[names[j]])
            counts[i, j] = counts[j, i] = len(xs)
            try:
                r = pearson(columns[names[i]], columns[names[j]])
            except DegenerateInputError:
                continue
            values[i, j] = values[j, i] = r
    return CorrelationMatrix(names, values, counts)


def reduce_features(matrix: CorrelationMatrix, threshold: float = 0.9) -> list[str]:
    """Greedy keep-first scan: keep a column unless it correlates at or above
    ``threshold`` (absolute value) with something already kept.

    Undefined correlations never disqualify a column. Scanning order is the
    order of ``matrix.names``.
    """
    if not 0.0 < threshold <= 1.0:
        raise InvalidArgumentError(f"threshold must lie in (0, 1], got {threshold}")
    kept: list[int] = []
    for i in range(len(matrix.names)):
        redundant = False
        for j in kept:
            r = matrix.values[i, j]
            if not math.isnan(r) and abs(r) >= threshold:
                redundant = True
                break
        if not redundant:
            kept.append(i)
    return [matrix.names[i] for i in kept]


def export_csv(records: Sequence[BenchmarkRecord], path: str | Path) -> None:
    """Write one CSV row per record using the canonical column order."""
    if not records:
        raise InvalidArgumentError("refusing to export an empty record set")
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            row = [format_number(rec.values[name]) for name in NUMERIC_COLUMNS]
            row.extend([rec.name, rec.origin, rec.device, rec.options])
            writer.writerow(row)


def correlation_csv_text(matrix: CorrelationMatrix) -> str:
    """Square CSV: header row of names, one labeled row per metric, NA cells."""
    lines = ["metric," + ",".join(matrix.names)]
    for i, name in enumerate(matrix.names):
        cells = ",".join(format_number(float(v)) for v in matrix.values[i])
        lines.append(f"{name},{cells}")
    return "\n".join(lines) + "\n"


def write_correlation_csv(matrix: CorrelationMatrix, path: str | Path) -> None:
    Path(path).write_text(correlation_csv_text(matrix))


def scatter_data(
    records: Sequence[BenchmarkRecord], x_metric: str, y_metric: str
) -> list[tuple[float, float, str]]:
    """(x, y, origin) triples for plotting; rows with NA in x or y are dropped."""
    for name in (x_metric, y_metric):
        if name not in NUMERIC_COLUMNS:
            raise UnknownMetricError(name)
    rows: list[tuple[float, float, str]] = []
    for rec in records:
        x = rec.values[x_metric]
        y = rec.values[y_metric]
        if x is None or y is None:
            continue
        x, y = float(x), float(y)
        if math.isnan(x) or math.isnan(y):
            continue
        rows.append((x, y, rec.origin))
    return rows


def write_scatter_tsv(
    rows: Sequence[tuple[float, float, str]], x_metric: str, y_metric: str, path: str | Path
) -> None:
    lines = [f"{x_metric}\t{y_metric}\torigin"]
    lines.extend(f"{format_number(x)}\t{format_number(y)}\t{origin}" for x, y, origin in rows)
    Path(path).write_text("\n".join(lines) + "\n")
