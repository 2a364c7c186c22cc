import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcmap.circuit import Circuit, Gate, GateKind, generate_random_circuit
from qcmap.device import grid_device, load_device
from qcmap.exceptions import (
    CorpusError,
    DegenerateInputError,
    InvalidArgumentError,
    UnknownMetricError,
)
from qcmap.interaction_graph import GRAPH_METRIC_NAMES, METRIC_NAMES
from qcmap.evaluator import EVAL_FIELD_NAMES
from qcmap.mapper import MapperOptions
from qcmap.profiler import (
    CSV_COLUMNS,
    NUMERIC_COLUMNS,
    PROVENANCE_COLUMNS,
    REDUCTION_ORDER,
    BenchmarkRecord,
    CorrelationMatrix,
    correlation_csv_text,
    export_csv,
    format_number,
    pearson,
    pearson_matrix,
    reduce_features,
    run_corpus,
    scatter_data,
    write_scatter_tsv,
)

import oracles


# --- formatting --------------------------------------------------------------------


def test_format_number_basics():
    assert format_number(None) == "NA"
    assert format_number(float("nan")) == "NA"
    assert format_number(3) == "3"
    assert format_number(0.1) == "0.1"
    assert format_number(50.0) == "50"
    assert format_number(1 / 3) == "0.333333333333"
    assert format_number(1.5e-3) == "0.0015"
    assert format_number(-2.5) == "-2.5"


def test_format_number_rejects_bool():
    with pytest.raises(InvalidArgumentError):
        format_number(True)


# --- record access -----------------------------------------------------------------


def _record(name="a", **overrides):
    values = {col: 1.0 for col in NUMERIC_COLUMNS}
    values.update(overrides)
    return BenchmarkRecord(name=name, origin="real", device="d", options="o", values=values)


def test_record_get():
    rec = _record(n_gates=7)
    assert rec.get("n_gates") == 7
    assert rec.get("name") == "a"
    assert rec.get("origin") == "real"
    with pytest.raises(UnknownMetricError):
        rec.get("sharpness")


def test_column_layout():
    assert CSV_COLUMNS == NUMERIC_COLUMNS + PROVENANCE_COLUMNS
    assert NUMERIC_COLUMNS == METRIC_NAMES + EVAL_FIELD_NAMES
    assert len(CSV_COLUMNS) == 25


def test_reduction_order_covers_graph_metrics():
    assert REDUCTION_ORDER[:4] == (
        "avg_shortest_path_hop",
        "max_degree",
        "min_degree",
        "adjacency_std_dev",
    )
    assert sorted(REDUCTION_ORDER) == sorted(GRAPH_METRIC_NAMES)


# --- corpus runs -------------------------------------------------------------------


def test_run_corpus_shipped_files(corpus_dir):
    paths = sorted(corpus_dir.glob("*.qasm"))
    device = grid_device(4, 4, )
    result = run_corpus(paths, device)
    assert len(result.records) == len(paths)
    assert result.skipped == ()
    assert [r.name for r in result.records] == [p.stem for p in paths]
    by_name = {r.name: r for r in result.records}
    assert by_name["dense8"].origin == "synthetic"
    assert by_name["sparse12"].origin == "synthetic"
    assert by_name["bell"].origin == "real"
    assert all(r.device == device.name for r in result.records)
    assert all(r.options == MapperOptions().fingerprint() for r in result.records)


def test_run_corpus_accepts_circuit_objects():
    c = generate_random_circuit(4, 10, 0.5, seed=1)
    result = run_corpus([c], grid_device(2, 2))
    assert len(result.records) == 1
    rec = result.records[0]
    assert rec.origin == "synthetic"
    assert rec.name == c.name
    assert rec.values["n_gates"] == 10


def test_run_corpus_records_skips(tmp_path, corpus_dir):
    bad = tmp_path / "bad.qasm"
    bad.write_text("qreg q[2];\nccx q[0],q[1],q[1];\n")
    missing = tmp_path / "nope.qasm"
    big = generate_random_circuit(9, 12, 0.5, seed=2)  # too wide for 2x2
    result = run_corpus(
        [corpus_dir / "bell.qasm", bad, missing, big], grid_device(2, 2)
    )
    assert len(result.records) == 1
    assert result.records[0].name == "bell"
    assert len(result.skipped) == 3
    reasons = {s.source.rsplit("/", 1)[-1]: s.reason for s in result.skipped}
    assert "UnsupportedError" in reasons["bad.qasm"]
    assert reasons["nope.qasm"].startswith("io:")
    assert "CapacityError" in reasons[big.name]


def test_run_corpus_eval_na_for_measure_only_circuit():
    c = Circuit(2, (Gate(GateKind.MEASURE, (0,)),), name="mo")
    result = run_corpus([c], grid_device(2, 2))
    rec = result.records[0]
    assert all(rec.values[f] is None for f in EVAL_FIELD_NAMES)
    assert rec.values["n_gates"] == 0


def test_run_corpus_all_fail_raises(tmp_path):
    bad = tmp_path / "x.qasm"
    bad.write_text("nonsense\n")
    with pytest.raises(CorpusError):
        run_corpus([bad], grid_device(2, 2))


def test_run_corpus_empty_input_is_empty_result():
    result = run_corpus([], grid_device(2, 2))
    assert result.records == ()
    assert result.skipped == ()


def test_run_corpus_rejects_bad_jobs():
    with pytest.raises(InvalidArgumentError):
        run_corpus([], grid_device(2, 2), jobs=0)


def test_run_corpus_parallel_matches_serial(corpus_dir):
    paths = sorted(corpus_dir.glob("*.qasm"))
    device = grid_device(4, 4)
    serial = run_corpus(paths, device, jobs=1)
    parallel = run_corpus(paths, device, jobs=2)
    assert serial == parallel


def test_run_corpus_per_edge_device_fidelity(devices_dir, corpus_dir):
    device = load_device(devices_dir / "surface17.device")
    result = run_corpus([corpus_dir / "ghz4.qasm"], device)
    rec = result.records[0]
    assert rec.values["fidelity_after"] is not None
    assert 0 < rec.values["fidelity_after"] <= rec.values["fidelity_before"]


# --- pearson ------------------------------------------------------------------------


def test_pearson_known_value():
    r = pearson([1, 2, 3], [1, 2, 4])
    assert math.isclose(r, math.sqrt(27 / 28), rel_tol=0, abs_tol=1e-15)


def test_pearson_perfect_and_inverse():
    assert math.isclose(pearson([1, 2, 3], [10, 20, 30]), 1.0, abs_tol=1e-15)
    assert math.isclose(pearson([1, 2, 3], [5, 3, 1]), -1.0, abs_tol=1e-15)


def test_pearson_pairwise_removal():
    # rows with None or NaN on either side are dropped as pairs
    x = [1.0, None, 2.0, 3.0, float("nan")]
    y = [1.0, 9.0, 2.0, 4.0, 0.0]
    assert math.isclose(pearson(x, y), pearson([1, 2, 3], [1, 2, 4]), abs_tol=1e-15)


def test_pearson_degenerate():
    with pytest.raises(DegenerateInputError):
        pearson([1.0], [2.0])
    with pytest.raises(DegenerateInputError):
        pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(DegenerateInputError):
        pearson([None, 1.0, 2.0], [1.0, None, 5.0])


def test_pearson_length_mismatch():
    with pytest.raises(ValueError):
        pearson([1, 2], [1, 2, 3])


@settings(max_examples=50)
@given(seed=st.integers(0, 10_000))
def test_pearson_matches_oracle_and_stays_bounded(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 40))
    x = rng.normal(size=n)
    y = rng.normal(size=n)
    if np.std(x) == 0 or np.std(y) == 0:
        return
    ours = pearson(list(x), list(y))
    assert math.isclose(ours, oracles.pearson_oracle(x, y), rel_tol=0, abs_tol=1e-12)
    assert -1.0 - 1e-12 <= ours <= 1.0 + 1e-12


def test_pearson_symmetry_and_affine_invariance():
    x = [1.0, 4.0, 2.0, 8.0]
    y = [3.0, 1.0, 5.0, 6.0]
    assert math.isclose(pearson(x, y), pearson(y, x), abs_tol=1e-15)
    scaled = [2.5 * v + 7.0 for v in x]
    assert math.isclose(pearson(scaled, y), pearson(x, y), abs_tol=1e-12)


# --- correlation matrix -------------------------------------------------------------


def _matrix_records():
    rows = [
        dict(n_gates=1, depth=2.0, two_q_fraction=0.5, gate_overhead_pct=10.0),
        dict(n_gates=2, depth=4.0, two_q_fraction=0.5, gate_overhead_pct=30.0),
        dict(n_gates=3, depth=6.0, two_q_fraction=0.5, gate_overhead_pct=None),
        dict(n_gates=4, depth=8.0, two_q_fraction=0.5, gate_overhead_pct=20.0),
    ]
    return [_record(name=f"r{i}", **row) for i, row in enumerate(rows)]


def test_pearson_matrix_shape_and_symmetry():
    names = ("n_gates", "depth", "two_q_fraction", "gate_overhead_pct")
    m = pearson_matrix(_matrix_records(), names)
    assert m.names == names
    assert m.values.shape == (4, 4)
    assert np.array_equal(m.counts, m.counts.T)
    filled = ~np.isnan(m.values)
    assert np.array_equal(filled, filled.T)
    assert math.isclose(m.value("n_gates", "depth"), 1.0, abs_tol=1e-15)
    assert math.isclose(m.value("n_gates", "n_gates"), 1.0, abs_tol=1e-15)


def test_pearson_matrix_degenerate_cells_are_nan():
    names = ("n_gates", "two_q_fraction")
    m = pearson_matrix(_matrix_records(), names)
    assert math.isnan(m.value("n_gates", "two_q_fraction"))
    assert math.isnan(m.value("two_q_fraction", "two_q_fraction"))


def test_pearson_matrix_counts_skip_na():
    names = ("n_gates", "gate_overhead_pct")
    m = pearson_matrix(_matrix_records(), names)
    i, j = 0, 1
    assert m.counts[i, i] == 4
    assert m.counts[i, j] == 3


def test_pearson_matrix_unknown_name():
    with pytest.raises(UnknownMetricError):
        pearson_matrix(_matrix_records(), ("n_gates", "zing"))


# --- reduction ---------------------------------------------------------------------


def _toy_matrix(values, names=("A", "B", "C")):
    arr = np.asarray(values, dtype=float)
    return CorrelationMatrix(tuple(names), arr, np.full(arr.shape, 10, dtype=int))


def test_reduce_features_chain():
    # A~B 0.95, B~C 0.95, A~C 0.5: B falls to A, C survives because only
    # correlations against kept columns count
    m = _toy_matrix(
        [
            [1.0, 0.95, 0.5],
            [0.95, 1.0, 0.95],
            [0.5, 0.95, 1.0],
        ]
    )
    assert reduce_features(m, 0.9) == ["A", "C"]


def test_reduce_features_negative_correlation_counts():
    m = _toy_matrix(
        [
            [1.0, -0.99, 0.0],
            [-0.99, 1.0, 0.0],
            [0.0, 0.0, 1.0],
        ]
    )
    assert reduce_features(m, 0.9) == ["A", "C"]


def test_reduce_features_nan_never_disqualifies():
    m = _toy_matrix(
        [
            [1.0, float("nan"), float("nan")],
            [float("nan"), 1.0, float("nan")],
            [float("nan"), float("nan"), 1.0],
        ]
    )
    assert reduce_features(m, 0.9) == ["A", "B", "C"]


def test_reduce_features_threshold_boundary():
    m = _toy_matrix([[1.0, 0.9], [0.9, 1.0]], names=("A", "B"))
    assert reduce_features(m, 0.9) == ["A"]  # >= is redundant
    assert reduce_features(m, 0.9000001) == ["A", "B"]


def test_reduce_features_threshold_validation():
    m = _toy_matrix([[1.0]], names=("A",))
    with pytest.raises(InvalidArgumentError):
        reduce_features(m, 0.0)
    with pytest.raises(InvalidArgumentError):
        reduce_features(m, 1.5)
    assert reduce_features(m, 1.0) == ["A"]


def test_reduce_features_keeps_first_in_order():
    m = _toy_matrix([[1.0, 0.99], [0.99, 1.0]], names=("B", "A"))
    assert reduce_features(m, 0.9) == ["B"]


# --- exports -----------------------------------------------------------------------


def test_export_csv(tmp_path, corpus_dir):
    device = grid_device(4, 4)
    result = run_corpus(sorted(corpus_dir.glob("*.qasm")), device)
    out = tmp_path / "records.csv"
    export_csv(result.records, out)
    import csv as csv_mod

    with open(out, newline="") as handle:
        parsed = list(csv_mod.reader(handle))
    assert parsed[0] == list(CSV_COLUMNS)
    assert len(parsed) == 1 + len(result.records)
    assert all(len(row) == len(CSV_COLUMNS) for row in parsed[1:])
    # rerun is byte identical
    again = tmp_path / "records2.csv"
    export_csv(result.records, again)
    assert out.read_bytes() == again.read_bytes()


def test_export_csv_na_cells(tmp_path):
    rec = _record(adjacency_std_dev=None, gate_overhead_pct=float("nan"))
    out = tmp_path / "one.csv"
    export_csv([rec], out)
    header, row = out.read_text().splitlines()
    cells = dict(zip(header.split(","), row.split(",")))
    assert cells["adjacency_std_dev"] == "NA"
    assert cells["gate_overhead_pct"] == "NA"
    assert cells["name"] == "a"


def test_export_csv_refuses_empty(tmp_path):
    with pytest.raises(InvalidArgumentError):
        export_csv([], tmp_path / "never.csv")


def test_correlation_csv_text():
    m = _toy_matrix([[1.0, 0.5], [0.5, 1.0]], names=("A", "B"))
    text = correlation_csv_text(m)
    assert text == "metric,A,B\nA,1,0.5\nB,0.5,1\n"


def test_correlation_csv_text_na():
    m = _toy_matrix([[1.0, float("nan")], [float("nan"), 1.0]], names=("A", "B"))
    assert "A,1,NA" in correlation_csv_text(m)


def test_scatter_data_and_tsv(tmp_path):
    recs = [
        _record(name="p", n_gates=3, gate_overhead_pct=12.5),
        _record(name="q", n_gates=5, gate_overhead_pct=None),
    ]
    rows = scatter_data(recs, "n_gates", "gate_overhead_pct")
    assert rows == [(3.0, 12.5, "real")]
    with pytest.raises(UnknownMetricError):
        scatter_data(recs, "n_gates", "wobble")
    path = tmp_path / "s.tsv"
    write_scatter_tsv(rows, "n_gates", "gate_overhead_pct", path)
    assert path.read_text() == "n_gates\tgate_overhead_pct\torigin\n3\t12.5\treal\n"
