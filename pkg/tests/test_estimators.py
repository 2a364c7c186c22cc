import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import Pipeline

from qcmap.circuit import Circuit, Gate, GateKind, generate_random_circuit
from qcmap.device import grid_device
from qcmap.estimators import (
    CircuitMapper,
    CorrelationFeatureReducer,
    InteractionGraphFeaturizer,
)
from qcmap.exceptions import InvalidArgumentError
from qcmap.interaction_graph import METRIC_NAMES, metric_vector
from qcmap.mapper import MappedCircuit

import oracles


def _circuits(n=6):
    return [generate_random_circuit(4, 12, 0.5, seed=s) for s in range(n)]


# --- featurizer --------------------------------------------------------------------


def test_featurizer_shape_and_names():
    circuits = _circuits()
    feats = InteractionGraphFeaturizer()
    X = feats.fit_transform(circuits)
    assert X.shape == (len(circuits), len(METRIC_NAMES))
    assert X.dtype == np.float64
    assert list(feats.get_feature_names_out()) == list(METRIC_NAMES)


def test_featurizer_matches_metric_vector():
    c = generate_random_circuit(5, 20, 0.4, seed=3)
    X = InteractionGraphFeaturizer().fit_transform([c])
    expected = metric_vector(c).as_row()
    for got, want in zip(X[0], expected):
        if want is None:
            assert math.isnan(got)
        else:
            assert math.isclose(got, float(want), rel_tol=0, abs_tol=1e-15)


def test_featurizer_nan_for_undefined_metric():
    single = Circuit(1, (Gate(GateKind.H, (0,)),))
    X = InteractionGraphFeaturizer().fit_transform([single])
    col = list(METRIC_NAMES).index("adjacency_std_dev")
    assert math.isnan(X[0, col])


def test_featurizer_empty_input():
    X = InteractionGraphFeaturizer().fit_transform([])
    assert X.shape == (0, len(METRIC_NAMES))


def test_featurizer_input_validation():
    c = _circuits(1)[0]
    with pytest.raises(InvalidArgumentError):
        InteractionGraphFeaturizer().fit(c)  # a bare Circuit, not a list
    with pytest.raises(InvalidArgumentError):
        InteractionGraphFeaturizer().fit(["qreg q[2];"])


def test_featurizer_is_cloneable():
    feats = InteractionGraphFeaturizer()
    assert clone(feats).get_params() == feats.get_params()


# --- mapper ------------------------------------------------------------------------


def test_mapper_grid_spec():
    m = CircuitMapper(device="2x3").fit()
    assert m.device_.n_qubits == 6
    assert len(m.device_.edges) == 7


def test_mapper_default_grid():
    m = CircuitMapper().fit()
    assert m.device_.n_qubits == 16


def test_mapper_accepts_device_object():
    d = grid_device(2, 2)
    m = CircuitMapper(device=d).fit()
    assert m.device_ is d


def test_mapper_accepts_device_file(devices_dir):
    m = CircuitMapper(device=str(devices_dir / "surface7.device")).fit()
    assert m.device_.n_qubits == 7


def test_mapper_transform_routes():
    circuits = _circuits(3)
    mapper = CircuitMapper(device="4x4", placement="degree").fit()
    mapped = mapper.transform(circuits)
    assert len(mapped) == 3
    for m in mapped:
        assert isinstance(m, MappedCircuit)
        oracles.assert_semantics_preserved(m)
    assert mapper.options_.placement == "degree"


def test_mapper_requires_fit():
    with pytest.raises(NotFittedError):
        CircuitMapper().transform(_circuits(1))


def test_mapper_invalid_options_surface_at_fit():
    with pytest.raises(InvalidArgumentError):
        CircuitMapper(placement="clever").fit()


def test_mapper_get_params_round_trip():
    mapper = CircuitMapper(device="3x3", swap_accounting="cnot3")
    params = mapper.get_params()
    assert params["device"] == "3x3"
    assert params["swap_accounting"] == "cnot3"
    twin = clone(mapper).fit()
    assert twin.options_.swap_accounting == "cnot3"


# --- reducer -----------------------------------------------------------------------


def _chain_matrix(n=64, seed=0):
    # B is A plus small noise; C is independent
    rng = np.random.default_rng(seed)
    a = rng.normal(size=n)
    b = a + 0.05 * rng.normal(size=n)
    c = rng.normal(size=n)
    return np.column_stack([a, b, c])


def test_reducer_drops_redundant_column():
    X = _chain_matrix()
    red = CorrelationFeatureReducer(threshold=0.9, feature_names=("A", "B", "C"))
    Xt = red.fit_transform(X)
    assert red.selected_features_ == ["A", "C"]
    assert list(red.get_support()) == [True, False, True]
    assert Xt.shape == (X.shape[0], 2)
    np.testing.assert_array_equal(Xt, X[:, [0, 2]])
    assert list(red.get_feature_names_out()) == ["A", "C"]


def test_reducer_default_names():
    red = CorrelationFeatureReducer().fit(_chain_matrix())
    assert red.matrix_.names == ("x0", "x1", "x2")
    assert red.selected_features_ == ["x0", "x2"]
    assert red.n_features_in_ == 3


def test_reducer_constant_column_survives():
    X = np.column_stack([np.arange(8.0), np.full(8, 3.0)])
    red = CorrelationFeatureReducer().fit(X)
    assert list(red.get_support()) == [True, True]


def test_reducer_matrix_is_symmetric_with_unit_diagonal():
    red = CorrelationFeatureReducer().fit(_chain_matrix())
    vals = red.matrix_.values
    assert np.allclose(vals, vals.T, equal_nan=True)
    assert np.allclose(np.diag(vals), 1.0)


def test_reducer_transform_width_check():
    red = CorrelationFeatureReducer().fit(_chain_matrix())
    with pytest.raises(InvalidArgumentError):
        red.transform(np.zeros((4, 5)))


def test_reducer_name_length_check():
    with pytest.raises(InvalidArgumentError):
        CorrelationFeatureReducer(feature_names=("A",)).fit(_chain_matrix())


def test_reducer_rejects_non_matrix():
    with pytest.raises(InvalidArgumentError):
        CorrelationFeatureReducer().fit(np.zeros(7))


def test_reducer_threshold_validated_in_fit():
    with pytest.raises(InvalidArgumentError):
        CorrelationFeatureReducer(threshold=0.0).fit(_chain_matrix())


def test_reducer_not_fitted_errors():
    red = CorrelationFeatureReducer()
    with pytest.raises(NotFittedError):
        red.transform(np.zeros((2, 2)))
    with pytest.raises(NotFittedError):
        red.get_support()
    with pytest.raises(NotFittedError):
        red.get_feature_names_out()


# --- composition --------------------------------------------------------------------


def test_featurizer_reducer_pipeline():
    circuits = [generate_random_circuit(6, 30, f, seed=s) for s, f in
                enumerate([0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8])]
    pipe = Pipeline(
        [
            ("features", InteractionGraphFeaturizer()),
            ("reduce", CorrelationFeatureReducer(threshold=0.95, feature_names=METRIC_NAMES)),
        ]
    )
    Xt = pipe.fit_transform(circuits)
    kept = pipe.named_steps["reduce"].selected_features_
    assert Xt.shape == (len(circuits), len(kept))
    assert 1 <= len(kept) <= len(METRIC_NAMES)
    assert set(kept) <= set(METRIC_NAMES)
