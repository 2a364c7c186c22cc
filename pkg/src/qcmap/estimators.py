"""scikit-learn compatible wrappers around the functional core.

Three transformers so circuit profiling composes with Pipeline and friends:

* InteractionGraphFeaturizer: circuits -> (n_samples, n_metrics) float matrix
* CircuitMapper: circuits -> list of MappedCircuit for a configured device
* CorrelationFeatureReducer: numeric matrix -> columns surviving greedy
  correlation-based reduction

All three follow the usual contract: bare ``__init__`` assignment,
validation in ``fit``, fitted attributes with trailing underscores.
"""
from __future__ import annotations

import re

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .circuit import Circuit
from .device import CouplingGraph, grid_device, load_device
from .exceptions import DegenerateInputError, InvalidArgumentError
from .interaction_graph import METRIC_NAMES, metric_vector
from .mapper import DEFAULT_PRIMITIVES, MappedCircuit, MapperOptions, map_circuit
from .profiler import CorrelationMatrix, pearson, reduce_features

_GRID_RE = re.compile(r"^(\d+)x(\d+)$")


def _check_circuits(X) -> list[Circuit]:
    if isinstance(X, Circuit):
        raise InvalidArgumentError("expected an iterable of Circuit, got a single Circuit")
    circuits = list(X)
    for item in circuits:
        if not isinstance(item, Circuit):
            raise InvalidArgumentError(f"expected Circuit elements, got {type(item).__name__}")
    return circuits


def _check_matrix(X) -> np.ndarray:
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim != 2:
        raise InvalidArgumentError(f"expected a 2d numeric array, got shape {arr.shape}")
    return arr


def _resolve_device(spec: CouplingGraph | str) -> CouplingGraph:
    if isinstance(spec, CouplingGraph):
        return spec
    m = _GRID_RE.match(spec)
    if m:
        return grid_device(int(m.group(1)), int(m.group(2)))
    return load_device(spec)


class InteractionGraphFeaturizer(TransformerMixin, BaseEstimator):
    """Turn circuits into rows of interaction-graph and size metrics.

    Stateless; ``fit`` only validates. Undefined metrics (adjacency weight
    spread on single-qubit circuits) come out as NaN.
    """

    def fit(self, X, y=None):
        _check_circuits(X)
        self.n_features_out_ = len(METRIC_NAMES)
        return self

    def transform(self, X) -> np.ndarray:
        circuits = _check_circuits(X)
        rows = []
        for c in circuits:
            row = metric_vector(c).as_row()
            rows.append([np.nan if v is None else float(v) for v in row])
        return np.asarray(rows, dtype=np.float64).reshape(len(circuits), len(METRIC_NAMES))

    def get_feature_names_out(self, input_features=None) -> np.ndarray:
        return np.asarray(METRIC_NAMES, dtype=object)


class CircuitMapper(TransformerMixin, BaseEstimator):
    """Map circuits onto one device; transform yields MappedCircuit objects.

    ``device`` accepts a CouplingGraph, a "RxC" grid spec such as "4x4", or a
    device file path.
    """

    def __init__(
        self,
        device: CouplingGraph | str = "4x4",
        placement: str = "trivial",
        swap_accounting: str = "swap1",
        primitives=DEFAULT_PRIMITIVES,
    ):
        self.device = device
        self.placement = placement
        self.swap_accounting = swap_accounting
        self.primitives = primitives

    def fit(self, X=None, y=None):
        self.device_ = _resolve_device(self.device)
        self.options_ = MapperOptions(
            placement=self.placement,
            swap_accounting=self.swap_accounting,
            primitives=frozenset(self.primitives),
        )
        return self

    def transform(self, X) -> list[MappedCircuit]:
        if not hasattr(self, "device_"):
            raise NotFittedError("CircuitMapper must be fitted before transform")
        return [map_circuit(c, self.device_, self.options_) for c in _check_circuits(X)]


class CorrelationFeatureReducer(TransformerMixin, BaseEstimator):
    """Drop features that correlate too strongly with an already-kept feature.

    Scans columns left to right; a column survives iff its absolute Pearson
    correlation with every survivor so far stays below ``threshold``.
    Undefined correlations (constant or too-sparse columns) never disqualify.
    """

    def __init__(self, threshold: float = 0.9, feature_names=None):
        self.threshold = threshold
        self.feature_names = feature_names

    def fit(self, X, y=None):
        arr = _check_matrix(X)
        if self.feature_names is not None:
            names = tuple(str(n) for n in self.feature_names)
            if len(names) != arr.shape[1]:
                raise InvalidArgumentError(
                    f"{len(names)} feature names for {arr.shape[1]} columns"
                )
        else:
            names = tuple(f"x{i}" for i in range(arr.shape[1]))

        n = arr.shape[1]
        values = np.full((n, n), np.nan)
        for i in range(n):
            for j in range(i, n):
                try:
                    values[i, j] = values[j, i] = pearson(arr[:, i], arr[:, j])
                except DegenerateInputError:
                    continue
        counts = np.zeros((n, n), dtype=int)
        self.matrix_ = CorrelationMatrix(names, values, counts)
        kept = reduce_features(self.matrix_, self.threshold)
        self.selected_features_ = list(kept)
        self.support_ = np.asarray([name in kept for name in names], dtype=bool)
        self.n_features_in_ = n
        return self

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "support_"):
            raise NotFittedError("CorrelationFeatureReducer must be fitted before transform")
        arr = _check_matrix(X)
        if arr.shape[1] != self.n_features_in_:
            raise InvalidArgumentError(
                f"transform saw {arr.shape[1]} columns, fit saw {self.n_features_in_}"
            )
        return arr[:, self.support_]

    def get_support(self) -> np.ndarray:
        if not hasattr(self, "support_"):
            raise NotFittedError("CorrelationFeatureReducer must be fitted before get_support")
        return self.support_.copy()

    def get_feature_names_out(self, input_features=None) -> np.ndarray:
        if not hasattr(self, "support_"):
            raise NotFittedError("fit before requesting output feature names")
        return np.asarray(self.selected_features_, dtype=object)
