"""scikit-learn style front ends.

The estimators take batches of :class:`~bellscope.states.QuantumState`
objects (or density matrices) as ``X`` and expose the usual
``fit`` / ``predict`` / ``decision_function`` / ``transform`` surface, so
they can be cloned, grid-searched over their parameters and dropped into
pipelines. All numerical work is delegated to the functional API.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .functional import QuadratureSpec, violation_report
from .mermin import mk_maximize
from .observables import HarmonicForm
from .oracle import maximize_decoupled, maximize_exhaustive, maximize_greedy
from .validation import check_states


class FunctionalBellTest(TransformerMixin, BaseEstimator):
    """Functional Bell test as an estimator.

    Parameters
    ----------
    quad_points : int or None
        If set, every analytic norm is cross-checked with a rectangle rule
        of this many points per dimension.

    Attributes
    ----------
    reports_ : list of ViolationReport
        One report per state seen by ``fit``.
    n_features_out_ : int
        Columns produced by ``transform``: ``norm_sq``, ``lhv_bound``, ``margin``.
    """

    def __init__(self, quad_points=None):
        self.quad_points = quad_points

    def _reports(self, X):
        quad = None if self.quad_points is None else QuadratureSpec(self.quad_points)
        return [violation_report(s, quad) for s in check_states(X)]

    def fit(self, X, y=None):
        self.reports_ = self._reports(X)
        self.n_features_out_ = 3
        return self

    def transform(self, X):
        check_is_fitted(self, "reports_")
        return np.array([[r.norm_sq, r.lhv_bound, r.margin] for r in self._reports(X)])

    def decision_function(self, X):
        """``||E||^2 - B`` per state; positive means violated."""
        check_is_fitted(self, "reports_")
        return np.array([r.margin for r in self._reports(X)])

    def predict(self, X):
        check_is_fitted(self, "reports_")
        return np.array([r.violated for r in self._reports(X)])

    def get_feature_names_out(self, input_features=None):
        return np.array(["norm_sq", "lhv_bound", "margin"], dtype=object)


class MerminKlyshkoTest(BaseEstimator):
    """Two-setting MK test with settings optimised per state.

    Parameters
    ----------
    restarts : int
    random_state : int
        Seed for the restart sequence.
    tol : float
        Convergence tolerance on the MK value.
    """

    def __init__(self, restarts=32, random_state=0, tol=1e-10):
        self.restarts = restarts
        self.random_state = random_state
        self.tol = tol

    def _results(self, X):
        return [mk_maximize(s, self.restarts, self.random_state, self.tol) for s in check_states(X)]

    def fit(self, X, y=None):
        self.results_ = self._results(X)
        return self

    def decision_function(self, X):
        check_is_fitted(self, "results_")
        return np.array([r.value - r.lhv_bound for r in self._results(X)])

    def predict(self, X):
        check_is_fitted(self, "results_")
        return np.array([r.violated for r in self._results(X)])


class LHVOracle(BaseEstimator):
    """Maximise the discretised LHV scalar product for a single-harmonic correlation.

    ``fit(harmonic, n_qubits)`` stores ``result_``, ``best_value_`` and ``ratio_``
    (best value over ``4**N * A``).
    """

    _methods = {"decoupled", "exhaustive", "greedy"}

    def __init__(self, grid_size=256, method="decoupled", restarts=8, random_state=0):
        self.grid_size = grid_size
        self.method = method
        self.restarts = restarts
        self.random_state = random_state

    def fit(self, harmonic: HarmonicForm, n_qubits: int):
        if self.method not in self._methods:
            raise ValueError(f"method must be one of {sorted(self._methods)}, got {self.method!r}")
        if self.method == "decoupled":
            result = maximize_decoupled(harmonic, n_qubits, self.grid_size)
        elif self.method == "exhaustive":
            result = maximize_exhaustive(harmonic, n_qubits, self.grid_size)
        else:
            result = maximize_greedy(harmonic, n_qubits, self.grid_size,
                                     self.restarts, self.random_state)
        self.result_ = result
        self.best_value_ = result.best_value
        self.ratio_ = result.ratio
        return self
