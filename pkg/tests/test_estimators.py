import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from bellscope.estimators import FunctionalBellTest, LHVOracle, MerminKlyshkoTest
from bellscope.functional import violation_report
from bellscope.observables import HarmonicForm
from bellscope.states import make_dur_state, make_generalized_ghz


@pytest.fixture
def dur_family():
    return [make_dur_state(n, 0.3) for n in range(3, 9)]


def test_functional_predict_matches_reports(dur_family):
    est = FunctionalBellTest().fit(dur_family)
    assert est.predict(dur_family).tolist() == [False, False, False, True, True, True]
    margins = est.decision_function(dur_family)
    np.testing.assert_allclose(margins, [violation_report(s).margin for s in dur_family])
    assert est.transform(dur_family).shape == (6, 3)
    assert list(est.get_feature_names_out()) == ["norm_sq", "lhv_bound", "margin"]


def test_functional_accepts_single_state_and_matrix():
    state = make_generalized_ghz(5, 0.3)
    est = FunctionalBellTest(quad_points=4).fit(state)
    assert est.predict(state.matrix).tolist() == [True]
    assert est.reports_[0].method == "quadrature"


def test_params_roundtrip():
    est = FunctionalBellTest(quad_points=5)
    assert est.get_params() == {"quad_points": 5}
    copy = clone(est).set_params(quad_points=None)
    assert copy.quad_points is None and est.quad_points == 5
    assert MerminKlyshkoTest(restarts=4).get_params()["restarts"] == 4
    assert LHVOracle().get_params() == {"grid_size": 256, "method": "decoupled",
                                        "restarts": 8, "random_state": 0}


def test_not_fitted():
    with pytest.raises(NotFittedError):
        FunctionalBellTest().predict(make_dur_state(3, 0.1))
    with pytest.raises(NotFittedError):
        MerminKlyshkoTest().predict(make_dur_state(3, 0.1))


def test_empty_input_rejected():
    with pytest.raises(ValueError):
        FunctionalBellTest().fit([])


def test_mermin_estimator():
    states = [make_dur_state(7, 0.2), make_dur_state(8, 0.2)]
    est = MerminKlyshkoTest(restarts=8).fit(states)
    assert est.predict(states).tolist() == [False, True]
    assert est.decision_function(states)[1] == pytest.approx(2**3.5 / 9 - 1, abs=1e-6)


@pytest.mark.parametrize("method, m", [("decoupled", 256), ("exhaustive", 10), ("greedy", 32)])
def test_oracle_estimator(method, m):
    est = LHVOracle(grid_size=m, method=method).fit(HarmonicForm(1.0, 0.0, True), 2)
    assert est.ratio_ == pytest.approx(1.0, rel=0.05)
    assert est.result_.method == method


def test_oracle_bad_method():
    with pytest.raises(ValueError):
        LHVOracle(method="annealing").fit(HarmonicForm(1.0, 0.0, True), 2)


def test_ghz_family_thresholds_via_estimator():
    n = 5
    t = 2 * (2 / math.pi) ** n
    states = [make_generalized_ghz(n, 0.5 * math.asin(s)) for s in (t * 0.99, t * 1.01)]
    assert FunctionalBellTest().fit(states).predict(states).tolist() == [False, True]
