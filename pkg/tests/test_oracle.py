import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellscope.exceptions import BudgetExceededError, InvalidParameterError
from bellscope.observables import HarmonicForm
from bellscope.oracle import (
    ResponseStrategy,
    arc_patterns,
    grid_angles,
    maximize_decoupled,
    maximize_exhaustive,
    maximize_greedy,
    scalar_product_direct,
    scalar_product_discrete,
)

UNIT = HarmonicForm(1.0, 0.0, True)


def sign_cos(m):
    return np.where(np.cos(grid_angles(m)) >= 0, 1, -1)


class TestScalarProduct:
    def test_single_site_sign_cos(self):
        m = 360
        strategy = ResponseStrategy(sign_cos(m)[None, :])
        direct = scalar_product_direct(UNIT, strategy)
        assert scalar_product_discrete(UNIT, strategy) == pytest.approx(direct, abs=1e-12)
        assert direct == pytest.approx(4.0, abs=1e-3)

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_constant_response_gives_zero(self, n):
        strategy = ResponseStrategy(np.ones((n, 64)))
        assert scalar_product_discrete(HarmonicForm(0.7, 1.3, True), strategy) == \
            pytest.approx(0, abs=1e-12)

    def test_two_sites_sign_cos(self):
        m = 360
        strategy = ResponseStrategy(np.tile(sign_cos(m), (2, 1)))
        assert scalar_product_discrete(UNIT, strategy) == pytest.approx(16.0, abs=5e-3)

    def test_factorised_equals_direct_n2_m8(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            h = HarmonicForm(rng.uniform(0, 1), rng.uniform(0, 2 * math.pi), True)
            strategy = ResponseStrategy(rng.choice([-1, 1], size=(2, 8)))
            assert scalar_product_discrete(h, strategy) == pytest.approx(
                scalar_product_direct(h, strategy), abs=1e-12)

    def test_factorised_equals_direct_n3(self):
        rng = np.random.default_rng(3)
        h = HarmonicForm(0.4, 2.2, True)
        strategy = ResponseStrategy(rng.choice([-1, 1], size=(3, 10)))
        assert scalar_product_discrete(h, strategy) == pytest.approx(
            scalar_product_direct(h, strategy), abs=1e-12)

    def test_rejects_non_harmonic(self):
        with pytest.raises(InvalidParameterError):
            scalar_product_discrete(HarmonicForm(1.0, 0.0, False), ResponseStrategy(np.ones((1, 4))))

    def test_strategy_validation(self):
        with pytest.raises(InvalidParameterError):
            ResponseStrategy(np.zeros((2, 4)))
        s = ResponseStrategy(np.array([[1, -1, 1], [-1, -1, 1]]))
        assert s.bits() == ["101", "001"]
        assert s.n_qubits == 2 and s.grid_size == 3


class TestArcPatterns:
    @pytest.mark.parametrize("m", [4, 5, 8, 13, 64])
    def test_count_and_values(self, m):
        pats = arc_patterns(m)
        assert set(np.unique(pats)) <= {-1, 1}
        assert len(pats) == (m if m % 2 == 0 else 2 * m)


class TestDecoupled:
    def test_n3(self):
        result = maximize_decoupled(UNIT, 3, 256)
        assert result.best_value == pytest.approx(64, rel=5e-3)
        assert result.method == "decoupled"
        assert scalar_product_discrete(UNIT, result.best_strategy) == pytest.approx(
            result.best_value, rel=1e-12)

    def test_zero_amplitude(self):
        assert maximize_decoupled(HarmonicForm(0.0, 0.0, True), 4, 64).best_value == 0

    def test_dur_amplitude_n6(self):
        h = HarmonicForm(1 / 7, 0.9, True)
        assert maximize_decoupled(h, 6, 256).best_value == pytest.approx(4**6 / 7, rel=5e-3)

    def test_grid_validation(self):
        with pytest.raises(InvalidParameterError):
            maximize_decoupled(UNIT, 2, 3)
        with pytest.raises(InvalidParameterError):
            maximize_decoupled(UNIT, 2, 5000)


class TestExhaustive:
    def test_n1_m8_matches_decoupled(self):
        ex = maximize_exhaustive(UNIT, 1, 8)
        assert ex.best_value == pytest.approx(maximize_decoupled(UNIT, 1, 8).best_value, abs=1e-13)

    def test_n2_m12_matches_decoupled(self):
        ex = maximize_exhaustive(UNIT, 2, 12)
        assert ex.best_value == pytest.approx(maximize_decoupled(UNIT, 2, 12).best_value,
                                              abs=1e-12)

    def test_n1_m4_below_continuum(self):
        # grid sum of |cos| at 0, pi/2, pi, 3pi/2 is 2, times weight pi/2
        ex = maximize_exhaustive(UNIT, 1, 4)
        assert ex.best_value == pytest.approx(math.pi, abs=1e-14)
        assert ex.best_value < 4

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            maximize_exhaustive(UNIT, 2, 20)

    def test_strategy_reproduces_value(self):
        h = HarmonicForm(0.6, 1.0, True)
        ex = maximize_exhaustive(h, 3, 7)
        assert scalar_product_discrete(h, ex.best_strategy) == pytest.approx(ex.best_value,
                                                                             abs=1e-12)

    def test_brute_force_over_all_strategy_pairs(self):
        # independent of the hull propagation: every pair of the 2**6 patterns
        m = 6
        h = HarmonicForm(1.0, 0.4, True)
        k = np.arange(1 << m)
        pats = np.where((k[:, None] >> np.arange(m)) & 1, 1.0, -1.0)
        c = pats @ np.exp(1j * grid_angles(m)) * (2 * math.pi / m)
        brute = np.max(np.real(np.exp(-1j * h.phase) * np.multiply.outer(c, c)))
        assert maximize_exhaustive(h, 2, m).best_value == pytest.approx(brute, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("m", range(4, 13))
def test_exhaustive_equals_decoupled(n, m):
    for phase in np.linspace(0, 2 * math.pi, 9, endpoint=False):
        h = HarmonicForm(0.8, phase, True)
        ex = maximize_exhaustive(h, n, m)
        dec = maximize_decoupled(h, n, m)
        assert ex.best_value == pytest.approx(dec.best_value, abs=1e-12)


def test_greedy_never_beats_exhaustive():
    for n, m in [(1, 9), (2, 10), (3, 8)]:
        h = HarmonicForm(1.0, 0.7, True)
        greedy = maximize_greedy(h, n, m, restarts=6, seed=1)
        exact = maximize_exhaustive(h, n, m).best_value
        assert greedy.best_value <= exact + 1e-12
        assert greedy.best_value == pytest.approx(exact, rel=1e-2)
    again = maximize_greedy(h, 3, 8, restarts=6, seed=1)
    assert again.best_value == maximize_greedy(h, 3, 8, restarts=6, seed=1).best_value


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 6), m=st.sampled_from([16, 24, 32, 64, 128]),
       seed=st.integers(0, 2**32 - 1))
def test_random_strategies_within_envelope(n, m, seed):
    rng = np.random.default_rng(seed)
    h = HarmonicForm(rng.uniform(0, 1), rng.uniform(0, 2 * math.pi), True)
    strategy = ResponseStrategy(rng.choice([-1, 1], size=(n, m)))
    assert scalar_product_discrete(h, strategy) <= 4**n * h.amplitude * (1 + 5 / m)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 5), m=st.integers(4, 40), seed=st.integers(0, 2**32 - 1))
def test_parity_flip_negates(n, m, seed):
    rng = np.random.default_rng(seed)
    h = HarmonicForm(rng.uniform(0, 1), rng.uniform(0, 2 * math.pi), True)
    strategy = ResponseStrategy(rng.choice([-1, 1], size=(n, m)))
    site = int(rng.integers(n))
    assert scalar_product_discrete(h, strategy.flipped(site)) == pytest.approx(
        -scalar_product_discrete(h, strategy), abs=1e-12)


@pytest.mark.parametrize("n", range(1, 7))
def test_optimum_within_envelope(n):
    for m in (16, 32, 64, 256):
        assert maximize_decoupled(UNIT, n, m).best_value <= 4**n * (1 + 5 / m)


@pytest.mark.parametrize("n", range(1, 7))
def test_approaches_continuum_bound(n):
    ms = [8, 16, 32, 64, 128, 256]
    errors = [abs(maximize_decoupled(UNIT, n, m).ratio - 1) for m in ms]
    assert all(b <= a + 1e-15 for a, b in zip(errors, errors[1:]))
    assert errors[-1] <= 0.01


def test_single_site_increases_towards_bound():
    values = [maximize_decoupled(UNIT, 1, m).best_value for m in (8, 16, 32, 64, 128, 256)]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert all(v < 4 for v in values)
