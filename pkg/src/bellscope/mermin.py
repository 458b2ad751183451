"""Two-setting Mermin-Klyshko (MK) baseline restricted to x-y plane observables.

The MK operators follow the usual recursion

    M_1  = O(a_1),           M'_1 = O(a'_1)
    M_n  = 1/2 [M_{n-1} (O(a_n) + O(a'_n)) + M'_{n-1} (O(a_n) - O(a'_n))]
    M'_n = 1/2 [M'_{n-1} (O(a'_n) + O(a_n)) + M_{n-1} (O(a'_n) - O(a_n))]

normalised so that every local hidden variable model gives ``|<M_N>| <= 1``.
A GHZ state reaches ``2**((N-1)/2)``.

Settings are an ``(N, 2)`` array of angles ``(a_n, a'_n)`` selecting phase
observables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidParameterError
from .observables import antidiagonal
from .states import QuantumState
from .validation import TWO_PI, check_n_qubits

LHV_BOUND = 1.0
VIOLATION_TOL = 1e-9


def mk_coefficients(n: int) -> np.ndarray:
    """Coefficient tensor ``K[c_1, ..., c_N]`` of ``M_N`` over setting choices (0 = a, 1 = a')."""
    n = check_n_qubits(n)
    m = np.array([1.0, 0.0])
    mp = np.array([0.0, 1.0])
    plus = np.array([0.5, 0.5])
    minus = np.array([0.5, -0.5])
    for _ in range(n - 1):
        m, mp = (np.multiply.outer(m, plus) + np.multiply.outer(mp, minus),
                 np.multiply.outer(mp, plus) - np.multiply.outer(m, minus))
    return m


def _check_mk_settings(settings, n: int) -> np.ndarray:
    a = np.asarray(settings, dtype=float)
    if a.shape != (n, 2):
        raise InvalidParameterError(f"MK settings must have shape ({n}, 2), got {a.shape}")
    return np.mod(a, TWO_PI)


class _MKEvaluator:
    """Fast ``<M_N>`` for one state, built on ``rho[j, ~j]``."""

    def __init__(self, state: QuantumState):
        self.n = state.n_qubits
        self.v = antidiagonal(state).reshape((2,) * self.n)
        self.k = mk_coefficients(self.n)
        # exponent sign per ket bit: e^{+i a} for j_n = 0, e^{-i a} for j_n = 1
        self._sign = np.array([1.0, -1.0])

    def value(self, angles: np.ndarray) -> float:
        t = self.v
        for site in range(self.n):
            u = np.exp(1j * np.outer(angles[site], self._sign))  # [choice, bit]
            t = np.tensordot(t, u, axes=([0], [1]))  # consumes leading bit axis
        return float(np.real(np.sum(t * self.k)))


def mk_value(state: QuantumState, settings) -> float:
    """Expectation of the MK operator for ``state`` at ``settings``."""
    angles = _check_mk_settings(settings, state.n_qubits)
    if state.n_qubits < 2:
        raise InvalidParameterError("MK inequalities need at least two qubits")
    return _MKEvaluator(state).value(angles)


@dataclass(frozen=True)
class MKResult:
    value: float
    settings: np.ndarray
    violated: bool
    lhv_bound: float = LHV_BOUND

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "lhv_bound": self.lhv_bound,
            "violated": self.violated,
            "settings": [[float(a), float(b)] for a, b in self.settings],
        }


def _coordinate_ascent(ev: _MKEvaluator, angles: np.ndarray, tol: float,
                       max_sweeps: int) -> tuple[float, np.ndarray]:
    # The value is affine in cos/sin of any single angle: P cos x + Q sin x + R.
    value = ev.value(angles)
    for _ in range(max_sweeps):
        start = value
        for site in range(ev.n):
            for choice in range(2):
                samples = []
                for x in (0.0, 0.5 * np.pi, np.pi):
                    angles[site, choice] = x
                    samples.append(ev.value(angles))
                f0, f1, f2 = samples
                r = 0.5 * (f0 + f2)
                p, q = f0 - r, f1 - r
                angles[site, choice] = np.mod(np.arctan2(q, p), TWO_PI)
                value = r + np.hypot(p, q)
        if value - start <= tol:
            break
    return ev.value(angles), angles


def mk_maximize(state: QuantumState, restarts: int = 32, seed: int = 0,
                tol: float = 1e-10, max_sweeps: int = 500) -> MKResult:
    """Multi-start coordinate ascent over the ``2N`` setting angles.

    Each coordinate update is exact (the objective is a first-order
    trigonometric polynomial in each angle). Restarts use a fixed seed
    sequence; the best value wins and ties go to the lowest restart index.
    Not a certified global optimum.
    """
    if restarts < 1:
        raise InvalidParameterError("restarts must be >= 1")
    n = check_n_qubits(state.n_qubits, minimum=2)
    ev = _MKEvaluator(state)
    rng = np.random.default_rng(seed)
    best_value, best_angles = -np.inf, None
    for _ in range(restarts):
        angles = rng.uniform(0.0, TWO_PI, size=(n, 2))
        value, angles = _coordinate_ascent(ev, angles, tol, max_sweeps)
        if value > best_value:
            best_value, best_angles = value, angles.copy()
    return MKResult(best_value, best_angles, best_value > LHV_BOUND + VIOLATION_TOL)
