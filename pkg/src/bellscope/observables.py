"""Equatorial (x-y plane) qubit observables and the correlations they produce.

A phase observable ``O(phi) = cos(phi) X + sin(phi) Y`` has eigenvectors
``(|0> +- e^{i phi}|1>)/sqrt(2)``. The N-site correlation
``E(phi_1..phi_N) = Tr[(O(phi_1) x ... x O(phi_N)) rho]`` only sees the
"anti-diagonal" entries ``rho[j, ~j]`` of the density matrix, because every
tensor product of x-y plane operators flips all bits. Everything below is
built on that observation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .states import QuantumState
from .validation import TWO_PI, check_settings, check_settings_batch

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)

# Per-site map from the bit j_n of the ket index to the x/y word letter:
# Tr(sigma_x |j><~j|) = 1, Tr(sigma_y |j><~j|) = +i (j=0) or -i (j=1).
_TO_TENSOR = np.array([[1, 1], [1j, -1j]], dtype=complex)
_FROM_TENSOR = np.linalg.inv(_TO_TENSOR)

_CHUNK = 1 << 22


def phase_observable(phi: float) -> np.ndarray:
    """The 2x2 observable ``|+,phi><+,phi| - |-,phi><-,phi|``."""
    phi = float(np.mod(phi, TWO_PI))
    return np.array([[0, np.exp(-1j * phi)], [np.exp(1j * phi), 0]], dtype=complex)


def correlation(state: QuantumState, settings) -> float:
    """``Tr[(O(phi_1) x ... x O(phi_N)) rho]`` by explicit matrix trace."""
    phi = check_settings(settings, state.n_qubits)
    op = reduce(np.kron, [phase_observable(p) for p in phi])
    # Tr(A B) = sum_ij A_ij B_ji
    value = np.sum(op * state.matrix.T)
    return float(value.real)


def antidiagonal(state: QuantumState) -> np.ndarray:
    """The vector ``v_j = rho[j, ~j]`` (``~j`` flips every bit of ``j``)."""
    rho = state.matrix
    idx = np.arange(rho.shape[0])
    return rho[idx, idx[::-1]].copy()


def _apply_sitewise(vec: np.ndarray, n: int, mat: np.ndarray) -> np.ndarray:
    t = vec.reshape((2,) * n)
    for axis in range(n):
        t = np.moveaxis(np.tensordot(mat, t, axes=([1], [axis])), 0, axis)
    return t.reshape(-1)


@dataclass(frozen=True, eq=False)
class CorrelationTensor:
    """Coefficients ``T_s = Tr[(sigma_{s_1} x ... x sigma_{s_N}) rho]`` for s in {x, y}^N.

    ``coeffs`` is a flat array of length ``2**N``. Bit ``N - n`` of the index
    selects the letter for site ``n`` (0 = x, 1 = y), so site 1 is the most
    significant bit, matching the qubit convention of :mod:`bellscope.states`.
    The correlation function is ``sum_s T_s prod_n f_{s_n}(phi_n)`` with
    ``f_x = cos`` and ``f_y = sin``.
    """

    n_qubits: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float).reshape(-1)
        if c.shape[0] != 1 << self.n_qubits:
            raise ValueError(f"expected {1 << self.n_qubits} coefficients, got {c.shape[0]}")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @staticmethod
    def word(index: int, n: int) -> str:
        return "".join("y" if (index >> (n - 1 - k)) & 1 else "x" for k in range(n))

    def as_dict(self) -> dict[str, float]:
        return {self.word(i, self.n_qubits): float(t) for i, t in enumerate(self.coeffs)}

    def __getitem__(self, word: str) -> float:
        if len(word) != self.n_qubits or set(word) - {"x", "y"}:
            raise KeyError(word)
        return float(self.coeffs[int(word.replace("x", "0").replace("y", "1"), 2)])

    def scaled(self, factor: float) -> "CorrelationTensor":
        return CorrelationTensor(self.n_qubits, factor * self.coeffs)

    def antidiagonal(self) -> np.ndarray:
        """Recover ``v_j = rho[j, ~j]`` from the coefficients (exact inverse map)."""
        return _apply_sitewise(self.coeffs.astype(complex), self.n_qubits, _FROM_TENSOR)

    def evaluate(self, settings) -> np.ndarray:
        """Correlation at a batch of settings, shape ``(K, N)`` -> ``(K,)``."""
        phi = check_settings_batch(settings, self.n_qubits)
        n = self.n_qubits
        out = np.empty(phi.shape[0])
        rows = max(1, _CHUNK >> n)
        for start in range(0, phi.shape[0], rows):
            block = phi[start:start + rows]
            basis = np.ones((block.shape[0], 1))
            for k in range(n):
                c = np.cos(block[:, k])[:, None]
                s = np.sin(block[:, k])[:, None]
                basis = np.stack([basis * c, basis * s], axis=-1).reshape(block.shape[0], -1)
            out[start:start + rows] = basis @ self.coeffs
        return out


def correlation_tensor(state: QuantumState) -> CorrelationTensor:
    """All ``2**N`` x/y correlation coefficients of ``state``."""
    t = _apply_sitewise(antidiagonal(state), state.n_qubits, _TO_TENSOR)
    return CorrelationTensor(state.n_qubits, t.real)


def correlation_function(state: QuantumState):
    """Vectorised ``E(phi)`` for ``state``; accepts ``(K, N)`` setting arrays."""
    return correlation_tensor(state).evaluate


@dataclass(frozen=True)
class HarmonicForm:
    """``E(phi) = amplitude * cos(sum(phi) - phase)``, when ``is_pure_harmonic``."""

    amplitude: float
    phase: float
    is_pure_harmonic: bool

    def evaluate(self, settings) -> np.ndarray:
        phi = np.atleast_2d(np.asarray(settings, dtype=float))
        return self.amplitude * np.cos(phi.sum(axis=1) - self.phase)

    def to_dict(self) -> dict:
        return {
            "amplitude": self.amplitude,
            "phase": self.phase,
            "is_pure_harmonic": self.is_pure_harmonic,
        }


def detect_harmonic(tensor: CorrelationTensor, atol: float = 1e-12) -> HarmonicForm:
    """Detect whether the correlation is a single harmonic of ``sum(phi)``.

    With ``gamma = rho[0...0, 1...1]`` the candidate form has amplitude
    ``2|gamma|`` and phase ``-arg(gamma)``. It is pure when every other
    anti-diagonal entry vanishes to ``atol * 2**N``.
    """
    v = tensor.antidiagonal()
    gamma = v[0]
    amplitude = 2.0 * abs(gamma)
    phase = float(np.mod(-np.angle(gamma), TWO_PI)) if amplitude > 0 else 0.0
    cross = v[1:-1]
    pure = bool(cross.size == 0 or np.max(np.abs(cross)) <= atol * v.size)
    return HarmonicForm(float(amplitude), phase, pure)
