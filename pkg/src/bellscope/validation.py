"""Input validation helpers shared by the functional API and the estimators."""

from __future__ import annotations

import numbers

import numpy as np

from .exceptions import DimensionMismatchError, InvalidParameterError

TWO_PI = 2.0 * np.pi
MAX_QUBITS = 10


def check_n_qubits(n, minimum: int = 1, maximum: int = MAX_QUBITS) -> int:
    """Return ``n`` as an int, raising if it is not an integer in range."""
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise InvalidParameterError(f"number of qubits must be an integer, got {n!r}")
    n = int(n)
    if n < minimum or n > maximum:
        raise InvalidParameterError(
            f"number of qubits must lie in [{minimum}, {maximum}], got {n}"
        )
    return n


def check_real(x, name: str) -> float:
    if isinstance(x, bool) or not isinstance(x, numbers.Real) or not np.isfinite(x):
        raise InvalidParameterError(f"{name} must be a finite real number, got {x!r}")
    return float(x)


def check_settings(settings, n_qubits: int) -> np.ndarray:
    """Validate a vector of N phase settings and reduce it modulo 2*pi.

    Accepts any array-like of length ``n_qubits``; returns a float array.
    """
    phi = np.asarray(settings, dtype=float)
    if phi.ndim != 1:
        raise DimensionMismatchError(f"settings must be one-dimensional, got shape {phi.shape}")
    if phi.shape[0] != n_qubits:
        raise DimensionMismatchError(
            f"expected {n_qubits} settings, got {phi.shape[0]}"
        )
    if not np.all(np.isfinite(phi)):
        raise InvalidParameterError("settings must be finite")
    return np.mod(phi, TWO_PI)


def check_settings_batch(settings, n_qubits: int) -> np.ndarray:
    """Like :func:`check_settings` for a ``(K, N)`` batch (1-d input is one row)."""
    phi = np.asarray(settings, dtype=float)
    if phi.ndim == 1:
        phi = phi[np.newaxis, :]
    if phi.ndim != 2 or phi.shape[1] != n_qubits:
        raise DimensionMismatchError(
            f"expected settings of shape (K, {n_qubits}), got {phi.shape}"
        )
    if not np.all(np.isfinite(phi)):
        raise InvalidParameterError("settings must be finite")
    return np.mod(phi, TWO_PI)


def check_density_matrix(matrix, *, atol_hermitian: float = 1e-12,
                         atol_trace: float = 1e-12, atol_psd: float = 1e-10,
                         check_psd: bool = True) -> tuple[int, np.ndarray]:
    """Validate a qubit density matrix.

    Returns ``(n_qubits, matrix)`` with ``matrix`` as a complex128 array.
    Raises :class:`InvalidParameterError` on non-square, non-power-of-two,
    non-Hermitian, non-unit-trace or (if ``check_psd``) non-positive input.
    """
    rho = np.asarray(matrix, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidParameterError(f"density matrix must be square, got shape {rho.shape}")
    dim = rho.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise InvalidParameterError(f"dimension {dim} is not a power of two >= 2")
    check_n_qubits(n)
    if np.max(np.abs(rho - rho.conj().T)) > atol_hermitian:
        raise InvalidParameterError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > atol_trace:
        raise InvalidParameterError(f"density matrix trace is {np.trace(rho).real}, not 1")
    if check_psd:
        lowest = np.linalg.eigvalsh(rho)[0]
        if lowest < -atol_psd:
            raise InvalidParameterError(
                f"density matrix is not positive semidefinite (min eigenvalue {lowest:.3e})"
            )
    return n, rho


def check_states(X) -> list:
    """Normalise ``X`` to a non-empty list of :class:`~bellscope.states.QuantumState`.

    A single state, a density matrix, or a sequence of either is accepted.
    """
    from .states import QuantumState

    if isinstance(X, QuantumState):
        return [X]
    if isinstance(X, np.ndarray) and X.ndim == 2:
        return [QuantumState(X)]
    states = [x if isinstance(x, QuantumState) else QuantumState(x) for x in X]
    if not states:
        raise InvalidParameterError("at least one state is required")
    return states
