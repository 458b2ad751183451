"""N-qubit density operators, partial transposition and PPT checks.

Conventions
-----------
- Qubits are labelled ``1..N``. Qubit 1 is the most significant bit of the
  computational-basis index, so ``|q_1 q_2 ... q_N>`` has index
  ``sum(q_k * 2**(N - k))``.
- All matrices are dense ``complex128`` arrays of shape ``(2**N, 2**N)``;
  the supported envelope is ``N <= 10``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidParameterError
from .validation import check_density_matrix, check_n_qubits, check_real

PSD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Dense density operator of ``n_qubits`` qubits.

    The constructor checks Hermiticity (1e-12), unit trace (1e-12) and
    positivity (min eigenvalue >= -1e-10). Pass ``validate=False`` only for
    matrices already known to be valid states.
    """

    matrix: np.ndarray
    validate: bool = field(default=True, repr=False)
    n_qubits: int = field(init=False)

    def __post_init__(self):
        if self.validate:
            n, rho = check_density_matrix(self.matrix)
        else:
            rho = np.asarray(self.matrix, dtype=complex)
            n = rho.shape[0].bit_length() - 1
        rho = rho.copy()
        rho.setflags(write=False)
        object.__setattr__(self, "matrix", rho)
        object.__setattr__(self, "n_qubits", n)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def rank(self, tol: float = PSD_TOL) -> int:
        return int(np.sum(self.eigenvalues() > tol))

    def to_dict(self) -> dict:
        """JSON-ready dump: dimension plus row-major ``[re, im]`` entries."""
        return {
            "n_qubits": self.n_qubits,
            "dimension": self.dim,
            "entries": [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "QuantumState":
        arr = np.asarray(data["entries"], dtype=float)
        return cls(arr[..., 0] + 1j * arr[..., 1])


@dataclass(frozen=True)
class Bipartition:
    """A cut of qubits ``1..n_qubits`` into ``side_a`` and its complement."""

    n_qubits: int
    side_a: frozenset

    def __init__(self, n_qubits: int, side_a):
        n = check_n_qubits(n_qubits, minimum=2)
        a = frozenset(int(q) for q in side_a)
        if not a or len(a) >= n:
            raise InvalidParameterError("both sides of a bipartition must be non-empty")
        if min(a) < 1 or max(a) > n:
            raise InvalidParameterError(f"qubit labels must lie in 1..{n}, got {sorted(a)}")
        object.__setattr__(self, "n_qubits", n)
        object.__setattr__(self, "side_a", a)

    @property
    def side_b(self) -> frozenset:
        return frozenset(range(1, self.n_qubits + 1)) - self.side_a

    def swapped(self) -> "Bipartition":
        return Bipartition(self.n_qubits, self.side_b)

    def label(self) -> str:
        a = ",".join(map(str, sorted(self.side_a)))
        b = ",".join(map(str, sorted(self.side_b)))
        return f"{{{a}}}:{{{b}}}"


def _basis_vector(n: int, bits: int) -> np.ndarray:
    v = np.zeros(1 << n, dtype=complex)
    v[bits] = 1.0
    return v


def make_generalized_ghz(n: int, beta: float) -> QuantumState:
    """Projector onto ``sin(beta)|0...0> + cos(beta)|1...1>``.

    ``beta`` must lie in ``[0, pi/4]``; ``beta = pi/4`` is the standard GHZ
    state and ``beta = 0`` the product state ``|1...1>``.
    """
    n = check_n_qubits(n, minimum=2)
    beta = check_real(beta, "beta")
    if beta < 0.0 or beta > np.pi / 4 + 1e-15:
        raise InvalidParameterError(f"beta must lie in [0, pi/4], got {beta}")
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = np.sin(beta)
    psi[-1] = np.cos(beta)
    return QuantumState(np.outer(psi, psi.conj()), validate=False)


def dur_alpha(n: int) -> float:
    """The phase ``pi / (4 (N - 1))`` used in the two-setting violation for Dür states."""
    n = check_n_qubits(n, minimum=2)
    return np.pi / (4 * (n - 1))


def make_dur_state(n: int, alpha: float) -> QuantumState:
    """Dür's bound entangled N-qubit state.

    ``rho = (|GHZ><GHZ| + 1/2 sum_k (P_k + Pbar_k)) / (N + 1)`` with
    ``|GHZ> = (|0...0> + e^{i alpha}|1...1>)/sqrt(2)``, ``P_k`` the projector
    onto the basis state with a single 1 at qubit ``k`` and ``Pbar_k`` its
    bit-flipped partner.
    """
    n = check_n_qubits(n, minimum=3)
    alpha = check_real(alpha, "alpha")
    dim = 1 << n
    ghz = np.zeros(dim, dtype=complex)
    ghz[0] = 1.0 / np.sqrt(2.0)
    ghz[-1] = np.exp(1j * alpha) / np.sqrt(2.0)
    rho = np.outer(ghz, ghz.conj())
    for k in range(1, n + 1):
        idx = 1 << (n - k)
        rho[idx, idx] += 0.5
        rho[(dim - 1) ^ idx, (dim - 1) ^ idx] += 0.5
    return QuantumState(rho / (n + 1), validate=False)


def product_state(bits) -> QuantumState:
    """Computational-basis product state, e.g. ``product_state([0, 1, 1])``."""
    bits = [int(b) for b in bits]
    n = check_n_qubits(len(bits))
    if any(b not in (0, 1) for b in bits):
        raise InvalidParameterError("bits must be 0 or 1")
    index = int("".join(map(str, bits)), 2)
    v = _basis_vector(n, index)
    return QuantumState(np.outer(v, v), validate=False)


def maximally_mixed(n: int) -> QuantumState:
    n = check_n_qubits(n)
    return QuantumState(np.eye(1 << n, dtype=complex) / (1 << n), validate=False)


def partial_transpose(state, cut: Bipartition) -> np.ndarray:
    """Transpose the tensor factors of the qubits in ``cut.side_a``.

    ``state`` may be a :class:`QuantumState` or any ``2**N x 2**N`` array.
    The result is returned as a plain Hermitian array (it is generally not
    a state).
    """
    rho = state.matrix if isinstance(state, QuantumState) else np.asarray(state)
    n = cut.n_qubits
    if rho.shape != (1 << n, 1 << n):
        raise InvalidParameterError(
            f"matrix of shape {rho.shape} does not act on {n} qubits"
        )
    t = rho.reshape((2,) * (2 * n))
    axes = list(range(2 * n))
    for q in cut.side_a:
        row, col = q - 1, n + q - 1
        axes[row], axes[col] = axes[col], axes[row]
    return np.ascontiguousarray(t.transpose(axes)).reshape(rho.shape)


def is_ppt(state, cut: Bipartition, tol: float = PSD_TOL) -> tuple[bool, float]:
    """PPT test across ``cut``.

    Returns ``(ppt, min_eigenvalue)``; ``ppt`` is true iff the smallest
    eigenvalue of the partial transpose is ``>= -tol``.
    """
    if tol <= 0:
        raise InvalidParameterError("tol must be positive")
    lowest = float(np.linalg.eigvalsh(partial_transpose(state, cut))[0])
    return lowest >= -tol, lowest


def cuts_of_size(n: int, k: int) -> list[Bipartition]:
    """All distinct ``k : (N-k)`` bipartitions of ``n`` qubits.

    When ``k == N - k`` each cut is listed once (the side containing qubit 1).
    """
    n = check_n_qubits(n, minimum=2)
    if not 1 <= k <= n - 1:
        return []
    out = []
    for a in itertools.combinations(range(1, n + 1), k):
        if 2 * k == n and 1 not in a:
            continue
        out.append(Bipartition(n, a))
    return out
