from functools import reduce

import numpy as np

from bellscope.states import QuantumState

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
}


def random_state(n, rng, rank=None):
    dim = 1 << n
    rank = rank or dim
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return QuantumState(rho / np.trace(rho))


def kron_all(ops):
    return reduce(np.kron, ops)


def pauli_string_expectation(rho, word):
    """Tr[(sigma_{w_1} x ... x sigma_{w_N}) rho] by building the full operator."""
    return np.trace(kron_all([PAULI[c] for c in word]) @ rho)
