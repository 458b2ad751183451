"""Exception types raised by bellscope."""


class InvalidParameterError(ValueError):
    """A state-family or settings parameter is outside its allowed range."""


class DimensionMismatchError(ValueError):
    """Settings or operators do not match the number of qubits of a state."""


class NonHarmonicError(ValueError):
    """The correlation function is not of the form A cos(sum(phi) - alpha).

    The local-hidden-variable bound 4**N * A is only established for such
    single-harmonic correlations, so no verdict is produced for others.
    """


class BudgetExceededError(ValueError):
    """A grid evaluation or enumeration would exceed its work budget."""
