"""Functional Bell inequalities for multi-qubit states.

Qubits are labelled 1..N with qubit 1 the most significant bit of the
computational-basis index.
"""

from .estimators import FunctionalBellTest, LHVOracle, MerminKlyshkoTest
from .exceptions import (
    BudgetExceededError,
    DimensionMismatchError,
    InvalidParameterError,
    NonHarmonicError,
)
from .functional import (
    QuadratureSpec,
    ThresholdComparison,
    ViolationReport,
    ghz_threshold_functional,
    ghz_threshold_two_setting,
    inner_product,
    lhv_bound_harmonic,
    norm_sq_analytic,
    norm_sq_quadrature,
    threshold_comparison,
    violation_report,
)
from .mermin import MKResult, mk_maximize, mk_value
from .observables import (
    CorrelationTensor,
    HarmonicForm,
    correlation,
    correlation_function,
    correlation_tensor,
    detect_harmonic,
    phase_observable,
)
from .oracle import (
    OracleResult,
    ResponseStrategy,
    maximize_decoupled,
    maximize_exhaustive,
    maximize_greedy,
    scalar_product_discrete,
)
from .states import (
    Bipartition,
    QuantumState,
    cuts_of_size,
    dur_alpha,
    is_ppt,
    make_dur_state,
    make_generalized_ghz,
    partial_transpose,
)

__version__ = "0.1.0"
