"""The functional Bell inequality over a continuum of phase settings.

For a correlation function ``E`` on the N-torus ``[0, 2pi)^N`` we use the
unnormalised inner product ``<f|g> = int f g dphi_1...dphi_N``. Any local
hidden variable correlation ``L`` satisfies ``<E|L> <= B``; if
``B < ||E||^2`` then ``E`` cannot equal any such ``L``. For single-harmonic
correlations ``E = A cos(sum(phi) - alpha)`` the bound is ``B = 4**N * A``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import BudgetExceededError, InvalidParameterError, NonHarmonicError
from .observables import (
    CorrelationTensor,
    HarmonicForm,
    correlation_tensor,
    detect_harmonic,
)
from .states import QuantumState
from .validation import TWO_PI, check_n_qubits

QUADRATURE_BUDGET = 10**8
MARGIN_RTOL = 1e-12
QUADRATURE_RTOL = 1e-10
_CHUNK_POINTS = 1 << 16


@dataclass(frozen=True)
class QuadratureSpec:
    """Uniform rectangle rule with ``points_per_dim`` left-endpoint nodes on ``[0, 2pi)``.

    The rule integrates ``exp(i k phi)`` exactly for ``|k| <= points_per_dim - 1``.
    """

    points_per_dim: int = 4

    def __post_init__(self):
        if int(self.points_per_dim) != self.points_per_dim or self.points_per_dim < 3:
            raise InvalidParameterError("points_per_dim must be an integer >= 3")

    @property
    def nodes(self) -> np.ndarray:
        return TWO_PI * np.arange(self.points_per_dim) / self.points_per_dim

    @property
    def weight(self) -> float:
        return TWO_PI / self.points_per_dim

    def n_points(self, n: int) -> int:
        return self.points_per_dim**n


def _grid_block(nodes: np.ndarray, n: int, start: int, stop: int) -> np.ndarray:
    m = nodes.shape[0]
    flat = np.arange(start, stop)
    digits = np.empty((flat.shape[0], n), dtype=np.int64)
    for k in range(n - 1, -1, -1):
        digits[:, k] = flat % m
        flat = flat // m
    return nodes[digits]


def inner_product(f, g, n: int, quad: QuadratureSpec | None = None) -> float:
    """Rectangle-rule approximation of ``int_{[0,2pi]^N} f g``.

    ``f`` and ``g`` take a ``(K, N)`` array of settings and return ``K``
    values. Blocks are summed in a fixed order so results are reproducible.
    """
    quad = quad or QuadratureSpec()
    n = check_n_qubits(n)
    total_points = quad.n_points(n)
    if total_points > QUADRATURE_BUDGET:
        raise BudgetExceededError(
            f"{total_points} quadrature points exceed the budget of {QUADRATURE_BUDGET}"
        )
    partials = []
    for start in range(0, total_points, _CHUNK_POINTS):
        phi = _grid_block(quad.nodes, n, start, min(start + _CHUNK_POINTS, total_points))
        partials.append(float(np.dot(np.asarray(f(phi)), np.asarray(g(phi)))))
    return math.fsum(partials) * quad.weight**n


def norm_sq_analytic(tensor: CorrelationTensor) -> float:
    """``||E||^2 = pi**N * sum_s T_s**2`` by orthogonality of the cos/sin product basis."""
    return math.pi**tensor.n_qubits * math.fsum(np.square(tensor.coeffs))


def norm_sq_quadrature(tensor: CorrelationTensor, quad: QuadratureSpec | None = None) -> float:
    return inner_product(tensor.evaluate, tensor.evaluate, tensor.n_qubits, quad)


def lhv_bound_harmonic(harmonic: HarmonicForm, n: int) -> float:
    """``B = 4**N * A``, the LHV scalar-product bound for ``A cos(sum(phi) - alpha)``."""
    if not harmonic.is_pure_harmonic:
        raise NonHarmonicError(
            "the 4**N bound is only established for single-harmonic correlations"
        )
    n = check_n_qubits(n)
    return 4.0**n * harmonic.amplitude


@dataclass(frozen=True)
class ViolationReport:
    """Outcome of the functional Bell test for one state.

    ``norm_sq`` and ``lhv_bound`` are raw integrals over ``[0, 2pi]^N``
    (no ``(2pi)^-N`` normalisation). ``method`` is ``"analytic"`` or
    ``"quadrature"``; in the latter case the analytic norm was confirmed by
    the rectangle rule and ``norm_sq_quadrature`` holds that value.
    """

    n_qubits: int
    norm_sq: float
    lhv_bound: float
    margin: float
    violated: bool
    method: str
    harmonic: HarmonicForm
    norm_sq_quadrature: float | None = None
    family: str = "custom"
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n": self.n_qubits,
            "family": self.family,
            "params": dict(self.params),
            "norm_sq": self.norm_sq,
            "lhv_bound": self.lhv_bound,
            "margin": self.margin,
            "violated": self.violated,
            "method": self.method,
        }


def decide(norm_sq: float, lhv_bound: float) -> tuple[float, bool]:
    """Margin and verdict; ties within ``MARGIN_RTOL`` count as not violated."""
    margin = norm_sq - lhv_bound
    scale = max(abs(norm_sq), abs(lhv_bound), 1.0)
    return margin, margin > MARGIN_RTOL * scale


def report_from_tensor(tensor: CorrelationTensor, quad: QuadratureSpec | None = None,
                       family: str = "custom", params: dict | None = None) -> ViolationReport:
    harmonic = detect_harmonic(tensor)
    bound = lhv_bound_harmonic(harmonic, tensor.n_qubits)
    norm_sq = norm_sq_analytic(tensor)
    method, quad_value = "analytic", None
    if quad is not None:
        quad_value = norm_sq_quadrature(tensor, quad)
        if abs(quad_value - norm_sq) > QUADRATURE_RTOL * max(norm_sq, 1.0):
            raise ArithmeticError(
                f"quadrature norm {quad_value!r} disagrees with analytic norm {norm_sq!r}"
            )
        method = "quadrature"
    margin, violated = decide(norm_sq, bound)
    return ViolationReport(
        n_qubits=tensor.n_qubits,
        norm_sq=norm_sq,
        lhv_bound=bound,
        margin=margin,
        violated=violated,
        method=method,
        harmonic=harmonic,
        norm_sq_quadrature=quad_value,
        family=family,
        params=dict(params or {}),
    )


def violation_report(state: QuantumState, quad: QuadratureSpec | None = None,
                     family: str = "custom", params: dict | None = None) -> ViolationReport:
    """Run the functional Bell test on ``state``.

    Raises :class:`NonHarmonicError` if the state's x-y plane correlation is
    not a single harmonic of ``sum(phi)``, and :class:`BudgetExceededError`
    if a requested quadrature cross-check is too large.
    """
    return report_from_tensor(correlation_tensor(state), quad, family, params)


def ghz_threshold_functional(n: int) -> float:
    """Smallest ``sin(2 beta)`` that is violated: ``2 (2/pi)**N`` (strict inequality)."""
    n = check_n_qubits(n, minimum=2, maximum=10**6)
    return 2.0 * (2.0 / math.pi) ** n


def ghz_threshold_two_setting(n: int) -> float:
    """``1/sqrt(2**(N-1))``, the two-setting correlation-inequality threshold for odd N."""
    n = check_n_qubits(n, minimum=2, maximum=10**6)
    return 2.0 ** (-(n - 1) / 2.0)


@dataclass(frozen=True)
class ThresholdComparison:
    """Functional vs two-setting thresholds on ``sin(2 beta)``.

    ``functional_wins`` is only a statement about odd N; for even N the
    two-setting inequalities are violated for every beta > 0.
    """

    n: int
    functional: float
    two_setting: float
    functional_wins: bool


def threshold_comparison(n: int) -> ThresholdComparison:
    f = ghz_threshold_functional(n)
    t = ghz_threshold_two_setting(n)
    return ThresholdComparison(n, f, t, f < t)


def dur_norm_sq(n: int) -> float:
    """``(2pi)**N / (2 (N+1)**2)``."""
    return TWO_PI**n / (2.0 * (n + 1) ** 2)


def dur_lhv_bound(n: int) -> float:
    return 4.0**n / (n + 1)


def ghz_norm_sq(n: int, beta: float) -> float:
    """``(2pi)**N sin(2 beta)**2 / 2``."""
    return TWO_PI**n * math.sin(2 * beta) ** 2 / 2.0
