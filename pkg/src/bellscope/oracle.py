"""Numerical check of the local-hidden-variable side of the functional inequality.

A deterministic strategy assigns a fixed outcome ``I_n(phi_k) = +-1`` to every
grid setting ``phi_k = 2 pi k / M`` at every site. Mixtures over hidden
variables are convex combinations of such strategies, and the scalar product
is linear in the mixture, so its maximum is attained by a deterministic one.

For ``E = A cos(sum(phi) - alpha)`` the discretised scalar product factorises
as ``A Re[exp(-i alpha) prod_n c_n]`` with
``c_n = (2 pi / M) sum_k I_n(k) exp(i phi_k)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .exceptions import BudgetExceededError, InvalidParameterError
from .observables import HarmonicForm
from .validation import TWO_PI, check_n_qubits

MAX_EXHAUSTIVE_M = 16
MAX_GRID = 4096


@dataclass(frozen=True, eq=False)
class ResponseStrategy:
    """Outcomes ``responses[n, k]`` in {+1, -1} for site ``n`` at setting ``2 pi k / M``."""

    responses: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.responses)
        if r.ndim != 2 or not np.all(np.abs(r) == 1):
            raise InvalidParameterError("responses must be an (N, M) array of +-1")
        r = r.astype(np.int8)
        r.setflags(write=False)
        object.__setattr__(self, "responses", r)

    @property
    def n_qubits(self) -> int:
        return self.responses.shape[0]

    @property
    def grid_size(self) -> int:
        return self.responses.shape[1]

    def bits(self) -> list[str]:
        """One string per site, ``1`` for outcome +1 and ``0`` for -1."""
        return ["".join("1" if x > 0 else "0" for x in row) for row in self.responses]

    def flipped(self, site: int) -> "ResponseStrategy":
        r = self.responses.copy()
        r[site] *= -1
        return ResponseStrategy(r)


@dataclass(frozen=True)
class OracleResult:
    best_value: float
    best_strategy: ResponseStrategy
    method: str
    amplitude: float

    @property
    def n_qubits(self) -> int:
        return self.best_strategy.n_qubits

    @property
    def continuum_bound(self) -> float:
        return 4.0**self.n_qubits * self.amplitude

    @property
    def ratio(self) -> float:
        bound = self.continuum_bound
        return self.best_value / bound if bound > 0 else 0.0

    def to_dict(self) -> dict:
        return {
            "n": self.n_qubits,
            "m": self.best_strategy.grid_size,
            "method": self.method,
            "amplitude": self.amplitude,
            "best_value": self.best_value,
            "continuum_bound": self.continuum_bound,
            "ratio": self.ratio,
            "strategy_bits": self.best_strategy.bits(),
        }


def grid_angles(m: int) -> np.ndarray:
    return TWO_PI * np.arange(m) / m


def _site_factors(patterns: np.ndarray, m: int) -> np.ndarray:
    """``c = (2 pi / M) sum_k I(k) exp(i phi_k)`` for each row of ``patterns``."""
    return patterns @ np.exp(1j * grid_angles(m)) * (TWO_PI / m)


def _check_harmonic(harmonic: HarmonicForm):
    if not harmonic.is_pure_harmonic:
        raise InvalidParameterError("the oracle only handles single-harmonic correlations")


def scalar_product_discrete(harmonic: HarmonicForm, strategy: ResponseStrategy) -> float:
    """Rectangle-rule ``<E|L>`` with ``L(phi) = prod_n I_n(phi_n)``, via the factorised form."""
    _check_harmonic(harmonic)
    c = _site_factors(strategy.responses.astype(float), strategy.grid_size)
    return harmonic.amplitude * float(np.real(np.exp(-1j * harmonic.phase) * np.prod(c)))


def scalar_product_direct(harmonic: HarmonicForm, strategy: ResponseStrategy) -> float:
    """The same quantity as an explicit ``M**N`` sum; only for small grids."""
    n, m = strategy.n_qubits, strategy.grid_size
    if m**n > 10**7:
        raise BudgetExceededError(f"{m}**{n} grid points is too many for direct summation")
    phi = grid_angles(m)
    total = 0.0
    for ks in itertools.product(range(m), repeat=n):
        lhv = np.prod([strategy.responses[s, k] for s, k in enumerate(ks)])
        total += harmonic.amplitude * np.cos(phi[list(ks)].sum() - harmonic.phase) * lhv
    return total * (TWO_PI / m) ** n


def arc_patterns(m: int) -> np.ndarray:
    """Sign patterns ``sign(cos(phi_k - theta))`` for ``theta`` between all breakpoints.

    Breakpoints sit at ``phi_k +- pi/2``, i.e. at integer (M even) or
    half-integer (M odd) multiples of ``pi / M``; the offsets used here are
    a quarter step away from both, so no entry is ever zero. Duplicate rows
    are removed; order is deterministic.
    """
    theta = np.pi * (np.arange(2 * m) + 0.25) / m
    pats = np.where(np.cos(grid_angles(m)[None, :] - theta[:, None]) > 0, 1, -1)
    _, first = np.unique(pats, axis=0, return_index=True)
    return pats[np.sort(first)]


def _check_grid(m: int, minimum: int) -> int:
    if int(m) != m or m < minimum or m > MAX_GRID:
        raise InvalidParameterError(f"grid size must be an integer in [{minimum}, {MAX_GRID}]")
    return int(m)


def maximize_decoupled(harmonic: HarmonicForm, n: int, m: int) -> OracleResult:
    """Maximise the discretised scalar product site by site.

    Each site plays the arc pattern of largest ``|c|``; the last site then
    picks, among all arc patterns, the one that best aligns the phase of the
    product with ``alpha``.
    """
    _check_harmonic(harmonic)
    n = check_n_qubits(n)
    m = _check_grid(m, 4)
    pats = arc_patterns(m)
    c = _site_factors(pats.astype(float), m)
    best = int(np.argmax(np.abs(c)))
    head = c[best] ** (n - 1)
    scores = np.real(np.exp(-1j * harmonic.phase) * head * c)
    last = int(np.argmax(scores))
    responses = np.vstack([np.tile(pats[best], (n - 1, 1)), pats[last][None, :]])
    value = harmonic.amplitude * float(scores[last])
    return OracleResult(value, ResponseStrategy(responses), "decoupled", harmonic.amplitude)


def _all_patterns(m: int) -> np.ndarray:
    k = np.arange(1 << m)[:, None]
    bits = (k >> np.arange(m - 1, -1, -1)[None, :]) & 1
    return np.where(bits == 1, 1, -1)


def _hull_indices(points: np.ndarray) -> np.ndarray:
    xy = np.column_stack([points.real, points.imag])
    try:
        return np.sort(ConvexHull(xy).vertices)
    except (QhullError, ValueError):
        # degenerate (collinear or tiny) sets: keep everything
        return np.arange(points.shape[0])


def maximize_exhaustive(harmonic: HarmonicForm, n: int, m: int) -> OracleResult:
    """Exact maximum by enumerating every one of the ``2**m`` patterns per site.

    The scalar product is linear in each site's factor ``c_n``, so the
    optimum over the product set is attained at convex-hull vertices of the
    per-site set; hulls are propagated site by site without any assumption
    about which patterns are optimal.
    """
    _check_harmonic(harmonic)
    n = check_n_qubits(n)
    m = int(m)
    if m > MAX_EXHAUSTIVE_M:
        raise BudgetExceededError(
            f"exhaustive enumeration of 2**{m} patterns per site exceeds 2**{MAX_EXHAUSTIVE_M}"
        )
    if m < 1:
        raise InvalidParameterError("grid size must be positive")
    pats = _all_patterns(m)
    c = _site_factors(pats.astype(float), m)
    site_vertices = _hull_indices(c)
    cv = c[site_vertices]

    # products reachable so far, with the pattern index used at each site
    values = cv.copy()
    choices = site_vertices[:, None]
    for _ in range(n - 1):
        prod = (values[:, None] * cv[None, :]).reshape(-1)
        hist = np.concatenate(
            [np.repeat(choices, cv.size, axis=0), np.tile(site_vertices, values.size)[:, None]],
            axis=1,
        )
        keep = _hull_indices(prod)
        values, choices = prod[keep], hist[keep]
    scores = harmonic.amplitude * np.real(np.exp(-1j * harmonic.phase) * values)
    # ties: lexicographically smallest strategy
    top = np.flatnonzero(scores >= scores.max() - 1e-12 * max(1.0, abs(scores.max())))
    winner = min(top, key=lambda i: tuple(choices[i]))
    responses = pats[choices[winner]]
    return OracleResult(float(scores[winner]), ResponseStrategy(responses), "exhaustive",
                        harmonic.amplitude)


def maximize_greedy(harmonic: HarmonicForm, n: int, m: int, restarts: int = 8,
                    seed: int = 0, max_sweeps: int = 100) -> OracleResult:
    """Best-response coordinate ascent from random strategies.

    Given the other sites, the best pattern at site ``n`` is
    ``sign(Re[z exp(i phi_k)])`` with ``z = exp(-i alpha) prod_{j != n} c_j``.
    """
    _check_harmonic(harmonic)
    n = check_n_qubits(n)
    m = _check_grid(m, 2)
    rng = np.random.default_rng(seed)
    phase = np.exp(1j * grid_angles(m))
    best_value, best_resp = -np.inf, None
    for _ in range(restarts):
        resp = rng.choice([-1, 1], size=(n, m))
        value = -np.inf
        for _ in range(max_sweeps):
            for site in range(n):
                c = _site_factors(resp.astype(float), m)
                z = np.exp(-1j * harmonic.phase) * np.prod(np.delete(c, site))
                proj = np.real(z * phase)
                resp[site] = np.where(proj >= 0, 1, -1)
            new = scalar_product_discrete(harmonic, ResponseStrategy(resp))
            if new <= value + 1e-14 * max(1.0, abs(value)):
                break
            value = new
        if value > best_value:
            best_value, best_resp = value, resp.copy()
    return OracleResult(float(best_value), ResponseStrategy(best_resp), "greedy",
                        harmonic.amplitude)
