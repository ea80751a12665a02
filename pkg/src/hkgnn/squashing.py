"""Sensitivity bounds, exact Jacobians of the linear model, and OSQ scores.

The filter pair induces two weighted adjacencies A_low = I - U diag(r_low) U^T
and A_high likewise; their sum S drives the spatial form H' = S H W whose
depth-ell Jacobian between a node pair is bounded by w^ell (S^ell)_{v,u}.
The bound's derivation silently assumes S is elementwise nonnegative, so the
report carries a validity flag instead of clamping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import LayerSpec, dirichlet_energy, propagate
from .filters import FilterSpec, combined_response, evaluate, specs_equal
from .graphs import Graph, normalized_adjacency
from .spectral import SpectralDecomposition

__all__ = [
    "SensitivityReport",
    "TradeoffResult",
    "DominanceError",
    "HeterogeneousFiltersError",
    "build_sensitivity",
    "sensitivity_bound",
    "bound_matrix",
    "osq_matrix",
    "osq_score",
    "linear_stack_forward",
    "exact_jacobian_norm",
    "energy_tradeoff",
    "reweighting_matrix",
]

NEGATIVE_ENTRY_TOL = 1e-12
UNREACHABLE_TOL = 1e-12


class DominanceError(ValueError):
    """Elementwise response dominance precondition violated."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class HeterogeneousFiltersError(ValueError):
    """Layers do not share one filter pair, so the exact Jacobian form breaks."""


@dataclass(eq=False)
class SensitivityReport:
    """S and its ingredients, with cached dense powers.

    has_negative_entries flags min(S) < -1e-12: the sensitivity bound is
    still computed but its nonnegativity-based guarantees do not apply.
    """

    a_low: np.ndarray
    a_high: np.ndarray
    s: np.ndarray
    has_negative_entries: bool
    _powers: dict = field(default_factory=dict, repr=False)

    def s_power(self, ell: int) -> np.ndarray:
        if ell < 1:
            raise ValueError(f"power must be >= 1, got {ell}")
        if ell not in self._powers:
            self._powers[1] = self.s
            highest = max(p for p in self._powers if p <= ell)
            current = self._powers[highest]
            for p in range(highest + 1, ell + 1):
                current = current @ self.s
                self._powers[p] = current
        return self._powers[ell]


def build_sensitivity(spec_low: FilterSpec, spec_high: FilterSpec,
                      decomp: SpectralDecomposition) -> SensitivityReport:
    """Assemble A_low, A_high, and S = A_low + A_high from the filter pair."""
    u = decomp.eigenvectors
    r_low = evaluate(spec_low, decomp).values
    r_high = evaluate(spec_high, decomp).values
    eye = np.eye(decomp.n)
    a_low = eye - (u * r_low) @ u.T
    a_high = eye - (u * r_high) @ u.T
    s = a_low + a_high
    return SensitivityReport(a_low=a_low, a_high=a_high, s=s,
                             has_negative_entries=bool(s.min() < -NEGATIVE_ENTRY_TOL))


def sensitivity_bound(report: SensitivityReport, w: float, ell: int, v: int, u: int) -> float:
    """Mixing bound w^ell (S^ell)_{v,u} for one node pair."""
    if ell < 1:
        raise ValueError(f"depth must be >= 1, got {ell}")
    if w < 0.0:
        raise ValueError(f"weight budget must be >= 0, got {w}")
    n = report.s.shape[0]
    if not (0 <= v < n and 0 <= u < n):
        raise IndexError(f"node pair ({v}, {u}) out of range [0, {n})")
    return float(w ** ell * report.s_power(ell)[v, u])


def bound_matrix(report: SensitivityReport, w: float, ell: int) -> np.ndarray:
    """All-pairs mixing bounds w^ell S^ell."""
    if ell < 1:
        raise ValueError(f"depth must be >= 1, got {ell}")
    if w < 0.0:
        raise ValueError(f"weight budget must be >= 0, got {w}")
    return w ** ell * report.s_power(ell)


def osq_matrix(report: SensitivityReport, w: float, ell: int) -> np.ndarray:
    """Over-squashing scores 1 / bound, with +inf marking pairs whose bound
    vanishes (unreachable at depth ell)."""
    bounds = bound_matrix(report, w, ell)
    out = np.full_like(bounds, np.inf)
    reachable = np.abs(bounds) > UNREACHABLE_TOL
    out[reachable] = 1.0 / bounds[reachable]
    return out


def osq_score(report: SensitivityReport, w: float, ell: int, v: int, u: int) -> float:
    bound = sensitivity_bound(report, w, ell, v, u)
    if abs(bound) <= UNREACHABLE_TOL:
        return math.inf
    return 1.0 / bound


def linear_stack_forward(s: np.ndarray, weights, x: np.ndarray) -> np.ndarray:
    """Activation-free stack: S^ell X W_0 ... W_{ell-1} applied layer by layer."""
    h = np.asarray(x, dtype=float)
    for w in weights:
        h = s @ h @ w
    return h


def exact_jacobian_norm(layers, decomp: SpectralDecomposition, v: int, u: int) -> float:
    """Spectral norm of d h_v / d x_u for an activation-free layer stack.

    All layers must share one filter pair; the Jacobian block is then
    (S^ell)_{v,u} times the transposed weight-chain product, independent of
    the input. With heterogeneous pairs exactness fails, so that is an error
    rather than an approximation.
    """
    layers = list(layers)
    if not layers:
        raise ValueError("need at least one layer")
    first = layers[0]
    for layer in layers[1:]:
        if not (specs_equal(layer.spec_low, first.spec_low)
                and specs_equal(layer.spec_high, first.spec_high)):
            raise HeterogeneousFiltersError(
                "layers use different filter pairs; the shared-S form does not apply")
    report = build_sensitivity(first.spec_low, first.spec_high, decomp)
    ell = len(layers)
    entry = report.s_power(ell)[v, u]
    product = layers[0].weight
    for layer in layers[1:]:
        product = product @ layer.weight
    return float(abs(entry) * np.linalg.norm(product, 2))


@dataclass(frozen=True)
class TradeoffResult:
    passed: bool
    energy1: float
    energy2: float


def energy_tradeoff(pair1, pair2, decomp: SpectralDecomposition, h: np.ndarray,
                    weight: np.ndarray) -> TradeoffResult:
    """One-step Dirichlet-energy comparison for a dominated filter pair.

    Preconditions: on every nonzero eigenvalue, 0 <= response1 < response2
    (the comparison argument needs nonnegative gains, as with exponential
    filters). Violations raise DominanceError with the offending index.
    Returns PASS when the dominated pair's one-step energy is strictly lower.
    """
    r1 = combined_response(pair1[0], pair1[1], decomp).values
    r2 = combined_response(pair2[0], pair2[1], decomp).values
    lam = decomp.eigenvalues
    for i in range(decomp.n):
        if lam[i] <= 1e-9:
            continue
        if r1[i] < -NEGATIVE_ENTRY_TOL:
            raise DominanceError(
                f"response1[{i}] = {r1[i]:.6g} is negative; the energy comparison "
                "requires nonnegative responses", i)
        if not r1[i] < r2[i]:
            raise DominanceError(
                f"dominance violated at index {i}: response1 = {r1[i]:.6g} "
                f">= response2 = {r2[i]:.6g}", i)
    laplacian = (decomp.eigenvectors * decomp.eigenvalues) @ decomp.eigenvectors.T
    e1 = dirichlet_energy(propagate(LayerSpec(pair1[0], pair1[1], weight), decomp, h), laplacian)
    e2 = dirichlet_energy(propagate(LayerSpec(pair2[0], pair2[1], weight), decomp, h), laplacian)
    return TradeoffResult(passed=e1 < e2, energy1=e1, energy2=e2)


def reweighting_matrix(report: SensitivityReport, g: Graph) -> np.ndarray:
    """Elementwise S / A_hat on the support of A_hat, zero elsewhere."""
    a_hat = normalized_adjacency(g)
    out = np.zeros_like(report.s)
    support = a_hat != 0.0
    out[support] = report.s[support] / a_hat[support]
    return out
