"""Dirichlet-energy dynamics: simulation, LFD/HFD verdicts, and constructions.

A layer applies U diag(r) U^T H W where r is the combined response of a
low/high filter pair. Verdicts follow the limit-state characterization:
the dynamic is LFD when the normalized state settles into the Laplacian
kernel (Rayleigh quotient -> 0) and HFD when it settles into the top
eigenspace (L_hat H = rho H, checked through the residual). The measured
Rayleigh limit is reported as dominant_frequency rather than assuming a
normalization constant.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .filters import (FilterSpec, Monotonicity, combined_response, evaluate,
                      theta_vector)
from .spectral import SpectralDecomposition, apply_filter

__all__ = [
    "LayerSpec",
    "DynamicsReport",
    "Verdict",
    "ResponseCase",
    "FamilyTrendError",
    "dirichlet_energy",
    "propagate",
    "simulate",
    "closed_form_trajectory",
    "make_hfd_zeta",
    "lfd_zeta_threshold",
    "delayed_hfd_construct",
    "classify_response_case",
]

VERDICT_EPS = 1e-3
_DISTINCT_EIG_TOL = 1e-9
_COLLAPSE_NORM = 1e-300


class Verdict(enum.Enum):
    LFD = "LFD"
    HFD = "HFD"
    UNDETERMINED = "Undetermined"


class ResponseCase(enum.Enum):
    """Trichotomy for nonnegative-gain responses over the spectrum."""

    INCREASING_SOMEWHERE = "increasing_somewhere"
    CONSTANT = "constant"
    DECREASING_ABOVE_SPECTRUM = "decreasing_above_spectrum"


class FamilyTrendError(ValueError):
    """Filter families incompatible with the requested construction."""


@dataclass(frozen=True, eq=False)
class LayerSpec:
    """A low/high filter pair sharing one channel-mixing weight matrix."""

    spec_low: FilterSpec
    spec_high: FilterSpec
    weight: np.ndarray


@dataclass(frozen=True, eq=False)
class DynamicsReport:
    steps: int
    energy: np.ndarray
    rayleigh: np.ndarray
    verdict: Verdict
    dominant_frequency: float | None
    final_state: np.ndarray


def dirichlet_energy(h: np.ndarray, laplacian: np.ndarray) -> float:
    """Tr(H^T L_hat H), clamped at zero against roundoff."""
    h = np.asarray(h, dtype=float)
    if h.shape[0] != laplacian.shape[0]:
        raise ValueError(f"H has {h.shape[0]} rows, Laplacian is {laplacian.shape[0]}x"
                         f"{laplacian.shape[1]}")
    if h.ndim == 1:
        e = float(h @ laplacian @ h)
    else:
        e = float(np.trace(h.T @ (laplacian @ h)))
    return max(e, 0.0)


def propagate(layer: LayerSpec, decomp: SpectralDecomposition, h: np.ndarray) -> np.ndarray:
    """One step U diag(r_low + r_high) U^T H W."""
    r = combined_response(layer.spec_low, layer.spec_high, decomp).values
    return apply_filter(decomp, r, h) @ layer.weight


def simulate(layer: LayerSpec, decomp: SpectralDecomposition, h0: np.ndarray,
             steps: int, *, eps: float = VERDICT_EPS) -> DynamicsReport:
    """Iterate the layer, renormalizing the state to unit Frobenius norm each step.

    energy[t] is the raw one-step output energy from the unit-norm state,
    rayleigh[t] the energy of the renormalized state. Verdicts need enough
    steps to converge; 200 or more is a sensible floor at desk scale.
    """
    if steps < 1:
        raise ValueError("simulate requires at least one step")
    h = np.asarray(h0, dtype=float)
    norm = float(np.linalg.norm(h))
    if norm == 0.0:
        raise ValueError("initial state must be nonzero")
    laplacian = (decomp.eigenvectors * decomp.eigenvalues) @ decomp.eigenvectors.T
    energy = np.zeros(steps + 1)
    rayleigh = np.zeros(steps + 1)
    energy[0] = dirichlet_energy(h, laplacian)
    unit = h / norm
    rayleigh[0] = dirichlet_energy(unit, laplacian)
    collapsed = False
    for t in range(1, steps + 1):
        raw = propagate(layer, decomp, unit)
        if not np.all(np.isfinite(raw)):
            raise FloatingPointError(f"propagation overflowed at step {t}")
        energy[t] = dirichlet_energy(raw, laplacian)
        norm = float(np.linalg.norm(raw))
        if norm <= _COLLAPSE_NORM:
            energy[t:] = 0.0
            rayleigh[t:] = 0.0
            unit = np.zeros_like(unit)
            collapsed = True
            break
        unit = raw / norm
        rayleigh[t] = dirichlet_energy(unit, laplacian)
    if collapsed:
        # The map annihilated the state: energy is identically zero, the
        # limiting smoothing behaviour.
        return DynamicsReport(steps, energy, rayleigh, Verdict.LFD, 0.0, unit)
    ray = float(rayleigh[-1])
    residual_top = float(np.linalg.norm(laplacian @ unit - decomp.rho * unit))
    if ray < eps:
        verdict = Verdict.LFD
    elif abs(ray - decomp.rho) < eps and residual_top < eps:
        verdict = Verdict.HFD
    else:
        verdict = Verdict.UNDETERMINED
    return DynamicsReport(steps, energy, rayleigh, verdict, ray, unit)


def closed_form_trajectory(layer: LayerSpec, decomp: SpectralDecomposition,
                           h0: np.ndarray, steps: int) -> np.ndarray:
    """State after `steps` applications, from the eigen-pairs of W and L_hat.

    Expands H(0) in the product basis u_i phi_k^T and scales each coefficient
    by (r(lambda_i) * lambda_k^W)^steps. Requires symmetric W.
    """
    from .spectral import eig_sym

    w = np.asarray(layer.weight, dtype=float)
    if np.max(np.abs(w - w.T), initial=0.0) > 1e-12:
        raise ValueError("closed-form trajectory requires a symmetric weight matrix")
    h0 = np.asarray(h0, dtype=float)
    w_eig = eig_sym(w)
    r = combined_response(layer.spec_low, layer.spec_high, decomp).values
    coeffs = decomp.eigenvectors.T @ h0 @ w_eig.eigenvectors
    growth = np.power(np.outer(r, w_eig.eigenvalues), steps)
    return decomp.eigenvectors @ (coeffs * growth) @ w_eig.eigenvectors.T


def make_hfd_zeta(spec_low: FilterSpec, spec_high: FilterSpec,
                  decomp: SpectralDecomposition, *, zeta_max: float = 1e4,
                  points_per_decade: int = 25, top_margin: float = 1e-6) -> float:
    """Smallest grid zeta making r_low + zeta * r_high strictly increasing.

    The grid is logarithmic from 1e-2 to zeta_max. Acceptance additionally
    requires the maximum to sit at rho with margin top_margin over every
    lower eigenvalue, which guarantees the HFD limit.
    """
    if spec_high.family.trend is not Monotonicity.INCREASING:
        raise FamilyTrendError("the high-branch family must be monotonically increasing")
    low = evaluate(spec_low, decomp).values
    high = evaluate(spec_high, decomp).values
    lam = decomp.eigenvalues
    below_top = lam < decomp.rho - _DISTINCT_EIG_TOL
    n_points = int(round(points_per_decade * (np.log10(zeta_max) + 2.0))) + 1
    for j in range(n_points):
        zeta = 10.0 ** (-2.0 + j / points_per_decade)
        if zeta > zeta_max * (1.0 + 1e-12):
            break
        r = low + zeta * high
        steps = _distinct_diffs(r, lam)
        if steps and min(steps) <= 0.0:
            continue
        if np.any(below_top) and r[-1] - r[below_top].max() < top_margin:
            continue
        return zeta
    raise FamilyTrendError(f"no zeta <= {zeta_max:g} produces a strictly increasing "
                           "response peaking at rho (incompatible families)")


def lfd_zeta_threshold(spec_low: FilterSpec, spec_high: FilterSpec,
                       decomp: SpectralDecomposition) -> float:
    """Largest zeta keeping r_low + zeta * r_high non-increasing on the spectrum.

    Returns 0.0 when no positive zeta works (the low branch already rises
    somewhere the high branch rises too); any zeta strictly below the
    returned value yields a decreasing combined response, hence LFD.
    """
    low = evaluate(spec_low, decomp).values
    high = evaluate(spec_high, decomp).values
    lam = decomp.eigenvalues
    bound = np.inf
    for d_low, d_high in zip(_distinct_diffs(low, lam), _distinct_diffs(high, lam)):
        if d_high <= 0.0:
            if d_low > 0.0:
                return 0.0
            continue
        bound = min(bound, max(-d_low, 0.0) / d_high)
    return float(bound)


def _distinct_diffs(values: np.ndarray, eigenvalues: np.ndarray) -> list[float]:
    diffs = []
    prev = 0
    for i in range(1, len(eigenvalues)):
        if eigenvalues[i] - eigenvalues[prev] > _DISTINCT_EIG_TOL:
            diffs.append(float(values[i] - values[prev]))
            prev = i
    return diffs


def delayed_hfd_construct(decomp: SpectralDecomposition, k: int, target_margin: float,
                          *, family_high=None) -> tuple[np.ndarray, np.ndarray]:
    """Gain vectors giving zero response on the k kernel modes and
    (1 - margin) * lambda above them.

    The combined response is then increasing past the kernel block and sits
    elementwise at or below lambda_i - margin * lambda_i, the delayed-HFD
    regime with non-increasing over-squashing.
    """
    from .filters import heat_high

    if not 0.0 < target_margin < 1.0:
        raise ValueError(f"target margin must lie in (0, 1), got {target_margin}")
    lam = decomp.eigenvalues
    n = decomp.n
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    zero_count = int(np.count_nonzero(np.abs(lam) <= _DISTINCT_EIG_TOL))
    if zero_count != k:
        raise ValueError(f"k={k} does not match the zero-eigenvalue multiplicity {zero_count}")
    if k < n and lam[k] <= _DISTINCT_EIG_TOL:
        raise ValueError("eigenvalues beyond the kernel block must be strictly positive")
    family = heat_high() if family_high is None else family_high
    gains = family(lam)
    theta1 = np.zeros(n)
    theta2 = np.zeros(n)
    theta2[k:] = (1.0 - target_margin) * lam[k:] / gains[k:]
    return theta1, theta2


def classify_response_case(spec_low: FilterSpec, spec_high: FilterSpec,
                           decomp: SpectralDecomposition, *, tol: float = 1e-10) -> ResponseCase:
    """Trichotomize a nonnegative-gain combined response over the spectrum.

    Nonnegative gains admit exactly three shapes: rising somewhere, constant
    everywhere, or genuinely decreasing, in which case the response exceeds
    the spectrum at the kernel (lambda = 0) and over-squashing grows. A
    decreasing response that stays at or below lambda everywhere while being
    nonzero cannot occur.
    """
    for spec in (spec_low, spec_high):
        theta = theta_vector(spec, decomp.n)
        if np.any(theta < 0.0):
            raise ValueError("gain vectors must be nonnegative for this classification")
    r = combined_response(spec_low, spec_high, decomp).values
    diffs = _distinct_diffs(r, decomp.eigenvalues)
    if any(d > tol for d in diffs):
        return ResponseCase.INCREASING_SOMEWHERE
    if any(d < -tol for d in diffs):
        return ResponseCase.DECREASING_ABOVE_SPECTRUM
    return ResponseCase.CONSTANT
