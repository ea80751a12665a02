"""Filter families and per-eigenvalue gain machinery.

A filter family is a scalar gain function on the graph spectrum [0, 2]; a
FilterSpec attaches per-eigenvalue gains theta, a warm-up multiplier gamma,
and an optional affine rescale of the evaluated response onto [0, 2].
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .spectral import SpectralDecomposition

__all__ = [
    "FilterFamily",
    "FilterSpec",
    "FilterResponse",
    "Monotonicity",
    "heat_low",
    "heat_high",
    "exp_poly",
    "identity_neg",
    "identity_pos",
    "sine_eighth",
    "cosine_eighth",
    "zero",
    "constant",
    "evaluate",
    "combined_response",
    "monotonicity",
    "rescale_0_2",
    "theta_vector",
    "specs_equal",
    "spec_to_config",
    "spec_from_config",
    "family_from_config",
]

MONOTONE_TIE_TOL = 1e-10
_DISTINCT_EIG_TOL = 1e-9

SPECTRUM_LO = 0.0
SPECTRUM_HI = 2.0


class Monotonicity(enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    CONSTANT = "constant"
    NEITHER = "neither"


@dataclass(frozen=True)
class FilterFamily:
    """A named scalar gain function, total on [0, 2].

    tag selects the rule; value carries the constant payload and coeffs the
    polynomial exponent for the exp_poly family.
    """

    tag: str
    value: float = 0.0
    coeffs: tuple[float, ...] = ()

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        if self.tag == "heat_low":
            return np.exp(-lam)
        if self.tag == "heat_high":
            return np.exp(lam)
        if self.tag == "exp_poly":
            return np.exp(_polyval(self.coeffs, lam))
        if self.tag == "identity_neg":
            return -lam
        if self.tag == "identity_pos":
            return lam.copy()
        if self.tag == "sine_eighth":
            return np.sin(lam / 8.0)
        if self.tag == "cosine_eighth":
            return np.cos(lam / 8.0)
        if self.tag == "zero":
            return np.zeros_like(lam)
        if self.tag == "constant":
            return np.full_like(lam, self.value)
        raise ValueError(f"unknown filter family tag {self.tag!r}")

    @property
    def trend(self) -> Monotonicity:
        """Monotone direction of the family on [0, 2]."""
        if self.tag in ("heat_low", "identity_neg", "cosine_eighth"):
            return Monotonicity.DECREASING
        if self.tag in ("heat_high", "identity_pos", "sine_eighth"):
            return Monotonicity.INCREASING
        if self.tag in ("zero", "constant"):
            return Monotonicity.CONSTANT
        if self.tag == "exp_poly":
            return _poly_trend(self.coeffs)
        raise ValueError(f"unknown filter family tag {self.tag!r}")


def _polyval(coeffs: tuple[float, ...], lam: np.ndarray) -> np.ndarray:
    out = np.zeros_like(lam)
    for c in reversed(coeffs):
        out = out * lam + c
    return out


def _poly_trend(coeffs: tuple[float, ...]) -> Monotonicity:
    deriv = [k * c for k, c in enumerate(coeffs)][1:]
    if not any(abs(c) > 0.0 for c in deriv):
        return Monotonicity.CONSTANT
    grid = np.linspace(SPECTRUM_LO, SPECTRUM_HI, 201)
    vals = _polyval(tuple(deriv), grid)
    if np.all(vals >= 0.0):
        return Monotonicity.INCREASING
    if np.all(vals <= 0.0):
        return Monotonicity.DECREASING
    return Monotonicity.NEITHER


def heat_low() -> FilterFamily:
    return FilterFamily("heat_low")


def heat_high() -> FilterFamily:
    return FilterFamily("heat_high")


def exp_poly(coeffs) -> FilterFamily:
    """exp(f(lambda)) for a user polynomial f of degree <= 3, monotone on [0, 2]."""
    coeffs = tuple(float(c) for c in coeffs)
    if len(coeffs) > 4:
        raise ValueError(f"exp_poly exponent degree must be <= 3, got degree {len(coeffs) - 1}")
    fam = FilterFamily("exp_poly", coeffs=coeffs)
    if fam.trend is Monotonicity.NEITHER:
        raise ValueError("exp_poly exponent must be monotone on [0, 2] "
                         "(derivative changes sign)")
    return fam


def identity_neg() -> FilterFamily:
    return FilterFamily("identity_neg")


def identity_pos() -> FilterFamily:
    return FilterFamily("identity_pos")


def sine_eighth() -> FilterFamily:
    return FilterFamily("sine_eighth")


def cosine_eighth() -> FilterFamily:
    return FilterFamily("cosine_eighth")


def zero() -> FilterFamily:
    return FilterFamily("zero")


def constant(c: float) -> FilterFamily:
    return FilterFamily("constant", value=float(c))


@dataclass(frozen=True, eq=False)
class FilterSpec:
    """Filter family plus per-eigenvalue gains, warm-up, and rescale policy.

    theta may be a scalar (broadcast over the spectrum) or a length-N vector.
    """

    family: FilterFamily
    theta: float | np.ndarray = 1.0
    gamma: float = 1.0
    rescale_to_0_2: bool = False


@dataclass(frozen=True, eq=False)
class FilterResponse:
    """Evaluated per-eigenvalue gains, index-aligned with the decomposition."""

    values: np.ndarray


def theta_vector(spec: FilterSpec, n: int) -> np.ndarray:
    """Materialize theta as a length-n vector, validating vector length."""
    if np.isscalar(spec.theta):
        return np.full(n, float(spec.theta))
    theta = np.asarray(spec.theta, dtype=float)
    if theta.shape != (n,):
        raise ValueError(f"theta must be scalar or shape ({n},), got {theta.shape}")
    return theta


def evaluate(spec: FilterSpec, decomp: SpectralDecomposition) -> FilterResponse:
    """Per-eigenvalue response gamma * theta_i * family(lambda_i), optionally rescaled."""
    theta = theta_vector(spec, decomp.n)
    values = spec.gamma * theta * spec.family(decomp.eigenvalues)
    if spec.rescale_to_0_2:
        return rescale_0_2(FilterResponse(values))
    return FilterResponse(values)


def combined_response(spec_low: FilterSpec, spec_high: FilterSpec,
                      decomp: SpectralDecomposition, *, square: bool = False) -> FilterResponse:
    """Elementwise sum of the two branch responses (squared first if requested).

    The squared form is the decomposition/reconstruction check for the
    sine/cosine pair, for which sin^2 + cos^2 is identically one.
    """
    low = evaluate(spec_low, decomp).values
    high = evaluate(spec_high, decomp).values
    if square:
        return FilterResponse(low * low + high * high)
    return FilterResponse(low + high)


def monotonicity(resp: FilterResponse, decomp: SpectralDecomposition,
                 tol: float = MONOTONE_TIE_TOL) -> Monotonicity:
    """Classify the response over consecutive distinct eigenvalues.

    Differences within tol count as ties and do not break monotonicity.
    """
    diffs = _distinct_steps(resp.values, decomp.eigenvalues)
    rose = any(d > tol for d in diffs)
    fell = any(d < -tol for d in diffs)
    if rose and fell:
        return Monotonicity.NEITHER
    if rose:
        return Monotonicity.INCREASING
    if fell:
        return Monotonicity.DECREASING
    return Monotonicity.CONSTANT


def _distinct_steps(values: np.ndarray, eigenvalues: np.ndarray) -> list[float]:
    """Response differences across consecutive distinct-eigenvalue positions."""
    diffs = []
    prev = 0
    for i in range(1, len(eigenvalues)):
        if eigenvalues[i] - eigenvalues[prev] > _DISTINCT_EIG_TOL:
            diffs.append(float(values[i] - values[prev]))
            prev = i
    return diffs


def rescale_0_2(resp: FilterResponse) -> FilterResponse:
    """Affinely map the response so min -> 0 and max -> 2.

    A constant response maps to the midpoint 1 to avoid dividing by zero.
    """
    values = resp.values
    lo, hi = float(values.min()), float(values.max())
    if hi - lo <= 0.0:
        return FilterResponse(np.ones_like(values))
    return FilterResponse(2.0 * (values - lo) / (hi - lo))


def specs_equal(a: FilterSpec, b: FilterSpec) -> bool:
    """True when two specs evaluate identically on any decomposition."""
    if a.family != b.family or a.gamma != b.gamma or a.rescale_to_0_2 != b.rescale_to_0_2:
        return False
    a_scalar, b_scalar = np.isscalar(a.theta), np.isscalar(b.theta)
    if a_scalar != b_scalar:
        return False
    if a_scalar:
        return float(a.theta) == float(b.theta)
    return np.array_equal(np.asarray(a.theta), np.asarray(b.theta))


_SIMPLE_TAGS = ("heat_low", "heat_high", "identity_neg", "identity_pos",
                "sine_eighth", "cosine_eighth", "zero")


def family_from_config(cfg) -> FilterFamily:
    """Parse a family from its config form: a tag string or a tagged object."""
    if isinstance(cfg, str):
        if cfg in _SIMPLE_TAGS:
            return FilterFamily(cfg)
        raise ValueError(f"unknown filter family {cfg!r}")
    tag = cfg.get("family")
    if tag == "constant":
        return constant(cfg["value"])
    if tag == "exp_poly":
        return exp_poly(cfg["coeffs"])
    if tag in _SIMPLE_TAGS:
        return FilterFamily(tag)
    raise ValueError(f"unknown filter family {tag!r}")


def _family_to_config(fam: FilterFamily):
    if fam.tag == "constant":
        return {"family": "constant", "value": fam.value}
    if fam.tag == "exp_poly":
        return {"family": "exp_poly", "coeffs": list(fam.coeffs)}
    return fam.tag


def spec_to_config(spec: FilterSpec) -> dict:
    theta = spec.theta if np.isscalar(spec.theta) else [float(t) for t in np.asarray(spec.theta)]
    return {
        "family": _family_to_config(spec.family),
        "theta": theta,
        "gamma": spec.gamma,
        "rescale": spec.rescale_to_0_2,
    }


def spec_from_config(cfg: dict) -> FilterSpec:
    family = family_from_config(cfg["family"])
    theta = cfg.get("theta", 1.0)
    if isinstance(theta, list):
        theta = np.asarray(theta, dtype=float)
    else:
        theta = float(theta)
    return FilterSpec(family=family, theta=theta,
                      gamma=float(cfg.get("gamma", 1.0)),
                      rescale_to_0_2=bool(cfg.get("rescale", False)))
