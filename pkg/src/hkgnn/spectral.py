"""Symmetric eigendecomposition and the graph Fourier transform.

The eigensolver is a cyclic-by-rows Jacobi iteration: unconditionally
symmetry-preserving, deterministic for identical input, and accurate to the
off-diagonal threshold. Columns are sorted ascending by eigenvalue (stable,
so ties keep their rotation order) and signed so the first component of
magnitude above 1e-12 is positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import Graph, normalized_laplacian

__all__ = [
    "SpectralDecomposition",
    "NotSymmetricError",
    "JacobiConvergenceError",
    "eig_sym",
    "decompose_graph",
    "graph_fourier",
    "inverse_fourier",
    "apply_filter",
    "zero_multiplicity",
]

OFFDIAG_TOL = 1e-12
MAX_SWEEPS = 100


class NotSymmetricError(ValueError):
    """Input matrix deviates from symmetry by more than the tolerance."""


class JacobiConvergenceError(RuntimeError):
    """Off-diagonal mass did not fall below threshold within the sweep budget."""


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues ascending, orthonormal eigenvector columns, and rho = max eigenvalue."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    rho: float

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]


def eig_sym(m: np.ndarray, *, offdiag_tol: float = OFFDIAG_TOL,
            max_sweeps: int = MAX_SWEEPS) -> SpectralDecomposition:
    """Diagonalize a symmetric matrix with cyclic Jacobi rotations.

    Raises NotSymmetricError if max|M - M^T| > 1e-12 and
    JacobiConvergenceError if the rotation sweeps fail to converge.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if np.max(np.abs(a - a.T), initial=0.0) > 1e-12:
        raise NotSymmetricError("matrix is not symmetric within 1e-12")
    n = a.shape[0]
    v = np.eye(n)
    if n > 1:
        for _ in range(max_sweeps):
            if _max_offdiag(a) <= offdiag_tol:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if abs(apq) <= offdiag_tol:
                        continue
                    tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(tau * tau + 1.0))
                    c = 1.0 / math.sqrt(t * t + 1.0)
                    s = t * c
                    _rotate(a, v, p, q, c, s)
        else:
            raise JacobiConvergenceError(
                f"no convergence after {max_sweeps} sweeps (off-diagonal "
                f"{_max_offdiag(a):.3e} > {offdiag_tol:.1e})")
    eigenvalues = a.diagonal().copy()
    order = np.argsort(eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    vectors = v[:, order]
    _fix_signs(vectors)
    return SpectralDecomposition(eigenvalues=eigenvalues, eigenvectors=vectors,
                                 rho=float(eigenvalues[-1]))


def _max_offdiag(a: np.ndarray) -> float:
    mask = np.abs(a).copy()
    np.fill_diagonal(mask, 0.0)
    return float(mask.max())


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int, c: float, s: float) -> None:
    col_p, col_q = a[:, p].copy(), a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q
    row_p, row_q = a[p, :].copy(), a[q, :].copy()
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q
    a[p, q] = 0.0
    a[q, p] = 0.0
    vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
    v[:, p] = c * vec_p - s * vec_q
    v[:, q] = s * vec_p + c * vec_q


def _fix_signs(vectors: np.ndarray, tol: float = 1e-12) -> None:
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        nonzero = np.nonzero(np.abs(col) > tol)[0]
        if nonzero.size and col[nonzero[0]] < 0.0:
            vectors[:, j] = -col


def decompose_graph(g: Graph) -> SpectralDecomposition:
    """Eigendecomposition of the graph's normalized Laplacian."""
    return eig_sym(normalized_laplacian(g))


def graph_fourier(decomp: SpectralDecomposition, h: np.ndarray) -> np.ndarray:
    """Project a signal onto the Laplacian eigenbasis: U^T h."""
    h = np.asarray(h, dtype=float)
    if h.shape[0] != decomp.n:
        raise ValueError(f"signal has {h.shape[0]} rows, decomposition has {decomp.n}")
    return decomp.eigenvectors.T @ h


def inverse_fourier(decomp: SpectralDecomposition, coeffs: np.ndarray) -> np.ndarray:
    """Map spectral coefficients back to the node domain: U coeffs."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape[0] != decomp.n:
        raise ValueError(f"coefficients have {coeffs.shape[0]} rows, decomposition has {decomp.n}")
    return decomp.eigenvectors @ coeffs


def apply_filter(decomp: SpectralDecomposition, gains: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Apply a per-eigenvalue gain vector: U diag(gains) U^T h."""
    gains = np.asarray(gains, dtype=float)
    if gains.shape != (decomp.n,):
        raise ValueError(f"gains must have shape ({decomp.n},), got {gains.shape}")
    coeffs = graph_fourier(decomp, h)
    scaled = gains[:, None] * coeffs if coeffs.ndim == 2 else gains * coeffs
    return inverse_fourier(decomp, scaled)


def zero_multiplicity(decomp: SpectralDecomposition, tol: float = 1e-9) -> int:
    """Number of eigenvalues within tol of zero (spectral component count)."""
    return int(np.count_nonzero(np.abs(decomp.eigenvalues) <= tol))
