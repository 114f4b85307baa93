"""Smallest eigenpair of a dense real symmetric matrix, with certified residual.

Dense LAPACK diagonalization is used up to ``DENSE_DIM_LIMIT``; above that an
ARPACK Lanczos iteration (seeded start vector, smallest-algebraic mode) solves
for the single extreme eigenvalue, which is what the alpha scans need at
fermionic dimensions N(N+1)/2 of a few thousand.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

__all__ = [
    "DENSE_DIM_LIMIT",
    "EigenPair",
    "EigensolveError",
    "eigen_residual",
    "smallest_eigenpair",
]

DENSE_DIM_LIMIT = 512

_SYMMETRY_RTOL = 1e-12


class EigensolveError(RuntimeError):
    """Raised on invalid input or non-convergence; carries the best residual seen."""

    def __init__(self, message: str, best_residual: float | None = None):
        super().__init__(message)
        self.best_residual = best_residual


@dataclass(frozen=True)
class EigenPair:
    """Eigenvalue, unit eigenvector and the 2-norm residual ||A v - lambda v||."""

    value: float
    vector: np.ndarray
    residual: float

    def __post_init__(self):
        self.vector.setflags(write=False)


def _check_symmetric(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise EigensolveError(f"expected a square matrix, got shape {a.shape}")
    if np.array_equal(a, a.T):
        return a
    scale = np.abs(a).max()
    if scale > 0.0 and np.abs(a - a.T).max() > _SYMMETRY_RTOL * scale:
        raise EigensolveError("matrix is not symmetric within 1e-12 relative tolerance")
    return a


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    # Largest-magnitude entry made positive so minimizers are reproducible.
    if v[np.argmax(np.abs(v))] < 0.0:
        return -v
    return v


def eigen_residual(a: np.ndarray, pair: EigenPair) -> float:
    """||A v - lambda v||_2 for an eigenpair candidate."""
    a = np.asarray(a, dtype=float)
    if a.shape != (pair.vector.size, pair.vector.size):
        raise ValueError(
            f"matrix shape {a.shape} does not match vector length {pair.vector.size}"
        )
    return float(np.linalg.norm(a @ pair.vector - pair.value * pair.vector))


def smallest_eigenpair(a: np.ndarray, tol: float = 1e-10, seed: int = 0) -> EigenPair:
    """Algebraically smallest eigenvalue and unit eigenvector of a symmetric matrix.

    The returned residual satisfies ||A v - lambda v|| <= tol * ||A||_F.
    Deterministic for identical inputs and seed (the seed fixes the Lanczos
    start vector on the large-dimension path).
    """
    if tol <= 0.0:
        raise EigensolveError(f"tol must be positive, got {tol}")
    a = _check_symmetric(a)
    dim = a.shape[0]

    if dim <= DENSE_DIM_LIMIT:
        values, vectors = np.linalg.eigh(a)
        value = float(values[0])
        vector = vectors[:, 0].copy()
    else:
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(dim)
        v0 /= np.linalg.norm(v0)
        # Mostly-zero operators (the fermionic reduced matrix) iterate much
        # faster in CSR form; the result is the same eigenpair.
        operator = a
        if np.count_nonzero(a) < 0.25 * a.size:
            operator = csr_matrix(a)
        try:
            values, vectors = eigsh(
                operator, k=1, which="SA", v0=v0, maxiter=50 * dim, tol=0
            )
        except ArpackNoConvergence as exc:
            best = None
            if len(exc.eigenvalues):
                v = exc.eigenvectors[:, 0]
                best = float(np.linalg.norm(a @ v - exc.eigenvalues[0] * v))
            raise EigensolveError(
                f"Lanczos did not converge within {50 * dim} iterations", best_residual=best
            ) from exc
        value = float(values[0])
        vector = vectors[:, 0].copy()

    vector /= np.linalg.norm(vector)
    vector = _canonical_sign(vector)
    residual = float(np.linalg.norm(a @ vector - value * vector))
    limit = tol * np.linalg.norm(a)
    if residual > limit:
        raise EigensolveError(
            f"residual {residual:.3e} exceeds tolerance {limit:.3e}", best_residual=residual
        )
    return EigenPair(value=value, vector=vector, residual=residual)
