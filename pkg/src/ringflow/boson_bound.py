"""Two-boson minimal charge transfer.

The bosonic minimum at truncation N is exactly twice the single-particle
bound, attained by the product state c_mk = v_m v_k of the single-particle
minimizer v.  The identity is used directly; the (N+1)^2-dimensional
symmetric-sector eigenproblem is never solved in production (a dense
symmetric-sector embedding exists in the test suite as an independent
oracle at small N).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernel import build_kernel
from .single_particle import lambda_ring
from .two_particle import BOSON, CoefficientMatrix, delta2_quadratic, product_state

__all__ = ["BosonResult", "boson_bound", "boson_state_check"]

_MINOR_TOL = 1e-10
_IDENTITY_TOL = 1e-11

# Above this size the explicit 4-index minor tensor would not fit in memory;
# the second singular value bounds every 2x2 minor (|minor| <= s1*s2 <= s2
# for a unit-norm matrix) and is used instead.
_EXPLICIT_MINOR_LIMIT = 32


@dataclass(frozen=True)
class BosonResult:
    """Two-boson bound q_b = 2*lambda_ring with its product minimizer."""

    alpha: float
    n_max: int
    q_b: float
    state: CoefficientMatrix
    residual: float


def boson_bound(alpha: float, n_max: int, tol: float = 1e-10, seed: int = 0) -> BosonResult:
    """Minimal two-boson charge transfer at truncation n_max."""
    single = lambda_ring(alpha, n_max, tol=tol, seed=seed)
    return BosonResult(
        alpha=single.alpha,
        n_max=single.n_max,
        q_b=2.0 * single.lambda_ring,
        state=product_state(single.minimizer),
        residual=single.residual,
    )


def _rank_one_defect(values: np.ndarray) -> float:
    n = values.shape[0]
    if n <= _EXPLICIT_MINOR_LIMIT + 1:
        minors = np.einsum("mk,nl->mknl", values, values)
        minors = minors - minors.transpose(0, 3, 2, 1)
        return float(np.abs(minors).max())
    return float(np.linalg.svd(values, compute_uv=False)[1])


def boson_state_check(result: BosonResult) -> bool:
    """Verify normalization, bosonic symmetry, rank-1 structure and the transfer identity."""
    values = result.state.values
    if result.state.sigma != BOSON:
        return False
    if abs(float(np.sum(values * values)) - 1.0) > 1e-12:
        return False
    if not np.array_equal(values, values.T):
        return False
    if _rank_one_defect(values) > _MINOR_TOL:
        return False
    kernel = build_kernel(result.alpha, result.n_max)
    return abs(delta2_quadratic(result.state, kernel) - result.q_b) <= _IDENTITY_TOL
