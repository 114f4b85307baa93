"""Single-particle backflow bound on the ring and its dynamics-level oracles.

The truncated bound lambda_ring(alpha, N) is the smallest eigenvalue of the
kernel restricted to modes 0..N; its unit eigenvector is the transfer-
minimizing coefficient vector.  The time-integrated current of any normalized
coefficient vector equals the kernel quadratic form c^T K c, and
``delta1_quadrature`` re-derives that number by integrating the physical
current j(0, t) over the window [-T/2, T/2], which makes the two routes
mutually checking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigensolve import EigenPair, smallest_eigenpair
from .kernel import KernelMatrix, build_kernel, mode_energies, period_from_alpha, validate_alpha

__all__ = [
    "SingleBound",
    "current_j",
    "delta1_quadratic",
    "delta1_quadrature",
    "lambda_ring",
]

_NORM_TOL = 1e-12
_IMAG_TOL = 1e-12


@dataclass(frozen=True)
class SingleBound:
    """Truncated single-particle bound with its minimizing coefficients."""

    alpha: float
    n_max: int
    lambda_ring: float
    minimizer: np.ndarray
    residual: float

    def __post_init__(self):
        self.minimizer.setflags(write=False)


def lambda_ring(alpha: float, n_max: int, tol: float = 1e-10, seed: int = 0) -> SingleBound:
    """Smallest eigenvalue of the kernel on modes 0..n_max plus its eigenvector."""
    alpha = validate_alpha(alpha)
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    kernel = build_kernel(alpha, n_max)
    pair: EigenPair = smallest_eigenpair(kernel.entries, tol=tol, seed=seed)
    return SingleBound(
        alpha=alpha,
        n_max=n_max,
        lambda_ring=pair.value,
        minimizer=pair.vector,
        residual=pair.residual,
    )


def _check_coefficients(values: np.ndarray, dim: int | None = None) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.ndim != 1:
        raise ValueError(f"coefficient vector must be 1-d, got shape {values.shape}")
    if dim is not None and values.size != dim:
        raise ValueError(f"coefficient vector length {values.size} does not match dimension {dim}")
    return values


def delta1_quadratic(coeffs: np.ndarray, kernel: KernelMatrix) -> float:
    """Time-integrated current as the kernel quadratic form c^T K c."""
    c = _check_coefficients(coeffs, kernel.dim)
    return float(c @ kernel.entries @ c)


def current_j(coeffs: np.ndarray, theta: float, t: float) -> float:
    """Probability current j(theta, t) of a normalized mode superposition.

    Evaluates the double sum over modes with phases exp(i*(m*theta - E_m*t));
    the imaginary parts cancel pairwise under m <-> n and are asserted to
    vanish before being discarded.  Units hbar/(mu*R^2).
    """
    c = _check_coefficients(coeffs)
    norm = float(c @ c)
    if abs(norm - 1.0) > _NORM_TOL:
        raise ValueError(f"coefficients must be unit-normalized, got |c|^2 = {norm!r}")
    m = np.arange(c.size, dtype=float)
    w = c * np.exp(1j * (m * theta - mode_energies(c.size - 1) * t))
    weight = m[:, None] + m[None, :]
    val = complex(np.sum(weight * np.outer(np.conj(w), w))) / (4.0 * np.pi)
    assert abs(val.imag) < _IMAG_TOL
    return val.real


def delta1_quadrature(coeffs: np.ndarray, alpha: float, quad_points: int = 256) -> float:
    """Gauss-Legendre time integral of j(0, t) over [-T/2, T/2], T = 4*alpha.

    Independent of the quadratic-form route: the integrand is the physical
    current, so this serves as the dynamics oracle for ``delta1_quadratic``.
    """
    if quad_points < 64:
        raise ValueError(f"quad_points must be >= 64, got {quad_points}")
    half_t = 0.5 * period_from_alpha(alpha)
    nodes, weights = np.polynomial.legendre.leggauss(quad_points)
    times = half_t * nodes
    return half_t * float(sum(w * current_j(coeffs, 0.0, t) for w, t in zip(weights, times)))
