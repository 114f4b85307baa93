"""Charge-transfer kernel for non-negative angular momentum modes on a ring.

Reduced units hbar = mu = R = 1 are used everywhere.  The single scan
parameter is the dimensionless

    alpha = hbar*T / (4*mu*R^2)   =>   T = 4*alpha

where T is the length of the time window over which the current at a fixed
point of the ring is integrated.  Mode m >= 0 has energy E_m = m^2/2 and
wave function psi_m(theta) = exp(i*m*theta)/sqrt(2*pi); currents come out in
units hbar/(mu*R^2) and all transfers are dimensionless.

The kernel

    K_mn = (alpha/pi) * (m + n) * sinc(alpha*(m^2 - n^2)),   sinc z = sin(z)/z

turns the time-integrated current of a mode superposition into a quadratic
form: one particle gives c^T K c, two identical particles give
2*sum_k (c^T K c)_k with K acting block-diagonally on the first index of the
coefficient matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "KernelMatrix",
    "block_kernel_apply",
    "build_kernel",
    "mode_energies",
    "period_from_alpha",
    "sinc",
    "validate_alpha",
]

# Below this the two-term Taylor series is closer to sin(z)/z than the
# evaluated quotient (cancellation in sin); at z = 0 it is exact.
_SINC_TAYLOR_CUTOFF = 1e-8


def sinc(z):
    """sin(z)/z with the removable singularity filled in: sinc(0) = 1.

    Accepts scalars or arrays; even in z.
    """
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < _SINC_TAYLOR_CUTOFF
    safe = np.where(small, 1.0, z)
    out = np.where(small, 1.0 - z * z / 6.0, np.sin(safe) / safe)
    if out.ndim == 0:
        return float(out)
    return out


def validate_alpha(alpha: float) -> float:
    """Check that the scan parameter is a positive finite real and return it."""
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise ValueError(f"alpha must be positive and finite, got {alpha!r}")
    return alpha


def period_from_alpha(alpha: float) -> float:
    """Time window T = 4*alpha in reduced units."""
    return 4.0 * validate_alpha(alpha)


def mode_energies(n_max: int) -> np.ndarray:
    """Energies E_m = m^2/2 of the modes m = 0..n_max."""
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    m = np.arange(n_max + 1, dtype=float)
    return 0.5 * m * m


@dataclass(frozen=True)
class KernelMatrix:
    """Dense symmetric kernel K_mn for modes 0..n_max at a fixed alpha.

    entries is exactly symmetric (each unordered pair computed once) and
    write-protected; the diagonal is 2*m*alpha/pi and K_00 = 0.
    """

    alpha: float
    n_max: int
    entries: np.ndarray

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.n_max + 1


def build_kernel(alpha: float, n_max: int) -> KernelMatrix:
    """Assemble K_mn = (alpha/pi)*(m+n)*sinc(alpha*(m^2-n^2)) for 0 <= m,n <= n_max."""
    alpha = validate_alpha(alpha)
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    dim = n_max + 1
    i, j = np.triu_indices(dim)
    vals = (alpha / np.pi) * (i + j) * sinc(alpha * (i.astype(float) ** 2 - j.astype(float) ** 2))
    entries = np.zeros((dim, dim))
    entries[i, j] = vals
    entries[j, i] = vals
    return KernelMatrix(alpha=alpha, n_max=n_max, entries=entries)


def block_kernel_apply(kernel: KernelMatrix, coeffs: np.ndarray) -> np.ndarray:
    """Apply the block-diagonal two-particle kernel to a coefficient matrix.

    (K^ c)_{mk} = sum_n K_mn c_{nk}: the kernel acts on the first index for
    every value of the second, i.e. K @ c, without ever materializing the
    (N+1)^2 x (N+1)^2 block-diagonal matrix.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (kernel.dim, kernel.dim):
        raise ValueError(
            f"coefficient matrix shape {coeffs.shape} does not match kernel dimension {kernel.dim}"
        )
    return kernel.entries @ coeffs
