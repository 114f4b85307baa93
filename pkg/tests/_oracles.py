"""Independent oracles for the test suite.

Everything here recomputes a quantity along a route the production code does
not take: high-precision scalar formula evaluation, literal triple sums,
dense block-diagonal assembly, wavefunction-level quadrature, and a
from-scratch Jacobi eigensolver.  Production modules must never import this.
"""

import mpmath
import numpy as np

TWO_PI = 2.0 * np.pi


def kernel_entry_highprec(alpha: float, m: int, n: int, dps: int = 50) -> float:
    """K_mn from the defining formula in 50-digit arithmetic."""
    with mpmath.workdps(dps):
        a = mpmath.mpf(alpha)
        z = a * (m * m - n * n)
        s = mpmath.mpf(1) if z == 0 else mpmath.sin(z) / z
        return float(a / mpmath.pi * (m + n) * s)


def dense_block_kernel(k_entries: np.ndarray) -> np.ndarray:
    """Explicit (N+1)^2 x (N+1)^2 block-diagonal matrix with K on each block."""
    dim = k_entries.shape[0]
    return np.kron(np.eye(dim), k_entries)


def flatten_first_index_fast(c: np.ndarray) -> np.ndarray:
    """Flatten c_mk with the first index fastest: slot m + k*(N+1)."""
    return c.reshape(-1, order="F")


def delta2_triple_loop(c: np.ndarray, k_entries: np.ndarray) -> float:
    """Literal evaluation of 2 * sum_{m,n,k} c_mk K_mn c_nk."""
    dim = c.shape[0]
    total = 0.0
    for k in range(dim):
        for m in range(dim):
            for n in range(dim):
                total += c[m, k] * k_entries[m, n] * c[n, k]
    return 2.0 * total


def jacobi_spectrum(a: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Full eigenvalue spectrum by cyclic Jacobi rotations, ascending."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= tol * np.linalg.norm(a):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0.0:
                    continue
                theta = 0.5 * (a[q, q] - a[p, p]) / a[p, q]
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
    return np.sort(np.diag(a))


def single_mode_energies(n_max: int) -> np.ndarray:
    m = np.arange(n_max + 1, dtype=float)
    return 0.5 * m * m


def j_wavefunction(c: np.ndarray, theta: float, t: float) -> float:
    """Single-particle current from psi directly: Im(psi* dpsi/dtheta)."""
    n_max = c.size - 1
    m = np.arange(n_max + 1, dtype=float)
    amp = c * np.exp(1j * (m * theta - single_mode_energies(n_max) * t)) / np.sqrt(TWO_PI)
    psi = amp.sum()
    dpsi = (1j * m * amp).sum()
    return float((np.conj(psi) * dpsi).imag)


def _mode_amplitudes(c: np.ndarray, theta: float, t: float, n_phi: int):
    n_max = c.shape[0] - 1
    m = np.arange(n_max + 1, dtype=float)
    energies = single_mode_energies(n_max)
    phis = np.linspace(0.0, TWO_PI, n_phi, endpoint=False)
    at_theta = np.exp(1j * (m * theta - energies * t)) / np.sqrt(TWO_PI)
    at_phi = np.exp(1j * (np.outer(m, phis) - energies[:, None] * t)) / np.sqrt(TWO_PI)
    return m, at_theta, at_phi, phis


def current_wavefunction(c: np.ndarray, theta: float, t: float, n_phi: int = 256) -> float:
    """Two-particle current from Psi directly: 2 Im integral dphi Psi* dPsi/dtheta.

    The phi integral of a trigonometric polynomial is evaluated exactly by the
    uniform rectangle rule once n_phi exceeds the bandwidth.
    """
    m, at_theta, at_phi, _ = _mode_amplitudes(c, theta, t, n_phi)
    psi = at_theta @ c @ at_phi
    dpsi = (1j * m * at_theta) @ c @ at_phi
    integrand = (np.conj(psi) * dpsi).imag
    return 2.0 * float(integrand.sum()) * (TWO_PI / n_phi)


def density_wavefunction(c: np.ndarray, theta: float, t: float, n_phi: int = 256) -> float:
    """Two-particle density from Psi directly: 2 integral dphi |Psi|^2."""
    _, at_theta, at_phi, _ = _mode_amplitudes(c, theta, t, n_phi)
    psi = at_theta @ c @ at_phi
    return 2.0 * float(np.sum(np.abs(psi) ** 2)) * (TWO_PI / n_phi)


def symmetric_sector_embedding(n_max: int) -> np.ndarray:
    """Orthonormal embedding of the symmetric sector: unit diagonal columns
    plus sqrt(2)-scaled off-diagonal pair columns."""
    dim = n_max + 1
    columns = []
    for k in range(dim):
        for m in range(k, dim):
            col = np.zeros((dim, dim))
            if m == k:
                col[m, k] = 1.0
            else:
                col[m, k] = col[k, m] = 1.0 / np.sqrt(2.0)
            columns.append(flatten_first_index_fast(col))
    return np.column_stack(columns)
