"""Two-particle coefficient matrices, charge transfer and ring observables.

A two-particle state built from non-negative-momentum modes is a real
coefficient matrix c_mk with exchange symmetry c_km = sigma*c_mk, sigma = +1
for bosons and -1 for fermions (zero diagonal in the fermionic case).  The
particle-number current and density follow from the mode expansion through
the Gram matrix g = c c^T:

    J(theta, t)   = (1/2pi) * sum_mn (m+n) g_mn conj(u_m) u_n
    rho(theta, t) = (1/pi)  * sum_mn        g_mn conj(u_m) u_n

with u_m = exp(i*(m*theta - E_m*t)).  Integrating J(0, t) over the window
T = 4*alpha gives the charge transfer, which collapses to the kernel
quadratic form  Delta2 = 2 * sum_k,mn c_mk K_mn c_nk; the factor 2 counts the
two identical particles.  rho integrates to the particle number 2 over the
ring, and d(rho)/dt + dJ/d(theta) = 0 holds identically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernel import KernelMatrix, mode_energies, period_from_alpha, validate_alpha

__all__ = [
    "BOSON",
    "FERMION",
    "CoefficientMatrix",
    "appendix_a_check",
    "continuity_check",
    "current_J",
    "delta2_quadratic",
    "delta2_quadrature",
    "density_rho",
    "product_state",
    "random_state",
    "symmetrized_state",
]

BOSON = 1
FERMION = -1

_NORM_TOL = 1e-12
_IMAG_TOL = 1e-12


@dataclass(frozen=True)
class CoefficientMatrix:
    """Real (N+1)x(N+1) coefficient matrix with an exchange-symmetry tag.

    sigma is +1 (bosonic, exactly symmetric), -1 (fermionic, exactly
    antisymmetric with zero diagonal) or None (unconstrained).  Entries are
    unit-normalized in Frobenius norm and write-protected.
    """

    values: np.ndarray
    sigma: int | None

    def __post_init__(self):
        values = self.values
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError(f"coefficients must form a square matrix, got shape {values.shape}")
        if self.sigma not in (BOSON, FERMION, None):
            raise ValueError(f"sigma must be +1, -1 or None, got {self.sigma!r}")
        norm = float(np.sum(values * values))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"coefficients must be unit-normalized, got |c|^2 = {norm!r}")
        if self.sigma is not None and not np.array_equal(values.T, self.sigma * values):
            raise ValueError("coefficients do not satisfy the exchange symmetry for sigma")
        if self.sigma == FERMION and np.any(np.diagonal(values) != 0.0):
            raise ValueError("fermionic coefficients must have an exactly zero diagonal")
        values.setflags(write=False)

    @property
    def n_max(self) -> int:
        return self.values.shape[0] - 1


def symmetrized_state(values: np.ndarray, sigma: int) -> CoefficientMatrix:
    """Project a raw matrix onto the sigma sector and normalize it."""
    values = np.array(values, dtype=float)
    values = 0.5 * (values + sigma * values.T)
    if sigma == FERMION:
        np.fill_diagonal(values, 0.0)
    norm = np.linalg.norm(values)
    if norm == 0.0:
        raise ValueError("matrix has no component in the requested symmetry sector")
    return CoefficientMatrix(values=values / norm, sigma=sigma)


def random_state(n_max: int, sigma: int, rng: np.random.Generator) -> CoefficientMatrix:
    """Random normalized state: iid normal entries, symmetrized, normalized."""
    return symmetrized_state(rng.standard_normal((n_max + 1, n_max + 1)), sigma)


def product_state(coeffs: np.ndarray) -> CoefficientMatrix:
    """Bosonic product state c_mk = v_m v_k of a unit coefficient vector."""
    v = np.asarray(coeffs, dtype=float)
    outer = np.outer(v, v)
    return CoefficientMatrix(values=outer / np.linalg.norm(outer), sigma=BOSON)


def _values_of(state) -> np.ndarray:
    if isinstance(state, CoefficientMatrix):
        return state.values
    return np.asarray(state, dtype=float)


def delta2_quadratic(state, kernel: KernelMatrix) -> float:
    """Charge transfer as the quadratic form 2 * sum_k,mn c_mk K_mn c_nk."""
    c = _values_of(state)
    if c.shape != (kernel.dim, kernel.dim):
        raise ValueError(
            f"coefficient matrix shape {c.shape} does not match kernel dimension {kernel.dim}"
        )
    return 2.0 * float(np.sum(c * (kernel.entries @ c)))


def _tagged_values(state) -> np.ndarray:
    if not isinstance(state, CoefficientMatrix) or state.sigma not in (BOSON, FERMION):
        raise ValueError("observables require a CoefficientMatrix tagged sigma = +1 or -1")
    return state.values


def _phase_vector(n_max: int, theta: float, t: float) -> np.ndarray:
    m = np.arange(n_max + 1, dtype=float)
    return np.exp(1j * (m * theta - mode_energies(n_max) * t))


def current_J(state: CoefficientMatrix, theta: float, t: float) -> float:
    """Particle-number current J(theta, t) in units hbar/(mu*R^2).

    At theta = 0 this reduces term by term to the coefficient series
    (1/2pi) sum (m+n) c_mk c_nk exp(i(E_m-E_n)t).
    """
    c = _tagged_values(state)
    n_max = c.shape[0] - 1
    m = np.arange(n_max + 1, dtype=float)
    u = _phase_vector(n_max, theta, t)
    gram = c @ c.T
    weight = m[:, None] + m[None, :]
    val = complex(np.sum(weight * gram * np.outer(np.conj(u), u))) / (2.0 * np.pi)
    assert abs(val.imag) < _IMAG_TOL
    return val.real


def density_rho(state: CoefficientMatrix, theta: float, t: float) -> float:
    """Particle-number density rho(theta, t); integrates to 2 over the ring."""
    c = _tagged_values(state)
    n_max = c.shape[0] - 1
    u = _phase_vector(n_max, theta, t)
    gram = c @ c.T
    val = complex(np.sum(gram * np.outer(np.conj(u), u))) / np.pi
    assert abs(val.imag) < _IMAG_TOL
    return val.real


def continuity_check(
    state: CoefficientMatrix,
    thetas: np.ndarray,
    times: np.ndarray,
    h: float,
) -> float:
    """Max |d(rho)/dt + dJ/d(theta)| on the grid, central differences of step h.

    The defect is O(h^2); it measures stencil error only, since the identity
    holds exactly for the spectral observables.
    """
    if h <= 0.0:
        raise ValueError(f"step h must be positive, got {h}")
    worst = 0.0
    for theta in np.asarray(thetas, dtype=float):
        for t in np.asarray(times, dtype=float):
            drho_dt = (density_rho(state, theta, t + h) - density_rho(state, theta, t - h)) / (2.0 * h)
            dj_dtheta = (current_J(state, theta + h, t) - current_J(state, theta - h, t)) / (2.0 * h)
            worst = max(worst, abs(drho_dt + dj_dtheta))
    return worst


def delta2_quadrature(state: CoefficientMatrix, alpha: float, quad_points: int = 256) -> float:
    """Gauss-Legendre time integral of J(0, t) over [-T/2, T/2], T = 4*alpha.

    Dynamics oracle for ``delta2_quadratic``.
    """
    if quad_points < 64:
        raise ValueError(f"quad_points must be >= 64, got {quad_points}")
    half_t = 0.5 * period_from_alpha(alpha)
    nodes, weights = np.polynomial.legendre.leggauss(quad_points)
    return half_t * float(
        sum(w * current_J(state, 0.0, half_t * x) for w, x in zip(weights, nodes))
    )


def _sector_minimum(alpha: float, n_max: int, sigma: int) -> float:
    # Local imports: the bound modules build on this one.
    if sigma == BOSON:
        from .boson_bound import boson_bound

        return boson_bound(alpha, n_max).q_b
    from .fermion_bound import fermion_bound

    return fermion_bound(alpha, n_max).q_f


def appendix_a_check(
    trials: int,
    n_max: int,
    alpha: float,
    sigma: int,
    seed: int = 0,
) -> bool:
    """Check that complex coefficients cannot beat the real sector minimum.

    Each trial draws a random complex symmetric (or antisymmetric) state
    c = a + i*b with sum(a^2 + b^2) = 1 and verifies that

    1. the complex charge transfer 2 sum conj(c) K c is real and equals the
       sum of the real quadratic forms in a and b, and
    2. it is no smaller than the real minimum for (alpha, n_max, sigma)
       minus 1e-10.

    Returns True iff every trial passes.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    validate_alpha(alpha)
    if sigma not in (BOSON, FERMION):
        raise ValueError(f"sigma must be +1 or -1, got {sigma!r}")
    from .kernel import build_kernel

    kernel = build_kernel(alpha, n_max)
    minimum = _sector_minimum(alpha, n_max, sigma)
    rng = np.random.default_rng(seed)

    for _ in range(trials):
        a = rng.standard_normal((n_max + 1, n_max + 1))
        b = rng.standard_normal((n_max + 1, n_max + 1))
        a = 0.5 * (a + sigma * a.T)
        b = 0.5 * (b + sigma * b.T)
        if sigma == FERMION:
            np.fill_diagonal(a, 0.0)
            np.fill_diagonal(b, 0.0)
        scale = np.sqrt(np.sum(a * a) + np.sum(b * b))
        a /= scale
        b /= scale

        c = a + 1j * b
        complex_form = 2.0 * complex(np.sum(np.conj(c) * (kernel.entries @ c)))
        real_forms = delta2_quadratic(a, kernel) + delta2_quadratic(b, kernel)
        if abs(complex_form.imag) > _IMAG_TOL:
            return False
        if abs(complex_form.real - real_forms) > 1e-10:
            return False
        if complex_form.real < minimum - 1e-10:
            return False
    return True
