"""Two-fermion minimal charge transfer via the antisymmetric embedding.

Antisymmetry leaves N(N+1)/2 independent coefficients u_(m,k), m > k.  The
sparse embedding M places +u at slot (m,k) and -u at slot (k,m) of the
flattened coefficient vector (first index fastest), so M^T M = 2I, the
physical normalization reads 2 u^T u = 1, and the minimal transfer is the
smallest eigenvalue of the reduced symmetric matrix M^T K^ M.

The reduced matrix is assembled from the index expansion

    R[(m,k),(n,l)] = d_kl K_mn + d_mn K_kl - d_kn K_ml - d_ml K_kn

which is an optimization over the defining column-by-column product with the
block kernel; the first assembly in a process cross-checks the two paths at
small N before the fast path is trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .eigensolve import smallest_eigenpair
from .kernel import KernelMatrix, block_kernel_apply, build_kernel, validate_alpha
from .two_particle import FERMION, CoefficientMatrix, delta2_quadratic

__all__ = [
    "Antisymmetrizer",
    "FermionResult",
    "build_antisymmetrizer",
    "fermion_bound",
    "fermion_state_check",
    "reduced_matrix",
]

_VALIDATION_N = 4
_VALIDATION_ALPHA = 0.37
_validated_fast_path = False


@dataclass(frozen=True)
class Antisymmetrizer:
    """Sparse embedding of independent fermionic coefficients, two entries per column.

    Pairs (m, k) with m > k are ordered k-major: (1,0), (2,0), ..., (N,0),
    (2,1), ..., (N,N-1).  Column j has +1 at flat slot m + k*(N+1) and -1 at
    flat slot k + m*(N+1).
    """

    n_max: int
    pair_m: np.ndarray
    pair_k: np.ndarray

    def __post_init__(self):
        self.pair_m.setflags(write=False)
        self.pair_k.setflags(write=False)

    @property
    def n_pairs(self) -> int:
        return self.pair_m.size

    @property
    def dim_full(self) -> int:
        return (self.n_max + 1) ** 2

    @property
    def pair_index(self) -> list[tuple[int, int]]:
        return list(zip(self.pair_m.tolist(), self.pair_k.tolist()))

    def to_dense(self, dtype=np.float64) -> np.ndarray:
        """Dense (N+1)^2 x N(N+1)/2 matrix; tests and small N only."""
        dense = np.zeros((self.dim_full, self.n_pairs), dtype=dtype)
        cols = np.arange(self.n_pairs)
        width = self.n_max + 1
        dense[self.pair_m + self.pair_k * width, cols] = 1
        dense[self.pair_k + self.pair_m * width, cols] = -1
        return dense

    def embed(self, u: np.ndarray) -> np.ndarray:
        """Antisymmetric coefficient matrix c with c[m,k] = u_(m,k) = -c[k,m]."""
        u = np.asarray(u, dtype=float)
        if u.shape != (self.n_pairs,):
            raise ValueError(f"expected {self.n_pairs} independent coefficients, got shape {u.shape}")
        c = np.zeros((self.n_max + 1, self.n_max + 1))
        c[self.pair_m, self.pair_k] = u
        c[self.pair_k, self.pair_m] = -u
        return c


def build_antisymmetrizer(n_max: int) -> Antisymmetrizer:
    """Embedding for truncation n_max >= 1 (N = 0 admits no antisymmetric state)."""
    if n_max < 1:
        raise ValueError(
            f"no antisymmetric two-particle states exist for n_max = {n_max}; need n_max >= 1"
        )
    pair_k, pair_m = np.array(
        [(k, m) for k in range(n_max) for m in range(k + 1, n_max + 1)]
    ).T
    return Antisymmetrizer(n_max=n_max, pair_m=pair_m.copy(), pair_k=pair_k.copy())


def _reduced_matrix_product(anti: Antisymmetrizer, kernel: KernelMatrix) -> np.ndarray:
    # Defining route: column by column through the block kernel, K^ never formed.
    n_pairs = anti.n_pairs
    out = np.empty((n_pairs, n_pairs))
    unit = np.zeros(n_pairs)
    for j in range(n_pairs):
        unit[j] = 1.0
        image = block_kernel_apply(kernel, anti.embed(unit))
        unit[j] = 0.0
        out[:, j] = image[anti.pair_m, anti.pair_k] - image[anti.pair_k, anti.pair_m]
    return out


@lru_cache(maxsize=2)
def _pair_masks(n_max: int):
    # Kronecker-delta masks of the index expansion; alpha-independent,
    # so cached per truncation across a scan.
    anti = build_antisymmetrizer(n_max)
    m, k = anti.pair_m, anti.pair_k
    return (
        k[:, None] == k[None, :],
        m[:, None] == m[None, :],
        k[:, None] == m[None, :],
        m[:, None] == k[None, :],
    )


def _reduced_matrix_fast(anti: Antisymmetrizer, kernel: KernelMatrix) -> np.ndarray:
    k_mat = kernel.entries
    m, k = anti.pair_m, anti.pair_k
    kk_eq, mm_eq, km_eq, mk_eq = _pair_masks(anti.n_max)
    # Grouped so that each accumulated term is bitwise symmetric.
    out = k_mat[np.ix_(m, m)]
    out *= kk_eq
    term = k_mat[np.ix_(k, k)]
    term *= mm_eq
    out += term
    np.multiply(k_mat[np.ix_(m, k)], km_eq, out=term)
    cross = k_mat[np.ix_(k, m)]
    cross *= mk_eq
    term += cross
    out -= term
    return out


def reduced_matrix(anti: Antisymmetrizer, kernel: KernelMatrix) -> np.ndarray:
    """Reduced symmetric matrix M^T K^ M of dimension N(N+1)/2."""
    if kernel.n_max != anti.n_max:
        raise ValueError(
            f"kernel truncation {kernel.n_max} does not match antisymmetrizer truncation {anti.n_max}"
        )
    global _validated_fast_path
    if not _validated_fast_path:
        probe_anti = build_antisymmetrizer(_VALIDATION_N)
        probe_kernel = build_kernel(_VALIDATION_ALPHA, _VALIDATION_N)
        fast = _reduced_matrix_fast(probe_anti, probe_kernel)
        slow = _reduced_matrix_product(probe_anti, probe_kernel)
        if np.abs(fast - slow).max() > 1e-13:
            raise AssertionError("reduced-matrix index expansion disagrees with the product route")
        _validated_fast_path = True
    return _reduced_matrix_fast(anti, kernel)


@dataclass(frozen=True)
class FermionResult:
    """Two-fermion bound with the reduced minimizer u (2 u^T u = 1) and full state."""

    alpha: float
    n_max: int
    q_f: float
    reduced_minimizer: np.ndarray
    full_state: CoefficientMatrix
    residual: float

    def __post_init__(self):
        self.reduced_minimizer.setflags(write=False)


def fermion_bound(alpha: float, n_max: int, tol: float = 1e-10, seed: int = 0) -> FermionResult:
    """Minimal two-fermion charge transfer at truncation n_max."""
    alpha = validate_alpha(alpha)
    anti = build_antisymmetrizer(n_max)
    kernel = build_kernel(alpha, n_max)
    pair = smallest_eigenpair(reduced_matrix(anti, kernel), tol=tol, seed=seed)
    u = pair.vector / np.sqrt(2.0)
    full = anti.embed(pair.vector)
    full /= np.linalg.norm(full)
    return FermionResult(
        alpha=alpha,
        n_max=n_max,
        q_f=pair.value,
        reduced_minimizer=u,
        full_state=CoefficientMatrix(values=full, sigma=FERMION),
        residual=pair.residual,
    )


def fermion_state_check(result: FermionResult) -> bool:
    """Verify antisymmetry, zero diagonal, normalizations and the transfer identity."""
    values = result.full_state.values
    if result.full_state.sigma != FERMION:
        return False
    if not np.array_equal(values.T, -values) or np.any(np.diagonal(values) != 0.0):
        return False
    if abs(float(np.sum(values * values)) - 1.0) > 1e-12:
        return False
    u = result.reduced_minimizer
    if abs(2.0 * float(u @ u) - 1.0) > 1e-12:
        return False
    kernel = build_kernel(result.alpha, result.n_max)
    return abs(delta2_quadratic(result.full_state, kernel) - result.q_f) <= 1e-10
