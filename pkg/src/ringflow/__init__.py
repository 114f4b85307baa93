"""Maximal quantum-backflow charge transfer on a ring.

Computes the minimal time-integrated current (the most negative charge
transfer) reachable with non-negative-momentum states: a single particle,
two identical bosons and two identical fermions, as a function of the
dimensionless window parameter alpha, including alpha scans and 1/N
extrapolation of the truncated bounds.
"""

from .boson_bound import BosonResult, boson_bound, boson_state_check
from .eigensolve import EigenPair, EigensolveError, eigen_residual, smallest_eigenpair
from .fermion_bound import (
    Antisymmetrizer,
    FermionResult,
    build_antisymmetrizer,
    fermion_bound,
    fermion_state_check,
    reduced_matrix,
)
from .kernel import (
    KernelMatrix,
    block_kernel_apply,
    build_kernel,
    mode_energies,
    period_from_alpha,
    sinc,
    validate_alpha,
)
from .scan_extrapolate import (
    ExtrapolationFit,
    ScanError,
    ScanResult,
    SweepResult,
    alpha_scan,
    emit_figure_data,
    fermion_sweep,
    polyfit_quadratic,
)
from .single_particle import (
    SingleBound,
    current_j,
    delta1_quadratic,
    delta1_quadrature,
    lambda_ring,
)
from .two_particle import (
    BOSON,
    FERMION,
    CoefficientMatrix,
    appendix_a_check,
    continuity_check,
    current_J,
    delta2_quadratic,
    delta2_quadrature,
    density_rho,
    product_state,
    random_state,
    symmetrized_state,
)

__version__ = "0.1.0"

__all__ = [
    "Antisymmetrizer",
    "BOSON",
    "BosonResult",
    "CoefficientMatrix",
    "EigenPair",
    "EigensolveError",
    "ExtrapolationFit",
    "FERMION",
    "FermionResult",
    "KernelMatrix",
    "ScanError",
    "ScanResult",
    "SingleBound",
    "SweepResult",
    "alpha_scan",
    "appendix_a_check",
    "block_kernel_apply",
    "boson_bound",
    "boson_state_check",
    "build_antisymmetrizer",
    "build_kernel",
    "continuity_check",
    "current_J",
    "current_j",
    "delta1_quadratic",
    "delta1_quadrature",
    "delta2_quadratic",
    "delta2_quadrature",
    "density_rho",
    "eigen_residual",
    "emit_figure_data",
    "fermion_bound",
    "fermion_state_check",
    "fermion_sweep",
    "lambda_ring",
    "mode_energies",
    "period_from_alpha",
    "polyfit_quadratic",
    "product_state",
    "random_state",
    "reduced_matrix",
    "sinc",
    "smallest_eigenpair",
    "symmetrized_state",
    "validate_alpha",
]
