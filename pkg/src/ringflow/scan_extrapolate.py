"""Global minimum over alpha, N-sweeps and 1/N extrapolation of the bounds.

``alpha_scan`` evaluates a bound on a coarse grid, brackets every grid-level
local minimum and refines each bracket by golden-section search, returning
the best.  ``fermion_sweep`` repeats the scan over a range of truncations and
fits both the per-N minimum and its location against 1/N with a second-degree
polynomial; the fit value at 1/N = 0 estimates the untruncated limit.
``emit_figure_data`` serializes the scan curves and sweep points to the CSV
schemas consumed by the plotting package.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .fermion_bound import fermion_bound
from .single_particle import lambda_ring

__all__ = [
    "ExtrapolationFit",
    "FERMION_INTERVAL",
    "ScanError",
    "ScanResult",
    "SINGLE_INTERVAL",
    "SweepResult",
    "alpha_scan",
    "emit_figure_data",
    "fermion_sweep",
    "format_fig1",
    "format_fig2",
    "polyfit_quadratic",
]

# Fermionic structure is confined to alpha <~ 0.5; the single-particle
# (and hence bosonic) global minimum sits near alpha ~ 1.16, so its scan
# needs the wider window.
FERMION_INTERVAL = (0.01, 1.0)
SINGLE_INTERVAL = (0.01, 2.0)

DEFAULT_COARSE_STEP = 0.005
DEFAULT_REFINE_TOL = 1e-6

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

FIG1A_N_VALUES = (1, 2, 3, 10)
FIG1B_N_VALUES = (10, 20, 30, 40, 50)
FIG2_N_RANGE = (20, 70)
FIT_CURVE_SAMPLES = 201

FIGURE_HEADERS = {
    "fig1a": "n,alpha,min_lambda",
    "fig1b": "n,alpha,min_lambda",
    "fig2a": "n,inv_n,q_f",
    "fig2b": "n,inv_n,alpha_star",
}


class ScanError(RuntimeError):
    """Bound evaluation failed at a grid point; carries the offending alpha."""

    def __init__(self, alpha: float, cause: BaseException):
        super().__init__(f"bound evaluation failed at alpha = {alpha!r}: {cause}")
        self.alpha = alpha


@dataclass(frozen=True)
class ScanResult:
    """Coarse-grid curve plus the refined global minimum of one bound."""

    n_max: int
    alphas: np.ndarray
    values: np.ndarray
    alpha_star: float
    q_min: float
    refinement_tolerance: float

    def __post_init__(self):
        self.alphas.setflags(write=False)
        self.values.setflags(write=False)

    @property
    def grid(self) -> list[tuple[float, float]]:
        return list(zip(self.alphas.tolist(), self.values.tolist()))


@dataclass(frozen=True)
class ExtrapolationFit:
    """Least-squares quadratic y ~ c0 + c1*x + c2*x^2; intercept = value at x = 0."""

    points: tuple[tuple[float, float], ...]
    coefficients: tuple[float, float, float]
    intercept: float
    rms_residual: float

    def predict(self, x) -> np.ndarray:
        c0, c1, c2 = self.coefficients
        x = np.asarray(x, dtype=float)
        return c0 + c1 * x + c2 * x * x


@dataclass(frozen=True)
class SweepResult:
    """Per-N scan minima and locations with their 1/N extrapolations."""

    n_values: tuple[int, ...]
    q_f_values: tuple[float, ...]
    alpha_star_values: tuple[float, ...]
    fit_q_f: ExtrapolationFit
    fit_alpha_star: ExtrapolationFit


def _coarse_grid(interval: tuple[float, float], step: float) -> np.ndarray:
    lo, hi = float(interval[0]), float(interval[1])
    if not (0.0 < lo < hi):
        raise ValueError(f"need 0 < lo < hi, got interval {interval!r}")
    if step <= 0.0:
        raise ValueError(f"coarse_step must be positive, got {step}")
    n_steps = int(round((hi - lo) / step))
    grid = lo + step * np.arange(n_steps + 1)
    return grid[grid <= hi + 1e-12]


def _golden_minimize(
    f: Callable[[float], float], lo: float, hi: float, tol: float
) -> tuple[float, float]:
    """Golden-section search on [lo, hi]; returns the best evaluated (x, f(x))."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    best = (c, fc) if fc <= fd else (d, fd)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
        candidate = (c, fc) if fc <= fd else (d, fd)
        if candidate[1] < best[1]:
            best = candidate
    return best


def alpha_scan(
    bound_fn: Callable[[float, int], float],
    n_max: int,
    interval: tuple[float, float] = FERMION_INTERVAL,
    coarse_step: float = DEFAULT_COARSE_STEP,
    refine_tol: float = DEFAULT_REFINE_TOL,
    workers: int = 1,
) -> ScanResult:
    """Global minimum of bound_fn(alpha, n_max) over alpha.

    Every local minimum of the coarse grid is refined by golden-section
    search within its bracketing triple, so a multi-basin curve cannot trap
    the refinement in the wrong valley; the best refined point wins.
    """
    grid = _coarse_grid(interval, coarse_step)

    def evaluate(alpha: float) -> float:
        try:
            return float(bound_fn(alpha, n_max))
        except Exception as exc:  # noqa: BLE001 - rewrapped with the offending alpha
            raise ScanError(alpha, exc) from exc

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = np.array(list(pool.map(evaluate, grid)))
    else:
        values = np.array([evaluate(alpha) for alpha in grid])

    candidates: list[tuple[float, float]] = []
    last = grid.size - 1
    for i in range(grid.size):
        left = values[i - 1] if i > 0 else np.inf
        right = values[i + 1] if i < last else np.inf
        if values[i] <= left and values[i] <= right:
            lo = grid[max(i - 1, 0)]
            hi = grid[min(i + 1, last)]
            candidates.append(_golden_minimize(evaluate, lo, hi, refine_tol))

    grid_best = int(np.argmin(values))
    candidates.append((float(grid[grid_best]), float(values[grid_best])))
    alpha_star, q_min = min(candidates, key=lambda item: item[1])
    return ScanResult(
        n_max=n_max,
        alphas=grid,
        values=values,
        alpha_star=alpha_star,
        q_min=q_min,
        refinement_tolerance=refine_tol,
    )


def polyfit_quadratic(points: Sequence[tuple[float, float]]) -> ExtrapolationFit:
    """Unweighted least-squares quadratic through (x, y) points.

    x is centered and scaled before solving so the 3x3 system stays well
    conditioned; points are sorted by x first, making the fit independent of
    input order.
    """
    pts = sorted((float(x), float(y)) for x, y in points)
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    if np.unique(x).size < 3:
        raise ValueError("quadratic fit needs at least 3 points with distinct x")
    shift = x.mean()
    scale = x.std()
    z = (x - shift) / scale
    design = np.column_stack([np.ones_like(z), z, z * z])
    b0, b1, b2 = np.linalg.lstsq(design, y, rcond=None)[0]
    # Expand b0 + b1*z + b2*z^2 back to the unscaled variable.
    c2 = b2 / scale**2
    c1 = b1 / scale - 2.0 * b2 * shift / scale**2
    c0 = b0 - b1 * shift / scale + b2 * shift**2 / scale**2
    fitted = c0 + c1 * x + c2 * x * x
    rms = float(np.sqrt(np.mean((fitted - y) ** 2)))
    return ExtrapolationFit(
        points=tuple(pts),
        coefficients=(float(c0), float(c1), float(c2)),
        intercept=float(c0),
        rms_residual=rms,
    )


def _fermion_value(alpha: float, n_max: int, tol: float = 1e-10, seed: int = 0) -> float:
    return fermion_bound(alpha, n_max, tol=tol, seed=seed).q_f


def _single_value(alpha: float, n_max: int, tol: float = 1e-10, seed: int = 0) -> float:
    return lambda_ring(alpha, n_max, tol=tol, seed=seed).lambda_ring


def _scan_fermion_task(args) -> tuple[int, float, float]:
    n_max, interval, coarse_step, refine_tol, seed = args
    result = alpha_scan(
        lambda alpha, n: _fermion_value(alpha, n, seed=seed),
        n_max,
        interval=interval,
        coarse_step=coarse_step,
        refine_tol=refine_tol,
    )
    return n_max, result.q_min, result.alpha_star


def fermion_sweep(
    n_range: tuple[int, int],
    interval: tuple[float, float] = FERMION_INTERVAL,
    coarse_step: float = DEFAULT_COARSE_STEP,
    refine_tol: float = DEFAULT_REFINE_TOL,
    workers: int = 1,
    seed: int = 0,
) -> SweepResult:
    """Scan the fermion bound for every N in n_range and extrapolate 1/N -> 0."""
    n_lo, n_hi = int(n_range[0]), int(n_range[1])
    if n_lo < 2:
        raise ValueError(f"n_range must start at 2 or above, got {n_range!r}")
    if n_hi < n_lo:
        raise ValueError(f"empty n_range {n_range!r}")
    n_values = list(range(n_lo, n_hi + 1))
    tasks = [(n, interval, coarse_step, refine_tol, seed) for n in n_values]

    if workers > 1:
        # Processes, not threads: ARPACK serializes across threads in-process.
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_fermion_task, tasks))
    else:
        rows = [_scan_fermion_task(task) for task in tasks]

    rows.sort(key=lambda row: row[0])
    q_f = [row[1] for row in rows]
    alpha_star = [row[2] for row in rows]
    inv_n = [1.0 / n for n in n_values]
    return SweepResult(
        n_values=tuple(n_values),
        q_f_values=tuple(q_f),
        alpha_star_values=tuple(alpha_star),
        fit_q_f=polyfit_quadratic(list(zip(inv_n, q_f))),
        fit_alpha_star=polyfit_quadratic(list(zip(inv_n, alpha_star))),
    )


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def format_fig1(
    which: str,
    n_values: Sequence[int],
    alphas: np.ndarray,
    curves: Sequence[np.ndarray],
) -> str:
    """CSV text for a family of min-lambda curves: one row per (N, alpha)."""
    lines = [FIGURE_HEADERS[which]]
    for n, curve in zip(n_values, curves):
        for alpha, value in zip(alphas, curve):
            lines.append(f"{n},{_fmt(alpha)},{_fmt(value)}")
    return "\n".join(lines) + "\n"


def format_fig2(which: str, sweep: SweepResult) -> str:
    """CSV text for an extrapolation panel: data rows plus n = -1 fit rows.

    Fit rows sample the fitted quadratic on a uniform 1/N grid from 0 to the
    largest data 1/N; the first fit row (inv_n = 0) carries the extrapolated
    intercept.
    """
    if which == "fig2a":
        data = sweep.q_f_values
        fit = sweep.fit_q_f
    elif which == "fig2b":
        data = sweep.alpha_star_values
        fit = sweep.fit_alpha_star
    else:
        raise ValueError(f"unknown figure id {which!r}")
    lines = [FIGURE_HEADERS[which]]
    for n, value in zip(sweep.n_values, data):
        lines.append(f"{n},{_fmt(1.0 / n)},{_fmt(value)}")
    inv_grid = np.linspace(0.0, 1.0 / sweep.n_values[0], FIT_CURVE_SAMPLES)
    for inv_n, value in zip(inv_grid, fit.predict(inv_grid)):
        lines.append(f"-1,{_fmt(inv_n)},{_fmt(value)}")
    return "\n".join(lines) + "\n"


def emit_figure_data(
    which: str,
    n_values: Sequence[int] | None = None,
    n_range: tuple[int, int] | None = None,
    interval: tuple[float, float] = FERMION_INTERVAL,
    coarse_step: float = DEFAULT_COARSE_STEP,
    refine_tol: float = DEFAULT_REFINE_TOL,
    workers: int = 1,
    seed: int = 0,
) -> str:
    """Compute and serialize the data behind one figure panel.

    fig1a/fig1b: fermion min-lambda curves on the coarse grid for each N.
    fig2a/fig2b: per-N sweep minima (locations) with quadratic fit rows.
    """
    if which in ("fig1a", "fig1b"):
        if n_values is None:
            n_values = FIG1A_N_VALUES if which == "fig1a" else FIG1B_N_VALUES
        alphas = _coarse_grid(interval, coarse_step)
        curves = []
        for n in n_values:
            bound = lambda alpha, n_max=n: _fermion_value(alpha, n_max, seed=seed)
            if workers > 1:
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    curves.append(np.array(list(pool.map(bound, alphas))))
            else:
                curves.append(np.array([bound(alpha) for alpha in alphas]))
        return format_fig1(which, n_values, alphas, curves)
    if which in ("fig2a", "fig2b"):
        sweep = fermion_sweep(
            n_range or FIG2_N_RANGE,
            interval=interval,
            coarse_step=coarse_step,
            refine_tol=refine_tol,
            workers=workers,
            seed=seed,
        )
        return format_fig2(which, sweep)
    raise ValueError(f"unknown figure id {which!r}")
