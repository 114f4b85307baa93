"""Command-line interface: bounds, scans, observables, self-checks, reproduction.

Every output file starts with a JSON metadata header (CSV files as a ``# ``
comment line, JSON files as a leading ``meta`` field) echoing the numerical
configuration, package version and seed.  Output bytes are a pure function of
that configuration: no timestamps, ordered parallel reductions, seeded solver
start vectors.  Exit codes: 0 success, 1 numerical/domain failure (diagnostic
JSON on stderr), 2 flag errors (argparse usage message).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .boson_bound import boson_bound, boson_state_check
from .eigensolve import EigensolveError
from .fermion_bound import (
    build_antisymmetrizer,
    fermion_bound,
    fermion_state_check,
    reduced_matrix,
    _reduced_matrix_product,
)
from .kernel import build_kernel
from .scan_extrapolate import (
    DEFAULT_COARSE_STEP,
    DEFAULT_REFINE_TOL,
    FERMION_INTERVAL,
    FIG1B_N_VALUES,
    FIG2_N_RANGE,
    SINGLE_INTERVAL,
    ScanError,
    alpha_scan,
    emit_figure_data,
    fermion_sweep,
    format_fig1,
    format_fig2,
    _coarse_grid,
    _fermion_value,
    _single_value,
)
from .single_particle import delta1_quadratic, delta1_quadrature, lambda_ring
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
    random_state,
)

QUICK_FERMION_RANGE = (20, 30)
QUICK_FIG1B_N_VALUES = (10, 20, 30)

_fmt = lambda x: format(float(x), ".17g")  # noqa: E731


def _meta_line(command: str, args: argparse.Namespace) -> dict:
    # Echo only the numerical configuration: output paths and worker counts
    # must not influence output bytes.
    skip = {"out", "out_dir", "threads", "func", "state", "command", "kernel_command"}
    config = {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in skip and not key.startswith("_")
    }
    return {
        "command": command,
        "config": config,
        "package": "ringflow",
        "version": __version__,
        "seed": getattr(args, "seed", 0),
    }


def _meta_json(command: str, args: argparse.Namespace) -> str:
    return json.dumps(_meta_line(command, args), sort_keys=True, separators=(",", ":"))


def _write_text(path: str | Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", newline="\n") as handle:
        handle.write(text)


def _write_csv(path, command: str, args: argparse.Namespace, body: str) -> None:
    _write_text(path, f"# {_meta_json(command, args)}\n{body}")


def _write_json(path, command: str, args: argparse.Namespace, payload: dict) -> None:
    document = {"meta": _meta_line(command, args)}
    document.update(payload)
    _write_text(path, json.dumps(document, sort_keys=False, indent=2) + "\n")


def _parse_interval(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(part) for part in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from exc
    return lo, hi


def _parse_n_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(part) for part in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}") from exc
    return lo, hi


def _default_threads() -> int:
    return os.cpu_count() or 1


# ---------------------------------------------------------------- subcommands


def _cmd_kernel_dump(args) -> int:
    kernel = build_kernel(args.alpha, args.n)
    lines = ["m,n,value"]
    for m in range(kernel.dim):
        for n in range(kernel.dim):
            lines.append(f"{m},{n},{_fmt(kernel.entries[m, n])}")
    _write_csv(args.out, "kernel dump", args, "\n".join(lines) + "\n")
    return 0


def _scan_command(args, value_fn, default_interval, column: str) -> int:
    interval = args.interval or default_interval
    result = alpha_scan(
        lambda alpha, n: value_fn(alpha, n, tol=args.tol, seed=args.seed),
        args.n,
        interval=interval,
        coarse_step=args.step,
        refine_tol=args.refine_tol,
        workers=args.threads,
    )
    if args.format == "json":
        payload = {
            "n": result.n_max,
            "alpha_star": result.alpha_star,
            "q_min": result.q_min,
            "grid": [[a, v] for a, v in result.grid],
        }
        _write_json(args.out, args._command, args, payload)
    else:
        lines = [f"alpha,{column}"]
        lines.extend(f"{_fmt(a)},{_fmt(v)}" for a, v in result.grid)
        lines.append(f"{_fmt(result.alpha_star)},{_fmt(result.q_min)}")
        _write_csv(args.out, args._command, args, "\n".join(lines) + "\n")
    return 0


def _cmd_single(args) -> int:
    args._command = "single"
    if args.scan:
        return _scan_command(args, _single_value, SINGLE_INTERVAL, "min_lambda")
    bound = lambda_ring(args.alpha, args.n, tol=args.tol, seed=args.seed)
    payload = {
        "alpha": bound.alpha,
        "n": bound.n_max,
        "lambda": bound.lambda_ring,
        "residual": bound.residual,
    }
    if args.format == "csv":
        body = "alpha,n,lambda,residual\n" + ",".join(
            [_fmt(bound.alpha), str(bound.n_max), _fmt(bound.lambda_ring), _fmt(bound.residual)]
        ) + "\n"
        _write_csv(args.out, "single", args, body)
    else:
        _write_json(args.out, "single", args, payload)
    return 0


def _state_document(state: CoefficientMatrix) -> dict:
    return {
        "n_max": state.n_max,
        "sigma": state.sigma,
        "coefficients": [float(x) for x in state.values.reshape(-1)],
    }


def _cmd_boson(args) -> int:
    args._command = "boson"
    if args.scan:
        return _scan_command(
            args,
            lambda alpha, n, tol, seed: 2.0 * _single_value(alpha, n, tol=tol, seed=seed),
            SINGLE_INTERVAL,
            "q_b",
        )
    result = boson_bound(args.alpha, args.n, tol=args.tol, seed=args.seed)
    payload = {
        "alpha": result.alpha,
        "n": result.n_max,
        "q_b": result.q_b,
        "residual": result.residual,
    }
    if args.dump_state:
        _write_json(args.dump_state, "boson", args, _state_document(result.state))
    _write_json(args.out, "boson", args, payload)
    return 0


def _cmd_fermion(args) -> int:
    args._command = "fermion"
    if args.extrapolate:
        if args.n_range is None:
            raise ValueError("--extrapolate requires --n-range A:B")
        sweep = fermion_sweep(
            args.n_range,
            interval=args.interval or FERMION_INTERVAL,
            coarse_step=args.step,
            refine_tol=args.refine_tol,
            workers=args.threads,
            seed=args.seed,
        )
        payload = {
            "n_range": list(args.n_range),
            "q_f_intercept": sweep.fit_q_f.intercept,
            "alpha_star_intercept": sweep.fit_alpha_star.intercept,
            "fit_q_f": {
                "coefficients": list(sweep.fit_q_f.coefficients),
                "rms_residual": sweep.fit_q_f.rms_residual,
            },
            "fit_alpha_star": {
                "coefficients": list(sweep.fit_alpha_star.coefficients),
                "rms_residual": sweep.fit_alpha_star.rms_residual,
            },
            "n_values": list(sweep.n_values),
            "q_f_values": list(sweep.q_f_values),
            "alpha_star_values": list(sweep.alpha_star_values),
        }
        _write_json(args.out, "fermion", args, payload)
        return 0
    if args.scan:
        return _scan_command(args, _fermion_value, FERMION_INTERVAL, "q_f")
    result = fermion_bound(args.alpha, args.n, tol=args.tol, seed=args.seed)
    payload = {
        "alpha": result.alpha,
        "n": result.n_max,
        "q_f": result.q_f,
        "residual": result.residual,
    }
    if args.dump_state:
        _write_json(args.dump_state, "fermion", args, _state_document(result.full_state))
    _write_json(args.out, "fermion", args, payload)
    return 0


def _cmd_observables(args) -> int:
    with open(args.state) as handle:
        document = json.load(handle)
    n_max = int(document["n_max"])
    sigma = document["sigma"]
    values = np.array(document["coefficients"], dtype=float).reshape(n_max + 1, n_max + 1)
    state = CoefficientMatrix(values=values, sigma=None if sigma is None else int(sigma))
    thetas = np.linspace(0.0, 2.0 * np.pi, args.theta_points, endpoint=False)
    times = np.linspace(args.t_min, args.t_max, args.time_points)
    lines = ["theta,t,J,rho"]
    for theta in thetas:
        for t in times:
            j = current_J(state, float(theta), float(t))
            rho = density_rho(state, float(theta), float(t))
            lines.append(f"{_fmt(theta)},{_fmt(t)},{_fmt(j)},{_fmt(rho)}")
    _write_csv(args.out, "observables", args, "\n".join(lines) + "\n")
    return 0


def _cmd_figures(args) -> int:
    kwargs = {
        "coarse_step": args.step,
        "refine_tol": args.refine_tol,
        "workers": args.threads,
        "seed": args.seed,
    }
    if args.which in ("fig2a", "fig2b"):
        kwargs["n_range"] = QUICK_FERMION_RANGE if args.quick else FIG2_N_RANGE
    elif args.quick and args.which == "fig1b":
        kwargs["n_values"] = QUICK_FIG1B_N_VALUES
    body = emit_figure_data(args.which, **kwargs)
    _write_csv(args.out, f"figures {args.which}", args, body)
    return 0


# ------------------------------------------------------------------- verify


def _verify_checks(seed: int, trials: int):
    rng = np.random.default_rng(seed)

    def check_antisymmetrizer():
        for n in range(1, 26):
            anti = build_antisymmetrizer(n)
            dense = anti.to_dense()
            if not np.array_equal(dense.T @ dense, 2.0 * np.eye(anti.n_pairs)):
                return False, f"M^T M != 2I at N={n}"
        return True, "M^T M = 2I for N <= 25"

    def check_reduced_paths():
        anti = build_antisymmetrizer(4)
        kernel = build_kernel(0.43, 4)
        fast = reduced_matrix(anti, kernel)
        slow = _reduced_matrix_product(anti, kernel)
        gap = float(np.abs(fast - slow).max())
        return gap <= 1e-13, f"index expansion vs block-kernel product, max gap {gap:.2e}"

    def check_delta1_oracle():
        worst = 0.0
        for _ in range(10):
            n = int(rng.integers(2, 9))
            c = rng.standard_normal(n + 1)
            c /= np.linalg.norm(c)
            alpha = float(rng.uniform(0.1, 1.5))
            kernel = build_kernel(alpha, n)
            worst = max(worst, abs(delta1_quadratic(c, kernel) - delta1_quadrature(c, alpha)))
        return worst <= 1e-8, f"quadrature vs quadratic form, max gap {worst:.2e}"

    def check_delta2_oracle():
        worst = 0.0
        for sigma in (BOSON, FERMION):
            for _ in range(5):
                n = int(rng.integers(2, 8))
                state = random_state(n, sigma, rng)
                alpha = float(rng.uniform(0.1, 1.2))
                kernel = build_kernel(alpha, n)
                worst = max(
                    worst,
                    abs(delta2_quadratic(state, kernel) - delta2_quadrature(state, alpha)),
                )
        return worst <= 1e-8, f"quadrature vs quadratic form, max gap {worst:.2e}"

    def check_density_integral():
        thetas = np.linspace(0.0, 2.0 * np.pi, 1024, endpoint=False)
        worst = 0.0
        for sigma in (BOSON, FERMION):
            state = random_state(5, sigma, rng)
            total = np.mean([density_rho(state, th, 0.37) for th in thetas]) * 2.0 * np.pi
            worst = max(worst, abs(total - 2.0))
        return worst <= 1e-10, f"integral of rho vs particle number 2, max gap {worst:.2e}"

    def check_basis_current():
        worst = 0.0
        for m1, m2 in ((0, 1), (2, 5), (3, 3)):
            values = np.zeros((7, 7))
            if m1 == m2:
                values[m1, m2] = 1.0
            else:
                values[m1, m2] = values[m2, m1] = 1.0 / np.sqrt(2.0)
            state = CoefficientMatrix(values=values, sigma=BOSON)
            got = current_J(state, 1.1, 0.3)
            worst = max(worst, abs(got - (m1 + m2) / (2.0 * np.pi)))
        return worst <= 1e-12, f"basis-state current vs (m1+m2)/2pi, max gap {worst:.2e}"

    def check_continuity():
        state = random_state(5, BOSON, rng)
        thetas = np.linspace(0.0, 2.0 * np.pi, 8, endpoint=False)
        times = np.linspace(-1.0, 1.0, 5)
        d_h = continuity_check(state, thetas, times, 2e-3)
        d_h2 = continuity_check(state, thetas, times, 1e-3)
        ratio = d_h / d_h2 if d_h2 else float("nan")
        ok = d_h2 < 1e-4 and 3.8 <= ratio <= 4.2
        return ok, f"defect {d_h2:.2e} at h=1e-3, halving ratio {ratio:.3f}"

    def check_appendix_a():
        for sigma in (BOSON, FERMION):
            if not appendix_a_check(trials, 5, 0.8, sigma, seed=seed):
                return False, f"complex state beat the real minimum (sigma={sigma:+d})"
        return True, f"{trials} complex trials per sector stayed above the real minimum"

    def check_boson_identity():
        result = boson_bound(0.8, 20)
        kernel = build_kernel(0.8, 20)
        gap = abs(delta2_quadratic(result.state, kernel) - result.q_b)
        return (
            gap <= 1e-11 and boson_state_check(result),
            f"product state reproduces q_b, gap {gap:.2e}",
        )

    def check_fermion_identity():
        result = fermion_bound(0.4, 12)
        return fermion_state_check(result), "reconstructed state reproduces q_f"

    def check_statistics_ordering():
        for alpha in (0.2, 0.4, 0.8):
            for n in (3, 8, 15):
                if fermion_bound(alpha, n).q_f < boson_bound(alpha, n).q_b - 1e-12:
                    return False, f"Q_F < Q_B at alpha={alpha}, N={n}"
        return True, "Q_F >= Q_B on the sampled grid"

    return [
        ("antisymmetrizer orthogonality", check_antisymmetrizer),
        ("reduced-matrix route agreement", check_reduced_paths),
        ("delta1 quadrature oracle", check_delta1_oracle),
        ("delta2 quadrature oracle", check_delta2_oracle),
        ("density normalization", check_density_integral),
        ("basis-state current", check_basis_current),
        ("continuity equation", check_continuity),
        ("complex coefficients (appendix property)", check_appendix_a),
        ("boson product identity", check_boson_identity),
        ("fermion state identity", check_fermion_identity),
        ("statistics ordering", check_statistics_ordering),
    ]


def _cmd_verify(args) -> int:
    failures = 0
    for name, check in _verify_checks(args.seed, args.trials):
        ok, detail = check()
        status = "PASS" if ok else "FAIL"
        print(f"{status} {name}: {detail}")
        failures += 0 if ok else 1
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------- reproduce


def _cmd_reproduce(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    single = alpha_scan(
        lambda alpha, n: _single_value(alpha, n, tol=args.tol, seed=args.seed),
        args.single_n,
        interval=SINGLE_INTERVAL,
        coarse_step=args.step,
        refine_tol=args.refine_tol,
        workers=args.threads,
    )

    n_range = QUICK_FERMION_RANGE if args.quick else FIG2_N_RANGE
    sweep = fermion_sweep(
        n_range,
        interval=FERMION_INTERVAL,
        coarse_step=args.step,
        refine_tol=args.refine_tol,
        workers=args.threads,
        seed=args.seed,
    )

    fig1b_n = QUICK_FIG1B_N_VALUES if args.quick else FIG1B_N_VALUES
    alphas = _coarse_grid(FERMION_INTERVAL, args.step)
    for which, n_values in (("fig1a", (1, 2, 3, 10)), ("fig1b", fig1b_n)):
        curves = [
            np.array([_fermion_value(a, n, tol=args.tol, seed=args.seed) for a in alphas])
            for n in n_values
        ]
        body = format_fig1(which, n_values, alphas, curves)
        _write_csv(out_dir / f"{which}.csv", f"reproduce {which}", args, body)

    for which in ("fig2a", "fig2b"):
        _write_csv(out_dir / f"{which}.csv", f"reproduce {which}", args, format_fig2(which, sweep))

    summary = {
        "c_ring": -single.q_min,
        "alpha_star_single": single.alpha_star,
        "q_b": 2.0 * single.q_min,
        "q_f": sweep.fit_q_f.intercept,
        "alpha_star": sweep.fit_alpha_star.intercept,
        "single_n": args.single_n,
        "fermion_n_range": list(n_range),
        "fit_rms": {
            "q_f": sweep.fit_q_f.rms_residual,
            "alpha_star": sweep.fit_alpha_star.rms_residual,
        },
    }
    _write_json(out_dir / "summary.json", "reproduce", args, summary)
    print(
        "c_ring = {c_ring:.6f}  Q_B = {q_b:.6f}  Q_F = {q_f:.6f}  alpha_star = {alpha_star:.5f}".format(
            **summary
        )
    )
    print(f"artifacts written to {out_dir}")
    return 0


# ------------------------------------------------------------------- parser


def _add_common(parser, default_format="json"):
    parser.add_argument("--tol", type=float, default=1e-10, help="eigensolver residual tolerance, relative to ||A||_F (default 1e-10)")
    parser.add_argument("--seed", type=int, default=0, help="seed for solver start vectors and random checks (default 0)")
    parser.add_argument("--threads", type=int, default=_default_threads(), help="worker parallelism cap (default: available cores); results do not depend on it")
    parser.add_argument("--format", choices=("json", "csv"), default=default_format)
    parser.add_argument("--out", default=None, help="output file (default: stdout)")


def _add_scan_flags(parser):
    parser.add_argument("--scan", action="store_true", help="scan alpha instead of evaluating one point")
    parser.add_argument("--interval", type=_parse_interval, default=None, help="scan interval LO:HI (default depends on subcommand)")
    parser.add_argument("--step", type=float, default=DEFAULT_COARSE_STEP, help="coarse scan step (default 0.005)")
    parser.add_argument("--refine-tol", type=float, default=DEFAULT_REFINE_TOL, help="golden-section refinement tolerance in alpha (default 1e-6)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringflow",
        description="Maximal quantum-backflow charge transfer on a ring: single particle, two bosons, two fermions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    kernel_parser = sub.add_parser("kernel", help="kernel matrix utilities")
    kernel_sub = kernel_parser.add_subparsers(dest="kernel_command", required=True)
    dump = kernel_sub.add_parser("dump", help="emit K as CSV (m,n,value)")
    dump.add_argument("--alpha", type=float, required=True)
    dump.add_argument("--n", type=int, required=True)
    dump.add_argument("--seed", type=int, default=0)
    dump.add_argument("--out", default=None)
    dump.set_defaults(func=_cmd_kernel_dump)

    single = sub.add_parser("single", help="single-particle bound lambda_ring")
    single.add_argument("--alpha", type=float)
    single.add_argument("--n", type=int, required=True)
    _add_scan_flags(single)
    _add_common(single)
    single.set_defaults(func=_cmd_single)

    boson = sub.add_parser("boson", help="two-boson bound q_b = 2*lambda_ring")
    boson.add_argument("--alpha", type=float)
    boson.add_argument("--n", type=int, required=True)
    boson.add_argument("--dump-state", default=None, help="also write the product minimizer as a state JSON")
    _add_scan_flags(boson)
    _add_common(boson)
    boson.set_defaults(func=_cmd_boson)

    fermion = sub.add_parser("fermion", help="two-fermion bound q_f")
    fermion.add_argument("--alpha", type=float)
    fermion.add_argument("--n", type=int)
    fermion.add_argument("--n-range", type=_parse_n_range, default=None, help="truncation range A:B for --extrapolate")
    fermion.add_argument("--extrapolate", action="store_true", help="sweep --n-range and fit q_f, alpha_star against 1/N")
    fermion.add_argument("--dump-state", default=None)
    _add_scan_flags(fermion)
    _add_common(fermion)
    fermion.set_defaults(func=_cmd_fermion)

    observables = sub.add_parser("observables", help="current J and density rho on a (theta, t) grid")
    observables.add_argument("--state", required=True, help="state JSON: n_max, sigma, row-major coefficients")
    observables.add_argument("--theta-points", type=int, default=64)
    observables.add_argument("--time-points", type=int, default=64)
    observables.add_argument("--t-min", type=float, default=-1.0)
    observables.add_argument("--t-max", type=float, default=1.0)
    observables.add_argument("--seed", type=int, default=0)
    observables.add_argument("--out", default=None)
    observables.set_defaults(func=_cmd_observables)

    figures = sub.add_parser("figures", help="emit the CSV data behind one figure panel")
    figures.add_argument("which", choices=("fig1a", "fig1b", "fig2a", "fig2b"))
    figures.add_argument("--quick", action="store_true", help="desk-scale N sets (fig1b: 10..30, fig2: N=20..30)")
    figures.add_argument("--step", type=float, default=DEFAULT_COARSE_STEP)
    figures.add_argument("--refine-tol", type=float, default=DEFAULT_REFINE_TOL)
    figures.add_argument("--seed", type=int, default=0)
    figures.add_argument("--threads", type=int, default=_default_threads())
    figures.add_argument("--out", default=None)
    figures.set_defaults(func=_cmd_figures)

    verify = sub.add_parser("verify", help="run the registered invariant and oracle suites")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--trials", type=int, default=100, help="complex-coefficient trials per sector (default 100)")
    verify.set_defaults(func=_cmd_verify)

    reproduce = sub.add_parser("reproduce", help="one-shot pipeline: c_ring, Q_B, Q_F, alpha_star + figure CSVs")
    reproduce.add_argument("--quick", action="store_true", help="desk scale: fermion N=20..30, fig1b N<=30 (<= 10 min)")
    reproduce.add_argument("--out-dir", required=True)
    reproduce.add_argument("--single-n", type=int, default=400, help="truncation for the single-particle scan (default 400)")
    reproduce.add_argument("--step", type=float, default=DEFAULT_COARSE_STEP)
    reproduce.add_argument("--refine-tol", type=float, default=DEFAULT_REFINE_TOL)
    reproduce.add_argument("--tol", type=float, default=1e-10)
    reproduce.add_argument("--seed", type=int, default=0)
    reproduce.add_argument("--threads", type=int, default=_default_threads())
    reproduce.set_defaults(func=_cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, EigensolveError, ScanError, AssertionError) as exc:
        diagnostic = {"error": str(exc), "type": type(exc).__name__}
        print(json.dumps(diagnostic, sort_keys=True), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
