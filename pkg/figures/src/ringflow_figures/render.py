"""Render the minimal-charge-transfer figures from ringflow CSV files.

Consumes only the documented CSV schemas and never recomputes any physics:

    fig1a, fig1b : n,alpha,min_lambda      one curve per truncation N
    fig2a        : n,inv_n,q_f             dots per N plus n = -1 fit rows
    fig2b        : n,inv_n,alpha_star      dots per N plus n = -1 fit rows

Fit rows sample the fitted quadratic; the row at inv_n = 0 carries the
extrapolated intercept, which fig2 panels annotate.  A leading ``# `` line
holds the producer's JSON metadata and is skipped.  Rendering is
deterministic: fixed style, no timestamps in the output files.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGURE_HEADERS = {
    "fig1a": "n,alpha,min_lambda",
    "fig1b": "n,alpha,min_lambda",
    "fig2a": "n,inv_n,q_f",
    "fig2b": "n,inv_n,alpha_star",
}

AXIS_LABELS = {
    "fig1a": ("alpha", "min lambda"),
    "fig1b": ("alpha", "min lambda"),
    "fig2a": ("1/N", "Q_F(N)"),
    "fig2b": ("1/N", "alpha_*(N)"),
}


class SchemaError(ValueError):
    """CSV header does not match the schema expected for the figure id."""


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    csv_path: str
    output_path: str
    xlim: tuple[float, float] | None = None
    ylim: tuple[float, float] | None = None

    def __post_init__(self):
        if self.figure_id not in FIGURE_HEADERS:
            raise SchemaError(f"unknown figure id {self.figure_id!r}")


def load_rows(spec: FigureSpec) -> tuple[dict, list[tuple[int, float, float]]]:
    """Parse and schema-check the CSV; returns (producer metadata, rows)."""
    text = Path(spec.csv_path).read_text()
    lines = [line for line in text.split("\n") if line]
    meta = {}
    if lines and lines[0].startswith("#"):
        try:
            meta = json.loads(lines[0].lstrip("# "))
        except json.JSONDecodeError:
            meta = {}
        lines = lines[1:]
    expected = FIGURE_HEADERS[spec.figure_id]
    if not lines or lines[0] != expected:
        found = lines[0] if lines else "<empty file>"
        raise SchemaError(
            f"{spec.csv_path}: expected header {expected!r} for {spec.figure_id}, found {found!r}"
        )
    rows = []
    for line in lines[1:]:
        n, x, y = line.split(",")
        rows.append((int(n), float(x), float(y)))
    if not rows:
        raise SchemaError(f"{spec.csv_path}: no data rows")
    return meta, rows


def build_figure(spec: FigureSpec):
    """Create the matplotlib figure; returns (figure, info).

    info holds countable facts for verification: number of curves, data
    points, fit samples, and the annotated intercept (fig2 only).
    """
    _, rows = load_rows(spec)
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=120)
    xlabel, ylabel = AXIS_LABELS[spec.figure_id]
    info = {"curves": 0, "points": 0, "fit_points": 0, "intercept": None}

    if spec.figure_id in ("fig1a", "fig1b"):
        n_values = sorted({n for n, _, _ in rows})
        for n in n_values:
            xs = [x for rn, x, _ in rows if rn == n]
            ys = [y for rn, _, y in rows if rn == n]
            ax.plot(xs, ys, label=f"N = {n}", linewidth=1.4)
        info["curves"] = len(n_values)
        info["points"] = len(rows)
        ax.axhline(0.0, color="black", linewidth=0.6)
        ax.legend(frameon=False)
    else:
        data = [(x, y) for n, x, y in rows if n >= 0]
        fit = [(x, y) for n, x, y in rows if n == -1]
        xs, ys = zip(*data)
        ax.plot(xs, ys, "o", markersize=4, label="computed")
        info["points"] = len(data)
        if fit:
            fx, fy = zip(*sorted(fit))
            ax.plot(fx, fy, "-", linewidth=1.2, label="quadratic fit")
            info["fit_points"] = len(fit)
            info["curves"] = 1
            at_zero = [y for x, y in fit if x == 0.0]
            if at_zero:
                intercept = at_zero[0]
                info["intercept"] = intercept
                ax.annotate(
                    f"intercept = {intercept:.6f}",
                    xy=(0.0, intercept),
                    xytext=(0.25, 0.85),
                    textcoords="axes fraction",
                    arrowprops={"arrowstyle": "->", "linewidth": 0.8},
                )
        ax.legend(frameon=False)

    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if spec.xlim is not None:
        ax.set_xlim(*spec.xlim)
    if spec.ylim is not None:
        ax.set_ylim(*spec.ylim)
    fig.tight_layout()
    return fig, info


def render(spec: FigureSpec) -> dict:
    """Render the figure to spec.output_path (format by extension)."""
    fig, info = build_figure(spec)
    try:
        metadata = None
        if spec.output_path.lower().endswith(".svg"):
            metadata = {"Date": None}  # keep output byte-stable
        fig.savefig(spec.output_path, metadata=metadata)
    finally:
        plt.close(fig)
    return info


def _parse_pair(text):
    lo, hi = (float(part) for part in text.split(":"))
    return lo, hi


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figures",
        description="Render a ringflow figure CSV to an image (PNG or SVG by extension).",
    )
    parser.add_argument("figure_id", choices=sorted(FIGURE_HEADERS))
    parser.add_argument("csv_path")
    parser.add_argument("output_path")
    parser.add_argument("--xlim", type=_parse_pair, default=None, help="axis range LO:HI")
    parser.add_argument("--ylim", type=_parse_pair, default=None, help="axis range LO:HI")
    args = parser.parse_args(argv)
    spec = FigureSpec(
        figure_id=args.figure_id,
        csv_path=args.csv_path,
        output_path=args.output_path,
        xlim=args.xlim,
        ylim=args.ylim,
    )
    try:
        info = render(spec)
    except (SchemaError, OSError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return 1
    print(json.dumps(info, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
