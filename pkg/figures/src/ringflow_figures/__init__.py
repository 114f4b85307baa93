"""Figure rendering for ringflow CSV outputs."""

from .render import FigureSpec, SchemaError, build_figure, load_rows, render

__version__ = "0.1.0"

__all__ = ["FigureSpec", "SchemaError", "build_figure", "load_rows", "render"]
