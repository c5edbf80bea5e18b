"""Figure rendering for sqzlab CSV artifacts."""
from .render import Anchor, FigureSpec, build_figure, default_spec, render
from .schema import FIGURE_IDS, HEADERS, SchemaError, load_columns

__version__ = "0.1.0"

__all__ = [
    "Anchor",
    "FIGURE_IDS",
    "FigureSpec",
    "HEADERS",
    "SchemaError",
    "build_figure",
    "default_spec",
    "load_columns",
    "render",
]
