"""figgen: deterministic batch figure rendering for scramlab CSV outputs."""

__version__ = "0.1.0"

from .io import SchemaError
from .render import FIGURE_IDS, FigureSpec, check_figure, render_figure

__all__ = ["FIGURE_IDS", "FigureSpec", "SchemaError", "check_figure", "render_figure"]
