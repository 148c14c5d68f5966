"""Batch figure rendering for sweep result files.

Reads only the versioned result schemas (summary CSV and power JSON) and
never recomputes any of the underlying math.
"""

from .io import (EmptySeriesError, MissingColumnError, SchemaError,
                 read_power, read_summary)
from .render import FIGURE_KINDS, FigureSpec, render

__version__ = "0.1.0"

__all__ = ["EmptySeriesError", "MissingColumnError", "SchemaError",
           "read_power", "read_summary", "FIGURE_KINDS", "FigureSpec",
           "render"]
