"""Figure renderers for the bwdelay CSV outputs.

This package never recomputes physics: it consumes only the documented
CSV schemas (metadata lines starting with '#', a header row, numeric
rows) and turns them into deterministic matplotlib images.
"""

from .csvio import CsvTable, FigureInputError, read_table, require_columns
from .render import FigureJob, render

__all__ = [
    "CsvTable",
    "FigureInputError",
    "FigureJob",
    "read_table",
    "render",
    "require_columns",
]
