"""Plotting layer for the protocol sweep CSVs."""

from .render import FigureSpec, SchemaError, read_columns, render, render_to_file

__version__ = "0.1.0"
