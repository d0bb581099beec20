"""Figure rendering for seedalloc experiment CSVs."""

from .figures import (
    KINDS,
    FigureError,
    FigureSpec,
    render,
    runtime_means,
    stacked_means,
)

__version__ = "0.1.0"
