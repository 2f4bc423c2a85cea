"""Persistence barcodes with chirality for time series.

One-pass computation of 0-dimensional persistence diagrams (bars with
chirality, critical indices, parent attachments), plane merge trees and
their codecs, level automata over piecewise-linear functions, and the
closed-form laws these objects satisfy for Brownian motion with drift,
validated by exact chain simulation.
"""

from . import automata, brownian, ph0, series, theory, tree
from ._kernels import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .diagram import Bar, PersistenceDiagram, StemPile
from .errors import (
    ChirobarsError,
    ConstantSeriesError,
    CrossingError,
    DivergenceError,
    NonGenericError,
    ParseError,
    ValidationError,
)
from .ph0 import (
    build_merge_tree,
    compute_ph0,
    count_windings,
    elder_decompose,
    quadrant_content,
    stack_depth_profile,
)
from .series import TimeSeries, augment, critical_points, load_csv, make_generic
from .tree import PlaneMergeTree, contour_walk, plane_isomorphic, reconstruct_tree

__version__ = "0.1.0"

__all__ = [
    "Bar",
    "PersistenceDiagram",
    "StemPile",
    "PlaneMergeTree",
    "TimeSeries",
    "KERNEL_IMPLEMENTATION",
    "augment",
    "build_merge_tree",
    "compute_ph0",
    "contour_walk",
    "count_windings",
    "critical_points",
    "elder_decompose",
    "load_csv",
    "make_generic",
    "plane_isomorphic",
    "quadrant_content",
    "reconstruct_tree",
    "stack_depth_profile",
    "series",
    "ph0",
    "tree",
    "automata",
    "brownian",
    "theory",
    "ChirobarsError",
    "ValidationError",
    "ParseError",
    "NonGenericError",
    "ConstantSeriesError",
    "CrossingError",
    "DivergenceError",
]
