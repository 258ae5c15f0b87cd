"""Exact fusion-ring, double-system and index computations for A-D-E
principal graphs of local conformal inclusions."""

from __future__ import annotations

from .algnum import AlgReal, four_cos_sq
from .classify import admissible_index_values, lr_partial_index, section4_verdict
from .double import DoubleSystem, a_odd_double, load_double, product_double
from .embed import braiding_count, braiding_report, count_embeddings
from .fusion import FusionRing, su2_ring
from .graph import BipartiteGraph, dynkin, graph_verdict

__version__ = "0.1.0"

__all__ = [
    "AlgReal",
    "BipartiteGraph",
    "DoubleSystem",
    "FusionRing",
    "a_odd_double",
    "admissible_index_values",
    "braiding_count",
    "braiding_report",
    "count_embeddings",
    "dynkin",
    "four_cos_sq",
    "graph_verdict",
    "load_double",
    "lr_partial_index",
    "product_double",
    "section4_verdict",
    "su2_ring",
]
