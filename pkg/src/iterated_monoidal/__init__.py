"""Computational tools for iterated monoidal categories and their operads."""

from .expressions import (
    ZERO,
    Expression,
    ExpressionError,
    Gen,
    Node,
    PairTable,
    ParseError,
    Zero,
    box,
    from_pair_table,
    is_level_ordered,
    leaves,
    pair_table,
    parse,
    relabel,
    render,
    restrict,
)
from .coherence import hom_exists, one_step_rewrites, reachability_witness

__all__ = [
    "ZERO", "Expression", "ExpressionError", "Gen", "Node", "PairTable", "ParseError", "Zero",
    "box", "from_pair_table", "is_level_ordered", "leaves", "pair_table", "parse", "relabel",
    "render", "restrict", "hom_exists", "one_step_rewrites", "reachability_witness",
]
