"""Minimum [1,2]-sets and total [1,2]-sets of generalized series-parallel graphs."""

from .dp import SolveResult, Variant, solve
from .expression import GspExpression, flatten, parse_expression, render_expression
from .generator import GenConfig, gen_expression
from .graph import Graph, VertexSet, build_graph, is_12_set, is_dominating_set, is_total_12_set
from .oracle import brute_solve
from .recognize import NotGsp, recognize

__all__ = [
    "GenConfig", "Graph", "GspExpression", "NotGsp", "SolveResult", "Variant", "VertexSet",
    "brute_solve", "build_graph", "flatten", "gen_expression", "is_12_set", "is_dominating_set",
    "is_total_12_set", "parse_expression", "recognize", "render_expression", "solve",
]
