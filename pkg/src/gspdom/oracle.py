"""Exhaustive reference solvers.

Deliberately naive: subsets are enumerated outright and each one is checked
against the definitions.  Only numpy is used, to count dominators for many
subsets at once.
"""

from __future__ import annotations

import itertools

import numpy as np

from .dp import DpTable, Variant, is_member, states
from .graph import Graph, VertexSet

MAX_SOLVE = 25
MAX_NODE_TABLE = 12
_BATCH = 1 << 15


class TooLarge(ValueError):
    pass


def _ok(variant: Variant, bits: np.ndarray, counts: np.ndarray) -> np.ndarray:
    in_range = (counts >= 1) & (counts <= 2)
    if variant is Variant.ONE2:
        in_range |= bits.astype(bool)
    return in_range.all(axis=1)


def brute_solve(variant: Variant, g: Graph) -> tuple[int, VertexSet] | None:
    """Smallest qualifying set, or ``None`` when no total [1,2]-set exists.

    Candidates are tried by increasing size, each size in lexicographic
    order of sorted vertex ids, so the witness is the lexicographically least
    optimum.
    """
    n = g.n
    if n > MAX_SOLVE:
        raise TooLarge(f"{n} vertices exceeds the oracle limit of {MAX_SOLVE}")
    adj = g.adjacency_matrix()
    for size in range(n + 1):
        combos = itertools.combinations(range(n), size)
        while True:
            chunk = list(itertools.islice(combos, _BATCH))
            if not chunk:
                break
            bits = np.zeros((len(chunk), n), dtype=np.int64)
            if size:
                rows = np.repeat(np.arange(len(chunk)), size)
                bits[rows, np.array(chunk).ravel()] = 1
            hit = np.flatnonzero(_ok(variant, bits, bits @ adj))
            if hit.size:
                return size, VertexSet.of(g, chunk[int(hit[0])])
    return None


def brute_gamma(g: Graph) -> int:
    """Plain domination number, for ordering checks."""
    n = g.n
    if n > MAX_SOLVE:
        raise TooLarge(f"{n} vertices exceeds the oracle limit of {MAX_SOLVE}")
    closed = g.adjacency_matrix() + np.eye(n, dtype=np.int64)
    for size in range(n + 1):
        for combo in itertools.combinations(range(n), size):
            if closed[list(combo)].sum(axis=0).min(initial=1) >= 1:
                return size
    return n


def brute_node_table(variant: Variant, pgraph: Graph, terminals: tuple[int, int]) -> DpTable:
    """Evaluate the state-table contract of a p-graph by trying every subset.

    Interior vertices must be satisfied inside the p-graph.  Each terminal's
    membership and its count of neighbours in the subset must match its
    state; the outside promise is left free.
    """
    n = pgraph.n
    if n > MAX_NODE_TABLE:
        raise TooLarge(f"{n} vertices exceeds the node-table limit of {MAX_NODE_TABLE}")
    x, y = terminals
    masks = np.arange(1 << n, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n)) & 1
    counts = bits @ pgraph.adjacency_matrix()
    sizes = bits.sum(axis=1)
    interior = np.ones(n, dtype=bool)
    interior[[x, y]] = False
    ok = (counts[:, interior] >= 1) & (counts[:, interior] <= 2)
    if variant is Variant.ONE2:
        ok |= bits[:, interior].astype(bool)
    base = ok.all(axis=1)

    def matches(v: int, s) -> np.ndarray:
        inside = bits[:, v] == 1
        if variant is Variant.ONE2 and is_member(variant, s):
            return inside
        return (inside == is_member(variant, s)) & (counts[:, v] == s[0])

    sts = states(variant)
    values = np.full((len(sts), len(sts)), np.inf, dtype=np.float32)
    for a, sx in enumerate(sts):
        mx = base & matches(x, sx)
        for b, sy in enumerate(sts):
            sel = mx & matches(y, sy)
            if sel.any():
                values[a, b] = sizes[sel].min()
    return DpTable(variant, values)
