"""Bottom-up dynamic program over a GSP parse tree.

Each parse node gets a table indexed by a pair of terminal states.  A state
describes one terminal ``x`` of the node's p-graph ``H``:

* ``i`` -- number of solution vertices inside ``H`` adjacent to ``x``;
* ``j`` -- number of solution neighbours promised from outside ``H``;
* ``k`` -- (total variant only) whether ``x`` itself is in the solution.

For the [1,2] variant the pair ``(0, 0)`` means "x is in the solution" and
carries no count.  Table entries are minimum solution sizes restricted to
``H``; ``inf`` marks an infeasible state pair.

Sets are never materialised during the sweep.  Children are combined by
adding cardinalities and subtracting the shared terminals that are in the
solution; the arg-min of every entry is kept as a back-pointer so a witness
can be recovered top-down afterwards.
"""

from __future__ import annotations

import enum
import itertools
import time
from dataclasses import dataclass, field
from functools import cache

import numpy as np

from .expression import GspExpression, MultiEdge, OpKind, postorder
from .graph import Graph, VertexSet, is_12_set, is_total_12_set

INF = np.float32(np.inf)
# rows per vectorised batch; bounds the (batch, targets, candidates) scratch array
_CHUNK = 1024


class Variant(enum.Enum):
    ONE2 = "one2"
    TOTAL12 = "total12"


class InternalError(RuntimeError):
    """The DP reached a state that its own invariants rule out."""


class ValidationFailure(InternalError):
    pass


State = tuple[int, ...]

_STATES: dict[Variant, tuple[State, ...]] = {
    Variant.ONE2: ((0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)),
    Variant.TOTAL12: tuple(sorted(
        (i, j, k) for i in range(3) for j in range(3) for k in (0, 1) if 1 <= i + j <= 2
    )),
}


def states(variant: Variant) -> tuple[State, ...]:
    return _STATES[variant]


def is_member(variant: Variant, s: State) -> bool:
    if variant is Variant.ONE2:
        return s == (0, 0)
    return s[2] == 1


def swap(s: State) -> State:
    return (s[1], s[0]) + s[2:]


def closed_states(variant: Variant) -> tuple[State, ...]:
    """States with no outside promise; the only ones a vertex can end in."""
    return tuple(s for s in states(variant) if s[1] == 0)


def split(variant: Variant, s: State) -> list[tuple[State, State]]:
    """Child state pairs for a terminal shared by both children.

    The ``i`` neighbours inside the union split as ``il + ir``; each child
    sees the other child's share as part of its outside promise.
    """
    if variant is Variant.ONE2 and s == (0, 0):
        return [((0, 0), (0, 0))]
    valid = set(states(variant))
    i, j, rest = s[0], s[1], s[2:]
    out = []
    for il in range(i + 1):
        ir = i - il
        left, right = (il, ir + j) + rest, (ir, il + j) + rest
        if left in valid and right in valid:
            out.append((left, right))
    return sorted(out)


@dataclass(frozen=True)
class _Rules:
    """Candidate combinations for every target entry, padded to a rectangle.

    ``left[t, c]`` / ``right[t, c]`` are flat child-table indices; padding
    points at the always-infinite sentinel column ``S*S``.
    """

    left: np.ndarray
    right: np.ndarray
    overlap: np.ndarray


@cache
def _rules(variant: Variant, kind: OpKind) -> _Rules:
    sts = states(variant)
    size = len(sts)
    idx = {s: n for n, s in enumerate(sts)}
    flat = lambda a, b: idx[a] * size + idx[b]  # noqa: E731
    member = lambda s: int(is_member(variant, s))  # noqa: E731
    combos: list[list[tuple[int, int, int]]] = []
    for sx, sy in itertools.product(sts, repeat=2):
        cand = []
        if kind is OpKind.SERIES:
            # sx/sy belong to the outer terminals; the middle vertex becomes interior
            for sz in sts:
                cand.append((flat(sx, sz), flat(swap(sz), sy), member(sz)))
        elif kind is OpKind.PARALLEL:
            for (lx, rx), (ly, ry) in itertools.product(split(variant, sx), split(variant, sy)):
                cand.append((flat(lx, ly), flat(rx, ry), member(sx) + member(sy)))
        elif kind is OpKind.GEN_SERIES:
            for ly, ry in split(variant, sy):
                for sz in closed_states(variant):
                    cand.append((flat(sx, ly), flat(ry, sz), member(sy)))
        else:
            raise ValueError(kind)
        combos.append(cand)
    width = max(len(c) for c in combos)
    pad = size * size
    left = np.full((size * size, width), pad, dtype=np.int64)
    right = np.full((size * size, width), pad, dtype=np.int64)
    overlap = np.zeros((size * size, width), dtype=np.float32)
    for t, cand in enumerate(combos):
        for c, (a, b, o) in enumerate(cand):
            left[t, c], right[t, c], overlap[t, c] = a, b, o
    return _Rules(left, right, overlap)


@cache
def _leaf_values(variant: Variant) -> np.ndarray:
    sts = states(variant)
    out = np.full((len(sts), len(sts)), INF, dtype=np.float32)
    for a, sx in enumerate(sts):
        for b, sy in enumerate(sts):
            mx, my = is_member(variant, sx), is_member(variant, sy)
            ok = True
            for s, own, other in ((sx, mx, my), (sy, my, mx)):
                if variant is Variant.ONE2 and own:
                    continue  # a [1,2] member carries no count
                if s[0] != int(other):
                    ok = False
            if ok:
                out[a, b] = int(mx) + int(my)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class DpTable:
    """Minimum sizes for one parse node, indexed by ``(state_x, state_y)``."""

    variant: Variant
    values: np.ndarray
    choice: np.ndarray | None = field(default=None, repr=False)

    def index(self, s: State) -> int:
        return states(self.variant).index(tuple(s))

    def __getitem__(self, pair: tuple[State, State]) -> int | None:
        v = self.values[self.index(pair[0]), self.index(pair[1])]
        return None if np.isinf(v) else int(v)

    def entries(self) -> dict[tuple[State, State], int | None]:
        sts = states(self.variant)
        return {(a, b): self[a, b] for a in sts for b in sts}

    def feasible(self) -> dict[tuple[State, State], int]:
        return {k: v for k, v in self.entries().items() if v is not None}

    def same_values(self, other: DpTable) -> bool:
        return self.variant is other.variant and np.array_equal(self.values, other.values)

    def render(self) -> str:
        """Fixed text layout: one line per state pair, ``-`` for infeasible."""
        fmt = lambda s: "(" + ",".join(map(str, s)) + ")"  # noqa: E731
        lines = [f"# {self.variant.value}"]
        for (a, b), v in self.entries().items():
            lines.append(f"{fmt(a)} {fmt(b)} {'-' if v is None else v}")
        return "\n".join(lines) + "\n"


def leaf_table(variant: Variant, edge: tuple[str, str] | None = None) -> DpTable:
    """Table of a single edge; it does not depend on the endpoint names."""
    return DpTable(variant, _leaf_values(variant))


def _padded(values: np.ndarray) -> np.ndarray:
    rows = values.reshape(values.shape[0], -1)
    return np.concatenate([rows, np.full((rows.shape[0], 1), INF, dtype=np.float32)], axis=1)


def _combine(rules: _Rules, left: np.ndarray, right: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised min-plus over a batch of (padded) child tables."""
    cand = left[:, rules.left]
    cand += right[:, rules.right]
    cand -= rules.overlap
    return cand.min(axis=2), cand.argmin(axis=2)


def _merge(kind: OpKind, variant: Variant, left: DpTable, right: DpTable) -> DpTable:
    size = len(states(variant))
    values, choice = _combine(
        _rules(variant, kind),
        _padded(left.values[None].astype(np.float32)),
        _padded(right.values[None].astype(np.float32)),
    )
    return DpTable(variant, values[0].reshape(size, size), choice[0].reshape(size, size).astype(np.int8))


def merge_series(variant: Variant, left: DpTable, right: DpTable) -> DpTable:
    """Left child spans ``(x, z)``, right ``(z, y)``; ``z`` becomes interior."""
    return _merge(OpKind.SERIES, variant, left, right)


def merge_parallel(variant: Variant, left: DpTable, right: DpTable) -> DpTable:
    return _merge(OpKind.PARALLEL, variant, left, right)


def merge_generalized(variant: Variant, left: DpTable, right: DpTable) -> DpTable:
    """Left child spans ``(x, y)``, right ``(y, z)``; ``z`` becomes interior."""
    return _merge(OpKind.GEN_SERIES, variant, left, right)


def extract_root(variant: Variant, root: DpTable) -> tuple[int | None, tuple[State, State] | None]:
    """Best entry whose terminals need nothing from outside the graph."""
    best, arg = None, None
    for sx in closed_states(variant):
        for sy in closed_states(variant):
            v = root[sx, sy]
            if v is not None and (best is None or v < best):
                best, arg = v, (sx, sy)
    return best, arg


# ---------------------------------------------------------------------------
# whole-tree sweep

_KIND_CODE = {OpKind.PRIMITIVE: 0, OpKind.SERIES: 1, OpKind.PARALLEL: 2, OpKind.GEN_SERIES: 3}
_CODE_KIND = {v: k for k, v in _KIND_CODE.items()}


@dataclass
class ParseTree:
    """Array form of an expression; nodes are numbered in post-order."""

    graph: Graph
    kind: np.ndarray
    left: np.ndarray
    right: np.ndarray
    first: np.ndarray
    second: np.ndarray
    height: np.ndarray

    @property
    def size(self) -> int:
        return int(self.kind.size)

    @property
    def root(self) -> int:
        return self.size - 1

    @property
    def leaf_count(self) -> int:
        return int((self.kind == 0).sum())


def compile_tree(expr: GspExpression) -> ParseTree:
    """Flatten ``expr`` and lay its parse tree out in arrays."""
    index: dict[str, int] = {}
    kind, left, right, first, second, height = [], [], [], [], [], []
    pending: list[int] = []
    for node in postorder(expr):
        n = len(kind)
        if node.is_leaf:
            for lab in (node.first, node.second):
                if lab not in index:
                    index[lab] = len(index)
            kind.append(0)
            left.append(-1)
            right.append(-1)
            height.append(0)
        else:
            r = pending.pop()
            lft = pending.pop()
            kind.append(_KIND_CODE[node.kind])
            left.append(lft)
            right.append(r)
            height.append(1 + max(height[lft], height[r]))
        first.append(index[node.first])
        second.append(index[node.second])
        pending.append(n)
    arr = lambda xs: np.array(xs, dtype=np.int64)  # noqa: E731
    kind_a, first_a, second_a = arr(kind), arr(first), arr(second)
    leaves = kind_a == 0
    us, vs = first_a[leaves], second_a[leaves]
    nv = len(index)
    key = np.minimum(us, vs) * nv + np.maximum(us, vs)
    if np.unique(key).size != key.size:
        raise MultiEdge("expression contains two leaves on the same vertex pair")
    graph = Graph.from_id_edges(list(index), us, vs)
    return ParseTree(graph, kind_a, arr(left), arr(right), first_a, second_a, arr(height))


@dataclass
class DpRun:
    """All tables of one sweep.

    Leaves share row 0 of ``store``; internal node ``v`` lives in row
    ``row[v]``.  ``choice[row[v] - 1]`` holds its back-pointers.
    """

    variant: Variant
    tree: ParseTree
    store: np.ndarray
    choice: np.ndarray
    row: np.ndarray

    def table(self, v: int) -> DpTable:
        size = len(states(self.variant))
        values = self.store[self.row[v], :-1].reshape(size, size).copy()
        ch = None
        if self.tree.kind[v] != 0:
            ch = self.choice[self.row[v] - 1].reshape(size, size).copy()
        return DpTable(self.variant, values, ch)


def run_dp(variant: Variant, tree: ParseTree) -> DpRun:
    size = len(states(variant))
    internal = np.flatnonzero(tree.kind != 0)
    # nodes of equal height never depend on each other; rows follow that order
    order = internal[np.lexsort((tree.kind[internal], tree.height[internal]))]
    row = np.zeros(tree.size, dtype=np.int64)
    row[order] = np.arange(1, order.size + 1)
    store = np.empty((order.size + 1, size * size + 1), dtype=np.float32)
    store[:, -1] = INF
    store[0, :-1] = _leaf_values(variant).ravel()
    choice = np.empty((order.size, size * size), dtype=np.int8)
    keys = tree.height[order] * 4 + tree.kind[order]
    bounds = [0, *(np.flatnonzero(np.diff(keys)) + 1).tolist(), order.size]
    left_rows, right_rows = row[tree.left[order]], row[tree.right[order]]
    for lo, hi in zip(bounds, bounds[1:]):
        if lo == hi:
            continue
        rules = _rules(variant, _CODE_KIND[int(tree.kind[order[lo]])])
        for start in range(lo, hi, _CHUNK):
            stop = min(start + _CHUNK, hi)
            values, ch = _combine(rules, store[left_rows[start:stop]], store[right_rows[start:stop]])
            store[start + 1:stop + 1, :-1] = values
            choice[start:stop] = ch
    return DpRun(variant, tree, store, choice, row)


def node_tables(variant: Variant, expr: GspExpression) -> list[tuple[GspExpression, DpTable]]:
    """Every node's table, in post-order; meant for inspection and testing."""
    run = run_dp(variant, compile_tree(expr))
    return [(node, run.table(v)) for v, node in enumerate(postorder(expr))]


def reconstruct_witness(run: DpRun, root_pair: tuple[State, State]) -> VertexSet:
    """Follow back-pointers from the root entry down to the leaves."""
    tree, variant = run.tree, run.variant
    sts = states(variant)
    size = len(sts)
    member = np.array([is_member(variant, s) for s in sts])
    state = np.full(tree.size, -1, dtype=np.int64)
    state[tree.root] = sts.index(root_pair[0]) * size + sts.index(root_pair[1])
    frontier = np.array([tree.root])
    while frontier.size:
        if not np.isfinite(run.store[run.row[frontier], state[frontier]]).all():
            raise InternalError("back-pointer references an infeasible entry")
        inner = frontier[tree.kind[frontier] != 0]
        nxt = []
        for code in (1, 2, 3):
            nodes = inner[tree.kind[inner] == code]
            if nodes.size == 0:
                continue
            rules = _rules(variant, _CODE_KIND[code])
            t = state[nodes]
            c = run.choice[run.row[nodes] - 1, t].astype(np.int64)
            state[tree.left[nodes]] = rules.left[t, c]
            state[tree.right[nodes]] = rules.right[t, c]
            nxt.extend((tree.left[nodes], tree.right[nodes]))
        frontier = np.concatenate(nxt) if nxt else np.empty(0, dtype=np.int64)
    leaves = np.flatnonzero(tree.kind == 0)
    t = state[leaves]
    mask = np.zeros(tree.graph.n, dtype=bool)
    mask[tree.first[leaves][member[t // size]]] = True
    mask[tree.second[leaves][member[t % size]]] = True
    mask.setflags(write=False)
    return VertexSet(mask)


@dataclass
class SolveResult:
    variant: Variant
    optimum: int | None
    witness: VertexSet | None
    graph: Graph
    root_pair: tuple[State, State] | None
    node_count: int
    leaf_count: int
    elapsed: float

    @property
    def feasible(self) -> bool:
        return self.optimum is not None

    def witness_labels(self) -> list[str] | None:
        return None if self.witness is None else self.witness.labels(self.graph)


def validator(variant: Variant):
    return is_12_set if variant is Variant.ONE2 else is_total_12_set


def solve_tree(variant: Variant, tree: ParseTree, *, validate: bool = True) -> SolveResult:
    start = time.perf_counter()
    run = run_dp(variant, tree)
    value, pair = extract_root(variant, run.table(tree.root))
    witness = None if pair is None else reconstruct_witness(run, pair)
    elapsed = time.perf_counter() - start
    if value is None and variant is Variant.ONE2:
        raise InternalError("no [1,2]-set found, yet the full vertex set always is one")
    if validate and witness is not None:
        if len(witness) != value or not validator(variant)(tree.graph, witness):
            raise ValidationFailure(f"witness of size {len(witness)} fails for optimum {value}")
    return SolveResult(variant, value, witness, tree.graph, pair, tree.size, tree.leaf_count, elapsed)


def solve(variant: Variant, expr: GspExpression, *, validate: bool = True) -> SolveResult:
    return solve_tree(variant, compile_tree(expr), validate=validate)
