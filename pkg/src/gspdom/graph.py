"""Simple undirected graphs and the three domination-set validators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np


class GraphError(ValueError):
    pass


class SelfLoop(GraphError):
    def __init__(self, label: str):
        super().__init__(f"self-loop on vertex {label!r}")
        self.label = label


class ForeignVertex(GraphError):
    def __init__(self, vertex):
        super().__init__(f"{vertex!r} is not a vertex of the graph")
        self.vertex = vertex


class Graph:
    """Immutable simple graph over dense vertex ids ``0..n-1``.

    Every vertex keeps its text label for I/O. Adjacency is stored in CSR
    form (``indptr``/``indices``) with sorted, duplicate-free neighbor lists.
    """

    __slots__ = ("labels", "indptr", "indices", "_index")

    def __init__(self, labels: Sequence[str], indptr: np.ndarray, indices: np.ndarray):
        self.labels = tuple(labels)
        self.indptr = indptr
        self.indices = indices
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)

    @classmethod
    def from_id_edges(cls, labels: Sequence[str], us: np.ndarray, vs: np.ndarray) -> Graph:
        """Build from parallel arrays of endpoint ids; duplicates are collapsed."""
        n = len(labels)
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        if np.any(us == vs):
            bad = int(us[np.argmax(us == vs)])
            raise SelfLoop(labels[bad])
        src = np.concatenate([us, vs])
        dst = np.concatenate([vs, us])
        if src.size:
            key = np.unique(src * n + dst)
            src, dst = key // n, key % n
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(labels, indptr, dst.astype(np.int64))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return int(self.indices.size) // 2

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ForeignVertex(label) from None

    def has_label(self, label: str) -> bool:
        return label in self._index

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Each edge once, as ``(u, v)`` with ``u < v``."""
        src = np.repeat(np.arange(self.n), self.degrees())
        keep = src < self.indices
        for u, v in zip(src[keep].tolist(), self.indices[keep].tolist()):
            yield u, v

    def label_edges(self) -> list[tuple[str, str]]:
        lab = self.labels
        return [(lab[u], lab[v]) for u, v in self.edges()]

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        src = np.repeat(np.arange(self.n), self.degrees())
        a[src, self.indices] = 1
        return a

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = np.zeros(self.n, dtype=bool)
        seen[0] = True
        stack = [0]
        while stack:
            v = stack.pop()
            for u in self.neighbors(v).tolist():
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
        return bool(seen.all())

    def same_edges(self, other: Graph) -> bool:
        """True iff both graphs have identical labelled vertex and edge sets."""
        if set(self.labels) != set(other.labels):
            return False
        mine = {frozenset(e) for e in self.label_edges()}
        theirs = {frozenset(e) for e in other.label_edges()}
        return mine == theirs

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(edges: Iterable[tuple[str, str]]) -> Graph:
    """Graph from labelled edges; ids are assigned by first appearance."""
    index: dict[str, int] = {}
    us: list[int] = []
    vs: list[int] = []
    for a, b in edges:
        a, b = str(a), str(b)
        if a == b:
            raise SelfLoop(a)
        for lab in (a, b):
            if lab not in index:
                index[lab] = len(index)
        us.append(index[a])
        vs.append(index[b])
    return Graph.from_id_edges(list(index), np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64))


def read_edge_list(text: str) -> Graph:
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected two labels, got {len(parts)}")
        edges.append((parts[0], parts[1]))
    return build_graph(edges)


def write_edge_list(g: Graph) -> str:
    return "".join(f"{a} {b}\n" for a, b in g.label_edges())


@dataclass(frozen=True)
class VertexSet:
    """A subset of a graph's vertex range, stored as a boolean membership mask."""

    mask: np.ndarray = field(repr=False)

    @classmethod
    def of(cls, g: Graph, members: Iterable[int]) -> VertexSet:
        mask = np.zeros(g.n, dtype=bool)
        for v in members:
            if not (isinstance(v, (int, np.integer)) and 0 <= v < g.n):
                raise ForeignVertex(v)
            mask[v] = True
        mask.setflags(write=False)
        return cls(mask)

    @classmethod
    def from_labels(cls, g: Graph, labels: Iterable[str]) -> VertexSet:
        return cls.of(g, (g.index(lab) for lab in labels))

    def members(self) -> list[int]:
        return np.flatnonzero(self.mask).tolist()

    def labels(self, g: Graph) -> list[str]:
        return [g.labels[v] for v in self.members()]

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __contains__(self, v: int) -> bool:
        return 0 <= v < self.mask.size and bool(self.mask[v])

    def __iter__(self) -> Iterator[int]:
        return iter(self.members())

    def __eq__(self, other) -> bool:
        return isinstance(other, VertexSet) and np.array_equal(self.mask, other.mask)

    def __hash__(self) -> int:
        return hash(tuple(self.members()))


def _as_mask(g: Graph, s) -> np.ndarray:
    if isinstance(s, np.ndarray) and s.dtype == bool and s.size == g.n:
        return s
    if not isinstance(s, VertexSet):
        return VertexSet.of(g, s).mask
    if s.mask.size == g.n:
        return s.mask
    if s.mask.size > g.n and s.mask[g.n:].any():
        raise ForeignVertex(g.n + int(np.flatnonzero(s.mask[g.n:])[0]))
    out = np.zeros(g.n, dtype=bool)
    k = min(g.n, s.mask.size)
    out[:k] = s.mask[:k]
    return out


def dominator_counts(g: Graph, s) -> np.ndarray:
    """``|N(v) & s|`` for every vertex v."""
    mask = _as_mask(g, s)
    src = np.repeat(np.arange(g.n), g.degrees())
    return np.bincount(src[mask[g.indices]], minlength=g.n)


def first_violation(g: Graph, s, *, total: bool, upper: int | None = 2) -> tuple[int, int] | None:
    """First vertex (by id) breaking the 1..upper dominator bound, with its count.

    With ``total=False`` members of ``s`` are exempt.
    """
    mask = _as_mask(g, s)
    counts = dominator_counts(g, mask)
    bad = counts < 1
    if upper is not None:
        bad |= counts > upper
    if not total:
        bad &= ~mask
    hits = np.flatnonzero(bad)
    if hits.size == 0:
        return None
    v = int(hits[0])
    return v, int(counts[v])


def is_dominating_set(g: Graph, s) -> bool:
    return first_violation(g, s, total=False, upper=None) is None


def is_12_set(g: Graph, s) -> bool:
    """Every vertex outside ``s`` has one or two neighbours in ``s``."""
    return first_violation(g, s, total=False) is None


def is_total_12_set(g: Graph, s) -> bool:
    """Every vertex, members included, has one or two neighbours in ``s``."""
    return first_violation(g, s, total=True) is None
