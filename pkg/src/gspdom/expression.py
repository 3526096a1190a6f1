"""Two-terminal GSP expressions (binary parse trees), their text form, and flattening.

Grammar::

    expr := "e(" id "," id ")" | "s(" expr "," expr ")"
          | "p(" expr "," expr ")" | "g(" expr "," expr ")"

Vertices identified by a composition share one name; every other name is
distinct.  Terminals: ``s(A,B)`` -> ``(A.first, B.second)`` with
``A.second == B.first``; ``p(A,B)`` -> A's pair, equal to B's pair;
``g(A,B)`` -> A's pair, with ``B.first == A.second``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .graph import Graph


class ExpressionError(ValueError):
    pass


class ExpressionSyntaxError(ExpressionError):
    pass


class TerminalMismatch(ExpressionError):
    pass


class NameCollision(ExpressionError):
    pass


class SelfMerge(ExpressionError):
    pass


class MultiEdge(ExpressionError):
    pass


class OpKind(enum.Enum):
    PRIMITIVE = "e"
    SERIES = "s"
    PARALLEL = "p"
    GEN_SERIES = "g"


class TerminalPair(NamedTuple):
    first: int
    second: int


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class GspExpression:
    """One parse-tree node.  Equality is structural, compared through the
    canonical text so that deep trees never hit the recursion limit."""

    kind: OpKind
    first: str
    second: str
    left: GspExpression | None = None
    right: GspExpression | None = None

    @property
    def is_leaf(self) -> bool:
        return self.kind is OpKind.PRIMITIVE

    @property
    def terminals(self) -> tuple[str, str]:
        return self.first, self.second

    def __str__(self) -> str:
        return render_expression(self)

    def __repr__(self) -> str:
        text = render_expression(self)
        return f"GspExpression({text if len(text) <= 80 else text[:77] + '...'})"

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, GspExpression):
            return NotImplemented
        return render_expression(self) == render_expression(other)

    def __hash__(self) -> int:
        return hash(render_expression(self))


def leaf(u: str, v: str) -> GspExpression:
    if u == v:
        raise SelfMerge(f"edge e({u},{v}) joins a vertex to itself")
    return GspExpression(OpKind.PRIMITIVE, u, v)


def series(a: GspExpression, b: GspExpression) -> GspExpression:
    if a.second != b.first:
        raise TerminalMismatch(f"series needs {a.second!r} == {b.first!r}")
    if a.first == b.second:
        raise SelfMerge(f"series would merge terminals {a.first!r} and {b.second!r}")
    return GspExpression(OpKind.SERIES, a.first, b.second, a, b)


def parallel(a: GspExpression, b: GspExpression) -> GspExpression:
    if a.terminals != b.terminals:
        raise TerminalMismatch(f"parallel needs equal terminals, got {a.terminals} and {b.terminals}")
    return GspExpression(OpKind.PARALLEL, a.first, a.second, a, b)


def gen_series(a: GspExpression, b: GspExpression) -> GspExpression:
    if a.second != b.first:
        raise TerminalMismatch(f"generalized series needs {a.second!r} == {b.first!r}")
    if b.second == a.first:
        raise SelfMerge(f"generalized series would merge {b.second!r} into terminal {a.first!r}")
    return GspExpression(OpKind.GEN_SERIES, a.first, a.second, a, b)


_BUILDERS = {
    OpKind.SERIES: series,
    OpKind.PARALLEL: parallel,
    OpKind.GEN_SERIES: gen_series,
}


def make(kind: OpKind, a: GspExpression, b: GspExpression) -> GspExpression:
    return _BUILDERS[kind](a, b)


def postorder(expr: GspExpression) -> Iterator[GspExpression]:
    stack: list[tuple[GspExpression, bool]] = [(expr, False)]
    while stack:
        node, expanded = stack.pop()
        if node.is_leaf or expanded:
            yield node
        else:
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))


def iter_leaves(expr: GspExpression) -> Iterator[GspExpression]:
    stack = [expr]
    while stack:
        node = stack.pop()
        if node.is_leaf:
            yield node
        else:
            stack.append(node.right)
            stack.append(node.left)


def leaf_count(expr: GspExpression) -> int:
    return sum(1 for _ in iter_leaves(expr))


def node_count(expr: GspExpression) -> int:
    return 2 * leaf_count(expr) - 1


# ---------------------------------------------------------------------------
# text form

_TOKEN = re.compile(r"\s*(?:([(),])|([^\s(),]+))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    end = len(text.rstrip())
    while pos < end:
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unexpected character at offset {pos}")
        tokens.append((m.group(1) or m.group(2), m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    return tokens


def parse_expression(text: str) -> GspExpression:
    """Parse and fully validate an expression."""
    expr = _parse(text)
    validate(expr)
    return expr


def _parse(text: str) -> GspExpression:
    tokens = _tokenize(text)
    pos = 0

    def take(expected: str | None = None) -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise ExpressionSyntaxError("unexpected end of input")
        tok, off = tokens[pos]
        if expected is not None and tok != expected:
            raise ExpressionSyntaxError(f"expected {expected!r} at offset {off}, got {tok!r}")
        pos += 1
        return tok

    def ident() -> str:
        tok = take()
        if tok in "(),":
            raise ExpressionSyntaxError(f"expected a vertex name at token {pos - 1}, got {tok!r}")
        return tok

    ops = {k.value: k for k in OpKind}
    stack: list[tuple[OpKind, list[GspExpression]]] = []
    while True:
        op = take()
        if op not in ops:
            raise ExpressionSyntaxError(f"unknown operator {op!r} at token {pos - 1}")
        take("(")
        if ops[op] is not OpKind.PRIMITIVE:
            stack.append((ops[op], []))
            continue
        u = ident()
        take(",")
        v = ident()
        take(")")
        node = leaf(u, v)
        while stack:
            kind, items = stack[-1]
            items.append(node)
            if len(items) == 1:
                take(",")
                break
            take(")")
            stack.pop()
            node = make(kind, items[0], items[1])
        else:
            if pos != len(tokens):
                raise ExpressionSyntaxError(f"trailing input at token {pos}")
            return node


def render_expression(expr: GspExpression) -> str:
    out: list[str] = []
    stack: list[GspExpression | str] = [expr]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif item.is_leaf:
            out.append(f"e({item.first},{item.second})")
        else:
            out.append(item.kind.value + "(")
            stack.extend((")", item.right, ",", item.left))
    return "".join(out)


def validate(expr: GspExpression) -> None:
    """Check the naming discipline: only identified vertices share names, no multi-edges."""
    # per node: (vertex names, contains an edge between its own terminals)
    done: dict[int, tuple[set[str], bool]] = {}
    for node in postorder(expr):
        if node.is_leaf:
            done[id(node)] = ({node.first, node.second}, True)
            continue
        va, ea = done.pop(id(node.left))
        vb, eb = done.pop(id(node.right))
        if node.kind is OpKind.SERIES:
            expected = {node.left.second}
        elif node.kind is OpKind.PARALLEL:
            expected = {node.first, node.second}
            if ea and eb:
                raise MultiEdge(f"two edges between {node.first!r} and {node.second!r}")
        else:
            expected = {node.second}
        small, large = (va, vb) if len(va) <= len(vb) else (vb, va)
        shared = {v for v in small if v in large}
        if shared != expected:
            extra = sorted(shared - expected)
            raise NameCollision(f"name(s) {extra} used for vertices that are never identified")
        large |= small
        if node.kind is OpKind.SERIES:
            has_edge = False
        elif node.kind is OpKind.PARALLEL:
            has_edge = ea or eb
        else:
            has_edge = ea
        done[id(node)] = (large, has_edge)


# ---------------------------------------------------------------------------
# graphs


def flatten(expr: GspExpression) -> tuple[Graph, TerminalPair]:
    """The graph denoted by ``expr`` (one edge per leaf) and its terminal ids."""
    index: dict[str, int] = {}
    us: list[int] = []
    vs: list[int] = []
    for lf in iter_leaves(expr):
        for lab in (lf.first, lf.second):
            if lab not in index:
                index[lab] = len(index)
        us.append(index[lf.first])
        vs.append(index[lf.second])
    n = len(index)
    a = np.array(us, dtype=np.int64)
    b = np.array(vs, dtype=np.int64)
    key = np.minimum(a, b) * n + np.maximum(a, b)
    if np.unique(key).size != key.size:
        raise MultiEdge("expression contains two leaves on the same vertex pair")
    g = Graph.from_id_edges(list(index), a, b)
    return g, TerminalPair(index[expr.first], index[expr.second])


def edge_graph(u: str, v: str) -> tuple[Graph, TerminalPair]:
    return flatten(leaf(u, v))


def compose(kind: OpKind, g1: tuple[Graph, TerminalPair], g2: tuple[Graph, TerminalPair]) -> tuple[Graph, TerminalPair]:
    """Apply a composition rule to two terminal graphs.

    Identified vertices keep the label they have in ``g1``; the remaining
    vertices of ``g2`` keep theirs and must not clash with ``g1``.
    """
    (ga, (s1, t1)), (gb, (s2, t2)) = g1, g2
    if kind is OpKind.PARALLEL:
        glue = {s2: s1, t2: t1}
    elif kind in (OpKind.SERIES, OpKind.GEN_SERIES):
        glue = {s2: t1}
    else:
        raise ValueError(f"cannot compose with {kind}")
    labels = list(ga.labels)
    remap = np.empty(gb.n, dtype=np.int64)
    for v in range(gb.n):
        if v in glue:
            remap[v] = glue[v]
            continue
        lab = gb.labels[v]
        if ga.has_label(lab):
            raise NameCollision(f"label {lab!r} appears in both operands")
        remap[v] = len(labels)
        labels.append(lab)
    ea = np.array(list(ga.edges()), dtype=np.int64).reshape(-1, 2)
    eb = remap[np.array(list(gb.edges()), dtype=np.int64).reshape(-1, 2)]
    edges = np.concatenate([ea, eb])
    n = len(labels)
    key = edges.min(axis=1) * n + edges.max(axis=1)
    if np.unique(key).size != key.size:
        raise MultiEdge("composition creates a parallel edge")
    g = Graph.from_id_edges(labels, edges[:, 0], edges[:, 1])
    if kind is OpKind.SERIES:
        pair = TerminalPair(s1, int(remap[t2]))
    else:
        pair = TerminalPair(s1, t1)
    return g, pair
