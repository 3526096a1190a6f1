"""Build a GSP expression for a raw graph by series/parallel/pendant reductions.

Every current super-edge is an orientation-free two-terminal piece.
Pendant pieces are not glued into a neighbouring super-edge right away.
They are parked on their attachment vertex as *hangs*.  A generalized-series
node can only hang material off the second terminal of its left operand, so
emitting hangs late lets every super-edge be emitted in either direction.
The final expression is rooted at a vertex that carries no hangs.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .expression import GspExpression, flatten, gen_series, leaf, parallel, series
from .graph import Graph


class RecognitionError(ValueError):
    pass


class EmptyGraph(RecognitionError):
    pass


class Disconnected(RecognitionError):
    pass


class NotGsp(RecognitionError):
    def __init__(self, residual: int):
        super().__init__(f"reductions stuck with {residual} super-edges left")
        self.residual = residual


@dataclass(eq=False)
class _Piece:
    """A super-edge between ``a`` and ``b``."""

    kind: str  # "e", "s" or "p"
    a: int
    b: int
    first: _Piece | None = None  # "s": a..mid, "p": either operand
    second: _Piece | None = None  # "s": mid..b
    mid: int = -1
    hangs: list[_Hang] = field(default_factory=list)  # hangs at ``mid``


@dataclass(eq=False)
class _Hang:
    """``piece`` attached at ``root``; ``far`` carries its own hangs."""

    piece: _Piece
    root: int
    far: int
    hangs: list[_Hang]


class _Emitter:
    def __init__(self, labels: tuple[str, ...]):
        self.labels = labels

    def piece(self, p: _Piece, x: int, y: int) -> GspExpression:
        return self._run([("piece", p, x, y)])

    def hang(self, h: _Hang) -> GspExpression:
        return self._run([("hang", h)])

    def attach(self, base: GspExpression, hangs: list[_Hang]) -> GspExpression:
        for h in hangs:
            base = gen_series(base, self.hang(h))
        return base

    def _run(self, tasks: list) -> GspExpression:
        out: list[GspExpression] = []
        while tasks:
            task = tasks.pop()
            op = task[0]
            if op == "piece":
                _, p, x, y = task
                if p.kind == "e":
                    out.append(leaf(self.labels[x], self.labels[y]))
                elif p.kind == "p":
                    tasks += [("join", parallel), ("piece", p.second, x, y), ("piece", p.first, x, y)]
                else:
                    head, tail = (p.first, p.second) if x == p.a else (p.second, p.first)
                    # hangs at the middle vertex go on the half that ends there
                    tasks += [("join", series), ("piece", tail, p.mid, y), ("attach", len(p.hangs))]
                    tasks += [("hang", h) for h in reversed(p.hangs)]
                    tasks.append(("piece", head, x, p.mid))
            elif op == "hang":
                h = task[1]
                tasks.append(("attach", len(h.hangs)))
                tasks += [("hang", g) for g in reversed(h.hangs)]
                tasks.append(("piece", h.piece, h.root, h.far))
            elif op == "attach":
                k = task[1]
                if k:
                    parts = out[-k - 1:]
                    del out[-k - 1:]
                    acc = parts[0]
                    for part in parts[1:]:
                        acc = gen_series(acc, part)
                    out.append(acc)
            else:
                right = out.pop()
                left = out.pop()
                out.append(task[1](left, right))
        assert len(out) == 1
        return out[0]


def recognize(g: Graph) -> GspExpression:
    """A parse tree for ``g``, or :class:`NotGsp` if the reductions get stuck."""
    if g.m == 0:
        raise EmptyGraph("graph has no edges")
    if not g.is_connected():
        raise Disconnected("graph is not connected")

    adj: list[dict[int, _Piece]] = [dict() for _ in range(g.n)]
    for u, v in g.edges():
        p = _Piece("e", u, v)
        adj[u][v] = p
        adj[v][u] = p
    hangs: list[list[_Hang]] = [[] for _ in range(g.n)]
    alive = g.m
    heap = [(len(adj[v]), v) for v in range(g.n) if len(adj[v]) <= 2]
    heapq.heapify(heap)

    def touch(v: int) -> None:
        if len(adj[v]) <= 2:
            heapq.heappush(heap, (len(adj[v]), v))

    while alive > 1:
        if not heap:
            raise NotGsp(alive)
        d, v = heapq.heappop(heap)
        if len(adj[v]) != d or d == 0:
            continue
        if d == 1:
            (u, p), = adj[v].items()
            del adj[u][v]
            adj[v].clear()
            hangs[u].append(_Hang(p, u, v, hangs[v]))
            hangs[v] = []
            alive -= 1
            touch(u)
            continue
        (u, pu), (w, pw) = sorted(adj[v].items())
        del adj[u][v], adj[w][v]
        adj[v].clear()
        s = _Piece("s", u, w, pu, pw, mid=v, hangs=hangs[v])
        hangs[v] = []
        alive -= 1
        if w in adj[u]:
            old = adj[u][w]
            s = _Piece("p", old.a, old.b, old, s)
            alive -= 1
        adj[u][w] = s
        adj[w][u] = s
        touch(u)
        touch(w)

    core = next(p for nbrs in adj for p in nbrs.values())
    expr = _assemble(_Emitter(g.labels), core, hangs)
    if not flatten(expr)[0].same_edges(g):
        raise RuntimeError("recognized expression does not flatten back to the input graph")
    return expr


def _assemble(emit: _Emitter, core: _Piece, hangs: list[list[_Hang]]) -> GspExpression:
    u, v = core.a, core.b
    if hangs[u] and not hangs[v]:
        u, v = v, u
    if not hangs[u]:
        return emit.attach(emit.piece(core, u, v), hangs[v])
    # both ends carry hangs: walk down a chain of hangs to a bare vertex and root there
    chain = [hangs[u][0]]
    while chain[-1].hangs:
        chain.append(chain[-1].hangs[0])
    bottom = chain.pop()
    expr = emit.piece(bottom.piece, bottom.far, bottom.root)
    for h in reversed(chain):
        expr = emit.attach(expr, h.hangs[1:])
        expr = series(expr, emit.piece(h.piece, h.far, h.root))
    expr = emit.attach(expr, hangs[u][1:])
    expr = series(expr, emit.piece(core, u, v))
    return emit.attach(expr, hangs[v])
