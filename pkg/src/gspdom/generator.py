"""Seeded random GSP expressions.

The stream comes from :class:`random.Random` (MT19937) and only its
``random()`` floats are consumed, which Python keeps stable across versions
and platforms for a given integer seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .expression import GspExpression, OpKind, gen_series, leaf, parallel, series


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    target_leaves: int = 1
    op_weights: tuple[float, float, float] = (1.0, 1.0, 1.0)  # series, parallel, gen-series
    label_prefix: str = "v"

    def __post_init__(self):
        if self.target_leaves < 1:
            raise ValueError("target_leaves must be positive")
        if len(self.op_weights) != 3 or any(w < 0 for w in self.op_weights) or sum(self.op_weights) == 0:
            raise ValueError(f"bad op weights {self.op_weights!r}")


_OPS = (OpKind.SERIES, OpKind.PARALLEL, OpKind.GEN_SERIES)


def gen_expression(cfg: GenConfig) -> GspExpression:
    """Random expression with exactly ``cfg.target_leaves`` leaves.

    Built top-down: a node with budget ``b >= 2`` picks an operator by weight
    and splits ``b`` uniformly.  A parallel node needs a side with budget at
    least 2; that side is forced to be a series node, so it has an interior
    vertex and no edge between the shared terminals.
    """
    rng = random.Random(cfg.seed)
    counter = 0

    def fresh() -> str:
        nonlocal counter
        name = f"{cfg.label_prefix}{counter}"
        counter += 1
        return name

    def pick(b: int) -> OpKind:
        weights = list(cfg.op_weights)
        if b < 3:
            weights[1] = 0.0  # parallel needs a side with at least two leaves
        total = sum(weights)
        if total == 0:
            raise ValueError(f"op weights {cfg.op_weights!r} cannot build {cfg.target_leaves} leaves")
        r = rng.random() * total
        for op, w in zip(_OPS, weights):
            if r < w:
                return op
            r -= w
        return next(op for op, w in zip(reversed(_OPS), reversed(weights)) if w > 0)

    # tasks: ("node", budget, x, y, forced_op) expands; ("build", op) combines two results
    x, y = fresh(), fresh()
    tasks: list[tuple] = [("node", cfg.target_leaves, x, y, None)]
    out: list[GspExpression] = []
    while tasks:
        task = tasks.pop()
        if task[0] == "build":
            right = out.pop()
            left = out.pop()
            out.append({OpKind.SERIES: series, OpKind.PARALLEL: parallel, OpKind.GEN_SERIES: gen_series}[task[1]](left, right))
            continue
        _, b, x, y, forced = task
        if b == 1:
            out.append(leaf(x, y))
            continue
        op = forced or pick(b)
        b1 = 1 + int(rng.random() * (b - 1))
        b2 = b - b1
        if op is OpKind.SERIES:
            z = fresh()
            children = [(b1, x, z, None), (b2, z, y, None)]
        elif op is OpKind.GEN_SERIES:
            z = fresh()
            children = [(b1, x, y, None), (b2, y, z, None)]
        else:
            if b1 >= 2:
                children = [(b1, x, y, OpKind.SERIES), (b2, x, y, None)]
            else:
                children = [(b1, x, y, None), (b2, x, y, OpKind.SERIES)]
        tasks.append(("build", op))
        # left child must be expanded (and named) first
        for cb, cx, cy, cf in reversed(children):
            tasks.append(("node", cb, cx, cy, cf))
    return out[0]
