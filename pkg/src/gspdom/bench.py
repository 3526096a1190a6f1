"""Scaling measurements for the solver."""

from __future__ import annotations

import gc
import statistics
import time
from dataclasses import dataclass

import numpy as np

from .dp import Variant, compile_tree, solve_tree
from .generator import GenConfig, gen_expression

DEFAULT_SIZES = tuple(2 ** k for k in range(10, 21))


@dataclass
class BenchRow:
    leaves: int
    n: int
    m: int
    gen_ms: float
    solve_ms: float
    dp_ms: float
    value: int | None


@dataclass
class BenchReport:
    variant: Variant
    rows: list[BenchRow]
    slope: float | None
    top_ratio: float | None

    def to_csv(self) -> str:
        head = "leaves,n,m,gen_ms,solve_ms,dp_ms,value"
        body = [
            f"{r.leaves},{r.n},{r.m},{r.gen_ms:.3f},{r.solve_ms:.3f},{r.dp_ms:.3f},"
            f"{'infeasible' if r.value is None else r.value}"
            for r in self.rows
        ]
        return "\n".join([head, *body]) + "\n"


def instance_seed(seed: int, position: int) -> int:
    """Seed of the ``position``-th instance in a run; fixed by ``seed``."""
    return seed * 1_000_003 + position


def loglog_slope(leaves: list[int], times: list[float]) -> float | None:
    if len(leaves) < 2:
        return None
    return float(np.polyfit(np.log(leaves), np.log(times), 1)[0])


def run_bench(variant: Variant, sizes=DEFAULT_SIZES, seed: int = 0, repeats: int = 3,
              weights=(1.0, 1.0, 1.0), log=None) -> BenchReport:
    """Generate one instance per size and time its solve ``repeats`` times.

    ``solve_ms`` covers flattening the expression into arrays, the table
    sweep and witness recovery; ``dp_ms`` is the sweep plus witness alone.
    Generation is timed apart.  The slope is fitted on median ``solve_ms``.
    """
    sizes = list(sizes)
    if sizes != sorted(sizes):
        raise ValueError("sizes must be ascending")
    rows = []
    for pos, leaves in enumerate(sizes):
        # the collector would otherwise rescan millions of live tree nodes
        gc.disable()
        try:
            t0 = time.perf_counter()
            expr = gen_expression(GenConfig(instance_seed(seed, pos), leaves, tuple(weights)))
            gen_ms = (time.perf_counter() - t0) * 1e3
            solve_ms, dp_ms = [], []
            for _ in range(repeats):
                t0 = time.perf_counter()
                res = solve_tree(variant, compile_tree(expr), validate=False)
                solve_ms.append((time.perf_counter() - t0) * 1e3)
                dp_ms.append(res.elapsed * 1e3)
            row = BenchRow(leaves, res.graph.n, res.graph.m, gen_ms,
                           statistics.median(solve_ms), statistics.median(dp_ms), res.optimum)
            del expr, res
        finally:
            gc.enable()
            gc.collect()
        rows.append(row)
        if log is not None:
            log(row)
    slope = loglog_slope([r.leaves for r in rows], [r.solve_ms for r in rows])
    top_ratio = None
    if len(rows) >= 2 and rows[-1].leaves == 2 * rows[-2].leaves:
        top_ratio = rows[-1].solve_ms / rows[-2].solve_ms
    return BenchReport(variant, rows, slope, top_ratio)
