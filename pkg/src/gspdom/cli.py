"""Command-line front end.

Exit codes: 0 success (an infeasible total instance included), 1 I/O or
input-format error, 2 the graph is not recognized as GSP, 3 ``check``
found a violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import bench
from .dp import Variant, compile_tree, solve_tree, validator
from .expression import ExpressionError, GspExpression, flatten, parse_expression, render_expression
from .generator import GenConfig, gen_expression
from .graph import ForeignVertex, Graph, GraphError, VertexSet, first_violation, read_edge_list
from .oracle import TooLarge, brute_solve
from .recognize import RecognitionError, recognize

EXIT_OK, EXIT_INPUT, EXIT_NOT_GSP, EXIT_VIOLATION = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _sniff(text: str) -> str:
    head = text.lstrip()
    return "expr" if len(head) > 1 and head[0] in "espg" and head[1:].lstrip().startswith("(") else "edges"


def load(path: str, fmt: str | None) -> tuple[GspExpression | None, Graph]:
    """Read an expression or an edge list; the expression is None for edge lists."""
    text = _read(path)
    fmt = fmt or _sniff(text)
    try:
        if fmt == "expr":
            expr = parse_expression(text)
            return expr, flatten(expr)[0]
        return None, read_edge_list(text)
    except (ExpressionError, GraphError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _report(variant: Variant, g: Graph, value, witness, elapsed_ms: float, nodes: int | None,
            args) -> None:
    if args.json:
        doc = {
            "variant": variant.value,
            "n": g.n,
            "m": g.m,
            "value": value,
            "feasible": value is not None,
            "elapsed_ms": round(elapsed_ms, 3),
            "parse_tree_nodes": nodes,
        }
        if args.witness and value is not None:
            doc["witness"] = witness
        print(json.dumps(doc))
        return
    print(f"variant\t{variant.value}")
    print(f"value\t{'infeasible' if value is None else value}")
    if args.witness and value is not None:
        print("witness\t" + " ".join(witness))
    print(f"n\t{g.n}")
    print(f"m\t{g.m}")
    if nodes is not None:
        print(f"parse_tree_nodes\t{nodes}")
        print(f"leaves\t{(nodes + 1) // 2}")
    print(f"elapsed_ms\t{elapsed_ms:.3f}")


def cmd_solve(args) -> int:
    variant = Variant(args.variant)
    expr, g = load(args.input, args.format)
    recognize_ms = 0.0
    if expr is None:
        t0 = time.perf_counter()
        try:
            expr = recognize(g)
        except RecognitionError as exc:
            print(f"not GSP: {exc}", file=sys.stderr)
            return EXIT_NOT_GSP
        recognize_ms = (time.perf_counter() - t0) * 1e3
    t0 = time.perf_counter()
    res = solve_tree(variant, compile_tree(expr))
    elapsed_ms = (time.perf_counter() - t0) * 1e3
    if recognize_ms and not args.json:
        print(f"recognize_ms\t{recognize_ms:.3f}")
    _report(variant, res.graph, res.optimum, res.witness_labels(), elapsed_ms, res.node_count, args)
    return EXIT_OK


def cmd_check(args) -> int:
    variant = Variant(args.variant)
    _, g = load(args.input, args.format)
    labels = [s.strip() for s in args.set.split(",") if s.strip()]
    try:
        s = VertexSet.from_labels(g, labels)
    except ForeignVertex as exc:
        raise InputError(str(exc)) from exc
    bad = first_violation(g, s, total=variant is Variant.TOTAL12)
    assert (bad is None) == validator(variant)(g, s)
    if bad is None:
        print("ok")
        return EXIT_OK
    v, count = bad
    print(f"violated\t{g.labels[v]}\t{count}")
    return EXIT_VIOLATION


def _weights(text: str) -> tuple[float, float, float]:
    try:
        parts = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"bad weights {text!r}") from None
    if len(parts) != 3:
        raise InputError(f"expected three weights s,p,g, got {text!r}")
    return parts


def cmd_gen(args) -> int:
    try:
        cfg = GenConfig(args.seed, args.leaves, _weights(args.weights), args.prefix)
        expr = gen_expression(cfg)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    sys.stdout.write(render_expression(expr) + "\n")
    return EXIT_OK


def cmd_oracle(args) -> int:
    variant = Variant(args.variant)
    _, g = load(args.input, args.format)
    t0 = time.perf_counter()
    try:
        found = brute_solve(variant, g)
    except TooLarge as exc:
        raise InputError(str(exc)) from exc
    elapsed_ms = (time.perf_counter() - t0) * 1e3
    value, witness = (None, None) if found is None else (found[0], found[1].labels(g))
    _report(variant, g, value, witness, elapsed_ms, None, args)
    return EXIT_OK


def _sizes(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"bad sizes {text!r}") from None


def cmd_bench(args) -> int:
    variant = Variant(args.variant)
    sizes = _sizes(args.sizes) if args.sizes else list(bench.DEFAULT_SIZES)
    if sizes != sorted(sizes):
        raise InputError("sizes must be ascending")
    report = bench.run_bench(variant, sizes, args.seed, args.repeats, _weights(args.weights))
    text = report.to_csv()
    sys.stdout.write(text)
    slope = "nan" if report.slope is None else f"{report.slope:.4f}"
    ratio = "nan" if report.top_ratio is None else f"{report.top_ratio:.4f}"
    sys.stdout.write(f"# slope,{slope}\n# top_doubling_ratio,{ratio}\n")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1 so that 2 stays reserved for "not GSP"."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gspdom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def variant_flag(p):
        p.add_argument("--variant", choices=[v.value for v in Variant], default="one2")

    def input_flags(p):
        p.add_argument("input", help="input file, or - for stdin")
        p.add_argument("--format", choices=["expr", "edges"], default=None,
                       help="input format (sniffed when omitted)")

    p = sub.add_parser("solve", help="minimum [1,2]-set or total [1,2]-set")
    input_flags(p)
    variant_flag(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="test a vertex set against the definition")
    input_flags(p)
    variant_flag(p)
    p.add_argument("--set", required=True, help="comma-separated vertex labels")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="print a random GSP expression")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--leaves", type=int, default=16)
    p.add_argument("--weights", default="1,1,1", help="relative weights s,p,g")
    p.add_argument("--prefix", default="v")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="exhaustive solve (at most 25 vertices)")
    input_flags(p)
    variant_flag(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="time solve over growing instances")
    variant_flag(p)
    p.add_argument("--sizes", default=None, help="ascending comma-separated leaf counts")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--weights", default="1,1,1")
    p.add_argument("--out", default=None, help="also write the CSV rows here")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
