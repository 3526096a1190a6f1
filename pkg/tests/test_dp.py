from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gspdom import dp
from gspdom.dp import (
    InternalError, Variant, closed_states, extract_root, leaf_table, merge_generalized,
    merge_parallel, merge_series, node_tables, reconstruct_witness, run_dp, compile_tree,
    solve, split, states, swap,
)
from gspdom.expression import flatten, leaf, parse_expression
from gspdom.generator import GenConfig, gen_expression
from gspdom.graph import is_12_set, is_total_12_set
from gspdom.oracle import brute_gamma, brute_node_table, brute_solve

from instances import cycle_expr, path_expr, spider_expr, star_expr

GOLDEN = Path(__file__).parent / "golden"
ONE2, TOTAL12 = Variant.ONE2, Variant.TOTAL12


def oracle_table(variant, expr):
    g, t = flatten(expr)
    return brute_node_table(variant, g, t)


def root_table(variant, text):
    return node_tables(variant, parse_expression(text))[-1][1]


def test_state_sets():
    assert states(ONE2) == ((0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0))
    assert len(states(TOTAL12)) == 10
    assert all(1 <= s[0] + s[1] <= 2 for s in states(TOTAL12))
    assert closed_states(ONE2) == ((0, 0), (1, 0), (2, 0))
    assert closed_states(TOTAL12) == ((1, 0, 0), (1, 0, 1), (2, 0, 0), (2, 0, 1))


@pytest.mark.parametrize("variant", list(Variant))
def test_swap_closure(variant):
    sts = set(states(variant))
    assert {swap(s) for s in sts} == sts
    assert swap((0, 1)) == (1, 0) and swap((0, 2)) == (2, 0) and swap((1, 1)) == (1, 1)


def test_split_example():
    assert split(ONE2, (2, 0)) == [((0, 2), (2, 0)), ((1, 1), (1, 1)), ((2, 0), (0, 2))]
    assert split(ONE2, (0, 0)) == [((0, 0), (0, 0))]


def test_leaf_one2_entries():
    t = leaf_table(ONE2, ("x", "y"))
    assert len(t.feasible()) == 9
    assert t[(0, 0), (0, 0)] == 2
    assert t[(1, 0), (0, 0)] == 1 and t[(0, 0), (1, 0)] == 1
    assert t[(0, 1), (0, 2)] == 0
    assert t[(0, 1), (0, 0)] is None


def test_leaf_total12_entries():
    t = leaf_table(TOTAL12)
    assert t[(1, 0, 1), (1, 1, 1)] == 2
    assert t[(1, 0, 1), (0, 1, 0)] is None
    assert len(t.feasible()) == 16


@pytest.mark.parametrize("variant", list(Variant))
def test_leaf_golden(variant):
    golden = (GOLDEN / f"leaf_{variant.value}.txt").read_text()
    assert leaf_table(variant).render() == golden


def test_leaf_witness_member_side():
    # ((1,0),(0,0)) on edge x-y means y is the member
    run = run_dp(ONE2, compile_tree(leaf("x", "y")))
    w = reconstruct_witness(run, ((1, 0), (0, 0)))
    assert w.labels(run.tree.graph) == ["y"]


def test_series_p3():
    t = root_table(ONE2, "s(e(a,b),e(b,c))")
    assert t[(1, 0), (1, 0)] == 1
    assert t[(0, 0), (0, 0)] == 2
    assert t[(0, 1), (0, 1)] is None
    lt = leaf_table(ONE2)
    assert merge_series(ONE2, lt, lt).same_values(t)


def test_parallel_c3():
    t = root_table(ONE2, "p(e(a,b),s(e(a,c),e(c,b)))")
    assert t[(0, 0), (1, 0)] == 1
    assert t[(2, 0), (2, 0)] is None
    assert t[(0, 0), (0, 0)] == 2
    lt = leaf_table(ONE2)
    assert merge_parallel(ONE2, lt, merge_series(ONE2, lt, lt)).same_values(t)


def test_generalized_examples():
    t = root_table(ONE2, "g(e(l1,c),e(c,l2))")
    assert t[(1, 0), (0, 0)] == 1
    lt = leaf_table(ONE2)
    assert merge_generalized(ONE2, lt, lt).same_values(t)
    star = node_tables(ONE2, star_expr())[-1][1]
    assert star[(1, 0), (0, 0)] == 1


@pytest.mark.parametrize("variant", list(Variant))
@pytest.mark.parametrize("text", [
    "s(e(a,b),e(b,c))", "p(e(a,b),s(e(a,c),e(c,b)))", "g(e(l1,c),e(c,l2))",
    "g(g(e(l1,c),e(c,l2)),e(c,l3))", "p(s(e(a,c),e(c,b)),s(e(a,d),e(d,b)))",
])
def test_fixture_tables_match_oracle(variant, text):
    for node, table in node_tables(variant, parse_expression(text)):
        assert table.same_values(oracle_table(variant, node)), str(node)


def test_extract_root():
    assert extract_root(ONE2, leaf_table(ONE2)) == (1, ((0, 0), (1, 0)))
    assert extract_root(TOTAL12, leaf_table(TOTAL12)) == (2, ((1, 0, 1), (1, 0, 1)))


def test_infeasible_backpointer_raises():
    run = run_dp(ONE2, compile_tree(parse_expression("s(e(a,b),e(b,c))")))
    with pytest.raises(InternalError):
        reconstruct_witness(run, ((0, 1), (0, 1)))


def test_solve_examples():
    r = solve(ONE2, parse_expression("s(e(a,b),e(b,c))"))
    assert r.optimum == 1 and r.witness_labels() == ["b"]
    r = solve(ONE2, path_expr(6))
    assert r.optimum == 2 and is_12_set(r.graph, r.witness)
    r = solve(ONE2, star_expr())
    assert r.witness_labels() == ["c"]
    r = solve(TOTAL12, star_expr())
    assert r.optimum == 2 and "c" in r.witness_labels() and is_total_12_set(r.graph, r.witness)
    r = solve(TOTAL12, leaf("a", "b"))
    assert r.optimum == 2 and r.witness_labels() == ["a", "b"]


def test_spider_total_infeasible():
    r = solve(TOTAL12, spider_expr())
    assert r.optimum is None and r.witness is None and not r.feasible
    assert brute_solve(TOTAL12, r.graph) is None
    assert solve(ONE2, spider_expr()).optimum == brute_solve(ONE2, r.graph)[0]


@pytest.mark.parametrize("n", [3, 4, 5, 9, 10, 11, 30])
def test_paths_and_cycles(n):
    assert solve(ONE2, path_expr(n)).optimum == -(-n // 3)
    assert solve(ONE2, cycle_expr(n)).optimum == -(-n // 3)


def test_parse_tree_independence():
    a = parse_expression("p(s(e(a,c),e(c,b)),s(e(a,d),e(d,b)))")  # C_4 from a-b
    b = parse_expression("p(s(e(c,a),e(a,d)),s(e(c,b),e(b,d)))")  # C_4 from c-d
    for v in Variant:
        assert solve(v, a).optimum == solve(v, b).optimum


def test_table_render_layout():
    lines = leaf_table(ONE2).render().splitlines()
    assert lines[0] == "# one2" and len(lines) == 37
    assert lines[1] == "(0,0) (0,0) 2"


def test_values_are_float32_inf_internally():
    t = leaf_table(ONE2)
    assert t.values.dtype == np.float32 and np.isinf(t.values).sum() == 27


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 10), st.sampled_from([(1, 1, 1), (1, 0, 1), (0, 1, 1), (1, 1, 0)]))
def test_every_node_table_matches_oracle(seed, leaves, weights):
    try:
        expr = gen_expression(GenConfig(seed, leaves, weights))
    except ValueError:
        return  # weights that cannot reach this size
    for variant in Variant:
        for node, table in node_tables(variant, expr):
            assert table.same_values(oracle_table(variant, node)), str(node)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 16))
def test_solve_properties(seed, leaves):
    expr = gen_expression(GenConfig(seed, leaves))
    one2 = solve(ONE2, expr)
    total = solve(TOTAL12, expr)
    g = one2.graph
    if g.n > 14:
        return
    assert one2.optimum == brute_solve(ONE2, g)[0]
    found = brute_solve(TOTAL12, g)
    assert total.optimum == (None if found is None else found[0])
    assert brute_gamma(g) <= one2.optimum
    if total.feasible:
        assert one2.optimum <= total.optimum
