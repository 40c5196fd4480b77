import io

import pytest
from hypothesis import given, settings, strategies as st

from srgraph.graph import (GraphBuilder, basic_graph, graph_of_term, in_tg_nrm, term_of,
                           validate)
from srgraph.rewriting import RewriteError, RuleProvider, apply, find_redexes, reduce
from srgraph.rules import Redex, is_homomorphism, match_at
from srgraph.safe_recursion import direct_interpreter, example_program, unary
from srgraph.terms import app, constructor, defined
from srgraph.textio import format_rule, parse_rule

import figures
from strategies import C, EPS, ZERO, S

FAMILY = figures.unfolding_spec()
T = constructor("t")


def f_graph(n):
    sym = FAMILY.f
    return basic_graph(sym, [unary(n, S, ZERO)], [app(T)])


def test_match_base_rule_sends_variable_to_argument():
    rule = figures.unfolding_rules()[0]
    g = f_graph(0)
    phi = match_at(rule, g, g.root)
    assert phi is not None
    assert phi[2] == g.succ[g.root][1]
    assert is_homomorphism(rule, g, phi)


def test_match_label_clash():
    rule = figures.unfolding_rules()[0]
    g = f_graph(1)
    assert match_at(rule, g, g.root) is None


def test_match_is_not_injective():
    gsym = defined("g2", 0, 2)
    rule = parse_rule("rule 0 1\n0 : g2 ( ; 2 3 )\n1 : g2 ( ; 3 2 )\n2 : _\n3 : _\n")
    b = GraphBuilder()
    a = b.node(T)
    subject = b.build(b.node(gsym, [a, a]))
    phi = match_at(rule, subject, subject.root)
    assert phi[2] == phi[3] == a


def test_family_has_single_redex_at_root():
    g = f_graph(1)
    red = find_redexes(g, RuleProvider(families=[FAMILY]))
    assert len(red) == 1 and red[0].node == g.root


def test_constructor_graph_has_no_redex():
    g = graph_of_term(app(C, app(EPS), app(EPS)))
    assert find_redexes(g, RuleProvider(families=[FAMILY])) == []


def _nested():
    # f(s(0); f(0; t)) has redexes at the root and in the safe argument
    b = GraphBuilder()
    t = b.node(T)
    zero = b.node(ZERO)
    inner = b.node(FAMILY.f, [zero, t])
    one = b.node(S, [b.node(ZERO)])
    return b.build(b.node(FAMILY.f, [one, inner])), inner


def test_innermost_keeps_only_inner_redex():
    g, inner = _nested()
    rules = RuleProvider(families=[FAMILY])
    everything = find_redexes(g, rules)
    assert {r.node for r in everything} == {g.root, inner}
    # independent filter: no other redex node strictly below
    heads = {r.node for r in everything}
    expect = {r.node for r in everything
              if not (heads - {r.node}) & set(g.reachable(r.node))}
    assert {r.node for r in find_redexes(g, rules, innermost=True)} == expect == {inner}


def test_apply_base_rule():
    g = f_graph(0)
    rules = RuleProvider(families=[FAMILY])
    h = apply(g, find_redexes(g, rules)[0])
    assert repr(term_of(h)) == "g(t)"
    assert validate(h) == []


def test_apply_two_step_unfolding_shares_argument():
    g = f_graph(2)
    h = apply(g, find_redexes(g, RuleProvider(families=[FAMILY]))[0])
    assert repr(term_of(h)) == "h(s(0); t, h(0; t, g(t)))"
    t_nodes = [v for v in h.nodes if h.labels.get(v) == T]
    assert len(t_nodes) == 1


def test_apply_redirects_every_parent():
    b = GraphBuilder()
    inner = b.node(FAMILY.f, [b.node(ZERO), b.node(T)])
    pair = defined("pair", 0, 2)
    g = b.build(b.node(pair, [inner, inner]))
    redex = find_redexes(g, RuleProvider(families=[FAMILY]))[0]
    assert redex.node == inner
    h = apply(g, redex)
    left, right = h.succ[h.root]
    assert left == right and h.labels[left].name == "g"
    assert inner not in h.nodes


def test_apply_rejects_stale_redex():
    g = f_graph(1)
    redex = find_redexes(g, RuleProvider(families=[FAMILY]))[0]
    other = f_graph(2)
    with pytest.raises(RewriteError):
        apply(other, Redex(redex.rule, {k: v + 1000 for k, v in redex.match.items()}))


def test_reduce_one_step_and_trace():
    red = reduce(f_graph(1), RuleProvider(families=[FAMILY]))
    assert red.normal and red.steps == 1
    assert repr(term_of(red.graph)) == "h(0; t, g(t))"
    buf = io.StringIO()
    red.trace.write_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "step,graph_size,normal_union_size,rule_id,redex_node"
    assert len(lines) == 3


def test_reduce_constructor_graph():
    g = graph_of_term(app(S, app(ZERO)))
    red = reduce(g, RuleProvider())
    assert red.normal and red.steps == 0 and red.graph is g


def test_reduce_step_limit_marker():
    red = reduce(f_graph(1), RuleProvider(families=[FAMILY]), step_limit=0)
    assert not red.normal and red.trace.limit_reached


def test_example_program_steps_match_oracle():
    cp = example_program()
    s, z, c, e = (cp.symbol(n) for n in ("s", "0", "c", "eps"))
    for m in range(4):
        x = unary(m, s, z)
        y = app(c, app(e), app(e))
        red = reduce(basic_graph(cp.main, [x, y], []), cp.provider)
        assert red.normal
        assert red.steps == 2 + 7 * m
        assert term_of(red.graph) is direct_interpreter(cp, [x, y])


def _program_runs():
    cp = example_program()
    s, z, c, e = (cp.symbol(n) for n in ("s", "0", "c", "eps"))
    return cp, lambda m: basic_graph(cp.main, [unary(m, s, z), app(c, app(e), app(e))], [])


@settings(max_examples=25)
@given(st.integers(0, 3), st.sampled_from(["innermost-leftmost", "innermost-random", "any"]),
       st.integers(0, 1000))
def test_traces_stay_in_tg_nrm_and_grow_boundedly(m, strategy, seed):
    cp, start = _program_runs()
    red = reduce(start(m), cp.provider, strategy, seed=seed)
    assert red.normal
    steps = red.trace.steps
    for prev, cur in zip(steps, steps[1:]):
        assert in_tg_nrm(cur.graph)
        assert cur.size - prev.size <= cur.rule.rhs_size()
        # the match replays as a homomorphism on the previous snapshot
        assert is_homomorphism(cur.rule, prev.graph, cur.match)


@given(st.integers(0, 3), st.integers(0, 50))
def test_strategies_reach_same_normal_form(m, seed):
    cp, start = _program_runs()
    a = reduce(start(m), cp.provider, "innermost-leftmost")
    b = reduce(start(m), cp.provider, "any", seed=seed)
    assert term_of(a.graph) is term_of(b.graph)


def test_rule_text_round_trip():
    for rule in figures.unfolding_rules():
        text = format_rule(rule)
        again = parse_rule(text)
        assert again.left == rule.left and again.right == rule.right
        assert again.graph.labels == rule.graph.labels
        assert dict(again.graph.succ) == dict(rule.graph.succ)
        assert format_rule(again) == text
