import pytest
from hypothesis import given, strategies as st

from srgraph.graph import (GraphBuilder, LabeledGraph, basic_graph, graph_of_term, relabel,
                           term_of, validate)
from srgraph.rules import RewriteRule, match_at
from srgraph.terms import app, constructor, defined, var
from srgraph.unfolding import (UnfoldingError, UnfoldingSpec, check_corollary_normal_structure,
                               format_spec, generate_rule, parse_spec, rule_for_redex,
                               skeletons, verify_unfolding)

import figures
import oracles
from strategies import C, EPS, S, ZERO

SPEC = figures.unfolding_spec()

# a family over {eps, c} whose skeletons may share nodes
G_SYM = defined("gg", 1, 1)
TREE_SPEC = UnfoldingSpec(G_SYM, {EPS: defined("id1", 0, 1), C: defined("h0", 2, 3)})


def skel(t, share=True):
    return graph_of_term(t, share=share)


def nat(n):
    t = app(ZERO)
    for _ in range(n):
        t = app(S, t)
    return t


def test_generated_rules_match_hand_encoded():
    for n, hand in enumerate(figures.unfolding_rules()):
        rule = generate_rule(SPEC, skel(nat(n)))
        assert oracles.rules_isomorphic(rule, hand)
        assert verify_unfolding(hand, SPEC) == []
        assert check_corollary_normal_structure(hand)


def test_shared_skeleton_shares_step_nodes():
    a = app(EPS)
    rule = generate_rule(TREE_SPEC, skel(app(C, a, a)))
    g = rule.graph
    # m = 2 skeleton nodes, one extra argument: 1 + 2*2 + 1 nodes
    assert len(g) == 6
    top = g.succ[rule.right]
    assert top[3] == top[4]
    assert verify_unfolding(rule, TREE_SPEC) == []
    assert check_corollary_normal_structure(rule)


def test_generate_rejects_foreign_skeleton():
    with pytest.raises(UnfoldingError):
        generate_rule(SPEC, skel(app(EPS)))


def test_spec_arity_laws():
    with pytest.raises(UnfoldingError):
        UnfoldingSpec(SPEC.f, {ZERO: defined("g", 0, 2)})
    with pytest.raises(UnfoldingError):
        UnfoldingSpec(SPEC.f, {ZERO: SPEC.f})
    assert SPEC.k_extra == 1 and SPEC.is_safe_recursive()
    bad = UnfoldingSpec(SPEC.f, {ZERO: defined("g", 0, 1), S: defined("h", 0, 3)})
    assert bad.separation_problems() == ["step-separation (h)"]


def test_spec_text_round_trip():
    sig = {s.name: s for s in (SPEC.f, ZERO, S, *SPEC.theta.values())}
    text = format_spec(SPEC)
    assert text == "unfold f (0; 1) over {0->g, s->h}"
    again = parse_spec(text, sig)
    assert again.f == SPEC.f and again.theta == SPEC.theta


def _mutate(rule, edit):
    labels = dict(rule.graph.labels)
    succ = dict(rule.graph.succ)
    edit(labels, succ)
    return RewriteRule(LabeledGraph(labels, succ), rule.left, rule.right, rule.name)


def test_verify_reports_missing_x_block():
    rule = figures.unfolding_rules()[1]
    # h node 4 loses its extra argument: att = (v; w) only
    h2 = defined("h", 1, 1)

    def edit(labels, succ):
        labels[4] = h2
        succ[4] = (2, 5)
    bad = _mutate(rule, edit)
    assert "step-label" in verify_unfolding(bad, SPEC) or "step-wiring" in verify_unfolding(bad, SPEC)


def test_verify_reports_safe_recursion_argument():
    rule = figures.unfolding_rules()[0]
    f_safe = defined("f", 0, 2)

    def edit(labels, succ):
        labels[0] = f_safe
    bad = _mutate(rule, edit)
    spec = UnfoldingSpec(f_safe, SPEC.theta)
    assert "no-normal-recursion" in verify_unfolding(bad, spec)


def test_verify_reports_broken_wiring():
    rule = figures.unfolding_rules()[2]

    def edit(labels, succ):
        succ[5] = (2, 4, 7)   # skip the middle step node
    assert "step-wiring" in verify_unfolding(_mutate(rule, edit), SPEC)


def test_corollary_catches_step_node_in_normal_position():
    rule = figures.unfolding_rules()[2]

    def edit(labels, succ):
        succ[5] = (6, 4, 6)
    assert not check_corollary_normal_structure(_mutate(rule, edit))


def test_rule_for_redex():
    t = constructor("t")
    g = basic_graph(SPEC.f, [nat(1)], [app(t)])
    rule = rule_for_redex(SPEC, g, g.root)
    assert oracles.rules_isomorphic(rule, figures.unfolding_rules()[1])
    assert rule_for_redex(SPEC, g, g.root) is rule   # cached
    b = GraphBuilder()
    open_g = b.build(b.node(SPEC.f, [b.var(), b.node(t)]))
    assert rule_for_redex(SPEC, open_g, open_g.root) is None
    foreign = basic_graph(SPEC.f, [app(S, app(EPS))], [app(t)])
    assert rule_for_redex(SPEC, foreign, foreign.root) is None


def test_skeleton_enumeration_counts():
    # closed graphs over {0, s} with at most 3 nodes: 0, s(0), s(s(0))
    assert len(list(skeletons([ZERO, S], 3))) == 3
    # over {eps, c}, with u = c(e, e) on one shared e: e, u, then the four
    # three-node shapes c(e1, e2), c(u, e), c(e, u), c(u, u)
    shapes = list(skeletons([EPS, C], 3))
    assert [len(g) for g in shapes] == [1, 2, 3, 3, 3, 3]
    for g in shapes:
        assert validate(g) == []


@given(st.integers(0, 40))
def test_family_invariants_on_skeletons(i):
    shapes = list(skeletons(TREE_SPEC.sigma, 5, limit=41))
    g = shapes[i % len(shapes)]
    rule = generate_rule(TREE_SPEC, g)
    m, k = len(g), TREE_SPEC.k_extra
    assert rule.lhs_size() == 1 + m + k
    assert rule.rhs_size() <= 2 * m + k
    assert verify_unfolding(rule, TREE_SPEC) == []
    assert check_corollary_normal_structure(rule)
    # the left side matches the graph it was generated from
    subject = basic_graph(G_SYM, [term_of(g)], [var("z")])
    assert match_at(rule, subject, subject.root) is not None
    # renaming the skeleton gives an isomorphic rule
    assert oracles.rules_isomorphic(rule, generate_rule(TREE_SPEC, relabel(g, 40)))

