from hypothesis import given

from srgraph.graph import (basic_graph, graph_of_term, in_tg_nrm, is_constructor_graph,
                           lies_on_safe_path, safe_paths_to)
from srgraph.pint import ell_for, pint, pj, safe_successor_blocks
from srgraph.terms import app, constructor, format_seq

import figures
from strategies import C, EPS, F, S, ZERO, constructor_terms, term_graphs

V0, U1, U2, V1, V2 = figures.V0, figures.U1, figures.U2, figures.V1, figures.V2


def test_pj_of_example_drops_one_edge():
    g = figures.pint_graph()
    kept = pj(g).edges
    assert set(g.edges()) - kept == {(V0, V2)}
    assert kept == {(V0, U1), (U1, U2), (V0, U2), (V1, U2), (V0, V1), (V1, V2)}
    assert pj(g, method="enumerate").edges == kept


def test_pint_of_example():
    g = figures.pint_graph()
    assert format_seq(pint(g)) == "[ f^n(s(0), 0) h^n(0) g^n ]"
    assert format_seq(pint(g, naive=True)) == "[ f^n(s(0), 0) h^n(0) g^n g^n g^n ]"
    assert format_seq(pint(g, v=V1)) == "[ h^n(0) g^n ]"


@given(constructor_terms())
def test_tree_keeps_every_edge(t):
    g = graph_of_term(t, share=False)
    assert pj(g).edges == set(g.edges())


@given(term_graphs(max_nodes=8))
def test_dp_matches_definition(g):
    assert pj(g, "dp").edges == pj(g, "enumerate").edges


@given(term_graphs(max_nodes=8))
def test_pint_empty_iff_constructor_graph(g):
    assert (len(pint(g)) == 0) == is_constructor_graph(g)
    assert len(pint(g, naive=True)) >= len(pint(g))


@given(term_graphs(max_nodes=8))
def test_leftmost_path_survives(g):
    kept = pj(g).edges
    for v in g.nodes:
        if v == g.root or not lies_on_safe_path(g, v):
            continue
        # some safe path to v uses only kept edges
        ok = False
        for p in safe_paths_to(g, v):
            if all((p[i], p[i + 2]) in kept for i in range(0, len(p) - 2, 2)):
                ok = True
        assert ok


@given(term_graphs(max_nodes=8))
def test_safe_successor_blocks_are_disjoint(g):
    blocks = safe_successor_blocks(g)
    seen = set()
    for b in blocks:
        assert not seen & b
        seen |= b


@given(term_graphs(max_nodes=8))
def test_pint_terms_are_normalized_over_constructors(g):
    if not in_tg_nrm(g):
        return
    for t in pint(g).items:
        assert t.head.name.endswith("^n")
        assert all(a.is_constructor_term() for a in t.args)


def test_ell_for():
    t = constructor("t")
    one = app(S, app(ZERO))
    assert ell_for(basic_graph(F, [one], [app(t)]), 3) == 7
    assert ell_for(graph_of_term(app(C, app(EPS), app(EPS))), 2) == 2
