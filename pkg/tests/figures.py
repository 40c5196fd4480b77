"""Hand-encoded graphs from the worked examples, in the text format."""

from srgraph.textio import parse_graph, parse_rule

# recursion over {0, s} with f(x; y), g(; y), h(x; y, z)
UNFOLD_0 = """\
constructors 0 s
rule 0 3
0 : f ( 1 ; 2 )
1 : 0
2 : _
3 : g ( ; 2 )
"""

UNFOLD_S0 = """\
constructors 0 s
rule 0 4
0 : f ( 1 ; 3 )
1 : s ( ; 2 )
2 : 0
3 : _
4 : h ( 2 ; 3 5 )
5 : g ( ; 3 )
"""

UNFOLD_SS0 = """\
constructors 0 s
rule 0 5
0 : f ( 1 ; 4 )
1 : s ( ; 2 )
2 : s ( ; 3 )
3 : 0
4 : _
5 : h ( 2 ; 4 6 )
6 : h ( 3 ; 4 7 )
7 : g ( ; 4 )
"""

# four representations of f(g(s(0); s(0)); h(s(0); s(0)))
SEPARATION_GRAPHS = [
    """\
constructors 0 s
root 0
0 : f ( 1 ; 2 )
1 : g ( 3 ; 4 )
2 : h ( 5 ; 6 )
3 : s ( ; 7 )
4 : s ( ; 8 )
5 : s ( ; 9 )
6 : s ( ; 10 )
7 : 0
8 : 0
9 : 0
10 : 0
""",
    """\
constructors 0 s
root 0
0 : f ( 1 ; 2 )
1 : g ( 3 ; 4 )
2 : h ( 3 ; 4 )
3 : s ( ; 5 )
4 : s ( ; 6 )
5 : 0
6 : 0
""",
    """\
constructors 0 s
root 0
0 : f ( 1 ; 2 )
1 : g ( 3 ; 3 )
2 : h ( 4 ; 4 )
3 : s ( ; 5 )
4 : s ( ; 6 )
5 : 0
6 : 0
""",
    """\
constructors 0 s
root 0
0 : f ( 1 ; 2 )
1 : g ( 3 ; 3 )
2 : h ( 3 ; 3 )
3 : s ( ; 4 )
4 : 0
""",
]

# v0 = 0, u1 = 1, u2 = 2, v1 = 3, v2 = 4
PINT_GRAPH = """\
constructors 0 s
root 0
0 : f ( 1 2 ; 3 4 )
1 : s ( ; 2 )
2 : 0
3 : h ( 2 ; 4 4 )
4 : g
"""
V0, U1, U2, V1, V2 = 0, 1, 2, 3, 4


def unfolding_rules():
    return [parse_rule(t) for t in (UNFOLD_0, UNFOLD_S0, UNFOLD_SS0)]


def separation_graphs():
    return [parse_graph(t) for t in SEPARATION_GRAPHS]


def pint_graph():
    return parse_graph(PINT_GRAPH)


def unfolding_spec():
    """The recursion family the three rules above belong to."""
    from srgraph.terms import constructor, defined
    from srgraph.unfolding import UnfoldingSpec
    return UnfoldingSpec(defined("f", 1, 1),
                         {constructor("0"): defined("g", 0, 1),
                          constructor("s", 1): defined("h", 1, 2)}, name="f")
