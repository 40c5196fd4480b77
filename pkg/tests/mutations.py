"""Injected faults shared by the checker tests and the acceptance suite."""

from srgraph.graph import GraphBuilder, LabeledGraph
from srgraph.order import Precedence
from srgraph.rules import RewriteRule
from srgraph.terms import defined
from srgraph.unfolding import generate_rule


def reversed_prec(prec):
    return Precedence((b, a) for a, b in prec.pairs())


def labeled_safe_left_rule(c):
    """``p(; c(x, y)) -> y``: a destructor matching on its safe argument."""
    p = defined("p", 0, 1)
    b = GraphBuilder()
    x, y = b.var(), b.var()
    left = b.node(p, [b.node(c, [x, y])])
    return RewriteRule(LabeledGraph(b.labels, b.succ), left, y, "p")


def skip_step_node(spec, skeleton):
    """Generated rule with one step node's recursive result replaced by the
    extra argument, which breaks the wiring of the step layer."""
    rule = generate_rule(spec, skeleton)
    g = rule.graph
    succ = dict(g.succ)
    extra = g.safe(rule.left)
    for w in sorted(g.labels):
        if w == rule.left or g.labels[w].is_constructor:
            continue
        kids = list(succ[w])
        k = g.labels[w].normal_count
        for i in range(k, len(kids)):
            if kids[i] in g.labels and extra:
                kids[i] = extra[0]
                succ[w] = tuple(kids)
                return RewriteRule(LabeledGraph(g.labels, succ), rule.left, rule.right, rule.name)
    return rule
