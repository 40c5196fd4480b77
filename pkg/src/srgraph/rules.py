"""Graph rewrite rules ``(G, l, r)`` and rooted homomorphism matching."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .graph import LabeledGraph, NodeId, TermGraph, subgraph


@dataclass(frozen=True, eq=False)
class RewriteRule:
    graph: LabeledGraph
    left: NodeId
    right: NodeId
    name: str = ""

    def __post_init__(self):
        if self.left == self.right:
            raise ValueError("left and right roots must differ")
        if self.left not in self.graph or self.right not in self.graph:
            raise ValueError("roots must be nodes of the rule graph")
        if self.left in self.graph.reachable(self.right):
            raise ValueError("left root occurs below the right root")

    @property
    def lhs(self) -> TermGraph:
        return subgraph(self.graph, self.left)

    @property
    def rhs(self) -> TermGraph:
        return subgraph(self.graph, self.right)

    @property
    def symbol(self):
        return self.graph.labels.get(self.left)

    def left_nodes(self) -> frozenset:
        return self.graph.reachable(self.left)

    def right_nodes(self) -> frozenset:
        return self.graph.reachable(self.right)

    def rhs_size(self) -> int:
        return len(self.right_nodes())

    def lhs_size(self) -> int:
        return len(self.left_nodes())

    def is_constructor_rule(self) -> bool:
        g = self.graph
        lab = g.labels.get(self.left)
        if lab is None or lab.is_constructor:
            return False
        return all(g.labels[v].is_constructor
                   for v in self.left_nodes() if v != self.left and v in g.labels)

    def variables_bound(self) -> bool:
        """Every unlabeled node below the right root also occurs on the left."""
        left = self.left_nodes()
        return all(v in left for v in self.right_nodes() if v not in self.graph.labels)

    def __repr__(self):
        return f"RewriteRule({self.name or self.symbol.name}, |l|={self.lhs_size()}, |r|={self.rhs_size()})"


@dataclass(frozen=True)
class Redex:
    rule: RewriteRule
    match: dict = field(hash=False)

    @property
    def node(self) -> NodeId:
        return self.match[self.rule.left]

    def __hash__(self):
        return hash((id(self.rule), self.node))


def match_at(rule: RewriteRule, subject: LabeledGraph, v: NodeId) -> Optional[dict]:
    """The homomorphism from the rule's left side to ``subject`` sending the
    left root to ``v``, or ``None``.

    Labels (with their separation) and successor order must agree on labeled
    rule nodes; unlabeled rule nodes take whatever node they reach, so the
    match need not be injective.
    """
    g = rule.graph
    phi = {rule.left: v}
    stack = [rule.left]
    while stack:
        a = stack.pop()
        lab = g.labels.get(a)
        if lab is None:
            continue
        b = phi[a]
        if subject.labels.get(b) != lab:
            return None
        for a2, b2 in zip(g.succ[a], subject.succ[b]):
            seen = phi.get(a2)
            if seen is None:
                phi[a2] = b2
                stack.append(a2)
            elif seen != b2:
                return None
    return phi


def is_homomorphism(rule: RewriteRule, subject: LabeledGraph, phi: dict) -> bool:
    """Replay the homomorphism conditions node by node."""
    g = rule.graph
    if set(phi) != set(rule.left_nodes()):
        return False
    for a in phi:
        lab = g.labels.get(a)
        if lab is None:
            continue
        b = phi[a]
        if subject.labels.get(b) != lab:
            return False
        if tuple(phi[c] for c in g.succ[a]) != subject.succ[b]:
            return False
    return True
