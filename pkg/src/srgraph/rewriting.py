"""Redex discovery, rewrite steps and reduction traces.

A step instantiates the labeled right-side nodes that are not shared with
the left side, redirects every edge into the matched left root to the new
right root, and drops nodes no longer reachable from the root.
"""

from __future__ import annotations

import csv
import logging
import random
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence

from .graph import (LabeledGraph, NodeId, TermGraph, is_basic, normal_union_size,
                    validate)
from .rules import Redex, RewriteRule, is_homomorphism, match_at
from .unfolding import UnfoldingSpec, rule_for_redex

log = logging.getLogger(__name__)

STRATEGIES = ("innermost-leftmost", "innermost-random", "any")


class RewriteError(RuntimeError):
    pass


class RuleProvider:
    """Finite rules indexed by their left root symbol, plus lazily
    instantiated unfolding families."""

    def __init__(self, rules: Iterable[RewriteRule] = (),
                 families: Iterable[UnfoldingSpec] = ()):
        self.rules: List[RewriteRule] = list(rules)
        self.families: List[UnfoldingSpec] = list(families)
        self._by_symbol: dict = {}
        for r in self.rules:
            self._by_symbol.setdefault(r.symbol, []).append(r)
        self._fam_by_symbol = {s.f: s for s in self.families}

    def __len__(self):
        return len(self.rules) + len(self.families)

    def defined_symbols(self) -> set:
        return set(self._by_symbol) | set(self._fam_by_symbol)

    def finite_symbols(self) -> set:
        return set(self._by_symbol)

    def redexes_at(self, subject: LabeledGraph, v: NodeId) -> list:
        lab = subject.labels.get(v)
        if lab is None:
            return []
        out = []
        for rule in self._by_symbol.get(lab, ()):
            phi = match_at(rule, subject, v)
            if phi is not None:
                out.append(Redex(rule, phi))
        spec = self._fam_by_symbol.get(lab)
        if spec is not None:
            rule = rule_for_redex(spec, subject, v)
            if rule is not None:
                phi = match_at(rule, subject, v)
                if phi is not None:
                    out.append(Redex(rule, phi))
        return out


def leftmost_positions(g: TermGraph) -> dict:
    """For each node, the lexicographically least position path from the root."""
    best = {g.root: ()}
    for u in g.topological([g.root]):
        pu = best[u]
        for j, w in enumerate(g.succ[u]):
            cand = pu + (j + 1,)
            old = best.get(w)
            if old is None or cand < old:
                best[w] = cand
    return best


def find_redexes(subject: TermGraph, rules: RuleProvider, innermost: bool = False) -> list:
    """All redexes, ordered by the leftmost position path of their node.

    With ``innermost`` only redexes with no other redex strictly below
    them are kept.
    """
    pos = leftmost_positions(subject)
    found = []
    for v in subject.reachable(subject.root):
        found.extend(rules.redexes_at(subject, v))
    if innermost:
        heads = {r.node for r in found}
        found = [r for r in found
                 if not any(u in heads for u in subject.reachable(r.node) if u != r.node)]
    found.sort(key=lambda r: pos[r.node])
    return found


def select_redex(redexes: Sequence[Redex], strategy: str, rng: random.Random) -> Redex:
    if strategy == "innermost-leftmost":
        return redexes[0]
    return redexes[rng.randrange(len(redexes))]


def apply(subject: TermGraph, redex: Redex) -> TermGraph:
    """One rewrite step; see the module docstring for the semantics."""
    rule, phi = redex.rule, redex.match
    if not is_homomorphism(rule, subject, phi) or any(v not in subject for v in phi.values()):
        raise RewriteError("stale or inconsistent redex")
    g = rule.graph
    left = rule.left_nodes()
    target = phi[rule.left]
    labels = dict(subject.labels)
    succ = dict(subject.succ)
    nid = subject.next_id
    inst: dict = {}
    for a in rule.right_nodes():
        if a in left:
            inst[a] = phi[a]
        elif a in g.labels:
            inst[a] = nid
            nid += 1
        else:
            raise RewriteError(f"right-side variable {a} does not occur on the left")
    for a, b in inst.items():
        if a not in left:
            labels[b] = g.labels[a]
            succ[b] = tuple(inst[c] for c in g.succ[a])
    new_r = inst[rule.right]
    for u, kids in succ.items():
        if target in kids:
            succ[u] = tuple(new_r if w == target else w for w in kids)
    root = new_r if subject.root == target else subject.root
    keep = _reach(succ, root)
    return TermGraph({u: s for u, s in labels.items() if u in keep},
                     {u: succ[u] for u in keep}, root, next_id=nid)


def _reach(succ, root) -> set:
    seen = {root}
    stack = [root]
    while stack:
        for w in succ[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


# --- traces -----------------------------------------------------------------

@dataclass
class TraceStep:
    step: int
    graph: TermGraph
    rule_id: str = ""
    redex_node: Optional[NodeId] = None
    rule: Optional[RewriteRule] = field(default=None, repr=False)
    match: Optional[dict] = field(default=None, repr=False)
    size: int = 0
    normal_union: int = 0

    @classmethod
    def record(cls, step, graph, keep=True, **kw) -> "TraceStep":
        return cls(step, graph if keep else None, size=len(graph),
                   normal_union=normal_union_size(graph), **kw)


@dataclass
class Trace:
    steps: List[TraceStep] = field(default_factory=list)
    limit_reached: bool = False

    @property
    def start(self) -> TermGraph:
        return self.steps[0].graph

    @property
    def final(self) -> TermGraph:
        return self.steps[-1].graph

    @property
    def length(self) -> int:
        return len(self.steps) - 1

    def graphs(self) -> list:
        return [s.graph for s in self.steps]

    def rows(self) -> list:
        return [{"step": s.step, "graph_size": s.size,
                 "normal_union_size": s.normal_union,
                 "rule_id": s.rule_id,
                 "redex_node": "" if s.redex_node is None else s.redex_node}
                for s in self.steps]

    def write_csv(self, path_or_file) -> None:
        cols = ["step", "graph_size", "normal_union_size", "rule_id", "redex_node"]
        if hasattr(path_or_file, "write"):
            _write_rows(path_or_file, cols, self.rows())
        else:
            with open(path_or_file, "w", newline="") as fh:
                _write_rows(fh, cols, self.rows())


def _write_rows(fh, cols, rows):
    w = csv.DictWriter(fh, fieldnames=cols)
    w.writeheader()
    w.writerows(rows)


@dataclass
class Reduction:
    graph: TermGraph
    trace: Trace
    normal: bool

    @property
    def steps(self) -> int:
        return self.trace.length


def reduce(subject: TermGraph, rules: RuleProvider, strategy: str = "innermost-leftmost",
           step_limit: int = 100_000, seed: Optional[int] = None,
           keep_snapshots: bool = True) -> Reduction:
    """Rewrite until no redex is left or ``step_limit`` steps were taken.

    ``keep_snapshots=False`` records only the start and the final graph
    (rule ids and redex nodes are still recorded for every step).
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    problems = validate(subject)
    if problems:
        raise RewriteError(f"invalid subject: {problems[:3]}")
    if not is_basic(subject):
        log.warning("reducing a graph that is not basic")
    rng = random.Random(seed)
    innermost = strategy != "any"
    trace = Trace([TraceStep.record(0, subject)])
    g = subject
    n = 0
    while True:
        found = find_redexes(g, rules, innermost=innermost)
        if not found:
            _finish(trace, g, keep_snapshots)
            return Reduction(g, trace, True)
        if n >= step_limit:
            trace.limit_reached = True
            _finish(trace, g, keep_snapshots)
            return Reduction(g, trace, False)
        redex = select_redex(found, strategy, rng)
        g = apply(g, redex)
        n += 1
        trace.steps.append(TraceStep.record(
            n, g, keep_snapshots, rule_id=redex.rule.name or redex.rule.symbol.name,
            redex_node=redex.node, rule=redex.rule, match=redex.match))


def _finish(trace: Trace, g: TermGraph, keep: bool) -> None:
    if not keep and trace.steps[-1].graph is None:
        trace.steps[-1].graph = g
