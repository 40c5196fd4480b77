"""Checkers for rule shapes, precedence termination with argument
separation, and the per-step and per-trace statements about reductions
from basic term graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional

from .graph import (LabeledGraph, NodeId, TermGraph, basic_graph, canonical_key,
                    in_tg_nrm, normal_union_size)
from .order import Precedence, bound_G, gt
from .pint import pint
from .rewriting import RuleProvider, Trace, reduce
from .rules import RewriteRule
from .terms import Seq
from .unfolding import (UnfoldingSpec, check_corollary_normal_structure, generate_rule,
                        skeletons, verify_unfolding)


@dataclass
class Violation:
    rule: str
    clause: str
    detail: str = ""

    def __str__(self):
        return f"{self.rule}: {self.clause}" + (f" ({self.detail})" if self.detail else "")


@dataclass
class CheckReport:
    suite: str
    checked: int = 0
    violations: List[Violation] = field(default_factory=list)
    classes: dict = field(default_factory=dict)  # rule name -> classification

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule: str, clause: str, detail: str = "") -> None:
        self.violations.append(Violation(rule, clause, detail))

    def format(self) -> str:
        head = f"[{self.suite}] {'PASS' if self.ok else 'FAIL'}: {self.checked} checked, " \
               f"{len(self.violations)} violations"
        return "\n".join([head] + [f"  {v}" for v in self.violations]) + "\n"


def _rule_name(rule: RewriteRule) -> str:
    return rule.name or rule.symbol.name


# --- shapes of safe recursive systems -----------------------------------------

def classify_finite_rule(rule: RewriteRule) -> tuple:
    """``("case1", [])``, ``("case2", [])`` or ``("violation", clauses)``."""
    g, l, r = rule.graph, rule.left, rule.right
    if r != l and r in g.reachable(l):
        return "case1", []
    problems = _case2_problems(g, l, r)
    return ("case2", []) if not problems else ("violation", problems)


def _case2_problems(g: LabeledGraph, u: NodeId, v: NodeId) -> list:
    out = []
    ul, vl = g.labels.get(u), g.labels.get(v)
    if ul is None or vl is None:
        return ["case2-labels"]
    xs = g.succ[u]
    k = ul.normal_count
    if len(set(xs)) != len(xs) or any(x in g.labels for x in xs):
        out.append("case2-left-args")
    if u == v or v in xs:
        out.append("case2-nodes")
    vn, ws = g.nrm(v), g.safe(v)
    if any(x not in xs[:k] for x in vn):
        out.append("case2-right-args")
    if len(set(ws)) != len(ws) or any(w in (u, v) or w in xs for w in ws):
        out.append("case2-right-args")
    for w in ws:
        wl = g.labels.get(w)
        if wl is None:
            out.append("case2-right-args")
        elif tuple(g.succ[w]) != tuple(xs) or wl.normal_count != k:
            out.append("case2-safe-calls")
    nodes = set(g.reachable(u)) | set(g.reachable(v))
    if nodes != {u, v, *xs, *ws}:
        out.append("case2-nodes")
    return sorted(set(out))


def _is_constructor_left(rule: RewriteRule) -> bool:
    g = rule.graph
    lab = g.labels.get(rule.left)
    if lab is None or lab.is_constructor:
        return False
    return all(g.labels[w].is_constructor for w in g.reachable(rule.left)
               if w != rule.left and w in g.labels)


RuleGenerator = Callable[[UnfoldingSpec, TermGraph], RewriteRule]


def family_rules(spec: UnfoldingSpec, max_skeleton: int = 6, limit: Optional[int] = None,
                 generator: RuleGenerator = generate_rule) -> Iterable[RewriteRule]:
    for sk in skeletons(spec.sigma, max_skeleton, limit):
        yield generator(spec, sk)


def check_safe_recursive_grs(provider: RuleProvider, max_skeleton: int = 6,
                             limit: Optional[int] = 2000,
                             generator: RuleGenerator = generate_rule) -> CheckReport:
    """Finite rules must have one of the two admitted shapes; every family
    must produce safe recursive unfolding rules (checked on all skeletons
    up to ``max_skeleton`` nodes, at most ``limit`` of them)."""
    rep = CheckReport("grs")
    for rule in provider.rules:
        rep.checked += 1
        name = _rule_name(rule)
        kind, problems = classify_finite_rule(rule)
        rep.classes[name] = kind
        for p in problems:
            rep.add(name, p)
        if not _is_constructor_left(rule):
            rep.add(name, "constructor", "left side is not f(constructor graphs)")
    for spec in provider.families:
        fname = spec.name or spec.f.name
        rep.classes[fname] = "family"
        for p in spec.separation_problems():
            rep.add(fname, p)
        for rule in family_rules(spec, max_skeleton, limit, generator):
            rep.checked += 1
            for p in verify_unfolding(rule, spec, safe=True):
                rep.add(_rule_name(rule), p)
            if not check_corollary_normal_structure(rule):
                rep.add(_rule_name(rule), "normal-structure")
    return rep


# --- precedence termination with argument separation ---------------------------

class _PT:
    """``⊐_pt`` between rooted subgraphs of one labeled graph.

    Sub-term graphs are recognised by node identity, and closed subgraphs
    additionally up to isomorphism; variable nodes are only ever equal to
    themselves.
    """

    def __init__(self, g: LabeledGraph, prec: Precedence):
        self.g = g
        self.prec = prec
        self.memo: dict = {}
        self._closed: dict = {}
        self._keys: dict = {}

    def closed(self, v) -> bool:
        c = self._closed.get(v)
        if c is None:
            c = self._closed[v] = all(w in self.g.labels for w in self.g.reachable(v))
        return c

    def key(self, v):
        k = self._keys.get(v)
        if k is None:
            k = self._keys[v] = (("closed", canonical_key(self.g, v)) if self.closed(v)
                                 else ("node", v))
        return k

    def same(self, a, b) -> bool:
        return a == b or self.key(a) == self.key(b)

    def contains(self, u, v) -> bool:
        """``G↾v`` is a sub-term graph of ``G↾u``."""
        reach = self.g.reachable(u)
        if v in reach:
            return True
        return self.closed(v) and any(self.key(x) == self.key(v) for x in reach)

    def geq(self, a, b) -> bool:
        return self.same(a, b) or self.gt(a, b)

    def gt(self, a, b) -> bool:
        hit = self.memo.get((a, b))
        if hit is not None:
            return hit
        self.memo[(a, b)] = False
        res = self._gt(a, b)
        self.memo[(a, b)] = res
        return res

    def _gt(self, a, b) -> bool:
        g = self.g
        la = g.labels.get(a)
        if la is None:
            return False
        for v in g.reachable(b):
            lv = g.labels.get(v)
            if lv is not None and not self.prec.gt(la, lv):
                return False
        if any(self.geq(v, b) for v in g.succ[a]):
            return True
        if b not in g.labels:
            return False
        for v in g.nrm(b):
            if not any(self.contains(u, v) for u in g.nrm(a)):
                return False
        return all(self.gt(a, w) for w in g.safe(b))


def gt_pt(g: LabeledGraph, a: NodeId, b: NodeId, prec: Precedence) -> bool:
    """``G↾a ⊐_pt G↾b`` inside one graph (typically a rule graph)."""
    return _PT(g, prec).gt(a, b)


def gt_pt_graphs(g: TermGraph, h: TermGraph, prec: Precedence) -> bool:
    """``G ⊐_pt H`` for two separate graphs; they are placed side by side,
    so sharing between them can only be recognised up to isomorphism."""
    off = max(g.nodes, default=-1) + 1 - min(h.nodes, default=0)
    labels = dict(g.labels)
    succ = dict(g.succ)
    for v, s in h.labels.items():
        labels[v + off] = s
    for v, kids in h.succ.items():
        succ[v + off] = tuple(w + off for w in kids)
    return gt_pt(LabeledGraph(labels, succ), g.root, h.root + off, prec)


def _ptas_rule(rep: CheckReport, rule: RewriteRule, prec: Precedence, family: bool) -> None:
    g, l, r = rule.graph, rule.left, rule.right
    name = _rule_name(rule)
    rep.checked += 1
    if any(w in g.labels for w in g.safe(l)):
        rep.add(name, "ptas-safe-left", "labeled node in a safe position of the left root")
    if not gt_pt(g, l, r, prec):
        rep.add(name, "ptas-order", "left side does not dominate right side")
    if family:
        rhs = g.reachable(r)
        normal = g.union_reachable(g.nrm(r)) if r in g.labels else set()
        if len(rhs - normal) > len(g.reachable(l)):
            rep.add(name, "size", f"{len(rhs - normal)} > {len(g.reachable(l))}")


def check_ptas(provider: RuleProvider, prec: Precedence, max_skeleton: int = 5,
               limit: Optional[int] = 500, generator: RuleGenerator = generate_rule) -> CheckReport:
    """Both conditions on every finite rule and on family rules for all
    skeletons up to ``max_skeleton`` nodes; for family rules also the
    bound on the right side outside its normal part."""
    rep = CheckReport("ptas")
    for rule in provider.rules:
        _ptas_rule(rep, rule, prec, family=False)
    for spec in provider.families:
        for rule in family_rules(spec, max_skeleton, limit, generator):
            _ptas_rule(rep, rule, prec, family=True)
    return rep


# --- steps and traces ------------------------------------------------------------

def normalized_precedence(prec: Precedence) -> Precedence:
    """``f^n > g^n`` for every ``f > g``. Constructors are lifted too: a
    constructor node whose safe arguments are still being evaluated heads
    an interpretation term of its own."""
    return Precedence((f + "^n", g + "^n") for f, g in prec.pairs())


@dataclass
class StepReport:
    step: int
    ell: int
    pint_before: Seq
    pint_after: Seq
    verdict: bool
    normal_union_before: int
    normal_union_after: int
    size_before: int
    size_after: int
    rule_id: str = ""
    in_tg_nrm: bool = True
    max_safe_normal_union: int = 0
    size_lemma_lhs: int = 0
    size_lemma_rhs: int = 0

    @property
    def size_slack(self) -> int:
        return self.size_lemma_rhs - self.size_lemma_lhs


def check_embedding_step(g: TermGraph, h: TermGraph, ell: int, prec_n: Precedence,
                         naive: bool = False, reading: str = "l", step: int = 0,
                         rule_id: str = "") -> StepReport:
    """Compare the interpretations of ``g`` and ``h`` under ``⊐_ell``;
    ``prec_n`` must already be over normalized symbols."""
    a = pint(g, naive=naive)
    b = pint(h, naive=naive)
    return StepReport(step, ell, a, b, gt(a, b, ell, prec_n, reading),
                      normal_union_size(g), normal_union_size(h), len(g), len(h), rule_id,
                      in_tg_nrm(h))


def safe_path_nodes(g: TermGraph) -> set:
    seen = {g.root}
    stack = [g.root]
    while stack:
        u = stack.pop()
        if u not in g.labels:
            continue
        for w in g.safe(u):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


@dataclass
class TraceReport:
    steps: List[StepReport]
    trace: Trace
    normal: bool
    d: int
    ell: int
    N0: int
    rest0: int
    bound: int
    final_size: int
    violations: List[str] = field(default_factory=list)
    root_monotone: bool = True

    @property
    def m(self) -> int:
        return self.trace.length

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def size_bound_derived(self) -> int:
        """``N0 + m (N0 + d) + rest0``: normal part plus the size inequality."""
        return self.N0 + self.m * (self.N0 + self.d) + self.rest0

    @property
    def size_bound_poly(self) -> int:
        """The same with ``m`` replaced by :attr:`bound`."""
        return self.N0 + self.bound * (self.N0 + self.d) + self.rest0

    @property
    def literal_size_ok(self) -> bool:
        """``|H| <= bound + rest0``; holds for the recursion examples but is
        not implied in general (see :attr:`size_bound_poly`)."""
        return self.final_size <= self.bound + self.rest0

    @property
    def all_verdicts(self) -> bool:
        return all(s.verdict for s in self.steps)

    def summary(self) -> str:
        return (f"steps={self.m} normal_form={self.normal} ell={self.ell} d={self.d} "
                f"N0={self.N0} rest0={self.rest0} bound_G={self.bound} "
                f"final_size={self.final_size} root_monotone={self.root_monotone} "
                f"violations={len(self.violations)}")

    def rows(self) -> list:
        return [{"step": s.step, "rule_id": s.rule_id, "verdict": s.verdict,
                 "graph_size": s.size_after, "normal_union_size": s.normal_union_after,
                 "max_safe_normal_union": s.max_safe_normal_union,
                 "size_lemma_lhs": s.size_lemma_lhs, "size_lemma_rhs": s.size_lemma_rhs,
                 "pint_len": len(s.pint_after)} for s in self.steps]


def check_trace(provider: RuleProvider, prec: Precedence, d: int, g0: TermGraph,
                strategy: str = "innermost-leftmost", step_limit: int = 10_000,
                seed: Optional[int] = None, ell_override: Optional[int] = None,
                naive: bool = False, reading: str = "l") -> TraceReport:
    """Reduce ``g0`` and check every step and the whole trace.

    Violations per step: the order between interpretations, membership in
    TG_nrm, the normal part bound ``N0`` at every node on a safe path, and
    the size inequality for the part outside the normal arguments. For the
    whole trace: the step count against :func:`bound_G` of the start
    interpretation and the final size against the derived size bounds.
    Whether the root's normal part shrank monotonically is recorded in
    ``root_monotone`` without counting as a violation.
    """
    red = reduce(g0, provider, strategy, step_limit, seed, keep_snapshots=True)
    trace = red.trace
    N0 = normal_union_size(g0)
    rest0 = len(g0) - N0
    ell = ell_override if ell_override is not None else 2 * N0 + d
    prec_n = normalized_precedence(prec)
    head = pint(g0, naive=naive)
    bound = bound_G(head[0].head, head[0].args, ell, prec_n, d) if len(head) else 0
    rep = TraceReport([], trace, red.normal, d, ell, N0, rest0, bound, len(red.graph))
    prev_nu = N0
    graphs = trace.graphs()
    for n in range(1, len(graphs)):
        g, h = graphs[n - 1], graphs[n]
        st = trace.steps[n]
        s = check_embedding_step(g, h, ell, prec_n, naive, reading, n, st.rule_id)
        s.max_safe_normal_union = max((normal_union_size(h, v) for v in safe_path_nodes(h)
                                       if v in h.labels), default=0)
        s.size_lemma_lhs = len(h) - s.normal_union_after
        s.size_lemma_rhs = n * (N0 + d) + rest0
        rep.steps.append(s)
        where = f"step {n} ({st.rule_id})"
        if not s.verdict:
            rep.violations.append(f"{where}: order fails: {s.pint_before!r} vs {s.pint_after!r}")
        if not s.in_tg_nrm:
            rep.violations.append(f"{where}: result outside TG_nrm")
        if s.max_safe_normal_union > N0:
            rep.violations.append(f"{where}: safe-path node normal part {s.max_safe_normal_union} > {N0}")
        if s.size_lemma_lhs > s.size_lemma_rhs:
            rep.violations.append(f"{where}: size lemma {s.size_lemma_lhs} > {s.size_lemma_rhs}")
        if s.normal_union_after > prev_nu:
            rep.root_monotone = False
        prev_nu = s.normal_union_after
    if red.normal:
        if rep.m > bound:
            rep.violations.append(f"step count {rep.m} > bound {bound}")
        if rep.final_size > rep.size_bound_derived:
            rep.violations.append(f"final size {rep.final_size} > {rep.size_bound_derived}")
    else:
        rep.violations.append(f"no normal form within {step_limit} steps")
    return rep


def check_program_trace(cp, normals, safes=(), prec: Optional[Precedence] = None,
                        **kw) -> TraceReport:
    """:func:`check_trace` for a compiled program's main function, by
    default under the compiler's precedence."""
    g0 = basic_graph(cp.main, list(normals), list(safes))
    return check_trace(cp.provider, prec or cp.precedence, cp.d, g0, **kw)


def naive_failure_witness(report: TraceReport) -> Optional[StepReport]:
    for s in report.steps:
        if not s.verdict:
            return s
    return None


__all__ = ["Violation", "CheckReport", "classify_finite_rule", "check_safe_recursive_grs",
           "gt_pt", "gt_pt_graphs", "check_ptas", "StepReport", "TraceReport",
           "check_embedding_step", "check_trace", "check_program_trace",
           "normalized_precedence", "safe_path_nodes", "family_rules", "naive_failure_witness"]
