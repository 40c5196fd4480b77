"""Infinite families of (safe recursive) unfolding graph rewrite rules.

A family is given by a recursive symbol ``f``, a bijection ``theta`` from
recursion constructors to step symbols, and the separation of the extra
arguments of ``f``. Concrete rules are generated on demand from the
skeleton found in the recursion argument of a redex.

Rule graph layout (node ids): ``y`` is 0, the skeleton copy ``v1..vm``
follows in DFS order, then the extra argument nodes ``x1..xk``, then the
step nodes ``w``.
"""

from __future__ import annotations

import itertools
import re
import threading
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional

from .graph import (GraphBuilder, LabeledGraph, NodeId, TermGraph, canonical_key,
                    iter_nodes_dfs, subgraph)
from .rules import RewriteRule
from .terms import Symbol


class UnfoldingError(ValueError):
    pass


@dataclass(eq=False)
class UnfoldingSpec:
    f: Symbol
    theta: Mapping[Symbol, Symbol]
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        self.theta = dict(self.theta)
        f = self.f
        if f.arity < 1:
            raise UnfoldingError(f"{f.name} needs a recursion argument")
        sigma = set(self.theta)
        images = list(self.theta.values())
        if len(set(images)) != len(images):
            raise UnfoldingError("theta is not injective")
        if sigma & set(images):
            raise UnfoldingError("recursion constructors and step symbols overlap")
        if f in sigma or f in images:
            raise UnfoldingError(f"{f.name} must be fresh")
        k = self.k_extra
        for c, h in self.theta.items():
            if not c.is_constructor:
                raise UnfoldingError(f"{c.name} is not a constructor")
            if h.arity != 2 * c.arity + k:
                raise UnfoldingError(f"arity of {h.name} must be 2*{c.arity}+{k}")

    @property
    def sigma(self) -> frozenset:
        return frozenset(self.theta)

    @property
    def k_extra(self) -> int:
        return self.f.arity - 1

    @property
    def normal_extras(self) -> int:
        return max(self.f.normal_count - 1, 0)

    @property
    def safe_extras(self) -> int:
        return self.f.safe_count if self.f.normal_count else self.f.arity - 1

    def separation_problems(self) -> list:
        """Separation clauses of the safe recursive constraints that fail."""
        out = []
        if self.f.normal_count < 1:
            out.append("no-normal-recursion")
        for c, h in self.theta.items():
            if h.normal_count < c.arity or h.safe_count < c.arity:
                out.append(f"step-separation ({h.name})")
            elif h.normal_count - c.arity != self.normal_extras:
                out.append(f"extra-normals ({h.name})")
        return out

    def is_safe_recursive(self) -> bool:
        return not self.separation_problems()

    def theta_by_name(self) -> dict:
        return {c.name: h for c, h in self.theta.items()}

    def __repr__(self):
        return format_spec(self)


def format_spec(spec: UnfoldingSpec) -> str:
    pairs = ", ".join(f"{c.name}->{h.name}" for c, h in spec.theta.items())
    return f"unfold {spec.f.name} ({spec.normal_extras}; {spec.safe_extras}) over {{{pairs}}}"


_SPEC_RE = re.compile(r"\s*unfold\s+(\S+)\s*\(\s*(\d+)\s*;\s*(\d+)\s*\)\s*over\s*\{(.*)\}\s*$")


def parse_spec(text: str, signature: Mapping[str, Symbol]) -> UnfoldingSpec:
    """Parse ``unfold f (1; 0) over {0->e, s->h1}``.

    Step symbols and constructors come from ``signature``; ``f`` is taken
    from the signature when present, otherwise built from the counts.
    """
    m = _SPEC_RE.match(text)
    if m is None:
        raise UnfoldingError(f"bad unfolding spec: {text!r}")
    fname, nx, sx = m.group(1), int(m.group(2)), int(m.group(3))
    theta = {}
    for part in filter(None, (p.strip() for p in m.group(4).split(","))):
        c, _, h = part.partition("->")
        c, h = c.strip(), h.strip()
        if c not in signature or h not in signature:
            raise UnfoldingError(f"unknown symbol in {part!r}")
        theta[signature[c]] = signature[h]
    f = signature.get(fname) or Symbol(fname, 1 + nx + sx, 1 + nx)
    if f.arity != 1 + nx + sx or f.normal_count != 1 + nx:
        raise UnfoldingError(f"declared separation of {fname} disagrees with {f!r}")
    return UnfoldingSpec(f, theta)


# --- generation --------------------------------------------------------------

def generate_rule(spec: UnfoldingSpec, skeleton: TermGraph) -> RewriteRule:
    """The unfolding rule of ``spec`` whose left side carries ``skeleton``."""
    for v in skeleton.nodes:
        lab = skeleton.labels.get(v)
        if lab is None or lab not in spec.theta:
            raise UnfoldingError(f"skeleton node {v} is not labeled by a recursion constructor")
    order = list(iter_nodes_dfs(skeleton))
    b = GraphBuilder()
    y = next(b._ids)
    vmap = {u: next(b._ids) for u in order}
    xs = [b.var() for _ in range(spec.k_extra)]
    for u in order:
        b.labels[vmap[u]] = skeleton.labels[u]
        b.succ[vmap[u]] = tuple(vmap[c] for c in skeleton.succ[u])
    b.labels[y] = spec.f
    b.succ[y] = (vmap[skeleton.root],) + tuple(xs)
    wmap: dict = {}
    for u in reversed(skeleton.topological([skeleton.root])):
        kids = skeleton.succ[u]
        wmap[u] = b.node(spec.theta[skeleton.labels[u]],
                         [vmap[c] for c in kids] + xs + [wmap[c] for c in kids])
    graph = LabeledGraph(b.labels, b.succ)
    return RewriteRule(graph, y, wmap[skeleton.root],
                       name=f"{spec.f.name}[{_skeleton_name(skeleton)}]")


def _skeleton_name(g: TermGraph) -> str:
    from .graph import term_of
    return repr(term_of(g))


def rule_for_redex(spec: UnfoldingSpec, subject: LabeledGraph, v: NodeId) -> Optional[RewriteRule]:
    """The family member matching at ``v``, or ``None``.

    Applies when ``v`` is labeled by the family symbol and its first
    argument is a closed graph over the recursion constructors.
    """
    if subject.labels.get(v) != spec.f:
        return None
    u = subject.succ[v][0]
    for w in subject.reachable(u):
        if subject.labels.get(w) not in spec.theta:
            return None
    key = canonical_key(subject, u)
    with spec._lock:
        rule = spec._cache.get(key)
    if rule is None:
        rule = generate_rule(spec, subgraph(subject, u))
        with spec._lock:
            rule = spec._cache.setdefault(key, rule)
    return rule


def skeletons(sigma, max_size: int, limit: Optional[int] = None) -> Iterator[TermGraph]:
    """All closed graphs over the constructors ``sigma`` with at most
    ``max_size`` nodes, one per isomorphism class, smallest first."""
    sigma = sorted(sigma, key=lambda c: (c.arity, c.name))
    seen: set = set()
    count = 0

    def grow(labels, succ, n):
        # nodes 0..n-1; successors always point to smaller ids
        if n:
            root = n - 1
            g = TermGraph(labels, succ, root)
            if len(g.reachable(root)) == n:
                key = canonical_key(g, root)
                if key not in seen:
                    seen.add(key)
                    yield g
        if n == max_size:
            return
        for c in sigma:
            if c.arity and n == 0:
                continue
            for kids in itertools.product(range(n), repeat=c.arity):
                labels[n] = c
                succ[n] = kids
                yield from grow(labels, succ, n + 1)
                del labels[n], succ[n]

    by_size: dict = {}
    for g in grow({}, {}, 0):
        by_size.setdefault(len(g), []).append(g)
    for size in sorted(by_size):
        for g in by_size[size]:
            yield g
            count += 1
            if limit is not None and count >= limit:
                return


# --- verification -----------------------------------------------------------

def verify_unfolding(rule: RewriteRule, spec: UnfoldingSpec, safe: bool = True) -> list:
    """Names of the unfolding and safe recursion conditions ``rule`` violates."""
    g = rule.graph
    out: list = []
    y, r = rule.left, rule.right
    k = spec.k_extra
    ylab = g.labels.get(y)
    if ylab is None or ylab.name != spec.f.name or ylab.arity != 1 + k:
        out.append("left-root")
        return out
    ysucc = g.succ[y]
    v1, xs = ysucc[0], ysucc[1:]
    if any(x in g.labels for x in xs):
        out.append("extra-args")
    if len(set(xs)) != len(xs) or v1 in xs:
        out.append("left-root")
    vset = g.reachable(v1)
    theta = spec.theta_by_name()
    if any(g.labels.get(v) is None or g.labels[v].name not in theta
           or not g.labels[v].is_constructor for v in vset):
        out.append("skeleton")
        return sorted(set(out))
    # pair step nodes with skeleton nodes by walking from (v1, r)
    corr: dict = {r: v1}
    back: dict = {v1: r}
    stack = [r]
    visited = {r}
    bad7 = bad6 = False
    while stack:
        w = stack.pop()
        v = corr[w]
        wlab = g.labels.get(w)
        vkids = g.succ[v]
        n = len(vkids)
        if wlab is None or wlab.name != theta[g.labels[v].name].name:
            bad6 = True
            continue
        att = g.succ[w]
        if len(att) != 2 * n + k or att[:n] != vkids or tuple(att[n:n + k]) != tuple(xs):
            bad7 = True
            continue
        for wc, vc in zip(att[n + k:], vkids):
            if corr.setdefault(wc, vc) != vc or back.setdefault(vc, wc) != wc:
                bad7 = True
            elif wc not in visited:
                visited.add(wc)
                stack.append(wc)
    if bad6:
        out.append("step-label")
    if bad7:
        out.append("step-wiring")
    if set(back) != set(vset):
        out.append("step-wiring")
    wset = set(corr)
    expected = {y} | set(vset) | set(xs) | wset
    if set(g.nodes) != expected or len(g) != 1 + 2 * len(vset) + k:
        out.append("node-set")
    if safe and not out:
        if ylab.normal_count < 1:
            out.append("no-normal-recursion")
        nx = ylab.normal_count - 1
        for w, v in corr.items():
            wlab = g.labels[w]
            n = len(g.succ[v])
            if wlab.normal_count < n or wlab.arity - wlab.normal_count < n:
                out.append("step-separation")
            elif wlab.normal_count - n != nx:
                out.append("extra-normals")
    return sorted(set(out))


def check_corollary_normal_structure(rule: RewriteRule) -> bool:
    """Every normal successor of a step node is a skeleton node or a normal
    extra argument of the left root."""
    g = rule.graph
    y = rule.left
    v1 = g.succ[y][0]
    skel = g.reachable(v1)
    ynrm = set(g.nrm(y))
    for w in rule.right_nodes() - rule.left_nodes():
        for u in g.nrm(w):
            if u in g.labels:
                if u not in skel:
                    return False
            elif u not in ynrm:
                return False
    return True
