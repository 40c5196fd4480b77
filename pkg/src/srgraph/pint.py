"""The unlabeled-graph interpretation π◦ and the predicative
interpretation PINT of term graphs into flat sequences of terms."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graph import (NodeId, TermGraph, is_constructor_graph, normal_union_size,
                    safe_paths_to, term_of)
from .terms import Seq, Term


@dataclass(frozen=True)
class UnlabeledGraph:
    nodes: frozenset
    edges: frozenset
    root: NodeId

    def successors(self, v: NodeId) -> set:
        return {w for u, w in self.edges if u == v}


def _safe_in_edges(g: TermGraph) -> tuple:
    """Topological order of nodes below the root, and the safe edges into each
    node as ``(parent, 1-based position)`` pairs."""
    order = g.topological([g.root])
    into: dict = {v: [] for v in order}
    for u in order:
        lab = g.labels.get(u)
        if lab is None:
            continue
        for j in range(lab.normal_count, lab.arity):
            into[g.succ[u][j]].append((u, j + 1))
    return order, into


def safe_path_counts(g: TermGraph) -> dict:
    order, into = _safe_in_edges(g)
    count = {g.root: 1}
    for v in order:
        if v != g.root:
            count[v] = sum(count[u] for u, _ in into[v])
    return count


def leftmost_safe_paths(g: TermGraph) -> dict:
    """Per node, the position sequence of its lexicographically least safe
    path, together with the last edge's parent (``None`` for the root)."""
    order, into = _safe_in_edges(g)
    best: dict = {g.root: ((), None)}
    for v in order:
        if v == g.root:
            continue
        for u, j in into[v]:
            if u in best:
                cand = best[u][0] + (j,)
                if v not in best or cand < best[v][0]:
                    best[v] = (cand, u)
    return best


def pj(g: TermGraph, method: str = "dp") -> UnlabeledGraph:
    """π◦(G).

    ``method="enumerate"`` follows the definition literally, quantifying
    over every pair of safe paths. ``method="dp"`` keeps, for nodes with
    several safe paths, only the last edge of the lexicographically least
    one: any path that beats another at a shared node can be spliced into
    a lexicographically smaller path, so the two agree.
    """
    edges = g.edges()
    if method == "enumerate":
        kept = {e for e in edges if _keep_verbatim(g, *e)}
    elif method == "dp":
        counts = safe_path_counts(g)
        best = leftmost_safe_paths(g)
        kept = set()
        for u, v in edges:
            if counts.get(v, 0) <= 1 or best[v][1] == u:
                kept.add((u, v))
    else:
        raise ValueError(f"unknown method {method!r}")
    return UnlabeledGraph(frozenset(g.nodes), frozenset(kept), g.root)


def _keep_verbatim(g: TermGraph, u: NodeId, v: NodeId) -> bool:
    paths = safe_paths_to(g, v)
    if len(paths) <= 1:
        return True
    for p in paths:
        if len(p) < 3 or p[-3] != u:
            continue
        if all(_leftmost_against(p, q) for q in paths if q != p):
            return True
    return False


def _leftmost_against(p: tuple, q: tuple) -> bool:
    exits_q: dict = {}
    for j in range(0, len(q) - 1, 2):
        exits_q.setdefault(q[j], []).append(q[j + 1])
    for i in range(0, len(p) - 1, 2):
        for n in exits_q.get(p[i], ()):
            m = p[i + 1]
            if m != n and not m < n:
                return False
    return True


def pint(g: TermGraph, naive: bool = False, interp: Optional[UnlabeledGraph] = None,
         v: Optional[NodeId] = None) -> Seq:
    """PINT(G), or PINT(G↾v) read against π◦(G) when ``v`` is given.

    With ``naive`` every safe successor is followed, repeated ones included.
    """
    if v is None:
        v = g.root
    kept = None
    if not naive:
        kept = (interp or pj(g)).edges
    memo: dict = {}
    terms: dict = {}

    def arg_term(u):
        t = terms.get(u)
        if t is None:
            t = terms[u] = term_of(g, u)
        return t

    for u in reversed(g.topological([v])):
        if is_constructor_graph(g, u):
            memo[u] = ()
            continue
        lab = g.labels.get(u)
        if lab is None:
            raise ValueError(f"PINT needs a closed graph; node {u} is a variable")
        head = Term.make(lab.normalized(), [arg_term(w) for w in g.nrm(u)])
        out = [head]
        seen: set = set()
        for w in g.safe(u):
            if naive:
                out.extend(memo[w])
            elif (u, w) in kept and w not in seen:
                seen.add(w)
                out.extend(memo[w])
        memo[u] = tuple(out)
    return Seq(memo[v])


def ell_for(g0: TermGraph, d: int) -> int:
    """``2 * normal_union_size(g0) + d``."""
    return 2 * normal_union_size(g0) + d


def safe_successor_blocks(g: TermGraph, interp: Optional[UnlabeledGraph] = None) -> list:
    """Node sets of the kept safe successors of the root under π◦; these
    are expected to be pairwise disjoint."""
    interp = interp or pj(g)
    kept = interp.edges
    adj: dict = {}
    for a, b in kept:
        adj.setdefault(a, set()).add(b)
    out = []
    seen_roots = set()
    for w in g.safe(g.root):
        if (g.root, w) not in kept or w in seen_roots:
            continue
        seen_roots.add(w)
        block = {w}
        stack = [w]
        while stack:
            x = stack.pop()
            lab = g.labels.get(x)
            if lab is None:
                continue
            for y in g.safe(x):
                if (x, y) in kept and y not in block:
                    block.add(y)
                    stack.append(y)
        out.append(block)
    return out
