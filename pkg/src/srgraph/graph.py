"""Term graphs with argument separation.

A labeled graph maps node ids to an optional :class:`Symbol` and an ordered
successor tuple. Unlabeled nodes have no successors and act as variables.
Graph values are immutable; rewriting builds new ones.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping, Optional

from .terms import Kind, Symbol, Term, Variable, var

NodeId = int
Path = tuple  # (v1, m1, v2, ..., vk) with 1-based positions m_j


class LabeledGraph:
    """Acyclic labeled graph without a distinguished root."""

    __slots__ = ("labels", "succ", "next_id", "_reach")

    def __init__(self, labels: Mapping[NodeId, Symbol],
                 succ: Mapping[NodeId, tuple], next_id: Optional[int] = None):
        self.labels = dict(labels)
        self.succ = {v: tuple(s) for v, s in succ.items()}
        for v in self.labels:
            self.succ.setdefault(v, ())
        if next_id is None:
            next_id = max(self.succ, default=-1) + 1
        self.next_id = next_id
        self._reach: dict = {}

    @property
    def nodes(self):
        return self.succ.keys()

    def __len__(self):
        return len(self.succ)

    def __contains__(self, v):
        return v in self.succ

    def label(self, v: NodeId) -> Optional[Symbol]:
        return self.labels.get(v)

    def is_labeled(self, v: NodeId) -> bool:
        return v in self.labels

    def nrm(self, v: NodeId) -> tuple:
        lab = self.labels.get(v)
        return self.succ[v][:lab.normal_count] if lab else ()

    def safe(self, v: NodeId) -> tuple:
        lab = self.labels.get(v)
        return self.succ[v][lab.normal_count:] if lab else ()

    def edges(self) -> set:
        return {(u, w) for u, ws in self.succ.items() for w in ws}

    def reachable(self, v: NodeId) -> frozenset:
        """Node set of the sub-term graph rooted at ``v``."""
        r = self._reach.get(v)
        if r is None:
            if v not in self.succ:
                raise KeyError(f"unknown node {v}")
            seen = {v}
            stack = [v]
            while stack:
                u = stack.pop()
                for w in self.succ[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            r = self._reach[v] = frozenset(seen)
        return r

    def union_reachable(self, roots: Iterable[NodeId]) -> set:
        out: set = set()
        for v in roots:
            out |= self.reachable(v)
        return out

    def topological(self, roots: Iterable[NodeId] = None) -> list:
        """Nodes in an order where every node precedes its successors."""
        roots = list(self.succ) if roots is None else list(roots)
        order, state = [], {}
        for r in roots:
            if r in state:
                continue
            stack = [(r, iter(self.succ[r]))]
            state[r] = 1
            while stack:
                u, it = stack[-1]
                for w in it:
                    if w not in state:
                        state[w] = 1
                        stack.append((w, iter(self.succ[w])))
                        break
                    if state[w] == 1:
                        raise ValueError(f"cycle through node {w}")
                else:
                    stack.pop()
                    state[u] = 2
                    order.append(u)
        order.reverse()
        return order

    def restrict(self, keep: Iterable[NodeId]) -> dict:
        keep = set(keep)
        return {v: self.succ[v] for v in keep}


class TermGraph(LabeledGraph):
    """A rooted labeled graph in which every node is reachable from the root."""

    __slots__ = ("root",)

    def __init__(self, labels, succ, root: NodeId, next_id=None):
        super().__init__(labels, succ, next_id)
        self.root = root
        if root not in self.succ:
            raise ValueError(f"root {root} is not a node")

    @property
    def size(self) -> int:
        return len(self.succ)

    def is_closed(self) -> bool:
        return len(self.labels) == len(self.succ)

    def __repr__(self):
        return f"TermGraph({term_of(self)!r}, nodes={len(self)})"


# --- construction ------------------------------------------------------------

class GraphBuilder:
    """Incremental builder; ``share=True`` hash-conses identical sub-terms."""

    def __init__(self, start: int = 0):
        self.labels: dict = {}
        self.succ: dict = {}
        self._ids = itertools.count(start)
        self._pool: dict = {}

    def node(self, symbol: Symbol, children=()) -> NodeId:
        children = tuple(children)
        if len(children) != symbol.arity:
            raise ValueError(f"{symbol.name} expects {symbol.arity} successors")
        v = next(self._ids)
        self.labels[v] = symbol
        self.succ[v] = children
        return v

    def var(self) -> NodeId:
        v = next(self._ids)
        self.succ[v] = ()
        return v

    def term(self, t: Term, share: bool = True, pool: Optional[dict] = None) -> NodeId:
        """Add the graph of ``t``; variables with the same name are shared."""
        pool = self._pool if pool is None else pool
        if not share:
            return self._tree(t, pool)
        for u in t._postorder():
            if u in pool:
                continue
            if u.is_var:
                pool[u] = self.var()
            else:
                pool[u] = self.node(u.head, [pool[a] for a in u.args])
        return pool[t]

    def _tree(self, t: Term, pool: dict) -> NodeId:
        if t.is_var:
            if t not in pool:
                pool[t] = self.var()
            return pool[t]
        return self.node(t.head, [self._tree(a, pool) for a in t.args])

    def build(self, root: NodeId) -> TermGraph:
        keep = _reach_from(self.succ, root)
        return TermGraph({v: s for v, s in self.labels.items() if v in keep},
                         {v: self.succ[v] for v in keep}, root,
                         next_id=max(self.succ, default=-1) + 1)


def _reach_from(succ: Mapping, root) -> set:
    seen = {root}
    stack = [root]
    while stack:
        for w in succ[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def graph_of_term(t: Term, share: bool = True) -> TermGraph:
    b = GraphBuilder()
    return b.build(b.term(t, share=share))


def basic_graph(f: Symbol, normals: Iterable[Term], safes: Iterable[Term],
                share: bool = True) -> TermGraph:
    """The graph of ``f(normals; safes)``.

    Normal and safe arguments are shared only among themselves, so a
    sub-term occurring in both gets two copies and the separation dichotomy
    holds.
    """
    normals, safes = list(normals), list(safes)
    if len(normals) != f.normal_count or len(safes) != f.safe_count:
        raise ValueError(f"{f.name} takes {f.normal_count} normal and "
                         f"{f.safe_count} safe arguments")
    b = GraphBuilder()
    npool: dict = {}
    spool: dict = {}
    kids = [b.term(t, share, npool) for t in normals]
    kids += [b.term(t, share, spool) for t in safes]
    return b.build(b.node(f, kids))


# --- queries ----------------------------------------------------------------

def validate(g: LabeledGraph) -> list:
    """All invariant violations of ``g``, as ``"<clause> at <node>"`` strings."""
    out = []
    for v, kids in g.succ.items():
        lab = g.labels.get(v)
        for w in kids:
            if w not in g.succ:
                out.append(f"dangling-successor at {v}")
        if lab is None:
            if kids:
                out.append(f"unlabeled-with-successors at {v}")
            continue
        if len(kids) != lab.arity:
            out.append(f"arity-mismatch at {v}")
    seen: dict = {}
    for v, lab in sorted(g.labels.items()):
        other = seen.setdefault(lab.name, lab)
        if other != lab:
            out.append(f"inconsistent-symbol {lab.name} at {v}")
    if not any(o.startswith("dangling") for o in out):
        try:
            g.topological()
        except ValueError as e:
            out.append(f"cyclic: {e}")
    if isinstance(g, TermGraph) and not any(o.startswith(("dangling", "cyclic")) for o in out):
        for v in sorted(set(g.succ) - g.reachable(g.root)):
            out.append(f"unreachable at {v}")
    return out


def check_separation_dichotomy(g: LabeledGraph) -> bool:
    """Every node is entered only through normal, or only through safe
    positions, along paths that leave a defined symbol and then pass
    through constructors only."""
    return not separation_conflicts(g)


def separation_conflicts(g: LabeledGraph) -> list:
    entry: dict = {}
    for v0, lab in g.labels.items():
        if lab.is_constructor:
            continue
        for j, v1 in enumerate(g.succ[v0]):
            kind = lab.is_normal_position(j)
            seen = {v1}
            stack = [v1]
            while stack:
                u = stack.pop()
                entry.setdefault(u, set()).add(kind)
                ulab = g.labels.get(u)
                if ulab is not None and ulab.is_constructor:
                    for w in g.succ[u]:
                        if w not in seen:
                            seen.add(w)
                            stack.append(w)
    return sorted(v for v, kinds in entry.items() if len(kinds) > 1)


def subgraph(g: LabeledGraph, v: NodeId) -> TermGraph:
    keep = g.reachable(v)
    return TermGraph({u: s for u, s in g.labels.items() if u in keep},
                     {u: g.succ[u] for u in keep}, v, next_id=g.next_id)


def term_of(g: LabeledGraph, v: Optional[NodeId] = None) -> Term:
    """Unravel ``g`` (from ``v`` or the root) into a term.

    Unlabeled nodes become variables named ``_<id>``. The result is
    hash-consed, so exponential unravellings stay cheap to hold.
    """
    if v is None:
        v = g.root
    memo: dict = {}
    for u in reversed(g.topological([v])):
        lab = g.labels.get(u)
        if lab is None:
            memo[u] = var(f"_{u}")
        else:
            memo[u] = Term.make(lab, [memo[w] for w in g.succ[u]])
    return memo[v]


def term_size(g: LabeledGraph, v: Optional[NodeId] = None) -> int:
    """Size of ``term_of(g, v)`` computed on the graph, without unravelling."""
    if v is None:
        v = g.root
    size: dict = {}
    for u in reversed(g.topological([v])):
        size[u] = 1 + sum(size[w] for w in g.succ[u])
    return size[v]


def is_constructor_graph(g: LabeledGraph, v: Optional[NodeId] = None) -> bool:
    """Membership in TG(C): closed and labeled by constructors only."""
    if v is None:
        v = g.root
    for u in g.reachable(v):
        lab = g.labels.get(u)
        if lab is None or not lab.is_constructor:
            return False
    return True


def is_basic(g: TermGraph) -> bool:
    lab = g.labels.get(g.root)
    if lab is None or lab.is_constructor:
        return False
    return all(is_constructor_graph(g, w) for w in g.succ[g.root])


def in_tg_nrm(g: LabeledGraph, v: Optional[NodeId] = None) -> bool:
    """Normal-argument subgraphs are constructor graphs, recursively
    through safe arguments."""
    if v is None:
        v = g.root
    memo: dict = {}
    for u in reversed(g.topological([v])):
        if is_constructor_graph(g, u):
            memo[u] = True
            continue
        if u not in g.labels:
            memo[u] = False
            continue
        memo[u] = (all(is_constructor_graph(g, w) for w in g.nrm(u))
                   and all(memo[w] for w in g.safe(u)))
    return memo[v]


def safe_paths_to(g: TermGraph, v: NodeId) -> list:
    """All paths from the root to ``v`` stepping through safe positions only.

    Paths alternate nodes and 1-based positions; the root alone is ``(root,)``.
    """
    out = []

    def walk(u, path):
        if u == v:
            out.append(path)
            return
        lab = g.labels.get(u)
        if lab is None:
            return
        for j in range(lab.normal_count, lab.arity):
            w = g.succ[u][j]
            if v in g.reachable(w):
                walk(w, path + (j + 1, w))

    if v not in g.succ:
        raise KeyError(f"unknown node {v}")
    walk(g.root, (g.root,))
    return out


def lies_on_safe_path(g: TermGraph, v: NodeId) -> bool:
    return bool(safe_paths_to(g, v))


def all_paths(g: LabeledGraph, src: NodeId, dst: NodeId) -> list:
    """Every path from ``src`` to ``dst`` (brute force)."""
    out = []

    def walk(u, path):
        if u == dst:
            out.append(path)
        for j, w in enumerate(g.succ[u]):
            walk(w, path + (j + 1, w))

    walk(src, (src,))
    return out


def is_safe_path(g: LabeledGraph, path: Path) -> bool:
    for i in range(0, len(path) - 2, 2):
        u, m, w = path[i], path[i + 1], path[i + 2]
        lab = g.labels.get(u)
        if lab is None or g.succ[u][m - 1] != w or lab.is_normal_position(m - 1):
            return False
    return True


def isomorphic(g: TermGraph, h: TermGraph) -> bool:
    """Rooted isomorphism by parallel traversal from the roots."""
    if len(g) != len(h):
        return False
    fwd: dict = {g.root: h.root}
    back: dict = {h.root: g.root}
    stack = [g.root]
    while stack:
        u = stack.pop()
        w = fwd[u]
        if g.labels.get(u) != h.labels.get(w) or len(g.succ[u]) != len(h.succ[w]):
            return False
        for a, b in zip(g.succ[u], h.succ[w]):
            if a in fwd:
                if fwd[a] != b:
                    return False
                continue
            if b in back:
                return False
            fwd[a] = b
            back[b] = a
            stack.append(a)
    return len(fwd) == len(g)


def normal_union_size(g: LabeledGraph, v: Optional[NodeId] = None) -> int:
    """``|⋃_{u ∈ nrm(v)} V_{G↾u}|`` for ``v`` (default: the root)."""
    if v is None:
        v = g.root
    return len(g.union_reachable(g.nrm(v)))


def safe_part_size(g: TermGraph) -> int:
    """``|V_G \\ ⋃_{u ∈ nrm(root)} V_{G↾u}|``."""
    return len(g) - normal_union_size(g)


def canonical_key(g: LabeledGraph, v: NodeId) -> tuple:
    """Key equal for two rooted sub-graphs iff they are isomorphic."""
    index: dict = {}
    rows = []
    stack = [v]
    order = []
    while stack:
        u = stack.pop()
        if u in index:
            continue
        index[u] = len(order)
        order.append(u)
        stack.extend(reversed(g.succ[u]))
    for u in order:
        lab = g.labels.get(u)
        rows.append((lab, tuple(index[w] for w in g.succ[u])))
    return tuple(rows)


def max_arity(symbols: Iterable[Symbol]) -> int:
    return max((s.arity for s in symbols), default=0)


def relabel(g: TermGraph, start: int = 0) -> TermGraph:
    """Copy of ``g`` with node ids renumbered in DFS order from ``start``."""
    order = []
    seen = set()
    stack = [g.root]
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        order.append(u)
        stack.extend(reversed(g.succ[u]))
    m = {u: start + i for i, u in enumerate(order)}
    return TermGraph({m[u]: s for u, s in g.labels.items()},
                     {m[u]: tuple(m[w] for w in g.succ[u]) for u in order},
                     m[g.root])


def iter_nodes_dfs(g: TermGraph) -> Iterator[NodeId]:
    seen = set()
    stack = [g.root]
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        yield u
        stack.extend(reversed(g.succ[u]))


__all__ = [
    "Kind", "Symbol", "Variable", "NodeId", "Path", "LabeledGraph", "TermGraph",
    "GraphBuilder", "graph_of_term", "basic_graph", "validate",
    "check_separation_dichotomy", "separation_conflicts", "subgraph", "term_of",
    "term_size", "is_constructor_graph", "is_basic", "in_tg_nrm",
    "safe_paths_to", "lies_on_safe_path", "all_paths", "is_safe_path",
    "isomorphic", "normal_union_size", "safe_part_size", "canonical_key",
    "relabel",
]
