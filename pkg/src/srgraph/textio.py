"""Plain-text formats for graphs and rules, and DOT export.

Graph format::

    constructors 0 s
    root 3
    3 : f ( 1 ; 2 )
    1 : s ( ; 0 )
    0 : 0
    2 : _

A node line names the symbol, its normal successors before ``;`` and its
safe successors after it. Symbols listed on the ``constructors`` line are
constructors, all others defined. Rules use ``rule L R`` in place of
``root``.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Optional

from .graph import LabeledGraph, TermGraph
from .rules import RewriteRule
from .terms import Kind, ParseError, Symbol


def _node_line(g: LabeledGraph, v) -> str:
    lab = g.labels.get(v)
    if lab is None:
        return f"{v} : _"
    if lab.arity == 0:
        return f"{v} : {lab.name}"
    kids = g.succ[v]
    nrm = " ".join(map(str, kids[:lab.normal_count]))
    safe = " ".join(map(str, kids[lab.normal_count:]))
    return f"{v} : {lab.name} ( {nrm} ; {safe} )".replace("(  ;", "( ;").replace(";  )", "; )")


def _order(g: LabeledGraph, roots) -> list:
    seen, out = set(), []
    for r in roots:
        stack = [r]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            out.append(u)
            stack.extend(reversed(g.succ[u]))
    out.extend(sorted(set(g.nodes) - seen))
    return out


def _constructor_line(g: LabeledGraph) -> Optional[str]:
    names = sorted({s.name for s in g.labels.values() if s.is_constructor})
    return "constructors " + " ".join(names) if names else None


def format_graph(g: TermGraph) -> str:
    lines = []
    head = _constructor_line(g)
    if head:
        lines.append(head)
    lines.append(f"root {g.root}")
    lines.extend(_node_line(g, v) for v in _order(g, [g.root]))
    return "\n".join(lines) + "\n"


def format_rule(rule: RewriteRule) -> str:
    g = rule.graph
    lines = []
    if rule.name:
        lines.append(f"# {rule.name}")
    head = _constructor_line(g)
    if head:
        lines.append(head)
    lines.append(f"rule {rule.left} {rule.right}")
    lines.extend(_node_line(g, v) for v in _order(g, [rule.left, rule.right]))
    return "\n".join(lines) + "\n"


_LINE = re.compile(r"^(\d+)\s*:\s*(\S+)\s*(?:\((.*)\))?\s*$")


def _parse_body(lines: Iterable[str], signature: Optional[Mapping[str, Symbol]] = None):
    constructors: set = set()
    header = None
    labels, succ = {}, {}
    sig = dict(signature or {})
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("constructors"):
            constructors.update(line.split()[1:])
            continue
        if line.startswith(("root ", "rule ")):
            if header is not None:
                raise ParseError(f"line {lineno}: second header")
            parts = line.split()
            header = (parts[0], [int(p) for p in parts[1:]])
            continue
        m = _LINE.match(line)
        if m is None:
            raise ParseError(f"line {lineno}, column 1: cannot parse {raw!r}")
        v, name, args = int(m.group(1)), m.group(2), m.group(3)
        if v in succ:
            raise ParseError(f"line {lineno}: node {v} defined twice")
        if name == "_":
            if args:
                raise ParseError(f"line {lineno}: variable with successors")
            succ[v] = ()
            continue
        args = args or ""
        if ";" in args:
            a, b = args.split(";", 1)
        else:
            a, b = "", args
        nrm = [int(t) for t in a.split()]
        safe = [int(t) for t in b.split()]
        kind = Kind.CONSTRUCTOR if name in constructors else Kind.DEFINED
        sym = Symbol(name, len(nrm) + len(safe), len(nrm), kind)
        old = sig.setdefault(name, sym)
        if old != sym:
            raise ParseError(f"line {lineno}: {name} used as {sym!r} and {old!r}")
        labels[v] = sym
        succ[v] = tuple(nrm + safe)
    if header is None:
        raise ParseError("missing 'root' or 'rule' header")
    return header, labels, succ


def parse_graph(text: str, signature: Optional[Mapping[str, Symbol]] = None) -> TermGraph:
    (kind, ids), labels, succ = _parse_body(text.splitlines(), signature)
    if kind != "root" or len(ids) != 1:
        raise ParseError("expected 'root <id>'")
    return TermGraph(labels, succ, ids[0])


def parse_rule(text: str, signature: Optional[Mapping[str, Symbol]] = None,
               name: str = "") -> RewriteRule:
    (kind, ids), labels, succ = _parse_body(text.splitlines(), signature)
    if kind != "rule" or len(ids) != 2:
        raise ParseError("expected 'rule <left> <right>'")
    if not name:
        for raw in text.splitlines():
            if raw.strip().startswith("#"):
                name = raw.strip()[1:].strip()
                break
    return RewriteRule(LabeledGraph(labels, succ), ids[0], ids[1], name=name)


def to_dot(g: LabeledGraph, roots: Iterable = (), name: str = "G") -> str:
    """DOT text: normal edges solid, safe edges dashed, labeled by position."""
    roots = list(roots) or ([g.root] if isinstance(g, TermGraph) else [])
    out = [f"digraph {name} {{", "  node [shape=circle, fontsize=10];"]
    for v in _order(g, roots):
        lab = g.labels.get(v)
        text = lab.name if lab else "_"
        shape = "doublecircle" if v in roots else ("box" if lab and lab.is_constructor else "circle")
        out.append(f'  n{v} [label="{text}", shape={shape}, xlabel="{v}"];')
    for v in _order(g, roots):
        lab = g.labels.get(v)
        for j, w in enumerate(g.succ[v]):
            style = "solid" if lab and lab.is_normal_position(j) else "dashed"
            out.append(f'  n{v} -> n{w} [label="{j + 1}", style={style}];')
    out.append("}")
    return "\n".join(out) + "\n"
