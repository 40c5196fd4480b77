"""General safe recursive function definitions, a compiler into
constructor graph rewrite systems, and a direct lazy interpreter.

Program text::

    constructors eps/0 0/0 c/2 s/1
    def id(; z) = proj z
    def g(x; z) = gen_rec { eps -> id, c -> h0 }
    def e(x;) = const eps
    def h1(x, y; z) = comp g(y; k3)
    def p(; x) = pred s 1
    def sel(; x, a, b, c, d) = cond
    def pair(; a, b) = ctor c
    main f

Bodies: ``const C``, ``ctor C``, ``proj NAME|INDEX``, ``pred C J``,
``cond``, ``comp H(NORMALS; G1, ..., Gn)`` and ``gen_rec { C -> H, ... }``.
Definitions may refer only to constructors and earlier definitions.
"""

from __future__ import annotations

import random
import re
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .graph import (GraphBuilder, LabeledGraph, TermGraph, basic_graph,
                    is_constructor_graph, term_of)
from .order import Precedence
from .rewriting import Reduction, RuleProvider, reduce
from .rules import RewriteRule
from .terms import Kind, Symbol, Term, app, constructor
from .unfolding import UnfoldingSpec


class CompileError(ValueError):
    pass


class DSLError(ValueError):
    def __init__(self, msg, line=None, col=None):
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + msg)
        self.line, self.col = line, col


class Stuck(RuntimeError):
    """The normal form still contains defined symbols."""

    def __init__(self, msg, reduction: Optional[Reduction] = None):
        super().__init__(msg)
        self.reduction = reduction


class StepLimitExceeded(RuntimeError):
    def __init__(self, msg, reduction: Optional[Reduction] = None):
        super().__init__(msg)
        self.reduction = reduction


# --- syntax ------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    c: str


@dataclass(frozen=True)
class ConstructorFn:
    c: str


@dataclass(frozen=True)
class Proj:
    j: int  # 1-based over all parameters


@dataclass(frozen=True)
class Pred:
    c: str
    j: int  # 0 returns the constant itself


@dataclass(frozen=True)
class Cond:
    pass


@dataclass(frozen=True)
class SafeComp:
    h: str
    selectors: Tuple[int, ...]  # 1-based normal parameter indices
    gs: Tuple[str, ...]


@dataclass(frozen=True)
class GenRec:
    steps: Tuple[Tuple[str, str], ...]  # (constructor, step function)


Body = Union[Const, ConstructorFn, Proj, Pred, Cond, SafeComp, GenRec]


@dataclass(frozen=True)
class FunctionDef:
    name: str
    normals: Tuple[str, ...]
    safes: Tuple[str, ...]
    body: Body

    @property
    def k(self) -> int:
        return len(self.normals)

    @property
    def l(self) -> int:
        return len(self.safes)


@dataclass
class Program:
    constructors: List[Symbol]
    defs: Dict[str, FunctionDef] = field(default_factory=dict)
    main: Optional[str] = None

    def constructor(self, name: str) -> Optional[Symbol]:
        for c in self.constructors:
            if c.name == name:
                return c
        return None


_TOK = re.compile(r"\s*(->|[A-Za-z0-9_'^.]+|[(){};,=/])")


def _tokenize(line: str, lineno: int) -> list:
    out, pos = [], 0
    line = line.split("#", 1)[0].rstrip()
    while pos < len(line):
        m = _TOK.match(line, pos)
        if m is None:
            if line[pos:].strip():
                raise DSLError(f"unexpected {line[pos:].strip()[0]!r}", lineno, pos + 1)
            break
        out.append((m.group(1), m.start(1) + 1))
        pos = m.end()
    return out


class _Cursor:
    def __init__(self, toks, lineno):
        self.toks, self.i, self.lineno = toks, 0, lineno

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def col(self):
        return self.toks[self.i][1] if self.i < len(self.toks) else (self.toks[-1][1] + 1 if self.toks else 1)

    def take(self, expected=None):
        if self.i >= len(self.toks):
            raise DSLError(f"unexpected end of line, expected {expected or 'more input'}",
                           self.lineno, self.col())
        tok, col = self.toks[self.i]
        if expected is not None and tok != expected:
            raise DSLError(f"expected {expected!r}, got {tok!r}", self.lineno, col)
        self.i += 1
        return tok

    def name(self):
        tok, col = (self.toks[self.i] if self.i < len(self.toks) else (None, self.col()))
        if tok is None or not re.fullmatch(r"[A-Za-z0-9_'^.]+", tok):
            raise DSLError(f"expected a name, got {tok!r}", self.lineno, col)
        self.i += 1
        return tok

    def done(self):
        if self.i != len(self.toks):
            raise DSLError(f"trailing input {self.toks[self.i][0]!r}", self.lineno, self.col())


def _names_until(cur: _Cursor, stop: str) -> list:
    out = []
    while cur.peek() not in (stop, ";"):
        out.append(cur.name())
        if cur.peek() == ",":
            cur.take(",")
    return out


def parse_program(text: str) -> Program:
    prog = Program([])
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokenize(raw, lineno)
        if not toks:
            continue
        cur = _Cursor(toks, lineno)
        kw = cur.name()
        if kw == "constructors":
            while cur.peek() is not None:
                col = cur.col()
                name = cur.name()
                cur.take("/")
                ar = cur.name()
                if not ar.isdigit():
                    raise DSLError(f"arity of {name} must be a number", lineno, col)
                if prog.constructor(name):
                    raise DSLError(f"constructor {name} declared twice", lineno, col)
                prog.constructors.append(constructor(name, int(ar)))
        elif kw == "main":
            prog.main = cur.name()
            cur.done()
        elif kw == "def":
            d = _parse_def(cur)
            if d.name in prog.defs or prog.constructor(d.name):
                raise DSLError(f"{d.name} defined twice", lineno, toks[1][1])
            prog.defs[d.name] = d
        else:
            raise DSLError(f"unknown keyword {kw!r}", lineno, toks[0][1])
    if prog.main is None and prog.defs:
        prog.main = list(prog.defs)[-1]
    return prog


def _parse_def(cur: _Cursor) -> FunctionDef:
    name = cur.name()
    cur.take("(")
    normals = _names_until(cur, ")")
    safes: list = []
    if cur.peek() == ";":
        cur.take(";")
        safes = _names_until(cur, ")")
    cur.take(")")
    params = normals + safes
    if len(set(params)) != len(params):
        raise DSLError(f"repeated parameter in {name}", cur.lineno, cur.col())
    cur.take("=")
    kind_col = cur.col()
    kind = cur.name()
    if kind == "const":
        body: Body = Const(cur.name())
    elif kind == "ctor":
        body = ConstructorFn(cur.name())
    elif kind == "proj":
        col = cur.col()
        ref = cur.name()
        if ref.isdigit():
            j = int(ref)
        elif ref in params:
            j = params.index(ref) + 1
        else:
            raise DSLError(f"unknown parameter {ref!r}", cur.lineno, col)
        body = Proj(j)
    elif kind == "pred":
        c = cur.name()
        col = cur.col()
        j = cur.name()
        if not j.isdigit():
            raise DSLError("predecessor index must be a number", cur.lineno, col)
        body = Pred(c, int(j))
    elif kind == "cond":
        body = Cond()
    elif kind == "comp":
        h = cur.name()
        cur.take("(")
        sel = []
        while cur.peek() not in (";", ")"):
            col = cur.col()
            ref = cur.name()
            if ref.isdigit():
                sel.append(int(ref))
            elif ref in normals:
                sel.append(normals.index(ref) + 1)
            else:
                raise DSLError(f"{ref!r} is not a normal parameter of {name}", cur.lineno, col)
            if cur.peek() == ",":
                cur.take(",")
        gs: list = []
        if cur.peek() == ";":
            cur.take(";")
            gs = _names_until(cur, ")")
        cur.take(")")
        body = SafeComp(h, tuple(sel), tuple(gs))
    elif kind == "gen_rec":
        cur.take("{")
        steps = []
        while cur.peek() != "}":
            c = cur.name()
            cur.take("->")
            steps.append((c, cur.name()))
            if cur.peek() == ",":
                cur.take(",")
        cur.take("}")
        body = GenRec(tuple(steps))
    else:
        raise DSLError(f"unknown schema {kind!r}", cur.lineno, kind_col)
    cur.done()
    return FunctionDef(name, tuple(normals), tuple(safes), body)


def format_def(d: FunctionDef) -> str:
    params = ", ".join(d.normals) + "; " + ", ".join(d.safes)
    b = d.body
    names = d.normals + d.safes
    if isinstance(b, Const):
        body = f"const {b.c}"
    elif isinstance(b, ConstructorFn):
        body = f"ctor {b.c}"
    elif isinstance(b, Proj):
        body = f"proj {names[b.j - 1]}" if 0 < b.j <= len(names) else f"proj {b.j}"
    elif isinstance(b, Pred):
        body = f"pred {b.c} {b.j}"
    elif isinstance(b, Cond):
        body = "cond"
    elif isinstance(b, SafeComp):
        sel = ", ".join(d.normals[j - 1] if 0 < j <= d.k else str(j) for j in b.selectors)
        body = f"comp {b.h}({sel}; {', '.join(b.gs)})"
    else:
        body = "gen_rec { " + ", ".join(f"{c} -> {h}" for c, h in b.steps) + " }"
    return f"def {d.name}({params.strip()}) = {body}"


def format_program(p: Program) -> str:
    lines = ["constructors " + " ".join(f"{c.name}/{c.arity}" for c in p.constructors)]
    lines += [format_def(d) for d in p.defs.values()]
    if p.main:
        lines.append(f"main {p.main}")
    return "\n".join(lines) + "\n"


# --- compilation -------------------------------------------------------------

@dataclass
class CompiledProgram:
    program: Program
    signature: Dict[str, Symbol]
    symbols: Dict[str, Symbol]  # definition name -> label used in graphs
    provider: RuleProvider
    precedence: Precedence
    main: Symbol
    d: int

    @property
    def constructors(self) -> List[Symbol]:
        return self.program.constructors

    def symbol(self, name: str) -> Symbol:
        return self.symbols.get(name) or self.signature[name]


def _step_shape(c: Symbol, k: int, l: int) -> tuple:
    """(arity, normal count) required of the step function for ``c``."""
    return 2 * c.arity + (k - 1) + l, c.arity + k - 1


def compile_program(prog: Program) -> CompiledProgram:
    cons = {c.name: c for c in prog.constructors}
    if not any(c.arity == 0 for c in prog.constructors):
        raise CompileError("at least one constant constructor is required")
    symbols: Dict[str, Symbol] = {}
    seps: Dict[str, tuple] = {}  # name -> (k, l)
    rules: List[RewriteRule] = []
    families: List[UnfoldingSpec] = []
    pairs: set = set()

    def ref(name: str, where: str) -> Symbol:
        if name in symbols and where != f"def {name}":
            return symbols[name]
        if name in cons:
            return cons[name]
        raise CompileError(f"{where}: unknown or later definition {name!r}")

    def ctor(name: str, where: str) -> Symbol:
        if name not in cons:
            raise CompileError(f"{where}: {name!r} is not a constructor")
        return cons[name]

    for d in prog.defs.values():
        where = f"def {d.name}"
        b = d.body
        k, l = d.k, d.l
        f = Symbol(d.name, k + l, k, Kind.DEFINED)
        if isinstance(b, ConstructorFn):
            c = ctor(b.c, where)
            if c.arity == 0 or (k, l) != (0, c.arity):
                raise CompileError(f"{where}: ctor {c.name} needs 0 normal and {c.arity} safe parameters")
            symbols[d.name] = c
            seps[d.name] = (0, c.arity)
            continue
        if isinstance(b, Const):
            c = ctor(b.c, where)
            if c.arity:
                raise CompileError(f"{where}: {c.name} is not a constant")
            if k == l == 0:
                symbols[d.name] = c
                seps[d.name] = (0, 0)
                continue
        symbols[d.name] = f
        seps[d.name] = (k, l)
        gb = GraphBuilder()
        if isinstance(b, Const):
            xs = [gb.var() for _ in range(k + l)]
            u = gb.node(f, xs)
            v = gb.node(ctor(b.c, where))
            rules.append(RewriteRule(LabeledGraph(gb.labels, gb.succ), u, v, d.name))
            pairs.add((f.name, b.c))
        elif isinstance(b, Proj):
            if not 1 <= b.j <= k + l:
                raise CompileError(f"{where}: projection index {b.j} out of range")
            xs = [gb.var() for _ in range(k + l)]
            u = gb.node(f, xs)
            rules.append(RewriteRule(LabeledGraph(gb.labels, gb.succ), u, xs[b.j - 1], d.name))
        elif isinstance(b, Pred):
            c = ctor(b.c, where)
            if (k, l) != (0, 1):
                raise CompileError(f"{where}: pred needs exactly one safe parameter")
            if b.j == 0 and c.arity:
                raise CompileError(f"{where}: index 0 is only for constants")
            if not 0 <= b.j <= c.arity:
                raise CompileError(f"{where}: predecessor index {b.j} out of range")
            ys = [gb.var() for _ in range(c.arity)]
            p = gb.node(c, ys)
            u = gb.node(f, [p])
            r = p if b.j == 0 else ys[b.j - 1]
            rules.append(RewriteRule(LabeledGraph(gb.labels, gb.succ), u, r, d.name))
            if b.j == 0:
                pairs.add((f.name, c.name))
        elif isinstance(b, Cond):
            n = len(prog.constructors)
            if (k, l) != (0, 1 + n):
                raise CompileError(f"{where}: cond needs 0 normal and {1 + n} safe parameters")
            for j, c in enumerate(prog.constructors):
                gb = GraphBuilder()
                zs = [gb.var() for _ in range(c.arity)]
                p = gb.node(c, zs)
                ys = [gb.var() for _ in range(n)]
                u = gb.node(f, [p] + ys)
                rules.append(RewriteRule(LabeledGraph(gb.labels, gb.succ), u, ys[j],
                                         f"{d.name}[{c.name}]"))
        elif isinstance(b, SafeComp):
            h = ref(b.h, where)
            hk, hl = seps.get(b.h, (0, h.arity))
            if (hk, hl) != (len(b.selectors), len(b.gs)):
                raise CompileError(f"{where}: {b.h} takes {hk} normal and {hl} safe arguments")
            for j in b.selectors:
                if not 1 <= j <= k:
                    raise CompileError(f"{where}: selector {j} is not a normal position")
            gsyms = []
            for gname in b.gs:
                gsym = ref(gname, where)
                if seps.get(gname, (0, gsym.arity)) != (k, l):
                    raise CompileError(f"{where}: {gname} must take {k} normal and {l} safe arguments")
                gsyms.append(gsym)
            xs = [gb.var() for _ in range(k + l)]
            u = gb.node(f, xs)
            ws = [gb.node(gs, xs) for gs in gsyms]
            v = gb.node(h, [xs[j - 1] for j in b.selectors] + ws)
            rules.append(RewriteRule(LabeledGraph(gb.labels, gb.succ), u, v, d.name))
            pairs.add((f.name, h.name))
            pairs.update((f.name, gs.name) for gs in gsyms)
        elif isinstance(b, GenRec):
            if k < 1:
                raise CompileError(f"{where}: general recursion needs a normal recursion parameter")
            theta = {}
            for cname, hname in b.steps:
                c = ctor(cname, where)
                if c in theta:
                    raise CompileError(f"{where}: two steps for {cname}")
                h = ref(hname, where)
                arity, normal = _step_shape(c, k, l)
                hk, hl = seps.get(hname, (0, h.arity))
                if (hk + hl, hk) != (arity, normal):
                    raise CompileError(f"{where}: step {hname} for {cname} must take "
                                       f"{normal} normal and {arity - normal} safe arguments")
                theta[c] = h
            if not theta:
                raise CompileError(f"{where}: no recursion steps")
            if len(set(theta.values())) != len(theta):
                raise CompileError(f"{where}: step functions must be distinct")
            if set(theta) & set(theta.values()):
                raise CompileError(f"{where}: a step function coincides with a recursion constructor")
            families.append(UnfoldingSpec(f, theta, d.name))
            pairs.update((f.name, h.name) for h in theta.values())
            pairs.update((f.name, c.name) for c in theta)
        else:  # pragma: no cover
            raise CompileError(f"{where}: unsupported body {b!r}")

    if prog.main is None or prog.main not in symbols:
        raise CompileError(f"main {prog.main!r} is not defined")
    signature = {c.name: c for c in prog.constructors}
    for s in symbols.values():
        signature.setdefault(s.name, s)
    provider = RuleProvider(rules, families)
    prec = Precedence(pairs)
    d = max([s.arity for s in signature.values()] + [r.rhs_size() for r in rules])
    return CompiledProgram(prog, signature, symbols, provider, prec, symbols[prog.main], d)


def compile_source(text: str) -> CompiledProgram:
    return compile_program(parse_program(text))


# --- evaluation by rewriting ---------------------------------------------------

def start_graph(cp: CompiledProgram, normals: Sequence[Term], safes: Sequence[Term],
                name: Optional[str] = None) -> TermGraph:
    f = cp.symbol(name or cp.program.main)
    return basic_graph(f, list(normals), list(safes))


def evaluate(cp: CompiledProgram, normals: Sequence[Term], safes: Sequence[Term] = (),
             name: Optional[str] = None, strategy: str = "innermost-leftmost",
             step_limit: int = 100_000, seed: Optional[int] = None) -> Term:
    """Normal form of ``name(normals; safes)`` (default: the main function)."""
    f = cp.symbol(name or cp.program.main)
    if f.is_constructor:
        return app(f, *normals, *safes)
    g0 = basic_graph(f, list(normals), list(safes))
    red = reduce(g0, cp.provider, strategy, step_limit, seed, keep_snapshots=False)
    if not red.normal:
        raise StepLimitExceeded(f"no normal form within {step_limit} steps", red)
    if not is_constructor_graph(red.graph):
        raise Stuck(f"normal form is not a constructor term: {term_of(red.graph)!r}", red)
    return term_of(red.graph)


# --- direct interpreter (oracle) --------------------------------------------------

class _Undefined:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "UNDEFINED"

    def __bool__(self):
        return False


UNDEFINED = _Undefined()


class _Thunk:
    __slots__ = ("fn", "val", "deep")

    def __init__(self, fn=None, val=None):
        self.fn, self.val, self.deep = fn, val, None

    def force(self):
        if self.fn is not None:
            fn, self.fn = self.fn, None
            self.val = fn()
        return self.val


class Interpreter:
    """Schema equations read as a lazy call-by-need semantics.

    Values are demanded only when a schema inspects them (predecessor,
    conditional, recursion argument, or the final answer), matching what
    graph rewriting can discard without evaluating.
    """

    def __init__(self, prog: Program):
        self.prog = prog
        self.cons = {c.name: c for c in prog.constructors}
        self.index = {c.name: i for i, c in enumerate(prog.constructors)}
        self._term_thunks: dict = {}
        self._rec_memo: dict = {}

    def value(self, t: Term) -> _Thunk:
        th = self._term_thunks.get(t)
        if th is None:
            th = _Thunk(val=(t.head, tuple(self.value(a) for a in t.args)))
            th.deep = t
            self._term_thunks[t] = th
        return th

    def call(self, name: str, args: Sequence[_Thunk]) -> _Thunk:
        if name in self.cons:
            c = self.cons[name]
            return _Thunk(val=(c, tuple(args)))
        d = self.prog.defs[name]
        return _Thunk(lambda: self._body(d, list(args)))

    def _body(self, d: FunctionDef, args: list):
        b = d.body
        if isinstance(b, Const):
            return (self.cons[b.c], ())
        if isinstance(b, ConstructorFn):
            return (self.cons[b.c], tuple(args))
        if isinstance(b, Proj):
            return args[b.j - 1].force()
        if isinstance(b, Pred):
            w = args[0].force()
            if w is UNDEFINED or w[0].name != b.c:
                return UNDEFINED
            return w if b.j == 0 else w[1][b.j - 1].force()
        if isinstance(b, Cond):
            w = args[0].force()
            if w is UNDEFINED:
                return UNDEFINED
            return args[1 + self.index[w[0].name]].force()
        if isinstance(b, SafeComp):
            hargs = [args[j - 1] for j in b.selectors] + [self.call(g, args) for g in b.gs]
            return self.call(b.h, hargs).force()
        if isinstance(b, GenRec):
            x = self.deep(args[0])
            steps = dict(b.steps)
            if x is UNDEFINED or any(u.head.name not in steps for u in x.subterms):
                return UNDEFINED
            return self._rec(d, steps, x, tuple(args[1:])).force()
        raise TypeError(b)

    def _rec(self, d: FunctionDef, steps: dict, x: Term, rest: tuple) -> _Thunk:
        key = (d.name, x, tuple(id(a) for a in rest))
        hit = self._rec_memo.get(key)
        if hit is not None:
            return hit[0]
        k = d.k
        ys, zs = list(rest[:k - 1]), list(rest[k - 1:])
        kids = x.args
        hargs = ([self.value(a) for a in kids] + ys + zs
                 + [self._rec(d, steps, a, rest) for a in kids])
        th = self.call(steps[x.head.name], hargs)
        self._rec_memo[key] = (th, rest)  # keep ``rest`` alive so ids stay unique
        return th

    def deep(self, th: _Thunk):
        """Fully evaluated term of ``th`` or ``UNDEFINED``."""
        if th.deep is not None:
            return th.deep
        stack = [th]
        while stack:
            top = stack[-1]
            if top.deep is not None:
                stack.pop()
                continue
            w = top.force()
            if w is UNDEFINED:
                top.deep = UNDEFINED
                stack.pop()
                continue
            pending = [a for a in w[1] if a.deep is None]
            if pending:
                stack.extend(pending)
                continue
            if any(a.deep is UNDEFINED for a in w[1]):
                top.deep = UNDEFINED
            else:
                top.deep = Term.make(w[0], [a.deep for a in w[1]])
            stack.pop()
        return th.deep


def direct_interpreter(prog: Union[Program, CompiledProgram], normals: Sequence[Term],
                       safes: Sequence[Term] = (), name: Optional[str] = None):
    """Value of ``name(normals; safes)`` by the schema equations, or ``UNDEFINED``."""
    if isinstance(prog, CompiledProgram):
        prog = prog.program
    it = Interpreter(prog)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20_000))
    try:
        th = it.call(name or prog.main, [it.value(t) for t in list(normals) + list(safes)])
        return it.deep(th)
    finally:
        sys.setrecursionlimit(old)


def agrees(cp: CompiledProgram, normals, safes=(), name=None, **kw) -> bool:
    """Rewriting and the interpreter give the same answer (or both none)."""
    want = direct_interpreter(cp.program, normals, safes, name)
    try:
        got = evaluate(cp, normals, safes, name, **kw)
    except Stuck:
        return want is UNDEFINED
    return got is want


# --- example and random programs ----------------------------------------------------

EXAMPLE_PROGRAM = """\
constructors eps/0 0/0 c/2 s/1
def id(; z) = proj z
def l4(x, y; z, u, v) = proj u
def l5(x, y; z, u, v) = proj v
def h0(x, y; z, u, v) = comp c(; l4, l5)
def g(x; z) = gen_rec { eps -> id, c -> h0 }
def k3(x, y; z) = proj z
def h1(x, y; z) = comp g(y; k3)
def e(x;) = const eps
def f(x, y;) = gen_rec { 0 -> e, s -> h1 }
main f
"""


def example_program() -> CompiledProgram:
    return compile_source(EXAMPLE_PROGRAM)


def unary(n: int, s: Symbol, zero: Symbol) -> Term:
    t = app(zero)
    for _ in range(n):
        t = app(s, t)
    return t


class RandomProgramBuilder:
    """Random well-formed programs over a fixed constructor set.

    Definitions are produced top-down for a requested separation, so every
    schema appears where its shape allows.
    """

    def __init__(self, rng: random.Random, constructors: Sequence[Symbol], max_depth: int = 2):
        self.rng = rng
        self.cons = list(constructors)
        self.max_depth = max_depth
        self.defs: Dict[str, FunctionDef] = {}
        self._n = 0

    def _fresh(self, base: str) -> str:
        self._n += 1
        return f"{base}{self._n}"

    def _params(self, k: int, l: int) -> tuple:
        return tuple(f"x{i}" for i in range(1, k + 1)), tuple(f"y{i}" for i in range(1, l + 1))

    def _add(self, k, l, body, base) -> str:
        name = self._fresh(base)
        xs, ys = self._params(k, l)
        self.defs[name] = FunctionDef(name, xs, ys, body)
        return name

    def make(self, k: int, l: int, depth: int) -> str:
        rng = self.rng
        options = ["const"]
        if k + l:
            options += ["proj"] * 3
        if (k, l) == (0, 1):
            options.append("pred")
        if (k, l) == (0, 1 + len(self.cons)):
            options += ["cond"] * 3
        if k == 0 and any(c.arity == l for c in self.cons if c.arity):
            options.append("ctor")
        if depth > 0:
            options += ["comp"] * 2
            if k >= 1:
                options += ["gen_rec"] * 2
        kind = rng.choice(options)
        if kind == "const":
            c = rng.choice([c for c in self.cons if c.arity == 0])
            if k == l == 0:
                return c.name
            return self._add(k, l, Const(c.name), "o")
        if kind == "proj":
            return self._add(k, l, Proj(rng.randint(1, k + l)), "i")
        if kind == "pred":
            c = rng.choice(self.cons)
            j = rng.randint(1, c.arity) if c.arity else 0
            return self._add(k, l, Pred(c.name, j), "p")
        if kind == "cond":
            return self._add(k, l, Cond(), "cnd")
        if kind == "ctor":
            c = rng.choice([c for c in self.cons if c.arity == l])
            return self._add(k, l, ConstructorFn(c.name), "k")
        if kind == "comp":
            n = rng.randint(0, 2)
            m = rng.randint(0, min(k, 2))
            if rng.random() < 0.15:
                n, m = 1 + len(self.cons), 0
            sel = tuple(rng.randint(1, k) for _ in range(m)) if k else ()
            if rng.random() < 0.3 and not sel:
                ctors = [c for c in self.cons if c.arity == n and c.arity > 0]
                if ctors:
                    h = rng.choice(ctors).name
                    gs = tuple(self.make(k, l, depth - 1) for _ in range(n))
                    return self._add(k, l, SafeComp(h, (), gs), "cp")
            h = self.make(len(sel), n, depth - 1)
            gs = tuple(self.make(k, l, depth - 1) for _ in range(n))
            return self._add(k, l, SafeComp(h, sel, gs), "cp")
        sigma = [c for c in self.cons if rng.random() < 0.8]
        if not any(c.arity == 0 for c in sigma):
            sigma.append(rng.choice([c for c in self.cons if c.arity == 0]))
        steps = []
        for c in sigma:
            arity, normal = _step_shape(c, k, l)
            name = self.make(normal, arity - normal, depth - 1)
            if any(name == h for _, h in steps) or name in {c2.name for c2 in self.cons}:
                body = self.defs[name].body if name in self.defs else Const(name)
                name = self._add(normal, arity - normal, body, "st")
            steps.append((c.name, name))
        return self._add(k, l, GenRec(tuple(steps)), "r")

    def program(self, k: int, l: int) -> Program:
        main = self.make(k, l, self.max_depth)
        if main not in self.defs:
            main = self._add(k, l, Const(main), "o")
        return Program(self.cons, dict(self.defs), main)


DEFAULT_CONSTRUCTORS = (constructor("eps"), constructor("0"), constructor("s", 1),
                        constructor("c", 2))


def random_program(rng: random.Random, k: Optional[int] = None, l: Optional[int] = None,
                   constructors: Sequence[Symbol] = DEFAULT_CONSTRUCTORS,
                   max_depth: int = 2, attempts: int = 100) -> Program:
    """A random program that compiles; generation is retried on shape clashes
    such as a constant step coinciding with a recursion constructor."""
    for _ in range(attempts):
        kk = rng.randint(0, 2) if k is None else k
        ll = rng.randint(0, 2) if l is None else l
        prog = RandomProgramBuilder(rng, constructors, max_depth).program(kk, ll)
        try:
            compile_program(prog)
        except CompileError:
            continue
        return prog
    raise CompileError("no compilable program generated")


def random_value(rng: random.Random, constructors: Sequence[Symbol], size: int) -> Term:
    """A random closed constructor term with at most ``size`` nodes."""
    consts = [c for c in constructors if c.arity == 0]
    others = [c for c in constructors if c.arity]

    def build(budget):
        if budget <= 1 or not others or rng.random() < 0.3:
            return app(rng.choice(consts)), 1
        c = rng.choice([c for c in others if c.arity < budget] or consts)
        if c.arity == 0:
            return app(c), 1
        used, args = 1, []
        for i in range(c.arity):
            share = (budget - used) // (c.arity - i)
            t, n = build(max(share, 1))
            args.append(t)
            used += n
        return app(c, *args), used

    return build(size)[0]
