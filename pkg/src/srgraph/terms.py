"""Symbols with argument separation, hash-consed terms and flat sequences.

Terms are interned: two structurally equal terms are the same object, so
equality is identity and terms with exponential unravelled size stay small
in memory (sub-terms are shared).
"""

from __future__ import annotations

import enum
import re
import weakref
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence, Union


class Kind(enum.Enum):
    CONSTRUCTOR = "constructor"
    DEFINED = "defined"


@dataclass(frozen=True)
class Symbol:
    """A function symbol ``name(x1..xk ; xk+1..xn)``.

    The first ``normal_count`` argument positions are normal, the rest safe.
    """

    name: str
    arity: int
    normal_count: int = 0
    kind: Kind = Kind.DEFINED

    def __post_init__(self):
        if self.arity < 0 or not 0 <= self.normal_count <= self.arity:
            raise ValueError(f"bad separation for {self.name}: "
                             f"{self.normal_count} normal of {self.arity}")
        if self.kind is Kind.CONSTRUCTOR and self.normal_count:
            raise ValueError(f"constructor {self.name} has normal positions")

    @property
    def safe_count(self) -> int:
        return self.arity - self.normal_count

    @property
    def is_constructor(self) -> bool:
        return self.kind is Kind.CONSTRUCTOR

    def is_normal_position(self, j: int) -> bool:
        """Whether 0-based argument position ``j`` is normal."""
        return j < self.normal_count

    def normalized(self) -> "Symbol":
        """The symbol f^n taking exactly the normal arguments of ``self``."""
        k = self.normal_count
        return Symbol(f"{self.name}^n", k, k, Kind.DEFINED)

    def __repr__(self):
        return f"{self.name}/{self.normal_count};{self.safe_count}"


def constructor(name: str, arity: int = 0) -> Symbol:
    return Symbol(name, arity, 0, Kind.CONSTRUCTOR)


def defined(name: str, normal: int = 0, safe: int = 0) -> Symbol:
    return Symbol(name, normal + safe, normal, Kind.DEFINED)


@dataclass(frozen=True)
class Variable:
    name: str

    def __repr__(self):
        return self.name


class Term:
    """Interned first-order term. Build with :meth:`make` or :func:`app`."""

    __slots__ = ("head", "args", "_size", "_depth", "_subterms", "__weakref__")
    _table: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()

    head: Union[Symbol, Variable]
    args: tuple

    @classmethod
    def make(cls, head, args=()) -> "Term":
        args = tuple(args)
        key = (head, args)
        t = cls._table.get(key)
        if t is None:
            if isinstance(head, Symbol) and len(args) != head.arity:
                raise ValueError(f"{head.name} expects {head.arity} arguments, got {len(args)}")
            if isinstance(head, Variable) and args:
                raise ValueError("variables take no arguments")
            t = object.__new__(cls)
            t.head = head
            t.args = args
            t._size = t._depth = t._subterms = None
            cls._table[key] = t
        return t

    def __reduce__(self):
        return (Term.make, (self.head, self.args))

    @property
    def is_var(self) -> bool:
        return isinstance(self.head, Variable)

    @property
    def size(self) -> int:
        """Number of nodes of the tree representation (may be huge)."""
        if self._size is None:
            for t in self._postorder():
                if t._size is None:
                    t._size = 1 + sum(a._size for a in t.args)
        return self._size

    @property
    def depth(self) -> int:
        """Height of the tree representation; a leaf has depth 0."""
        if self._depth is None:
            for t in self._postorder():
                if t._depth is None:
                    t._depth = 1 + max(a._depth for a in t.args) if t.args else 0
        return self._depth

    @property
    def subterms(self) -> frozenset:
        """All distinct sub-terms, including ``self``."""
        if self._subterms is None:
            for t in self._postorder():
                if t._subterms is None:
                    acc = {t}
                    for a in t.args:
                        acc |= a._subterms
                    t._subterms = frozenset(acc)
        return self._subterms

    def is_proper_superterm_of(self, other: "Term") -> bool:
        return other is not self and other in self.subterms

    def is_constructor_term(self) -> bool:
        return all(isinstance(t.head, Symbol) and t.head.is_constructor
                   for t in self.subterms)

    def _postorder(self) -> Iterator["Term"]:
        seen = set()
        stack = [(self, False)]
        while stack:
            t, expanded = stack.pop()
            if expanded:
                yield t
                continue
            if id(t) in seen:
                continue
            seen.add(id(t))
            stack.append((t, True))
            stack.extend((a, False) for a in reversed(t.args) if id(a) not in seen)

    def __repr__(self):
        return format_term(self)


def app(head: Symbol, *args: Term) -> Term:
    return Term.make(head, args)


def var(name: str) -> Term:
    return Term.make(Variable(name))


def format_term(t: Term, _memo=None) -> str:
    """Render ``t``; separated symbols print as ``f(n1, n2; s1)``."""
    memo = {} if _memo is None else _memo
    for u in t._postorder():
        if id(u) in memo:
            continue
        if u.is_var or not u.args:
            memo[id(u)] = u.head.name
            continue
        parts = [memo[id(a)] for a in u.args]
        k = u.head.normal_count
        if 0 < k < u.head.arity:
            inner = ", ".join(parts[:k]) + "; " + ", ".join(parts[k:])
        else:
            inner = ", ".join(parts)
        memo[id(u)] = f"{u.head.name}({inner})"
    return memo[id(t)]


class Seq:
    """A flat sequence ``[t1 ... tk]`` of terms (the variadic symbol ∘)."""

    __slots__ = ("items",)

    def __init__(self, items: Iterable[Term] = ()):
        items = tuple(items)
        for t in items:
            if not isinstance(t, Term):
                raise TypeError("sequences are flat: elements must be terms")
        self.items = items

    @staticmethod
    def lift(x: "SeqTerm") -> "Seq":
        return x if isinstance(x, Seq) else Seq((x,))

    def __add__(self, other: "SeqTerm") -> "Seq":
        return Seq(self.items + Seq.lift(other).items)

    def __radd__(self, other: "SeqTerm") -> "Seq":
        return Seq(Seq.lift(other).items + self.items)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __eq__(self, other):
        return isinstance(other, Seq) and self.items == other.items

    def __hash__(self):
        return hash(("seq", self.items))

    def __repr__(self):
        return format_seq(self)


SeqTerm = Union[Term, Seq]


def concat(*parts: SeqTerm) -> Seq:
    out: list = []
    for p in parts:
        out.extend(Seq.lift(p).items)
    return Seq(out)


def format_seq(a: SeqTerm) -> str:
    if isinstance(a, Term):
        return format_term(a)
    memo: dict = {}
    body = " ".join(format_term(t, memo) for t in a.items)
    return f"[ {body} ]" if body else "[ ]"


# --- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z0-9_^'.\-]+)|(.))")


class ParseError(ValueError):
    pass


def _tokens(text: str) -> list:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        tok = m.group(1) or m.group(2)
        out.append((tok, m.start(m.lastindex)))
        pos = m.end()
    return out


class _TermParser:
    def __init__(self, text: str, signature: Mapping[str, Symbol] | None,
                 variables: bool):
        self.toks = _tokens(text)
        self.i = 0
        self.signature = signature
        self.variables = variables
        self.text = text

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, expected=None):
        if self.i >= len(self.toks):
            raise ParseError(f"unexpected end of input in {self.text!r}")
        tok, col = self.toks[self.i]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r} at column {col + 1}, got {tok!r}")
        self.i += 1
        return tok

    def term(self) -> Term:
        name = self.take()
        if not re.fullmatch(r"[A-Za-z0-9_^'.\-]+", name):
            raise ParseError(f"unexpected {name!r} in {self.text!r}")
        normals, safes, split = [], [], False
        if self.peek() == "(":
            self.take("(")
            cur = normals
            while self.peek() != ")":
                if self.peek() == ";":
                    self.take(";")
                    if split:
                        raise ParseError("two ';' in one argument list")
                    split, cur = True, safes
                    continue
                cur.append(self.term())
                if self.peek() == ",":
                    self.take(",")
            self.take(")")
        args = normals + safes
        sym = self._symbol(name, len(args), len(normals) if split else None)
        if sym is None:
            return var(name)
        return Term.make(sym, args)

    def _symbol(self, name, arity, normal):
        if self.signature is not None and name in self.signature:
            sym = self.signature[name]
            if sym.arity != arity:
                raise ParseError(f"{name} expects {sym.arity} arguments, got {arity}")
            if normal is not None and normal != sym.normal_count:
                raise ParseError(f"separation mismatch for {name}")
            return sym
        if self.variables and arity == 0:
            return None
        return Symbol(name, arity, normal if normal is not None else 0, Kind.DEFINED)


def parse_term(text: str, signature: Mapping[str, Symbol] | None = None,
               variables: bool = False) -> Term:
    """Parse ``f(s(0), 0; h(0; g, g), g)``.

    Names missing from ``signature`` become variables when ``variables`` is
    set (nullary only), otherwise defined symbols inferred from use.
    """
    p = _TermParser(text, signature, variables)
    t = p.term()
    if p.peek() is not None:
        raise ParseError(f"trailing input in {text!r}")
    return t


def parse_seq(text: str, signature: Mapping[str, Symbol] | None = None) -> SeqTerm:
    """Parse a term, or a sequence literal ``[t1 t2 ...]``."""
    p = _TermParser(text, signature, False)
    if p.peek() != "[":
        t = p.term()
        if p.peek() is not None:
            raise ParseError(f"trailing input in {text!r}")
        return t
    p.take("[")
    items = []
    while p.peek() != "]":
        items.append(p.term())
    p.take("]")
    if p.peek() is not None:
        raise ParseError(f"trailing input in {text!r}")
    return Seq(items)


def signature_of(symbols: Iterable[Symbol]) -> dict:
    sig: dict = {}
    for s in symbols:
        old = sig.setdefault(s.name, s)
        if old != s:
            raise ValueError(f"inconsistent declarations of {s.name}: {old!r} vs {s!r}")
    return sig


def symbols_in(terms: Sequence[Term]) -> set:
    return {u.head for t in terms for u in t.subterms if isinstance(u.head, Symbol)}
