"""The order ⊐_ℓ on terms and flat sequences, precedences, ranks, and the
measure G_ℓ (longest descent) with its closed-form bound."""

from __future__ import annotations

import re
from itertools import product
from typing import Iterable, Mapping, Optional

from . import kernels
from .kernels import BudgetExceeded
from .terms import Seq, SeqTerm, Symbol, Term


class PrecedenceError(ValueError):
    pass


class Precedence:
    """Strict order on symbol names, stored transitively closed."""

    def __init__(self, pairs: Iterable[tuple] = ()):
        self._above: dict = {}
        for f, g in pairs:
            self.add(_name(f), _name(g))
        self._close()

    def add(self, f: str, g: str) -> None:
        self._above.setdefault(f, set()).add(g)
        self._above.setdefault(g, set())

    def _close(self) -> None:
        order = self._topo()
        closed: dict = {}
        for f in reversed(order):
            acc = set()
            for g in self._above[f]:
                acc.add(g)
                acc |= closed[g]
            closed[f] = acc
        self._above = closed
        self._rank: dict = {}
        for f in reversed(order):
            self._rank[f] = 1 + max((self._rank[g] for g in self._above[f]), default=-1)

    def _topo(self) -> list:
        state: dict = {}
        order: list = []
        for root in sorted(self._above):
            if root in state:
                continue
            stack = [(root, iter(sorted(self._above[root])))]
            state[root] = 1
            while stack:
                f, it = stack[-1]
                for g in it:
                    if state.get(g) == 1:
                        raise PrecedenceError(f"precedence is cyclic through {g}")
                    if g not in state:
                        state[g] = 1
                        stack.append((g, iter(sorted(self._above[g]))))
                        break
                else:
                    stack.pop()
                    state[f] = 2
                    order.append(f)
        order.reverse()
        return order

    def gt(self, f, g) -> bool:
        return _name(g) in self._above.get(_name(f), ())

    def below(self, f) -> frozenset:
        return frozenset(self._above.get(_name(f), ()))

    def rank(self, f) -> int:
        """Length of the longest descending chain below ``f`` (0 if minimal)."""
        return self._rank.get(_name(f), 0)

    def pairs(self) -> set:
        return {(f, g) for f, gs in self._above.items() for g in gs}

    def symbols(self) -> set:
        return set(self._above)

    def union(self, other: "Precedence") -> "Precedence":
        return Precedence(self.pairs() | other.pairs())

    def reversed(self) -> "Precedence":
        return Precedence((g, f) for f, g in self.pairs())

    def lift_normalized(self) -> "Precedence":
        """Add ``f^n > g^n`` for every ``f > g``."""
        return Precedence(self.pairs() | {(f + "^n", g + "^n") for f, g in self.pairs()})

    def check_constructors_minimal(self, signature: Mapping[str, Symbol]) -> list:
        return sorted(f for f in self._above
                      if f in signature and signature[f].is_constructor and self._above[f])

    def format(self) -> str:
        return "".join(f"{f} > {g}\n" for f, g in sorted(self.pairs()))

    def format_cover(self) -> str:
        """Only the covering pairs (the transitive reduction)."""
        lines = []
        for f in sorted(self._above):
            for g in sorted(self._above[f]):
                if not any(g in self._above[h] for h in self._above[f]):
                    lines.append(f"{f} > {g}\n")
        return "".join(lines)

    def __eq__(self, other):
        return isinstance(other, Precedence) and self.pairs() == other.pairs()

    def __repr__(self):
        return f"Precedence({sorted(self.pairs())})"


def _name(f) -> str:
    return f.name if isinstance(f, Symbol) else str(f)


def parse_precedence(text: str) -> Precedence:
    """Lines ``f > g`` (chains ``f > g > h`` allowed, ``#`` comments)."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        names = [p.strip() for p in line.split(">")]
        if len(names) < 2 or not all(re.fullmatch(r"\S+", n) for n in names):
            raise PrecedenceError(f"line {lineno}: expected 'f > g', got {raw!r}")
        pairs.extend(zip(names, names[1:]))
    return Precedence(pairs)


# --- the order ---------------------------------------------------------------

def _head(t: Term) -> Optional[Symbol]:
    return None if t.is_var else t.head


def gt_st(a: Term, b: Term, ell: int, prec: Precedence, reading: str = "l") -> bool:
    """Term clause: head drop, arguments of ``b`` below ``a``, width ``ell``."""
    fa, fb = _head(a), _head(b)
    if fa is None or fb is None or not prec.gt(fa, fb):
        return False
    if len(b.args) > ell:
        return False
    args = b.args if reading == "l" else b.args[:min(len(a.args), len(b.args))]
    return all(a.is_proper_superterm_of(t) for t in args)


def gt(a: SeqTerm, b: SeqTerm, ell: int, prec: Precedence, reading: str = "l") -> bool:
    """``a ⊐_ℓ b``.

    ``reading`` selects how the term clause indexes its subterm condition:
    ``"l"`` ranges over the arguments of ``b``, ``"k"`` over the first
    ``min(k, l)`` of them.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    if reading not in ("l", "k"):
        raise ValueError(f"unknown reading {reading!r}")
    if isinstance(a, Term):
        if isinstance(b, Term):
            return gt_st(a, b, ell, prec, reading)
        return len(b) <= ell and all(gt_st(a, t, ell, prec, reading) for t in b)
    if isinstance(b, Term):
        return False
    return gt_ab(a, b, ell, prec, reading)


def gt_ab(a: Seq, b: Seq, ell: int, prec: Precedence, reading: str = "l") -> bool:
    s, t = a.items, b.items
    if not s:
        return False
    eq = [[tj is si for si in s] for tj in t]
    st = [[gt_st(si, tj, ell, prec, reading) for si in s] for tj in t]
    # most constrained elements first
    order = sorted(range(len(t)), key=lambda j: sum(eq[j]) + sum(st[j]))
    return kernels.ab_feasible([eq[j] for j in order], [st[j] for j in order], ell)


def geq(a: SeqTerm, b: SeqTerm, ell: int, prec: Precedence, reading: str = "l") -> bool:
    if isinstance(a, Term) and isinstance(b, Seq) and len(b) == 1:
        b = b[0]
    if isinstance(b, Term) and isinstance(a, Seq) and len(a) == 1:
        a = a[0]
    return a == b or gt(a, b, ell, prec, reading)


# --- the measure -------------------------------------------------------------

class MeasureContext:
    """Candidate universe for descents below closed terms.

    A term-clause successor of ``t`` is ``g(u1..um)`` with ``g`` below the
    head of ``t``, ``m = arity(g) <= ell`` and every ``u`` a proper subterm
    of ``t``. Candidate symbols come from ``signature``.
    """

    def __init__(self, ell: int, prec: Precedence, signature: Iterable[Symbol],
                 budget: int = 200_000):
        self.ell = ell
        self.prec = prec
        self.symbols = sorted(set(signature), key=lambda s: (s.name, s.arity))
        self.budget = budget
        self._ids: dict = {}
        self._terms: list = []
        self._succ: list = []
        self._memo: dict = {}

    def _id(self, t: Term) -> int:
        i = self._ids.get(t)
        if i is None:
            i = self._ids[t] = len(self._terms)
            self._terms.append(t)
            self._succ.append(None)
        return i

    def successors(self, t: Term) -> list:
        """All terms ``b`` with ``t ⊐ b`` by the term clause."""
        if t.is_var:
            return []
        proper = sorted(t.subterms - {t}, key=repr)
        out = []
        for g in self.symbols:
            if g.arity > self.ell or not self.prec.gt(t.head, g):
                continue
            for args in product(proper, repeat=g.arity):
                out.append(Term.make(g, args))
        return out

    def _expand(self, root: int) -> None:
        stack = [root]
        while stack:
            i = stack.pop()
            if self._succ[i] is not None:
                continue
            kids = tuple(sorted(self._id(b) for b in self.successors(self._terms[i])))
            self._succ[i] = kids
            if len(self._terms) > self.budget:
                raise BudgetExceeded(f"more than {self.budget} candidate terms")
            stack.extend(k for k in kids if self._succ[k] is None)

    def measure(self, a: SeqTerm) -> int:
        items = (a,) if isinstance(a, Term) else a.items
        ids = []
        for t in items:
            i = self._id(t)
            self._expand(i)
            ids.append(i)
        return kernels.longest_descent(tuple(sorted(ids)), self._succ, self.ell,
                                       self.budget, self._memo)


def measure_G(a: SeqTerm, ell: int, prec: Precedence, signature: Iterable[Symbol],
              budget: int = 200_000, context: Optional[MeasureContext] = None) -> int:
    """Exact length of the longest ``⊐_ℓ`` descent from ``a``.

    Raises :class:`BudgetExceeded` when the search grows past ``budget``
    candidate terms or multisets.
    """
    if context is None:
        context = MeasureContext(ell, prec, signature, budget)
    return context.measure(a)


def bound_G(f, args: Iterable[Term], ell: int, prec: Precedence, d: int) -> int:
    """``d^rk(f) * (1+ℓ)^rk(f) * (1 + Σ depth(s_j))``; depth of a leaf is 0."""
    rk = prec.rank(f)
    return d ** rk * (1 + ell) ** rk * (1 + sum(t.depth for t in args))


def signature_of_seq(a: SeqTerm) -> set:
    items = (a,) if isinstance(a, Term) else a.items
    return {u.head for t in items for u in t.subterms if not u.is_var}


__all__ = ["Precedence", "PrecedenceError", "parse_precedence", "gt", "gt_st", "gt_ab",
           "geq", "measure_G", "MeasureContext", "bound_G", "BudgetExceeded",
           "signature_of_seq"]
