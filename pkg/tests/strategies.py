"""Hypothesis strategies for symbols, terms, sequences and term graphs."""

from hypothesis import strategies as st

from srgraph.graph import GraphBuilder, TermGraph
from srgraph.order import Precedence
from srgraph.terms import Seq, Term, constructor, defined

ZERO = constructor("0")
EPS = constructor("eps")
S = constructor("s", 1)
C = constructor("c", 2)
CONSTRUCTORS = (ZERO, EPS, S, C)

F = defined("f", 1, 1)
G = defined("g", 1, 0)
H = defined("h", 2, 1)
K = defined("k", 0, 2)
P = defined("p", 0, 0)
DEFINED = (F, G, H, K, P)
SYMBOLS = CONSTRUCTORS + DEFINED

# f > h > g > p, k > g, every defined symbol above every constructor
ORDER_PREC = Precedence([("f", "h"), ("h", "g"), ("g", "p"), ("k", "g")]
                        + [(d.name, c.name) for d in DEFINED for c in CONSTRUCTORS])


def terms(symbols=SYMBOLS, max_depth=3):
    leaves = [s for s in symbols if s.arity == 0]
    inner = [s for s in symbols if s.arity]

    @st.composite
    def build(draw, depth):
        if depth == 0 or draw(st.integers(0, 3)) == 0:
            return Term.make(draw(st.sampled_from(leaves)), ())
        f = draw(st.sampled_from(inner))
        return Term.make(f, [draw(build(depth - 1)) for _ in range(f.arity)])

    return build(max_depth)


def constructor_terms(max_depth=3):
    return terms(CONSTRUCTORS, max_depth)


def seqs(max_len=3, max_depth=3):
    return st.lists(terms(max_depth=max_depth), max_size=max_len).map(Seq)


def seq_terms(max_len=3, max_depth=3):
    return st.one_of(terms(max_depth=max_depth), seqs(max_len, max_depth))


@st.composite
def term_graphs(draw, symbols=SYMBOLS, max_nodes=8, variables=False):
    """Random rooted DAGs; later nodes pick successors among earlier ones."""
    b = GraphBuilder()
    nodes = []
    n = draw(st.integers(1, max_nodes))
    for _ in range(n):
        if variables and nodes and draw(st.integers(0, 5)) == 0:
            nodes.append(b.var())
            continue
        choices = [s for s in symbols if s.arity == 0 or nodes]
        f = draw(st.sampled_from(choices))
        kids = [draw(st.sampled_from(nodes)) for _ in range(f.arity)]
        nodes.append(b.node(f, kids))
    root = nodes[-1]
    if root not in b.labels:
        root = b.node(P, ())
    return b.build(root)


@st.composite
def renamed(draw, g):
    """``g`` with its node ids permuted."""
    ids = sorted(g.nodes)
    perm = draw(st.permutations([i + 100 for i in range(len(ids))]))
    f = dict(zip(ids, perm))
    return TermGraph({f[v]: s for v, s in g.labels.items()},
                     {f[v]: tuple(f[w] for w in g.succ[v]) for v in ids}, f[g.root])
