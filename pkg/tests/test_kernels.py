import itertools
import os
import subprocess
import sys
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from srgraph import kernels
from srgraph.kernels import BudgetExceeded, _pykernels

try:
    from srgraph.kernels import _ckernels
except ImportError:  # pragma: no cover - only without a compiler
    _ckernels = None

BACKENDS = [_pykernels] + ([_ckernels] if _ckernels is not None else [])


def brute_ab(eq, st_, ell):
    """Try every assignment of small elements to positions."""
    n = len(eq)
    if n == 0:
        return True
    k = len(eq[0])
    for assign in itertools.product(range(k), repeat=n):
        fits, some_group = True, False
        for i in range(k):
            js = [j for j in range(n) if assign[j] == i]
            as_group = len(js) <= ell and all(st_[j][i] for j in js)
            as_equal = len(js) == 1 and eq[js[0]][i]
            fits = fits and (as_group or as_equal)
            some_group = some_group or as_group
        if fits and some_group:
            return True
    return False


@st.composite
def ab_inputs(draw):
    n = draw(st.integers(0, 5))
    k = draw(st.integers(1, 4))
    p_eq = draw(st.sampled_from([0.0, 0.2, 0.5]))
    p_st = draw(st.sampled_from([0.2, 0.5, 0.9]))
    rnd = draw(st.randoms(use_true_random=False))
    eq = [[rnd.random() < p_eq for _ in range(k)] for _ in range(n)]
    st_ = [[rnd.random() < p_st for _ in range(k)] for _ in range(n)]
    return eq, st_, draw(st.integers(1, 3))


@settings(max_examples=300)
@given(ab_inputs())
def test_ab_feasible_backends_agree_with_brute_force(inp):
    eq, st_, ell = inp
    want = brute_ab(eq, st_, ell)
    for mod in BACKENDS:
        assert mod.ab_feasible(eq, st_, ell) == want


def test_ab_feasible_edge_cases():
    for mod in BACKENDS:
        assert mod.ab_feasible([], [], 1)
        assert not mod.ab_feasible([[]], [[]], 1)
        # one element equal to the only position leaves no smaller group
        assert not mod.ab_feasible([[True]], [[False]], 2)
        assert mod.ab_feasible([[True], [False]], [[False], [True]], 1) is False
        assert mod.ab_feasible([[True, False]], [[False, False]], 1)
        assert not mod.ab_feasible([[False]] * 3, [[True]] * 3, 2)


@st.composite
def descent_graphs(draw):
    """Successor lists over ids 0..n-1 pointing to smaller ids (well-founded)."""
    n = draw(st.integers(1, 5))
    succ = {}
    for e in range(n):
        succ[e] = tuple(sorted(draw(st.sets(st.integers(0, max(e - 1, 0)), max_size=e))))
        if e == 0:
            succ[e] = ()
    start = tuple(sorted(draw(st.lists(st.integers(0, n - 1), min_size=0, max_size=2))))
    return start, succ, draw(st.integers(1, 2))


def brute_descent(start, succ, ell):
    @lru_cache(maxsize=None)
    def go(ms):
        best = 0
        for idx, e in enumerate(ms):
            rest = ms[:idx] + ms[idx + 1:]
            for size in range(ell + 1):
                for grp in itertools.combinations_with_replacement(succ[e], size):
                    best = max(best, 1 + go(tuple(sorted(rest + grp))))
        return best
    return go(start)


@settings(max_examples=150)
@given(descent_graphs())
def test_longest_descent_backends_agree_with_brute_force(inp):
    start, succ, ell = inp
    try:
        want = brute_descent(start, succ, ell)
    except RecursionError:
        return
    for mod in BACKENDS:
        assert mod.longest_descent(start, succ, ell, 10 ** 6, {}) == want


def test_longest_descent_budget():
    succ = {0: (), 1: (0,), 2: (0, 1), 3: (0, 1, 2)}
    for mod in BACKENDS:
        with pytest.raises(BudgetExceeded):
            mod.longest_descent((3, 3), succ, 3, 5, {})


def test_longest_descent_memo_is_shared():
    succ = {0: (), 1: (0,)}
    for mod in BACKENDS:
        memo = {}
        assert mod.longest_descent((1,), succ, 2, 100, memo) == 3
        assert memo[(1,)] == 3 and memo[()] == 0
        assert mod.longest_descent((1, 1), succ, 2, 100, memo) == 6


def test_backend_selection():
    assert kernels.BACKEND in ("cython", "python")
    if _ckernels is not None:
        assert kernels.BACKEND == "cython"
    env = dict(os.environ, SRGRAPH_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c",
                          "from srgraph import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
