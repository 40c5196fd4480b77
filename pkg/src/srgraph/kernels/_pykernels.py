"""Pure-Python search kernels (reference implementation and fallback)."""

from itertools import combinations_with_replacement


class BudgetExceeded(RuntimeError):
    pass


def ab_feasible(eq, st, ell):
    """Decide the sequence clause of the order from precomputed relations.

    ``eq[j][i]`` says element ``j`` of the smaller sequence equals position
    ``i`` of the larger one; ``st[j][i]`` says position ``i`` is above
    element ``j`` by the term clause. Each position takes either exactly
    one equal element or at most ``ell`` elements below it; at least one
    position must be of the second kind (an empty group counts).
    The larger sequence must be nonempty; with no elements to place every
    position holds an empty group, so the answer is then ``True``.
    """
    n = len(eq)
    if n == 0:
        return True
    k = len(eq[0])
    if k == 0:
        return False
    if n > k * ell:
        return False
    # state per position: -1 = holds an equal element, c >= 0 = holds c smaller ones
    state = [0] * k
    seen = set()

    def go(j):
        if j == n:
            return any(c >= 0 for c in state)
        key = (j, tuple(state))
        if key in seen:
            return False
        for i in range(k):
            c = state[i]
            if c == 0 and eq[j][i]:
                state[i] = -1
                if go(j + 1):
                    return True
                state[i] = 0
            if c >= 0 and c < ell and st[j][i]:
                state[i] = c + 1
                if go(j + 1):
                    return True
                state[i] = c
        seen.add(key)
        return False

    return go(0)


def longest_descent(start, succ, ell, budget, memo):
    """Length of the longest descent from the multiset ``start``.

    Multisets are sorted tuples of element ids; one step replaces a single
    element ``e`` by a multiset of at most ``ell`` elements of ``succ[e]``.
    ``memo`` maps multisets to their value and is shared across calls.
    """
    groups = {}

    def groups_of(e):
        gs = groups.get(e)
        if gs is None:
            cands = succ[e]
            gs = [()]
            for size in range(1, ell + 1):
                gs.extend(combinations_with_replacement(cands, size))
            groups[e] = gs
        return gs

    stack = [(start, None)]
    while stack:
        ms, it = stack[-1]
        if ms in memo:
            stack.pop()
            continue
        if not ms:
            memo[ms] = 0
            stack.pop()
            continue
        if it is None:
            kids = []
            prev = None
            for idx, e in enumerate(ms):
                if e == prev:
                    continue
                prev = e
                rest = ms[:idx] + ms[idx + 1:]
                for grp in groups_of(e):
                    kids.append(tuple(sorted(rest + grp)) if grp else rest)
            pending = [m for m in kids if m not in memo]
            if pending:
                if len(memo) + len(pending) > budget:
                    raise BudgetExceeded(f"more than {budget} multisets")
                stack[-1] = (ms, kids)
                stack.extend((m, None) for m in pending)
                continue
            it = kids
        if any(m not in memo for m in it):
            stack.extend((m, None) for m in it if m not in memo)
            continue
        memo[ms] = 1 + max(memo[m] for m in it)
        stack.pop()
    return memo[start]
