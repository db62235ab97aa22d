"""Pure-Python hot kernels.

Every function here has a twin of the same name and signature in
``_ckernels.pyx``. Both operate on raw integer bitmasks: bit ``i`` of a mask
stands for element / row ``i + 1``. Row tuples and column indices are
0-based at this layer; the public modules translate to 1-based.
"""
from __future__ import annotations

from itertools import combinations
from typing import Sequence


def popcount(x: int) -> int:
    return bin(x).count("1")


def trace_size(masks: Sequence[int], s: int) -> int:
    return len({a & s for a in masks})


def shattered_masks(masks: Sequence[int], m: int, k: int) -> list[int]:
    """Masks of all k-subsets of range(m) shattered by ``masks``, lex order."""
    full = 1 << k
    if len(masks) < full:
        return []
    out = []
    for rows in combinations(range(m), k):
        s = 0
        for r in rows:
            s |= 1 << r
        if len({a & s for a in masks}) == full:
            out.append(s)
    return out


def compress_masks(masks: Sequence[int], bit: int) -> list[int]:
    present = set(masks)
    out = []
    for a in masks:
        if a & bit and (a & ~bit) not in present:
            out.append(a & ~bit)
        else:
            out.append(a)
    return out


def down_close_masks(masks: Sequence[int], m: int) -> list[int]:
    cur = list(masks)
    changed = True
    while changed:
        changed = False
        for i in range(m):
            nxt = compress_masks(cur, 1 << i)
            if nxt != cur:
                changed = True
                cur = nxt
    return cur


def _project(col: int, rows: Sequence[int]) -> int:
    p = 0
    for j, r in enumerate(rows):
        if (col >> r) & 1:
            p |= 1 << j
    return p


def contains_cols(cols: Sequence[int], m: int, pcols: Sequence[int], k: int) -> bool:
    # Rows fixed, containment is a subsequence test; earliest matching is optimal.
    l = len(pcols)
    if k > m:
        return False
    for rows in combinations(range(m), k):
        j = 0
        for c in cols:
            if _project(c, rows) == pcols[j]:
                j += 1
                if j == l:
                    return True
    return False


def contribution_windows(
    cols: Sequence[int], m: int, k: int, row_sets: Sequence[Sequence[int]]
) -> list[list[list[int]]]:
    """Greedy maximum set of separated windows for each row tuple.

    A window closes at the first column where all ``2**k`` restricted
    patterns have been seen since the previous cut; it reports the first
    occurrence of each pattern.
    """
    full = 1 << k
    out = []
    for rows in row_sets:
        windows: list[list[int]] = []
        first: dict[int, int] = {}
        if len(cols) >= full:
            for idx, c in enumerate(cols):
                p = _project(c, rows)
                if p not in first:
                    first[p] = idx
                    if len(first) == full:
                        windows.append(sorted(first.values()))
                        first = {}
        out.append(windows)
    return out


class _BudgetExhausted(Exception):
    pass


def _search_tables(m: int, pcols: Sequence[int], k: int):
    tuples = list(combinations(range(m), k)) if k <= m else []
    proj = [[_project(c, t) for t in tuples] for c in range(1 << m)]
    return tuples, proj


def alive_after(m: int, pcols: Sequence[int], k: int, prefix: Sequence[int]) -> list[int]:
    """Unused columns that can follow ``prefix`` without completing the pattern.

    Raises ValueError when ``prefix`` itself contains the pattern.
    """
    tuples, proj = _search_tables(m, pcols, k)
    l = len(pcols)
    last = pcols[l - 1]
    state = [0] * len(tuples)
    for c in prefix:
        row = proj[c]
        for t in range(len(tuples)):
            if row[t] == pcols[state[t]]:
                state[t] += 1
                if state[t] == l:
                    raise ValueError("prefix already contains the pattern")
    used = set(prefix)
    return [
        c for c in range(1 << m)
        if c not in used
        and not any(state[t] == l - 1 and proj[c][t] == last for t in range(len(tuples)))
    ]


def fs_subtree(
    m: int,
    pcols: Sequence[int],
    k: int,
    prefix: Sequence[int],
    best_len: int,
    budget: int,
):
    """Depth-first branch and bound below ``prefix``.

    Returns ``(best_len, best_seq, nodes, done)`` where ``best_seq`` is None
    unless a sequence longer than the incoming ``best_len`` was found, and
    ``done`` is False when the node budget ran out.
    """
    tuples, proj = _search_tables(m, pcols, k)
    T = len(tuples)
    l = len(pcols)
    last = pcols[l - 1]
    alive = alive_after(m, pcols, k, prefix)
    state = [0] * T
    for c in prefix:
        row = proj[c]
        for t in range(T):
            if row[t] == pcols[state[t]]:
                state[t] += 1

    seq = list(prefix)
    best = best_len
    best_seq = None
    nodes = 0

    def dfs(state: list[int], alive: list[int]) -> None:
        nonlocal best, best_seq, nodes
        if nodes >= budget:
            raise _BudgetExhausted
        nodes += 1
        d = len(seq)
        if d > best:
            best = d
            best_seq = list(seq)
        for c in alive:
            if d + len(alive) <= best:
                return
            row = proj[c]
            new = [s + 1 if row[t] == pcols[s] else s for t, s in enumerate(state)]
            hot = [t for t in range(T) if new[t] == l - 1]
            child = [
                x for x in alive
                if x != c and not any(proj[x][t] == last for t in hot)
            ]
            seq.append(c)
            dfs(new, child)
            seq.pop()

    try:
        dfs(state, alive)
    except _BudgetExhausted:
        return best, best_seq, nodes, False
    return best, best_seq, nodes, True
