"""Exact fs(m, F) by branch and bound over ordered column sequences.

Containment is monotone under appending columns, so the search grows
F-avoiding prefixes left to right. A column whose addition right after the
current prefix would complete F can never be used deeper in that subtree;
the number of surviving columns bounds how far the prefix can still grow.
"""
from __future__ import annotations

import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import permutations

from . import kernels
from .errors import BudgetExhausted, DomainError
from .matrix import Matrix, Pattern, SimpleMatrix, contains

FS_MAX_ROWS = 8
NAIVE_MAX_ROWS = 3
DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class ExtremalResult:
    m: int
    pattern: Pattern
    value: int
    witness: SimpleMatrix
    nodes_explored: int
    wall_time: float
    threads: int = 1
    canonicalize: bool = False
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "pattern": self.pattern.to_rows(),
            "value": self.value,
            "witness": self.witness.to_rows(),
            "nodes_explored": self.nodes_explored,
            "wall_time": self.wall_time,
            "threads": self.threads,
            "canonicalize": self.canonicalize,
            "seed": self.seed,
        }


def _check(m: int, pattern: Pattern, limit: int) -> None:
    if not 0 <= m <= limit:
        raise DomainError(f"m must lie in [0, {limit}] for this search, got {m}")
    if pattern.width > 254:
        raise DomainError("pattern too wide")


def fs_lower_bound_greedy(m: int, pattern: Pattern, seed: int = 0) -> SimpleMatrix:
    """Append columns in a seeded random order, keeping each one that does not
    create F. A rejected column stays rejected, so one pass is maximal."""
    _check(m, pattern, FS_MAX_ROWS)
    order = list(range(1 << m))
    random.Random(seed).shuffle(order)
    pcols = list(pattern.columns)
    seq: list[int] = []
    for c in order:
        if not kernels.contains_cols(seq + [c], m, pcols, pattern.rows):
            seq.append(c)
    return SimpleMatrix(m, tuple(seq))


def canonical_first_columns(m: int) -> list[int]:
    """One representative per row-permutation class of a single column: the
    column with p ones packed into the last p rows."""
    full = (1 << m) - 1
    return sorted(full ^ ((1 << (m - p)) - 1) for p in range(m + 1))


def fs_exact(
    m: int,
    pattern: Pattern,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    canonicalize: bool = False,
    seed: int = 0,
) -> ExtremalResult:
    """Exact fs(m, pattern) with a witness.

    The subtrees below each possible first column are independent tasks
    sharing one incumbent; with ``threads > 1`` they run concurrently and may
    read a stale incumbent, which only weakens pruning. Raises
    :class:`BudgetExhausted` (carrying lower and upper bounds) when more than
    ``budget`` nodes would be needed. ``canonicalize`` fixes the first column
    up to row permutation and is only allowed when all rows of the pattern
    are equal, the case in which containment ignores row order.
    """
    _check(m, pattern, FS_MAX_ROWS)
    if budget <= 0:
        raise DomainError("budget must be positive")
    if canonicalize and not pattern.rows_identical():
        raise DomainError("row canonicalization needs a pattern whose rows are all equal")
    t0 = time.perf_counter()
    pcols = list(pattern.columns)
    k = pattern.rows

    incumbent = fs_lower_bound_greedy(m, pattern, seed)
    best_len = incumbent.n
    best_seq = list(incumbent.columns)
    root_alive = kernels.alive_after(m, pcols, k, [])
    roots = root_alive
    if canonicalize:
        canon = set(canonical_first_columns(m))
        roots = [c for c in root_alive if c in canon]

    lock = threading.Lock()
    nodes = 1
    unfinished: list[int] = []
    exhausted = budget <= 1

    def run(c: int) -> None:
        nonlocal best_len, best_seq, nodes, exhausted
        with lock:
            if exhausted or len(root_alive) <= best_len:
                if exhausted:
                    unfinished.append(c)
                return
            bound, remaining = best_len, budget - nodes
        got, seq, used, done = kernels.fs_subtree(m, pcols, k, [c], bound, remaining)
        with lock:
            nodes += used
            if seq is not None and got > best_len:
                best_len, best_seq = got, seq
            if not done:
                exhausted = True
                unfinished.append(c)

    if threads > 1 and len(roots) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, roots))
    else:
        for c in roots:
            run(c)

    if exhausted:
        upper = best_len
        for c in unfinished:
            upper = max(upper, 1 + len(kernels.alive_after(m, pcols, k, [c])))
        raise BudgetExhausted(best_len, min(upper, len(root_alive)), nodes,
                              SimpleMatrix(m, tuple(best_seq)))

    witness = SimpleMatrix(m, tuple(best_seq))
    assert not contains(witness, pattern)
    return ExtremalResult(
        m=m,
        pattern=pattern,
        value=best_len,
        witness=witness,
        nodes_explored=nodes,
        wall_time=time.perf_counter() - t0,
        threads=threads,
        canonicalize=canonicalize,
        seed=seed,
    )


def fs_naive(m: int, pattern: Pattern) -> int:
    """fs by brute force: try every ordered sequence of distinct columns,
    longest first, until one avoids the pattern."""
    _check(m, pattern, NAIVE_MAX_ROWS)
    columns = range(1 << m)
    for length in range(1 << m, -1, -1):
        for seq in permutations(columns, length):
            if not contains(Matrix(m, seq), pattern):
                return length
    raise AssertionError("the empty matrix avoids every pattern")
