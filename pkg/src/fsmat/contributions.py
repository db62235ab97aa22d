"""Counting contributions: k-row windows on which all 2**k patterns appear.

Windows on the same row set must occupy disjoint column intervals, so the
maximum for a fixed row set is an interval-scheduling problem; the greedy
"cut as soon as every pattern has appeared" scan solves it. The exhaustive
``count_contributions_oracle`` exists to check that claim.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import comb

from . import kernels
from .errors import DomainError
from .matrix import Matrix, SimpleMatrix
from .setfamily import Subset

ORACLE_MAX_COLUMNS = 12
ORACLE_MAX_ROWS = 5


@dataclass(frozen=True)
class Contribution:
    rows: Subset
    columns: tuple[int, ...]  # 1-based, ascending, length 2**k


@dataclass(frozen=True)
class ContributionSet:
    k: int
    items: tuple[Contribution, ...]

    def __len__(self) -> int:
        return len(self.items)

    def per_row_set(self) -> dict[Subset, list[tuple[int, ...]]]:
        out: dict[Subset, list[tuple[int, ...]]] = {}
        for item in self.items:
            out.setdefault(item.rows, []).append(item.columns)
        return out


def _check_k(matrix: Matrix, k: int) -> None:
    if not 1 <= k <= matrix.rows:
        raise DomainError(f"k must lie in [1, {matrix.rows}], got {k}")


def _row_chunks(row_sets: list, threads: int) -> list[list]:
    size = max(1, -(-len(row_sets) // threads))
    return [row_sets[i:i + size] for i in range(0, len(row_sets), size)]


def count_contributions(matrix: Matrix, k: int, threads: int = 1) -> tuple[int, ContributionSet]:
    """Maximum number of contributions on k rows, with a witness.

    Works on any matrix (repeated columns allowed); only the windows have to
    be simple. Row sets are independent, so ``threads > 1`` splits them into
    chunks and sums the results; the answer does not depend on ``threads``.
    """
    _check_k(matrix, k)
    m = matrix.rows
    row_sets = list(combinations(range(m), k))
    cols = list(matrix.columns)
    if threads > 1 and len(row_sets) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(
                lambda chunk: kernels.contribution_windows(cols, m, k, chunk),
                _row_chunks(row_sets, threads),
            )
            per_row = [w for part in parts for w in part]
    else:
        per_row = kernels.contribution_windows(cols, m, k, row_sets)
    items = []
    for rows, windows in zip(row_sets, per_row):
        subset = Subset.of(m, (r + 1 for r in rows))
        for w in windows:
            items.append(Contribution(subset, tuple(j + 1 for j in w)))
    return len(items), ContributionSet(k, tuple(items))


def _project(col: int, rows: tuple[int, ...]) -> int:
    return sum(1 << t for t, r in enumerate(rows) if col >> r & 1)


def _max_separated(spans: list[tuple[int, int]]) -> int:
    """Largest family of pairwise separated spans, by exhaustive recursion
    over which span comes next (memoised on the last occupied column)."""
    memo: dict[int, int] = {}

    def best_after(after: int) -> int:
        if after not in memo:
            memo[after] = max(
                (1 + best_after(hi) for lo, hi in spans if lo > after), default=0
            )
        return memo[after]

    return best_after(-1)


def count_contributions_oracle(matrix: Matrix, k: int) -> int:
    """Exhaustive maximum: for every row set, list every simple window
    (every 2**k-subset of columns with distinct restrictions), then search all
    families of pairwise separated windows."""
    _check_k(matrix, k)
    if matrix.n > ORACLE_MAX_COLUMNS or matrix.rows > ORACLE_MAX_ROWS:
        raise DomainError(
            f"oracle limited to n <= {ORACLE_MAX_COLUMNS}, m <= {ORACLE_MAX_ROWS}"
        )
    full = 1 << k
    total = 0
    for rows in combinations(range(matrix.rows), k):
        proj = [_project(c, rows) for c in matrix.columns]
        spans = set()
        for window in combinations(range(matrix.n), full):
            if len({proj[j] for j in window}) == full:
                # separation only looks at the first and last column
                spans.add((window[0], window[-1]))
        total += _max_separated(sorted(spans))
    return total


def pigeonhole_containment_bound(m: int, k: int, l: int) -> int:
    """Contribution count that forces every k x l pattern: some row set then
    carries l consecutive full windows."""
    if not 1 <= k <= m:
        raise DomainError(f"need 1 <= k <= m, got k={k}, m={m}")
    if l < 1:
        raise DomainError("l must be positive")
    return l * comb(m, k)


def forcing_matrix(m: int, k: int, l: int) -> SimpleMatrix:
    """Simple m-row matrix with l consecutive full blocks on rows 1..k.

    Block b lists all 2**k patterns on the first k rows, tagged by b written
    in binary on the remaining rows so columns stay distinct. Needs
    ``l <= 2**(m - k)``.
    """
    if not 1 <= k <= m or not 1 <= l <= 1 << (m - k):
        raise DomainError(f"cannot fit {l} distinct blocks of {k} rows into {m} rows")
    cols = [(b << k) | p for b in range(l) for p in range(1 << k)]
    return SimpleMatrix(m, tuple(cols))


def report(count: int, witness: ContributionSet) -> dict:
    """JSON-ready summary: ``{k, total, per_row_set: [{rows, count, windows}]}``."""
    per_row = [
        {"rows": list(rows.members), "count": len(windows), "windows": [list(w) for w in windows]}
        for rows, windows in witness.per_row_set().items()
    ]
    return {"k": witness.k, "total": count, "per_row_set": per_row}
