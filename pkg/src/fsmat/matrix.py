"""(0,1)-matrices stored column-wise as bitmasks, and induced containment.

Column ``j`` of an ``m``-row matrix is an int whose bit ``i - 1`` is the
entry in row ``i``; this is exactly the indicator of the column's set, so a
simple matrix and its associated family share one representation.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

from . import kernels
from .errors import DomainError, NotSimpleError, ParseError
from .setfamily import MAX_GROUND, SetFamily, Subset

MAX_PATTERN_ROWS = 16


def _cols_from_rows(rows: Sequence[str]) -> tuple[int, ...]:
    n = len(rows[0]) if rows else 0
    cols = [0] * n
    for i, row in enumerate(rows):
        if len(row) != n:
            raise DomainError("rows have different lengths")
        for j, ch in enumerate(row):
            if ch == "1":
                cols[j] |= 1 << i
            elif ch != "0":
                raise DomainError(f"entry {ch!r} is not 0 or 1")
    return tuple(cols)


def _rows_from_cols(cols: Sequence[int], m: int) -> list[str]:
    return ["".join("1" if c >> i & 1 else "0" for c in cols) for i in range(m)]


@dataclass(frozen=True)
class Matrix:
    """Any (0,1)-matrix; repeated columns are allowed and flagged by ``is_simple``."""

    rows: int
    columns: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= self.rows <= MAX_GROUND:
            raise DomainError(f"row count must lie in [0, {MAX_GROUND}]")
        object.__setattr__(self, "columns", tuple(self.columns))
        for c in self.columns:
            if c < 0 or c >> self.rows:
                raise DomainError(f"column value {c} does not fit in {self.rows} rows")

    @classmethod
    def from_rows(cls, rows: Sequence[str]):
        rows = list(rows)
        return cls(len(rows), _cols_from_rows(rows))

    @property
    def n(self) -> int:
        return len(self.columns)

    @property
    def is_simple(self) -> bool:
        return len(set(self.columns)) == len(self.columns)

    def duplicate_columns(self) -> tuple[int, int] | None:
        """First pair of equal columns (1-based), or None."""
        seen: dict[int, int] = {}
        for j, c in enumerate(self.columns, start=1):
            if c in seen:
                return seen[c], j
            seen[c] = j
        return None

    def entry(self, i: int, j: int) -> int:
        return self.columns[j - 1] >> (i - 1) & 1

    def to_rows(self) -> list[str]:
        return _rows_from_cols(self.columns, self.rows)

    def to_text(self) -> str:
        return "\n".join([f"m={self.rows} n={self.n}", *self.to_rows()]) + "\n"

    @classmethod
    def from_text(cls, text: str):
        m, n, rows = _parse_grid(text, ("m", "n"))
        return cls(m, _cols_from_rows(rows) if n else ())


class SimpleMatrix(Matrix):
    """A matrix whose columns are pairwise distinct."""

    def __post_init__(self):
        super().__post_init__()
        dup = self.duplicate_columns()
        if dup:
            raise NotSimpleError(f"matrix is not simple: columns {dup[0]} and {dup[1]} are equal")

    @classmethod
    def from_family(cls, family: SetFamily) -> SimpleMatrix:
        """Columns are the family's sets in lexicographic order."""
        return cls(family.ground_size, tuple(family.sorted_masks()))


def require_simple(matrix: Matrix) -> SimpleMatrix:
    if isinstance(matrix, SimpleMatrix):
        return matrix
    return SimpleMatrix(matrix.rows, matrix.columns)


@dataclass(frozen=True)
class Pattern:
    """The forbidden k x l matrix; repeated columns allowed, order matters."""

    rows: int
    columns: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.rows <= MAX_PATTERN_ROWS:
            raise DomainError(f"pattern must have between 1 and {MAX_PATTERN_ROWS} rows")
        object.__setattr__(self, "columns", tuple(self.columns))
        if not self.columns:
            raise DomainError("pattern must have at least one column")
        for c in self.columns:
            if c < 0 or c >> self.rows:
                raise DomainError(f"pattern column {c} does not fit in {self.rows} rows")

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> Pattern:
        rows = list(rows)
        return cls(len(rows), _cols_from_rows(rows))

    @property
    def width(self) -> int:
        return len(self.columns)

    def to_rows(self) -> list[str]:
        return _rows_from_cols(self.columns, self.rows)

    def rows_identical(self) -> bool:
        return len(set(self.to_rows())) == 1

    def to_text(self) -> str:
        return "\n".join([f"k={self.rows} l={self.width}", *self.to_rows()]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Pattern:
        k, l, rows = _parse_grid(text, ("k", "l"))
        try:
            return cls.from_rows(rows)
        except DomainError as exc:
            raise ParseError(str(exc)) from None

    def __str__(self) -> str:
        return "[" + " / ".join(self.to_rows()) + "]"


def all_patterns(k: int, l: int) -> Iterator[Pattern]:
    for cols in product(range(1 << k), repeat=l):
        yield Pattern(k, cols)


def _parse_grid(text: str, keys: tuple[str, str]) -> tuple[int, int, list[str]]:
    lines = text.splitlines()
    a, b = keys
    header = re.fullmatch(rf"\s*{a}=(\d+)\s+{b}=(\d+)\s*", lines[0]) if lines else None
    if header is None:
        raise ParseError(f"expected header '{a}=<int> {b}=<int>'", 1)
    h, w = int(header.group(1)), int(header.group(2))
    if h > MAX_GROUND:
        raise ParseError(f"{a}={h} exceeds {MAX_GROUND}", 1)
    body = lines[1:]
    while len(body) > h and not body[-1].strip():
        body.pop()
    if len(body) != h and not (w == 0 and len(body) < h):
        raise ParseError(f"expected {h} rows, found {len(body)}", min(len(lines), h + 2))
    rows = []
    for lineno, raw in enumerate(body, start=2):
        row = raw.strip()
        if len(row) != w:
            raise ParseError(f"expected {w} entries, found {len(row)}", lineno)
        bad = set(row) - {"0", "1"}
        if bad:
            raise ParseError(f"entries must be 0 or 1, found {sorted(bad)[0]!r}", lineno)
        rows.append(row)
    if w == 0:
        rows = [""] * h
    return h, w, rows


def associated_family(matrix: Matrix) -> SetFamily:
    m = require_simple(matrix)
    return SetFamily.from_masks(m.rows, m.columns)


def submatrix(matrix: Matrix, rows: Subset, cols: Iterable[int]) -> Matrix:
    """Restrict to the rows in ``rows`` (ascending) and the 1-based columns ``cols``
    (original order). The result need not be simple."""
    if rows.ground_size != matrix.rows:
        raise DomainError("row set ground size differs from matrix row count")
    cols = sorted(set(cols))
    for j in cols:
        if not 1 <= j <= matrix.n:
            raise DomainError(f"column index {j} outside [1, {matrix.n}]")
    keep = [i - 1 for i in rows.members]
    out = []
    for j in cols:
        c = matrix.columns[j - 1]
        p = 0
        for t, r in enumerate(keep):
            if c >> r & 1:
                p |= 1 << t
        out.append(p)
    return Matrix(len(keep), tuple(out))


def contains(matrix: Matrix, pattern: Pattern) -> bool:
    """Whether ``pattern`` is an order-preserving induced submatrix of ``matrix``."""
    return kernels.contains_cols(list(matrix.columns), matrix.rows, list(pattern.columns), pattern.rows)


def concatenate(left: Matrix, right: Matrix) -> tuple[Matrix, bool]:
    """Columns of ``left`` then ``right``; the flag says whether the result is simple."""
    if left.rows != right.rows:
        raise DomainError(f"row counts differ: {left.rows} vs {right.rows}")
    out = Matrix(left.rows, left.columns + right.columns)
    simple = out.is_simple
    return (SimpleMatrix(out.rows, out.columns) if simple else out), simple

