"""Families of subsets of a ground set {1, ..., m}.

Subsets are stored as machine-word bitmasks (bit ``i - 1`` for element
``i``), which caps the ground set at 63 elements. Everything here is an
immutable value; operations return new objects.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator

from . import kernels
from .errors import DomainError, ParseError

MAX_GROUND = 63


def _check_ground(m: int) -> None:
    if not 0 <= m <= MAX_GROUND:
        raise DomainError(f"ground set size must lie in [0, {MAX_GROUND}], got {m}")


def members_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def mask_of(members: Iterable[int]) -> int:
    mask = 0
    for i in members:
        mask |= 1 << (i - 1)
    return mask


def lex_key(mask: int) -> tuple[int, ...]:
    """Sort key: sets compare as their ascending member tuples."""
    return members_of(mask)


@functools.total_ordering
@dataclass(frozen=True)
class Subset:
    ground_size: int
    mask: int = 0

    def __post_init__(self):
        _check_ground(self.ground_size)
        if self.mask < 0 or self.mask >> self.ground_size:
            raise DomainError(f"members outside [1, {self.ground_size}]")

    @classmethod
    def of(cls, ground_size: int, members: Iterable[int] = ()) -> Subset:
        members = list(members)
        for i in members:
            if not 1 <= i <= ground_size:
                raise DomainError(f"element {i} outside [1, {ground_size}]")
        return cls(ground_size, mask_of(members))

    @classmethod
    def full(cls, ground_size: int) -> Subset:
        _check_ground(ground_size)
        return cls(ground_size, (1 << ground_size) - 1)

    @property
    def members(self) -> tuple[int, ...]:
        return members_of(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, i: int) -> bool:
        return 1 <= i <= self.ground_size and bool(self.mask >> (i - 1) & 1)

    def __lt__(self, other: Subset) -> bool:
        return (self.ground_size, self.members) < (other.ground_size, other.members)

    def __and__(self, other: Subset) -> Subset:
        return Subset(self.ground_size, self.mask & other.mask)

    def __or__(self, other: Subset) -> Subset:
        return Subset(self.ground_size, self.mask | other.mask)

    def issubset(self, other: Subset) -> bool:
        return self.mask & ~other.mask == 0

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"


@dataclass(frozen=True)
class SetFamily:
    ground_size: int
    masks: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        _check_ground(self.ground_size)
        object.__setattr__(self, "masks", frozenset(self.masks))
        for a in self.masks:
            if a < 0 or a >> self.ground_size:
                raise DomainError(f"set {members_of(a)} not inside [1, {self.ground_size}]")

    @classmethod
    def from_masks(cls, ground_size: int, masks: Iterable[int]) -> SetFamily:
        masks = list(masks)
        fam = cls(ground_size, frozenset(masks))
        if len(fam.masks) != len(masks):
            raise DomainError("duplicate sets in family")
        return fam

    @classmethod
    def from_sets(cls, ground_size: int, sets: Iterable[Iterable[int] | Subset]) -> SetFamily:
        masks = []
        for s in sets:
            if isinstance(s, Subset):
                if s.ground_size != ground_size:
                    raise DomainError("subset ground size differs from family ground size")
                masks.append(s.mask)
            else:
                masks.append(Subset.of(ground_size, s).mask)
        return cls.from_masks(ground_size, masks)

    @classmethod
    def power_set(cls, ground_size: int) -> SetFamily:
        _check_ground(ground_size)
        return cls(ground_size, frozenset(range(1 << ground_size)))

    def sorted_masks(self) -> list[int]:
        return sorted(self.masks, key=lex_key)

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[Subset]:
        return (Subset(self.ground_size, a) for a in self.sorted_masks())

    def __contains__(self, s) -> bool:
        if isinstance(s, Subset):
            return s.ground_size == self.ground_size and s.mask in self.masks
        return mask_of(s) in self.masks

    def level(self, size: int) -> SetFamily:
        return SetFamily(self.ground_size, frozenset(a for a in self.masks if a.bit_count() == size))

    @property
    def size_sum(self) -> int:
        """Total of the set sizes; strictly drops on every effective compression."""
        return sum(a.bit_count() for a in self.masks)

    def is_down_family(self) -> bool:
        return all(a & ~(1 << i) in self.masks for a in self.masks for i in range(self.ground_size) if a >> i & 1)

    def as_lists(self) -> list[list[int]]:
        return [list(members_of(a)) for a in self.sorted_masks()]

    def __str__(self) -> str:
        return "{" + ", ".join(str(s) for s in self) + "}"

    # -- text format ------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"m={self.ground_size}"]
        for a in self.sorted_masks():
            lines.append(",".join(map(str, members_of(a))) if a else "-")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> SetFamily:
        lines = text.splitlines()
        if not lines or not lines[0].strip().startswith("m="):
            raise ParseError("expected header 'm=<int>'", 1)
        try:
            m = int(lines[0].strip()[2:])
        except ValueError:
            raise ParseError(f"bad ground size in header {lines[0]!r}", 1) from None
        if not 0 <= m <= MAX_GROUND:
            raise ParseError(f"ground size {m} outside [0, {MAX_GROUND}]", 1)
        seen: set[int] = set()
        for lineno, raw in enumerate(lines[1:], start=2):
            line = raw.strip()
            if not line:
                continue
            if line == "-":
                mask = 0
            else:
                mask = 0
                for tok in line.split(","):
                    tok = tok.strip()
                    if not tok.isdigit():
                        raise ParseError(f"bad element {tok!r}", lineno)
                    i = int(tok)
                    if not 1 <= i <= m:
                        raise ParseError(f"element {i} outside [1, {m}]", lineno)
                    if mask >> (i - 1) & 1:
                        raise ParseError(f"element {i} repeated", lineno)
                    mask |= 1 << (i - 1)
            if mask in seen:
                raise ParseError(f"duplicate set {line!r}", lineno)
            seen.add(mask)
        return cls(m, frozenset(seen))


def _check_index(i: int, m: int) -> None:
    if not 1 <= i <= m:
        raise DomainError(f"element index {i} outside [1, {m}]")


def compress_element(a: Subset, i: int) -> Subset:
    _check_index(i, a.ground_size)
    return Subset(a.ground_size, a.mask & ~(1 << (i - 1)))


def compress_family(family: SetFamily, i: int) -> SetFamily:
    """Shift every set down at ``i`` unless its shift is already a member."""
    _check_index(i, family.ground_size)
    out = kernels.compress_masks(list(family.masks), 1 << (i - 1))
    return SetFamily.from_masks(family.ground_size, out)


def compression_steps(family: SetFamily) -> Iterator[tuple[int, SetFamily]]:
    """Yield ``(i, family)`` after each compression that changes the family.

    Sweeps i = 1..m until a full sweep is stable; the last family yielded (or
    the input, if nothing moves) is the down-closure.
    """
    cur = family
    changed = True
    while changed:
        changed = False
        for i in range(1, family.ground_size + 1):
            nxt = compress_family(cur, i)
            if nxt != cur:
                changed = True
                cur = nxt
                yield i, cur


def down_close(family: SetFamily) -> SetFamily:
    out = kernels.down_close_masks(list(family.masks), family.ground_size)
    return SetFamily.from_masks(family.ground_size, out)


def trace(family: SetFamily, s: Subset) -> SetFamily:
    if s.ground_size != family.ground_size:
        raise DomainError("trace set and family have different ground sizes")
    return SetFamily(family.ground_size, frozenset(a & s.mask for a in family.masks))


def trace_size(family: SetFamily, s: Subset) -> int:
    if s.ground_size != family.ground_size:
        raise DomainError("trace set and family have different ground sizes")
    return kernels.trace_size(list(family.masks), s.mask)


def shattered_sets(family: SetFamily, k: int) -> list[Subset]:
    """All k-subsets S with a full trace (|S ∩ family| = 2**k), lex order."""
    m = family.ground_size
    if not 0 <= k <= m:
        raise DomainError(f"k must lie in [0, {m}], got {k}")
    return [Subset(m, s) for s in kernels.shattered_masks(list(family.masks), m, k)]


def sauer_shelah_threshold(m: int, k: int) -> int:
    """Smallest family size that forces a shattered k-set."""
    return sum(comb(m, i) for i in range(k)) + 1


def support(family: SetFamily) -> Subset:
    mask = 0
    for a in family.masks:
        mask |= a
    return Subset(family.ground_size, mask)


@dataclass(frozen=True)
class PeelingTranscript:
    """Record of a support-cover peeling run.

    ``x_sequence`` holds X_0 .. X_r, ``cover_layers`` R_1 .. R_r and
    ``residuals`` the family sizes |F_0| .. |F_r|.
    """

    ground_size: int
    rounds: int
    x_sequence: tuple[Subset, ...]
    cover_layers: tuple[SetFamily, ...]
    residuals: tuple[int, ...]
    degenerate: bool = False
    empty_support_stop: bool = False

    @property
    def final_x(self) -> Subset:
        return self.x_sequence[-1]


def greedy_cover(family_masks: Iterable[int], target: int) -> list[int]:
    """Greedy set cover of ``target``: most newly covered elements first,
    ties to the lexicographically smallest set."""
    candidates = sorted(family_masks, key=lex_key)
    uncovered = target
    chosen: list[int] = []
    while uncovered:
        best, gain = None, 0
        for a in candidates:
            g = (a & uncovered).bit_count()
            if g > gain:
                best, gain = a, g
        if best is None:
            raise DomainError("target is not covered by the family")
        chosen.append(best)
        uncovered &= ~best
    return chosen


def support_cover_peeling(family: SetFamily, stop_threshold: int) -> PeelingTranscript:
    """Repeatedly strip a small cover of the current support off the family.

    Stops once fewer than ``stop_threshold`` sets remain. A round whose
    support would be empty cannot shrink the family, so it also stops there.
    """
    if stop_threshold < 1:
        raise DomainError("stop_threshold must be at least 1")
    m = family.ground_size
    xs = [Subset.full(m)]
    layers: list[SetFamily] = []
    residuals = [len(family)]
    current = set(family.masks)
    empty_stop = False
    while len(current) >= stop_threshold:
        x = 0
        for a in current:
            x |= a
        if x == 0:
            empty_stop = True
            break
        layer = greedy_cover(current, x)
        xs.append(Subset(m, x))
        layers.append(SetFamily.from_masks(m, layer))
        current.difference_update(layer)
        residuals.append(len(current))
    return PeelingTranscript(
        ground_size=m,
        rounds=len(layers),
        x_sequence=tuple(xs),
        cover_layers=tuple(layers),
        residuals=tuple(residuals),
        degenerate=not layers,
        empty_support_stop=empty_stop,
    )


def nested_pair_count(family: SetFamily, a: int, k: int) -> int:
    """Number of pairs (Z1, Z2) with |Z1| = a, |Z2| = k, Z1 ⊆ Z2, both in the family."""
    if not 1 <= a <= k <= family.ground_size:
        raise DomainError(f"need 1 <= a <= k <= {family.ground_size}, got a={a}, k={k}")
    small = [z for z in family.masks if z.bit_count() == a]
    big = [z for z in family.masks if z.bit_count() == k]
    return sum(1 for z2 in big for z1 in small if z1 & ~z2 == 0)
