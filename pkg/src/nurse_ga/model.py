"""Domain types: shift patterns, nurses, demand, instances and chromosomes."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

SLOTS = 14
DAYS = 7
GRADES = (1, 2, 3)
HOURS_LEVELS = tuple(range(1, 8))

# (day shifts, night shifts) per hours level.
SHIFTS_PER_LEVEL: dict[int, tuple[int, int]] = {
    1: (5, 4),
    2: (4, 3),
    3: (3, 3),
    4: (3, 2),
    5: (2, 2),
    6: (1, 1),
    7: (0, 0),
}

# Weekly working time per hours level, in percent of full time.
HOURS_PERCENT: dict[int, int] = {1: 100, 2: 80, 3: 60, 4: 50, 5: 40, 6: 20, 7: 0}

DAY, NIGHT, EMPTY = "day", "night", "empty"

Range = tuple[int, int] | None


@dataclass(frozen=True)
class ShiftPattern:
    """One week of work: 7 day slots (Sunday first) followed by 7 night slots."""

    index: int
    slots: tuple[int, ...]
    quality: int
    first_day_off: int
    last_day_off: int
    hours_level: int
    kind: str

    @property
    def shifts(self) -> int:
        return sum(self.slots)

    def week_mask(self) -> tuple[int, ...]:
        """Worked flags per weekday, merging the day and night halves."""
        return tuple(self.slots[d] | self.slots[d + DAYS] for d in range(DAYS))


def days_off_bounds(pattern: ShiftPattern | Sequence[int]) -> tuple[int, int]:
    """First and last weekday (1 = Sunday) on which the pattern does not work."""
    slots = pattern.slots if isinstance(pattern, ShiftPattern) else tuple(pattern)
    week = [slots[d] or slots[d + DAYS] for d in range(DAYS)]
    free = [d + 1 for d, worked in enumerate(week) if not worked]
    return free[0], free[-1]


def _block(count: int) -> list[tuple[int, ...]]:
    """All 7-bit weeks with ``count`` worked days, in descending binary order."""
    weeks = [bits for bits in itertools.product((1, 0), repeat=DAYS) if sum(bits) == count]
    return weeks  # product over (1, 0) already yields descending order


class PatternLibrary:
    """The dense, 1-based list of all shift patterns.

    Patterns are grouped into blocks keyed by ``(side, shifts)`` where side is
    ``"day"`` or ``"night"``. Levels are visited in ascending order and each
    level contributes its day block before its night block; a block already
    introduced by a lower level is reused, so shared patterns carry the hours
    level that introduced them.
    """

    def __init__(self, patterns: Sequence[ShiftPattern], blocks: Mapping[tuple[str, int], tuple[int, int]]):
        if not patterns:
            raise ValueError("pattern library is empty")
        self.patterns: tuple[ShiftPattern, ...] = tuple(patterns)
        self.blocks: dict[tuple[str, int], tuple[int, int]] = dict(blocks)
        for pos, pattern in enumerate(self.patterns, start=1):
            if pattern.index != pos:
                raise ValueError(f"pattern indices must be dense from 1; found {pattern.index} at {pos}")

    def __len__(self) -> int:
        return len(self.patterns)

    def __getitem__(self, index: int) -> ShiftPattern:
        if not 1 <= index <= len(self.patterns):
            raise IndexError(f"pattern index {index} outside 1..{len(self.patterns)}")
        return self.patterns[index - 1]

    def __iter__(self):
        return iter(self.patterns)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PatternLibrary) and self.patterns == other.patterns and self.blocks == other.blocks

    __hash__ = None  # type: ignore[assignment]

    def block(self, side: str, shifts: int) -> tuple[int, int]:
        return self.blocks[(side, shifts)]

    def with_qualities(self, qualities: Mapping[int, int]) -> PatternLibrary:
        """Copy of the library with the given pattern qualities replaced."""
        patterns = [
            ShiftPattern(p.index, p.slots, qualities.get(p.index, p.quality), p.first_day_off,
                         p.last_day_off, p.hours_level, p.kind)
            for p in self.patterns
        ]
        return PatternLibrary(patterns, self.blocks)

    @cached_property
    def cover(self) -> np.ndarray:
        """Coverage matrix of shape (m + 1, 14); row 0 is unused padding."""
        matrix = np.zeros((len(self.patterns) + 1, SLOTS), dtype=np.uint8)
        for p in self.patterns:
            matrix[p.index] = p.slots
        return matrix


def enumerate_pattern_library() -> PatternLibrary:
    """Build the full 219-pattern library in its canonical order."""
    patterns: list[ShiftPattern] = []
    blocks: dict[tuple[str, int], tuple[int, int]] = {}
    for level in HOURS_LEVELS:
        for side, shifts in zip((DAY, NIGHT), SHIFTS_PER_LEVEL[level]):
            if (side, shifts) in blocks:
                continue
            start = len(patterns) + 1
            for week in _block(shifts):
                slots = week + (0,) * DAYS if side == DAY else (0,) * DAYS + week
                first, last = days_off_bounds(slots)
                kind = side if shifts else EMPTY
                patterns.append(ShiftPattern(len(patterns) + 1, slots, 0, first, last, level, kind))
            blocks[(side, shifts)] = (start, len(patterns))
    return PatternLibrary(patterns, blocks)


_DEFAULT_LIBRARY: PatternLibrary | None = None


def default_library() -> PatternLibrary:
    """Shared library instance with all qualities at 0."""
    global _DEFAULT_LIBRARY
    if _DEFAULT_LIBRARY is None:
        _DEFAULT_LIBRARY = enumerate_pattern_library()
    return _DEFAULT_LIBRARY


def range_indices(rng: Range) -> range:
    return range(0) if rng is None else range(rng[0], rng[1] + 1)


@dataclass(frozen=True)
class Nurse:
    id: int
    grade: int
    hours_level: int
    shift_preference: int
    wishes: tuple[int, ...]
    day_range: Range
    night_range: Range
    penalties: Mapping[int, int] = field(default_factory=dict)
    prev_last_day_off: int | None = None
    prev_penalty: int | None = None

    def __post_init__(self):
        if self.grade not in GRADES:
            raise ValueError(f"nurse {self.id}: grade {self.grade} not in 1..3")
        if self.hours_level not in HOURS_LEVELS:
            raise ValueError(f"nurse {self.id}: hours level {self.hours_level} not in 1..7")
        if self.shift_preference not in (0, 1, 2):
            raise ValueError(f"nurse {self.id}: shift preference {self.shift_preference} not in 0..2")
        if len(self.wishes) != SLOTS or any(not 0 <= w <= 4 for w in self.wishes):
            raise ValueError(f"nurse {self.id}: wishes must be 14 values in 0..4")
        object.__setattr__(self, "wishes", tuple(int(w) for w in self.wishes))
        object.__setattr__(self, "penalties", dict(self.penalties))

    @property
    def alphabet(self) -> tuple[int, ...]:
        """Legal pattern indices, day range first."""
        return tuple(range_indices(self.day_range)) + tuple(range_indices(self.night_range))

    def __hash__(self) -> int:
        return hash((self.id, self.grade, self.hours_level, self.alphabet))


def legal_ranges(nurse: Nurse | int, library: PatternLibrary) -> tuple[Range, Range]:
    """Day and night index intervals matching a nurse's hours level."""
    if len(library) == 0:
        raise ValueError("pattern library is empty")
    level = nurse.hours_level if isinstance(nurse, Nurse) else int(nurse)
    days, nights = SHIFTS_PER_LEVEL[level]
    return library.block(DAY, days), library.block(NIGHT, nights)


def restrict_by_previous_week(nurse: Nurse, ranges: tuple[Range, Range], library: PatternLibrary) -> tuple[Range, Range]:
    """Drop patterns whose first day off comes after last week's last day off.

    Because blocks are ordered by descending bits, the surviving patterns of a
    block always form a suffix, so the result is again a pair of intervals.
    Falls back to ``ranges`` with a warning if nothing would survive.
    """
    if nurse.prev_last_day_off is None:
        return ranges
    limit = nurse.prev_last_day_off
    restricted: list[Range] = []
    for rng in ranges:
        kept = [j for j in range_indices(rng) if library[j].first_day_off <= limit]
        if kept and kept != list(range(kept[0], kept[-1] + 1)):
            raise AssertionError("restricted range is not contiguous")
        restricted.append((kept[0], kept[-1]) if kept else None)
    if restricted[0] is None and restricted[1] is None:
        warnings.warn(
            f"nurse {nurse.id}: no pattern satisfies the rest rule; keeping the unrestricted ranges",
            RuntimeWarning,
            stacklevel=2,
        )
        return ranges
    return restricted[0], restricted[1]


@dataclass(frozen=True)
class DemandTable:
    """Minimum staffing per slot (rows, 14) and grade (columns, 3)."""

    required: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in np.asarray(self.required).tolist())
        if len(rows) != SLOTS or any(len(r) != 3 for r in rows):
            raise ValueError("demand table must be 14 x 3")
        if any(v < 0 for r in rows for v in r):
            raise ValueError("demand entries must be non-negative")
        object.__setattr__(self, "required", rows)

    @classmethod
    def from_grade_rows(cls, rows: Sequence[Sequence[int]]) -> DemandTable:
        """Build from 3 rows (grades) of 14 slot values, the printed layout."""
        return cls(tuple(zip(*rows)))

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.required, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    def __getitem__(self, key: tuple[int, int]) -> int:
        """Demand for 1-based ``(slot, grade)``."""
        slot, grade = key
        return self.required[slot - 1][grade - 1]


@dataclass(frozen=True, eq=False)
class Instance:
    """A complete weekly rostering problem."""

    nurses: tuple[Nurse, ...]
    library: PatternLibrary
    demand: DemandTable
    senior_flags: tuple[bool, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "nurses", tuple(self.nurses))
        if not self.nurses:
            raise ValueError("instance has no nurses")
        grades = [n.grade for n in self.nurses]
        if grades != sorted(grades):
            raise ValueError("nurses must be grouped by grade, grade 1 first")
        if self.senior_flags is not None:
            flags = tuple(bool(f) for f in self.senior_flags)
            if len(flags) != len(self.nurses):
                raise ValueError("senior flags must have one entry per nurse")
            object.__setattr__(self, "senior_flags", flags)
        for nurse in self.nurses:
            _validate_nurse_against_library(nurse, self.library)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.nurses == other.nurses
            and self.library == other.library
            and self.demand == other.demand
            and self.senior_flags == other.senior_flags
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def size(self) -> int:
        return len(self.nurses)

    @cached_property
    def grades(self) -> np.ndarray:
        return np.array([n.grade for n in self.nurses], dtype=np.int8)

    @cached_property
    def seniors(self) -> np.ndarray:
        flags = self.senior_flags or (False,) * self.size
        return np.array(flags, dtype=np.uint8)

    @cached_property
    def alphabets(self) -> tuple[np.ndarray, ...]:
        return tuple(np.array(n.alphabet, dtype=np.int64) for n in self.nurses)

    @cached_property
    def alphabet_table(self) -> tuple[np.ndarray, np.ndarray]:
        """Padded (n, max size) alphabet matrix and the per-nurse sizes."""
        sizes = np.array([len(a) for a in self.alphabets], dtype=np.int64)
        table = np.zeros((self.size, int(sizes.max())), dtype=np.int64)
        for i, alpha in enumerate(self.alphabets):
            table[i, : len(alpha)] = alpha
        return table, sizes

    @cached_property
    def search_space(self) -> int:
        return int(np.prod([len(a) for a in self.alphabets], dtype=object))

    def penalty_matrix(self, prev_week_threshold: int | None = None) -> np.ndarray:
        """Penalty of every (nurse, pattern) pair as an (n, m + 1) array.

        Last week's penalty is added to the whole row of a nurse whose carried
        penalty reaches ``prev_week_threshold``. Illegal cells hold a large
        sentinel so that they can never look attractive.
        """
        cache = self.__dict__.setdefault("_penalty_cache", {})
        if prev_week_threshold in cache:
            return cache[prev_week_threshold]
        matrix = np.full((self.size, len(self.library) + 1), 10**9, dtype=np.int64)
        for i, nurse in enumerate(self.nurses):
            carry = 0
            if (
                prev_week_threshold is not None
                and nurse.prev_penalty is not None
                and nurse.prev_penalty >= prev_week_threshold
            ):
                carry = nurse.prev_penalty
            for j, cost in nurse.penalties.items():
                matrix[i, j] = cost + carry
        matrix.setflags(write=False)
        cache[prev_week_threshold] = matrix
        return matrix


def _validate_nurse_against_library(nurse: Nurse, library: PatternLibrary) -> None:
    days, nights = SHIFTS_PER_LEVEL[nurse.hours_level]
    for rng, side, shifts in ((nurse.day_range, DAY, days), (nurse.night_range, NIGHT, nights)):
        if rng is None:
            continue
        lo, hi = library.block(side, shifts)
        if not lo <= rng[0] <= rng[1] <= hi:
            raise ValueError(
                f"nurse {nurse.id}: {side} range {rng[0]}..{rng[1]} is outside the "
                f"hours-level-{nurse.hours_level} block {lo}..{hi}"
            )
    if not nurse.alphabet:
        raise ValueError(f"nurse {nurse.id}: no legal pattern")
    if set(nurse.penalties) != set(nurse.alphabet):
        raise ValueError(f"nurse {nurse.id}: penalties must cover exactly the legal patterns")
    bad = [j for j, v in nurse.penalties.items() if not 0 <= v <= 100]
    if bad:
        raise ValueError(f"nurse {nurse.id}: penalty for pattern {bad[0]} outside 0..100")


class Chromosome:
    """One pattern index per nurse plus cached evaluation results."""

    __slots__ = ("genes", "cached_pref", "cached_shortfall", "cached_segment_fitness", "lives")

    def __init__(
        self,
        genes: Iterable[int],
        cached_pref: int | None = None,
        cached_shortfall: int | None = None,
        cached_segment_fitness: tuple[int | None, ...] | None = None,
        lives: int = 3,
    ):
        self.genes = np.array(list(genes) if not isinstance(genes, np.ndarray) else genes, dtype=np.int64)
        self.cached_pref = cached_pref
        self.cached_shortfall = cached_shortfall
        self.cached_segment_fitness = cached_segment_fitness
        self.lives = lives

    def __len__(self) -> int:
        return len(self.genes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Chromosome):
            return NotImplemented
        return np.array_equal(self.genes, other.genes)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Chromosome({self.genes.tolist()})"

    def copy(self) -> Chromosome:
        return Chromosome(
            self.genes.copy(), self.cached_pref, self.cached_shortfall, self.cached_segment_fitness, self.lives
        )

    def is_legal(self, instance: Instance) -> bool:
        return len(self.genes) == instance.size and all(
            int(g) in nurse.alphabet for g, nurse in zip(self.genes, instance.nurses)
        )


def as_rng(rng: np.random.Generator | int | None) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def random_genes(instance: Instance, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` rows of genes, each drawn uniformly from the nurse's alphabet."""
    table, sizes = instance.alphabet_table
    picks = (rng.random((count, instance.size)) * sizes).astype(np.int64)
    return table[np.arange(instance.size), picks]


def random_chromosome(instance: Instance, rng: np.random.Generator | int | None) -> Chromosome:
    return Chromosome(random_genes(instance, 1, as_rng(rng))[0])
