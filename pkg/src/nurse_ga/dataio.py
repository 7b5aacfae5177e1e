"""Reading and writing instance files, penalty synthesis, roster text and LP export.

Every input file is a whitespace-separated integer table preceded by a header
line naming the table. Blank lines and lines starting with ``#`` are ignored.

``demand``
    3 rows (grades 1..3) of 14 values (day slots Sunday..Saturday, then night slots).
``qualifications``
    rows of grade, hours level and shift preference, one column per nurse; an
    optional fourth row holds senior flags (0/1).
``wishes``
    one row per nurse: nurse index followed by 14 wish values.
``patterns``
    one row per pattern: index, 14 slots, quality, first day off, last day off,
    hours percent. May list any subset of the library.
``penalties``
    per nurse: its index, the range line ``day_lo day_hi night_lo night_hi``
    (``0 0`` marks an empty range), then the penalties of every day pattern
    followed by every night pattern, wrapped over any number of lines.
``previous``
    optional; one row per nurse: index, last day off of last week's pattern,
    penalty of last week's pattern.
"""

from __future__ import annotations

import io
import os
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import IO, Iterator, Mapping, TextIO

from .fitness import FitnessWeights, coverage_shortfall, preference_cost, total_fitness
from .model import (
    DAY,
    HOURS_PERCENT,
    NIGHT,
    SLOTS,
    Chromosome,
    DemandTable,
    Instance,
    Nurse,
    PatternLibrary,
    Range,
    days_off_bounds,
    enumerate_pattern_library,
    legal_ranges,
    range_indices,
    restrict_by_previous_week,
)

Source = str | os.PathLike | TextIO

FILE_NAMES = {
    "demand": "demand.txt",
    "qualifications": "qualifications.txt",
    "wishes": "wishes.txt",
    "patterns": "patterns.txt",
    "penalties": "penalties.txt",
    "previous": "previous.txt",
}

DAY_NAMES = ("Su", "Mo", "Tu", "We", "Th", "Fr", "Sa")


class DataError(ValueError):
    """Malformed input, reported with file, line and field."""

    def __init__(self, source: str, line: int | None, field: str, message: str):
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {field}: {message}")
        self.source = source
        self.line = line
        self.field = field


@dataclass(frozen=True)
class PenaltySynthesisConfig:
    quality_weight: int = 1
    wish_weight: int = 1
    cross_kind_surcharge: int = 18
    clamp_max: int = 100

    def __post_init__(self):
        if min(self.quality_weight, self.wish_weight, self.cross_kind_surcharge) < 0:
            raise ValueError("synthesis weights must be non-negative")
        if not 0 <= self.clamp_max <= 100:
            raise ValueError("clamp_max must lie in 0..100")


# --------------------------------------------------------------------------- reading


@dataclass
class _Table:
    name: str
    source: str
    rows: list[tuple[int, list[int]]]  # (line number, values)

    def tokens(self) -> Iterator[tuple[int, int]]:
        for line, values in self.rows:
            for value in values:
                yield line, value


def _read_text(source: Source) -> tuple[str, str]:
    if hasattr(source, "read"):
        return source.read(), getattr(source, "name", "<stream>")
    path = Path(source)
    return path.read_text(), str(path)


def _read_table(source: Source, expected: str) -> _Table:
    text, name = _read_text(source)
    rows: list[tuple[int, list[int]]] = []
    header_seen = False
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if line.lower() != expected:
                raise DataError(name, number, "header", f"expected '{expected}', found '{line}'")
            header_seen = True
            continue
        values = []
        for pos, token in enumerate(line.split(), start=1):
            try:
                values.append(int(token))
            except ValueError:
                raise DataError(name, number, f"column {pos}", f"'{token}' is not an integer") from None
        rows.append((number, values))
    if not header_seen:
        raise DataError(name, None, "header", f"missing '{expected}' header")
    return _Table(expected, name, rows)


def _check_range(table: _Table, line: int, field: str, value: int, lo: int, hi: int) -> int:
    if not lo <= value <= hi:
        raise DataError(table.source, line, field, f"value {value} outside {lo}..{hi}")
    return value


def read_demand(source: Source) -> DemandTable:
    table = _read_table(source, "demand")
    if len(table.rows) != 3:
        raise DataError(table.source, None, "rows", f"expected 3 grade rows, found {len(table.rows)}")
    rows = []
    for grade, (line, values) in enumerate(table.rows, start=1):
        if len(values) != SLOTS:
            raise DataError(table.source, line, f"grade {grade}", f"expected 14 columns, found {len(values)}")
        for k, v in enumerate(values, start=1):
            _check_range(table, line, f"grade {grade} slot {k}", v, 0, 10**6)
        rows.append(values)
    return DemandTable.from_grade_rows(rows)


def read_qualifications(source: Source) -> tuple[list[tuple[int, int, int]], tuple[bool, ...] | None]:
    """Per-nurse ``(grade, hours level, preference)`` and optional senior flags."""
    table = _read_table(source, "qualifications")
    if len(table.rows) not in (3, 4):
        raise DataError(table.source, None, "rows", f"expected 3 or 4 rows, found {len(table.rows)}")
    width = len(table.rows[0][1])
    for line, values in table.rows:
        if len(values) != width:
            raise DataError(table.source, line, "columns", f"expected {width} nurses, found {len(values)}")
    names = ("grade", "hours level", "shift preference", "senior flag")
    bounds = ((1, 3), (1, 7), (0, 2), (0, 1))
    for (line, values), name, (lo, hi) in zip(table.rows, names, bounds):
        for i, v in enumerate(values, start=1):
            _check_range(table, line, f"nurse {i} {name}", v, lo, hi)
    grades, hours, prefs = (table.rows[r][1] for r in range(3))
    seniors = tuple(bool(v) for v in table.rows[3][1]) if len(table.rows) == 4 else None
    return list(zip(grades, hours, prefs)), seniors


def read_wishes(source: Source, nurse_count: int) -> list[tuple[int, ...]]:
    table = _read_table(source, "wishes")
    found: dict[int, tuple[int, ...]] = {}
    for line, values in table.rows:
        if len(values) != SLOTS + 1:
            raise DataError(table.source, line, "columns", f"expected index + 14 wishes, found {len(values)}")
        index = _check_range(table, line, "nurse index", values[0], 1, nurse_count)
        if index in found:
            raise DataError(table.source, line, "nurse index", f"nurse {index} listed twice")
        for k, v in enumerate(values[1:], start=1):
            _check_range(table, line, f"nurse {index} slot {k}", v, 0, 4)
        found[index] = tuple(values[1:])
    missing = sorted(set(range(1, nurse_count + 1)) - set(found))
    if missing:
        raise DataError(table.source, None, "rows", f"no wishes for nurse {missing[0]}")
    return [found[i] for i in range(1, nurse_count + 1)]


def read_patterns(source: Source, library: PatternLibrary | None = None) -> PatternLibrary:
    """Check listed patterns against the generated library and adopt their qualities."""
    library = library or enumerate_pattern_library()
    table = _read_table(source, "patterns")
    qualities: dict[int, int] = {}
    for line, values in table.rows:
        if len(values) != SLOTS + 5:
            raise DataError(table.source, line, "columns", f"expected 19 columns, found {len(values)}")
        index = _check_range(table, line, "index", values[0], 1, len(library))
        pattern = library[index]
        slots = tuple(values[1 : SLOTS + 1])
        if slots != pattern.slots:
            raise DataError(table.source, line, f"pattern {index} slots", "do not match the generated library")
        quality, first, last, percent = values[SLOTS + 1 :]
        qualities[index] = _check_range(table, line, f"pattern {index} quality", quality, 0, 4)
        if (first, last) != days_off_bounds(pattern):
            warnings.warn(
                f"{table.source}:{line}: pattern {index} lists days off ({first}, {last}); "
                f"using ({pattern.first_day_off}, {pattern.last_day_off}) derived from its slots",
                RuntimeWarning,
                stacklevel=2,
            )
        if percent != HOURS_PERCENT[pattern.hours_level]:
            raise DataError(
                table.source, line, f"pattern {index} hours percent",
                f"{percent} does not match hours level {pattern.hours_level}",
            )
    return library.with_qualities(qualities)


def read_previous(source: Source, nurse_count: int) -> dict[int, tuple[int, int]]:
    table = _read_table(source, "previous")
    found: dict[int, tuple[int, int]] = {}
    for line, values in table.rows:
        if len(values) != 3:
            raise DataError(table.source, line, "columns", f"expected 3 columns, found {len(values)}")
        index = _check_range(table, line, "nurse index", values[0], 1, nurse_count)
        last_off = _check_range(table, line, f"nurse {index} last day off", values[1], 1, 7)
        penalty = _check_range(table, line, f"nurse {index} previous penalty", values[2], 0, 100)
        found[index] = (last_off, penalty)
    return found


def read_penalties(source: Source, nurse_count: int) -> dict[int, tuple[Range, Range, dict[int, int], int]]:
    """Per nurse: day range, night range, penalty map and the line of the range entry."""
    table = _read_table(source, "penalties")
    stream = list(table.tokens())
    pos = 0
    result: dict[int, tuple[Range, Range, dict[int, int], int]] = {}

    def take(field: str) -> tuple[int, int]:
        nonlocal pos
        if pos >= len(stream):
            raise DataError(table.source, stream[-1][0] if stream else None, field, "unexpected end of file")
        item = stream[pos]
        pos += 1
        return item

    while pos < len(stream):
        line, index = take("nurse index")
        _check_range(table, line, "nurse index", index, 1, nurse_count)
        if index in result:
            raise DataError(table.source, line, "nurse index", f"nurse {index} listed twice")
        bounds = [take(f"nurse {index} range bound") for _ in range(4)]
        range_line = bounds[0][0]
        ranges: list[Range] = []
        for (lo_line, lo), (_, hi), side in ((bounds[0], bounds[1], DAY), (bounds[2], bounds[3], NIGHT)):
            if lo == 0 and hi == 0:
                ranges.append(None)
            elif 1 <= lo <= hi:
                ranges.append((lo, hi))
            else:
                raise DataError(table.source, lo_line, f"nurse {index} {side} range", f"invalid interval {lo}..{hi}")
        penalties: dict[int, int] = {}
        for j in list(range_indices(ranges[0])) + list(range_indices(ranges[1])):
            line, value = take(f"nurse {index} penalty for pattern {j}")
            penalties[j] = _check_range(table, line, f"nurse {index} penalty for pattern {j}", value, 0, 100)
        result[index] = (ranges[0], ranges[1], penalties, range_line)
    missing = sorted(set(range(1, nurse_count + 1)) - set(result))
    if missing:
        raise DataError(table.source, None, "entries", f"no penalties for nurse {missing[0]}")
    return result


def synthesize_penalties(nurse: Nurse, library: PatternLibrary, config: PenaltySynthesisConfig | None = None) -> dict[int, int]:
    """Penalty row from pattern quality, wishes on worked slots and shift-kind preference."""
    config = config or PenaltySynthesisConfig()
    row = {}
    for j in nurse.alphabet:
        pattern = library[j]
        wish = sum(w for w, worked in zip(nurse.wishes, pattern.slots) if worked)
        cross = (nurse.shift_preference == 1 and pattern.kind == NIGHT) or (
            nurse.shift_preference == 2 and pattern.kind == DAY
        )
        value = config.quality_weight * pattern.quality + config.wish_weight * wish
        value += config.cross_kind_surcharge if cross else 0
        row[j] = min(config.clamp_max, value)
    return row


def load_instance(
    demand: Source,
    qualifications: Source,
    wishes: Source,
    patterns: Source | None = None,
    penalties: Source | None = None,
    previous: Source | None = None,
    synthesis: PenaltySynthesisConfig | None = None,
    apply_rest_rule: bool = False,
) -> Instance:
    """Assemble an :class:`Instance` from its files.

    Without a patterns file the library is regenerated with all qualities at
    0. Without a penalties file the legal ranges follow the hours levels and
    penalties are synthesized. With ``apply_rest_rule`` the ranges of nurses
    listed in ``previous`` are narrowed by last week's last day off.
    """
    if patterns is None:
        warnings.warn("no patterns file given; pattern qualities default to 0", RuntimeWarning, stacklevel=2)
        library = enumerate_pattern_library()
    else:
        library = read_patterns(patterns)
    demand_table = read_demand(demand)
    quals, seniors = read_qualifications(qualifications)
    wish_rows = read_wishes(wishes, len(quals))
    prev = read_previous(previous, len(quals)) if previous is not None else {}
    given = read_penalties(penalties, len(quals)) if penalties is not None else None
    source_name = _source_name(penalties)

    nurses = []
    for i, ((grade, level, pref), wish) in enumerate(zip(quals, wish_rows), start=1):
        last_off, prev_penalty = prev.get(i, (None, None))
        base = Nurse(i, grade, level, pref, wish, None, None, {}, last_off, prev_penalty)
        if given is not None:
            day_range, night_range, row, line = given[i]
            _check_level_ranges(library, base, day_range, night_range, source_name, line)
        else:
            day_range, night_range = legal_ranges(base, library)
            row = None
        if apply_rest_rule and last_off is not None:
            day_range, night_range = restrict_by_previous_week(base, (day_range, night_range), library)
        shaped = Nurse(i, grade, level, pref, wish, day_range, night_range, {}, last_off, prev_penalty)
        alphabet = set(shaped.alphabet)
        if row is None:
            row = synthesize_penalties(shaped, library, synthesis)
        row = {j: v for j, v in row.items() if j in alphabet}
        nurses.append(Nurse(i, grade, level, pref, wish, day_range, night_range, row, last_off, prev_penalty))
    try:
        return Instance(tuple(nurses), library, demand_table, seniors)
    except ValueError as exc:
        raise DataError(_source_name(qualifications), None, "instance", str(exc)) from None


def _source_name(source: Source | None) -> str:
    if source is None:
        return "<none>"
    if hasattr(source, "read"):
        return getattr(source, "name", "<stream>")
    return str(source)


def _check_level_ranges(library: PatternLibrary, nurse: Nurse, day_range: Range, night_range: Range, source: str, line: int):
    legal_day, legal_night = legal_ranges(nurse, library)
    for rng, legal, side in ((day_range, legal_day, DAY), (night_range, legal_night, NIGHT)):
        if rng is not None and not legal[0] <= rng[0] <= rng[1] <= legal[1]:
            raise DataError(
                source, line, f"nurse {nurse.id} {side} range",
                f"{rng[0]}..{rng[1]} is inconsistent with hours level {nurse.hours_level} "
                f"(allowed {legal[0]}..{legal[1]})",
            )
    if day_range is None and night_range is None:
        raise DataError(source, line, f"nurse {nurse.id} ranges", "both ranges are empty")


def load_instance_dir(directory: str | os.PathLike, **kwargs) -> Instance:
    """Load the standard file names from a directory; optional files may be absent."""
    base = Path(directory)
    paths = {key: base / name for key, name in FILE_NAMES.items()}
    optional = {key: (p if p.exists() else None) for key, p in paths.items() if key in ("patterns", "penalties", "previous")}
    return load_instance(paths["demand"], paths["qualifications"], paths["wishes"], **optional, **kwargs)


# --------------------------------------------------------------------------- writing


def _emit(sink: IO[str] | str | os.PathLike | None, text: str) -> str:
    if sink is None:
        return text
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w", newline="\n") as handle:
            handle.write(text)
    return text


def format_demand(demand: DemandTable) -> str:
    lines = ["demand", "# rows: grades 1..3; columns: day slots Su..Sa, then night slots Su..Sa"]
    lines += [" ".join(str(v) for v in demand.array[:, g]) for g in range(3)]
    return "\n".join(lines) + "\n"


def format_qualifications(instance: Instance) -> str:
    nurses = instance.nurses
    lines = ["qualifications", "# rows: grade, hours level, shift preference" + (", senior flag" if instance.senior_flags else "")]
    lines.append(" ".join(str(n.grade) for n in nurses))
    lines.append(" ".join(str(n.hours_level) for n in nurses))
    lines.append(" ".join(str(n.shift_preference) for n in nurses))
    if instance.senior_flags is not None:
        lines.append(" ".join(str(int(f)) for f in instance.senior_flags))
    return "\n".join(lines) + "\n"


def format_wishes(instance: Instance) -> str:
    lines = ["wishes", "# nurse index, 7 day wishes Su..Sa, 7 night wishes Su..Sa"]
    lines += [" ".join(map(str, (n.id,) + n.wishes)) for n in instance.nurses]
    return "\n".join(lines) + "\n"


def format_patterns(library: PatternLibrary) -> str:
    lines = ["patterns", "# index, 14 slots, quality, first day off, last day off, hours percent"]
    for p in library:
        values = (p.index,) + p.slots + (p.quality, p.first_day_off, p.last_day_off, HOURS_PERCENT[p.hours_level])
        lines.append(" ".join(map(str, values)))
    return "\n".join(lines) + "\n"


def format_penalties(instance: Instance, wrap: int = 13) -> str:
    lines = ["penalties", "# nurse index; day_lo day_hi night_lo night_hi (0 0 = empty); penalties"]
    for n in instance.nurses:
        lines.append(str(n.id))
        bounds = [b for rng in (n.day_range, n.night_range) for b in (rng or (0, 0))]
        lines.append(" ".join(map(str, bounds)))
        values = [n.penalties[j] for j in n.alphabet]
        lines += [" ".join(map(str, values[s : s + wrap])) for s in range(0, len(values), wrap)]
    return "\n".join(lines) + "\n"


def format_previous(instance: Instance) -> str | None:
    rows = [n for n in instance.nurses if n.prev_last_day_off is not None]
    if not rows:
        return None
    lines = ["previous", "# nurse index, last day off of last week's pattern, last week's penalty"]
    lines += [f"{n.id} {n.prev_last_day_off} {n.prev_penalty or 0}" for n in rows]
    return "\n".join(lines) + "\n"


def write_instance(instance: Instance, directory: str | os.PathLike) -> dict[str, Path]:
    """Write all instance files under their standard names; returns the paths written."""
    base = Path(directory)
    base.mkdir(parents=True, exist_ok=True)
    texts = {
        "demand": format_demand(instance.demand),
        "qualifications": format_qualifications(instance),
        "wishes": format_wishes(instance),
        "patterns": format_patterns(instance.library),
        "penalties": format_penalties(instance),
        "previous": format_previous(instance),
    }
    written = {}
    for key, text in texts.items():
        if text is None:
            continue
        path = base / FILE_NAMES[key]
        _emit(path, text)
        written[key] = path
    return written


def write_schedule(
    instance: Instance,
    chromosome: Chromosome,
    sink: IO[str] | str | os.PathLike | None = None,
    weights: FitnessWeights | None = None,
) -> str:
    """Human-readable roster: assignment grid, coverage against demand and fitness."""
    weights = weights or FitnessWeights()
    genes = [int(g) for g in chromosome.genes]
    library = instance.library
    shortfall = coverage_shortfall(chromosome, instance)
    pref = preference_cost(chromosome, instance, weights)
    total = total_fitness(chromosome.copy(), instance, weights)
    out = io.StringIO()
    if shortfall:
        out.write(f"WARNING: roster leaves demand uncovered (shortfall {shortfall})\n")
    header_days = " ".join(DAY_NAMES)
    out.write(f"nurse grade hours pattern penalty | days  {header_days} | nights {header_days}\n")
    penalties = instance.penalty_matrix(weights.prev_week_threshold)
    for i, (nurse, j) in enumerate(zip(instance.nurses, genes)):
        slots = library[j].slots
        days = " ".join(" D" if s else " ." for s in slots[:7])
        nights = " ".join(" N" if s else " ." for s in slots[7:])
        out.write(
            f"{nurse.id:5d} {nurse.grade:5d} {nurse.hours_level:5d} {j:7d} {int(penalties[i, j]):7d} "
            f"|      {days} |       {nights}\n"
        )
    out.write("\ncoverage (supply/demand, cumulative by grade)\n")
    worked = library.cover[genes]
    grades = instance.grades
    for g in (1, 2, 3):
        supply = worked[grades <= g].sum(axis=0)
        cells = " ".join(f"{int(s)}/{int(r)}" for s, r in zip(supply, instance.demand.array[:, g - 1]))
        out.write(f"grade<={g}: {cells}\n")
    out.write(
        f"\npreference cost {pref}\ncoverage shortfall {shortfall}\n"
        f"total fitness {total} (demand weight {weights.demand_weight})\n"
    )
    return _emit(sink, out.getvalue())


# --------------------------------------------------------------------------- LP export


def _wrap_terms(terms: list[str], tail: str, width: int = 76) -> list[str]:
    lines: list[str] = []
    current = ""
    for pos, term in enumerate(terms):
        piece = term if pos == 0 else f"+ {term}"
        if current and len(current) + 1 + len(piece) > width:
            lines.append(" " + current)
            current = piece
        else:
            current = f"{current} {piece}" if current else piece
    current = f"{current} {tail}" if tail else current
    lines.append(" " + current)
    return lines


def export_lp(
    instance: Instance,
    sink: IO[str] | str | os.PathLike | None = None,
    weights: FitnessWeights | None = None,
) -> str:
    """Write the integer program in CPLEX LP syntax and return the text.

    Variables are named ``x<i>,<j>`` for nurse ``i`` and pattern ``j``. Each
    (slot, grade) pair with positive demand yields a coverage row over nurses
    of that grade or better; each nurse gets one assignment row.
    """
    weights = weights or FitnessWeights()
    penalties = instance.penalty_matrix(weights.prev_week_threshold)
    library = instance.library
    variables = [(i, j) for i, nurse in enumerate(instance.nurses, start=1) for j in nurse.alphabet]
    lines = ["minimize"]
    lines += _wrap_terms([f"{int(penalties[i - 1, j])} x{i},{j}" for i, j in variables], "")
    lines.append("subject to")
    demand = instance.demand
    for k in range(1, SLOTS + 1):
        for s in (1, 2, 3):
            need = demand[k, s]
            if need <= 0:
                continue
            terms = [
                f"x{i},{j}"
                for i, j in variables
                if instance.nurses[i - 1].grade <= s and library[j].slots[k - 1]
            ]
            if not terms:
                i, j = variables[0]
                terms = [f"0 x{i},{j}"]
            lines += _wrap_terms(terms, f">= {need}")
    for i, nurse in enumerate(instance.nurses, start=1):
        lines += _wrap_terms([f"x{i},{j}" for j in nurse.alphabet], "= 1")
    lines.append("integers")
    names = [f"x{i},{j}" for i, j in variables]
    for s in range(0, len(names), 10):
        lines.append(" " + " ".join(names[s : s + 10]))
    lines.append("end")
    return _emit(sink, "\n".join(lines) + "\n")


def parse_lp_objective(text: str) -> dict[tuple[int, int], int]:
    """Objective coefficients keyed by ``(nurse, pattern)`` from exported LP text."""
    body = text.split("minimize", 1)[1].split("subject to", 1)[0]
    tokens = body.replace("+", " ").split()
    coefficients = {}
    for coef, name in zip(tokens[0::2], tokens[1::2]):
        i, j = name[1:].split(",")
        coefficients[(int(i), int(j))] = int(coef)
    return coefficients


def packaged_full_time_qualities() -> dict[int, int]:
    """Quality values of the 56 full-time patterns shipped with the package."""
    text = resources.files("nurse_ga").joinpath("data/full_time_patterns.txt").read_text()
    library = read_patterns(io.StringIO(text))
    return {p.index: p.quality for p in library if p.index <= 56}


def instance_from_parts(
    nurses_spec: list[tuple[int, int, int]],
    wishes: list[tuple[int, ...]],
    demand: DemandTable,
    library: PatternLibrary,
    synthesis: PenaltySynthesisConfig | None = None,
    penalties: Mapping[int, Mapping[int, int]] | None = None,
    ranges: Mapping[int, tuple[Range, Range]] | None = None,
    senior_flags: tuple[bool, ...] | None = None,
) -> Instance:
    """Build an instance in memory; ranges default to the hours level, penalties to synthesis."""
    nurses = []
    for i, ((grade, level, pref), wish) in enumerate(zip(nurses_spec, wishes), start=1):
        base = Nurse(i, grade, level, pref, wish, None, None)
        day_range, night_range = (ranges or {}).get(i) or legal_ranges(base, library)
        shaped = Nurse(i, grade, level, pref, wish, day_range, night_range)
        row = dict((penalties or {}).get(i) or synthesize_penalties(shaped, library, synthesis))
        nurses.append(Nurse(i, grade, level, pref, wish, day_range, night_range, row))
    return Instance(tuple(nurses), library, demand, senior_flags)


__all__ = [
    "DataError",
    "FILE_NAMES",
    "PenaltySynthesisConfig",
    "export_lp",
    "format_demand",
    "format_patterns",
    "format_penalties",
    "format_qualifications",
    "format_wishes",
    "instance_from_parts",
    "load_instance",
    "load_instance_dir",
    "packaged_full_time_qualities",
    "parse_lp_objective",
    "read_demand",
    "read_patterns",
    "read_penalties",
    "read_qualifications",
    "read_wishes",
    "synthesize_penalties",
    "write_instance",
    "write_schedule",
]
