"""Instance archetypes, repeated-run experiments and their statistics."""

from __future__ import annotations

import csv
import io
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import IO, Mapping

import numpy as np

from .dataio import PenaltySynthesisConfig, instance_from_parts, packaged_full_time_qualities
from .engine import SEED_BASE, GAConfig, evolve
from .fitness import FitnessWeights
from .model import DemandTable, Instance, enumerate_pattern_library, legal_ranges

ARCHETYPES = ("normal", "restrictive", "unrestrictive", "fluctuating")

# Reference week: grade, hours level and shift preference of 21 nurses.
REFERENCE_GRADES = (1,) * 9 + (2,) * 5 + (3,) * 7
REFERENCE_HOURS = (7, 1, 2, 1, 2, 3, 2, 3, 2, 1, 1, 1, 1, 7, 1, 1, 1, 1, 1, 4, 1)
REFERENCE_PREFERENCES = (1, 1, 0, 0, 0, 2, 2, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1)
# Non-zero wishes of the reference week; every other of its 294 entries is 0.
REFERENCE_WISHES_NONZERO = (
    2, 1, 1, 1, 2, 2, 1, 3, 2, 2, 1, 1, 1, 2, 1, 2, 3, 2, 1, 1,
    2, 2, 2, 1, 4, 1, 3, 3, 3, 2, 1,
)
REFERENCE_WISH_ENTRIES = 21 * 14
REFERENCE_DEMAND_ROWS = (
    (2,) * 7 + (1,) * 7,
    (2,) * 7 + (1,) * 7,
    (5,) * 7 + (1,) * 7,
)
DEFAULT_NURSES = {"normal": 21, "restrictive": 22, "unrestrictive": 24, "fluctuating": 21}
DEFAULT_GRADE_COUNTS = {
    "normal": (9, 5, 7),
    "restrictive": (9, 5, 8),
    "unrestrictive": (10, 6, 8),
    "fluctuating": (9, 5, 7),
}
ARCHETYPE_WEIGHTS = {
    "normal": FitnessWeights(demand_weight=5),
    "restrictive": FitnessWeights(demand_weight=25),
    "unrestrictive": FitnessWeights(demand_weight=5),
    "fluctuating": FitnessWeights(demand_weight=10),
}


@dataclass(frozen=True)
class ArchetypeSpec:
    kind: str
    nurse_count: int | None = None
    seed: int = 1

    def __post_init__(self):
        if self.kind not in ARCHETYPES:
            raise ValueError(f"unknown archetype {self.kind!r}; choose from {', '.join(ARCHETYPES)}")
        if self.nurse_count is not None and self.nurse_count < 1:
            raise ValueError("nurse_count must be at least 1")

    @property
    def nurses(self) -> int:
        return self.nurse_count or DEFAULT_NURSES[self.kind]


def _grade_counts(spec: ArchetypeSpec) -> tuple[int, int, int]:
    n = spec.nurses
    if n == DEFAULT_NURSES[spec.kind]:
        return DEFAULT_GRADE_COUNTS[spec.kind]
    shares = np.array(DEFAULT_GRADE_COUNTS[spec.kind], dtype=float)
    raw = shares / shares.sum() * n
    counts = np.floor(raw).astype(int)
    for pos in np.argsort(-(raw - counts), kind="stable")[: n - counts.sum()]:
        counts[pos] += 1
    return tuple(int(c) for c in counts)


def _demand(spec: ArchetypeSpec, rng: np.random.Generator) -> DemandTable:
    rows = [list(r) for r in REFERENCE_DEMAND_ROWS]
    if spec.kind == "restrictive":
        rows[2][:7] = [9] * 7
    elif spec.kind == "fluctuating":
        rows[2][:7] = rng.integers(7, 10, size=7).tolist()
        rows[2][7:] = rng.integers(0, 3, size=7).tolist()
    return DemandTable.from_grade_rows(rows)


def _wishes(rng: np.random.Generator, count: int) -> list[tuple[int, ...]]:
    pool = np.zeros(REFERENCE_WISH_ENTRIES, dtype=np.int64)
    pool[: len(REFERENCE_WISHES_NONZERO)] = REFERENCE_WISHES_NONZERO
    return [tuple(int(v) for v in rng.choice(pool, size=14)) for _ in range(count)]


def generate_instance(spec: ArchetypeSpec, synthesis: PenaltySynthesisConfig | None = None) -> Instance:
    """Seeded random instance whose marginals follow the reference week.

    Full-time patterns use the packaged quality values; qualities of the other
    patterns are drawn from the same empirical distribution.
    """
    rng = np.random.default_rng(spec.seed)
    library = enumerate_pattern_library()
    known = packaged_full_time_qualities()
    known_values = np.array(list(known.values()))
    qualities = dict(known)
    for p in library:
        if p.index not in qualities:
            qualities[p.index] = 0 if p.shifts == 0 else int(rng.choice(known_values))
    library = library.with_qualities(qualities)

    grades = [g for g, c in zip((1, 2, 3), _grade_counts(spec)) for _ in range(c)]
    hours = rng.choice(REFERENCE_HOURS, size=len(grades))
    prefs = rng.choice(REFERENCE_PREFERENCES, size=len(grades))
    specs = [(g, int(h), int(p)) for g, h, p in zip(grades, hours, prefs)]
    wishes = _wishes(rng, len(grades))
    demand = _demand(spec, rng)
    return instance_from_parts(specs, wishes, demand, library, synthesis)


TOY_SPACE_LIMIT = 10**6


def _narrow(ranges, rng: np.random.Generator):
    """Random contiguous sub-ranges, the way a penalties file may restrict a nurse."""
    out = []
    for r in ranges:
        if r is None:
            out.append(None)
            continue
        lo, hi = r
        width = int(rng.integers(1, hi - lo + 2))
        start = lo + int(rng.integers(0, hi - lo + 2 - width))
        out.append((start, start + width - 1))
    if all(r is not None for r in out) and rng.random() < 0.3:
        out[int(rng.integers(0, 2))] = None
    return tuple(out)


def toy_instance(seed: int, space_limit: int = TOY_SPACE_LIMIT) -> Instance:
    """Small random instance (3-5 nurses, demand on the first 2-7 days) for exhaustive checks.

    Each nurse gets random contiguous sub-ranges of its level's blocks. Nurse
    draws are repeated until the search space fits under ``space_limit``.
    """
    rng = np.random.default_rng(seed)
    library = enumerate_pattern_library()
    qualities = {p.index: (0 if p.shifts == 0 else int(rng.integers(0, 5))) for p in library}
    library = library.with_qualities(qualities)
    count = int(rng.integers(3, 6))
    days = int(rng.integers(2, 8))
    while True:
        grades = np.sort(rng.integers(1, 4, size=count))
        levels = rng.choice([1, 2, 3, 4, 5, 6, 7], size=count, p=[0.3, 0.15, 0.15, 0.1, 0.1, 0.1, 0.1])
        prefs = rng.integers(0, 3, size=count)
        specs = [(int(g), int(h), int(p)) for g, h, p in zip(grades, levels, prefs)]
        wishes = [tuple(int(v) for v in rng.choice(5, size=14, p=[0.7, 0.1, 0.1, 0.05, 0.05])) for _ in range(count)]
        rows = [[0] * 14 for _ in range(3)]
        # Roughly a third of the nurses per slot, like a full ward.
        for first, extra in ((0, count >= 5), (7, False)):
            for k in range(first, first + days):
                total = int(rng.integers(0, 2)) + int(extra and rng.random() < 0.5)
                mid = total * int(rng.random() < 0.5)
                rows[0][k], rows[1][k], rows[2][k] = mid * int(rng.random() < 0.5), mid, total
        ranges = {i: _narrow(legal_ranges(level, library), rng) for i, (_, level, _) in enumerate(specs, start=1)}
        instance = instance_from_parts(specs, wishes, DemandTable.from_grade_rows(rows), library, ranges=ranges)
        if instance.search_space <= space_limit:
            return instance


# --------------------------------------------------------------------------- experiments


@dataclass(frozen=True)
class RunRecord:
    instance: str
    config: str
    seed: int
    best_fitness: int
    feasible: bool
    generations: int
    wall_ms: float


@dataclass(frozen=True)
class RunStats:
    """Aggregate over the runs of one (instance, config) cell."""

    instance: str
    config: str
    runs: tuple[RunRecord, ...]

    @property
    def mean_best_fitness(self) -> float:
        return statistics.fmean(r.best_fitness for r in self.runs)

    @property
    def best_of_best(self) -> int:
        return min(r.best_fitness for r in self.runs)

    @property
    def feasibility_percentage(self) -> float:
        return 100.0 * sum(r.feasible for r in self.runs) / len(self.runs)

    @property
    def mean_generations(self) -> float:
        return statistics.fmean(r.generations for r in self.runs)

    @property
    def mean_wall_ms(self) -> float:
        return statistics.fmean(r.wall_ms for r in self.runs)


CSV_HEADER = ("instance", "config", "seed", "best_fitness", "feasible", "generations", "wall_ms")


def _single_run(args) -> RunRecord:
    name, instance, cfg_name, config, weights, seed = args
    result = evolve(instance, replace(config, seed=seed), weights)
    return RunRecord(name, cfg_name, seed, result.best_fitness, result.feasible, result.generations,
                     result.wall_time * 1000.0)


def thread_count() -> int:
    """Worker processes for experiments, from ``NURSE_GA_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("NURSE_GA_THREADS", "1")))
    except ValueError:
        return 1


def run_experiment(
    instances: Mapping[str, Instance],
    configs: Mapping[str, GAConfig],
    repetitions: int = 20,
    base_seed: int = SEED_BASE,
    weights: FitnessWeights | Mapping[str, FitnessWeights] | None = None,
    sink: IO[str] | None = None,
    timing: bool = True,
    workers: int | None = None,
) -> list[RunStats]:
    """Run every config on every instance with seeds ``base_seed + 1 .. base_seed + repetitions``.

    All configs share the same seeds, hence the same initial populations.
    When ``sink`` is given a CSV with one row per run and one ``aggregate``
    row per cell is written; with ``timing=False`` wall times print as ``NA``
    so that the file is reproducible byte for byte.
    """
    if not instances or not configs:
        raise ValueError("experiment grid is empty")
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")

    def weights_for(name: str) -> FitnessWeights:
        if isinstance(weights, Mapping):
            return weights.get(name, FitnessWeights())
        return weights or FitnessWeights()

    jobs = [
        (iname, inst, cname, cfg, weights_for(iname), base_seed + r)
        for iname, inst in instances.items()
        for cname, cfg in configs.items()
        for r in range(1, repetitions + 1)
    ]
    workers = workers or thread_count()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_single_run, jobs))
    else:
        records = [_single_run(job) for job in jobs]

    cells: dict[tuple[str, str], list[RunRecord]] = {}
    for rec in records:
        cells.setdefault((rec.instance, rec.config), []).append(rec)
    stats = [RunStats(i, c, tuple(rs)) for (i, c), rs in cells.items()]
    if sink is not None:
        write_csv(stats, sink, timing)
    return stats


def write_csv(stats: list[RunStats], sink: IO[str], timing: bool = True) -> None:
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(CSV_HEADER)

    def wall(value: float) -> str:
        return f"{value:.3f}" if timing else "NA"

    for cell in stats:
        for r in cell.runs:
            writer.writerow([r.instance, r.config, r.seed, r.best_fitness, int(r.feasible), r.generations, wall(r.wall_ms)])
        writer.writerow([
            cell.instance, cell.config, "aggregate", f"{cell.mean_best_fitness:.4f}",
            f"{cell.feasibility_percentage:.2f}", f"{cell.mean_generations:.4f}", wall(cell.mean_wall_ms),
        ])


def read_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


__all__ = [
    "ARCHETYPES",
    "ARCHETYPE_WEIGHTS",
    "ArchetypeSpec",
    "CSV_HEADER",
    "RunRecord",
    "RunStats",
    "generate_instance",
    "read_csv",
    "run_experiment",
    "thread_count",
    "toy_instance",
    "write_csv",
]
