"""Optional GA refinements: adaptive mutation, restarts, local swaps, weight schedules,
population shrinking, segmented crossover and niching."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .fitness import SEGMENT_MASKS, SEGMENTS, FitnessWeights, all_segment_fitness, total_fitness
from .model import Chromosome, Instance, as_rng, random_genes
from .operators import select_rank_indices, uniform_children


@dataclass(frozen=True)
class OscillationSchedule:
    """Alternate between two weight sets: ``gens_a`` generations of A, then ``gens_b`` of B."""

    weights_a: FitnessWeights
    weights_b: FitnessWeights
    gens_a: int
    gens_b: int

    def __post_init__(self):
        if self.gens_a < 1 or self.gens_b < 1:
            raise ValueError("oscillation phases need at least one generation each")


@dataclass(frozen=True)
class ExtensionConfig:
    """Switches for the optional refinements; all are off by default.

    ``swap_intensity`` is ``None`` (off), a shortfall threshold (0, 1 or 5) or
    ``"max"`` (always eligible).
    """

    intelligent_mutation: bool = False
    reinit: bool = False
    reinit_fraction: float = 0.01
    swap_intensity: int | str | None = None
    swap_probability: float = 0.10
    oscillation: OscillationSchedule | None = None
    dynamic_population: bool = False
    shrink_rate: float = 0.01
    learning_weight: bool = False
    segmented_crossover: bool = False
    niching: bool = False
    migration_fraction: float = 0.01

    def __post_init__(self):
        for name in ("reinit_fraction", "swap_probability", "shrink_rate", "migration_fraction"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.swap_intensity not in (None, 0, 1, 5, "max"):
            raise ValueError("swap_intensity must be None, 0, 1, 5 or 'max'")
        if self.niching and self.dynamic_population:
            raise ValueError("niching and dynamic population cannot be combined")


# --------------------------------------------------------------------------- scalar rules


def intelligent_mutation_rate(shortfall, stagnation, base_rate: float = 0.01):
    """Mutation probability growing with an individual's shortfall and global stagnation.

    Works element-wise on arrays.
    """
    rate = np.clip(base_rate / 2 + 0.005 * np.asarray(shortfall) + 0.0005 * np.asarray(stagnation), 0.0, 1.0)
    return float(rate) if rate.ndim == 0 else rate


def shrink_population(current: int, initial: int, rate: float = 0.01) -> int:
    """Shrink by ``rate`` (rounded down) but never below a third of the initial size."""
    if current < 1 or initial < 1:
        raise ValueError("population sizes must be positive")
    shrunk = math.floor(current * (1 - Fraction(rate).limit_denominator(10**6)))
    return max(shrunk, math.ceil(initial / 3))


def learn_weight(weight: int, best_is_feasible: bool, initial: int) -> int:
    """Step the demand weight down after a feasible best, up otherwise, within [g0/3, 3 g0]."""
    step = -1 if best_is_feasible else 1
    return min(3 * initial, max(math.ceil(initial / 3), weight + step))


def oscillating_weights(generation: int, schedule: OscillationSchedule) -> FitnessWeights:
    cycle = schedule.gens_a + schedule.gens_b
    return schedule.weights_a if generation % cycle < schedule.gens_a else schedule.weights_b


def reinit_children(count: int, instance: Instance, rng) -> list[Chromosome]:
    return [Chromosome(g) for g in random_genes(instance, count, as_rng(rng))]


def reinit_count(fraction: float, size: int) -> int:
    return math.ceil(fraction * size - 1e-9)


# --------------------------------------------------------------------------- local swap


def swap_classes(instance: Instance) -> list[list[int]]:
    """Nurse positions grouped by (grade, hours level, senior flag), ascending."""
    cache = instance.__dict__.get("_swap_classes")
    if cache is None:
        groups: dict[tuple, list[int]] = {}
        for pos, nurse in enumerate(instance.nurses):
            key = (nurse.grade, nurse.hours_level, bool(instance.seniors[pos]))
            groups.setdefault(key, []).append(pos)
        cache = [g for g in groups.values() if len(g) > 1]
        instance.__dict__["_swap_classes"] = cache
    return cache


def swap_improve(genes: np.ndarray, penalty: np.ndarray, classes: Sequence[Sequence[int]]) -> bool:
    """Greedy pair swaps then 3-cycles inside each class; edits ``genes`` in place.

    Illegal cells of ``penalty`` hold a huge sentinel, so a move that would
    leave a nurse's alphabet can never look like an improvement.
    """
    changed = False
    for members in classes:
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                a, b = members[x], members[y]
                ja, jb = genes[a], genes[b]
                if penalty[a, jb] + penalty[b, ja] < penalty[a, ja] + penalty[b, jb]:
                    genes[a], genes[b] = jb, ja
                    changed = True
    for members in classes:
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                for z in range(y + 1, len(members)):
                    a, b, c = members[x], members[y], members[z]
                    ja, jb, jc = genes[a], genes[b], genes[c]
                    current = penalty[a, ja] + penalty[b, jb] + penalty[c, jc]
                    if penalty[a, jb] + penalty[b, jc] + penalty[c, ja] < current:
                        genes[a], genes[b], genes[c] = jb, jc, ja
                        changed = True
                    elif penalty[a, jc] + penalty[b, ja] + penalty[c, jb] < current:
                        genes[a], genes[b], genes[c] = jc, ja, jb
                        changed = True
    return changed


def swap_eligible(shortfall, intensity) -> np.ndarray | bool:
    if intensity is None:
        return np.zeros_like(np.asarray(shortfall), dtype=bool) if np.ndim(shortfall) else False
    if intensity == "max":
        return np.ones_like(np.asarray(shortfall), dtype=bool) if np.ndim(shortfall) else True
    return np.asarray(shortfall) <= intensity if np.ndim(shortfall) else shortfall <= intensity


def local_swap_pass(
    chromosome: Chromosome,
    instance: Instance,
    intensity: int | str | None,
    rng,
    swap_probability: float = 0.10,
    weights: FitnessWeights | None = None,
) -> Chromosome:
    """Apply the swap pass with probability ``swap_probability`` when eligible."""
    weights = weights or FitnessWeights()
    child = chromosome.copy()
    if as_rng(rng).random() >= swap_probability:
        return child
    total_fitness(child, instance, weights)
    if not swap_eligible(child.cached_shortfall, intensity):
        return child
    if swap_improve(child.genes, instance.penalty_matrix(weights.prev_week_threshold), swap_classes(instance)):
        child.cached_segment_fitness = None
        total_fitness(child, instance, weights)
    return child


# --------------------------------------------------------------------------- segmented crossover

# The four ways to split the grade blocks between donors.
PAIRINGS: tuple[tuple[frozenset[int], ...], ...] = (
    (frozenset({1}), frozenset({2, 3})),
    (frozenset({1, 2}), frozenset({3})),
    (frozenset({2}), frozenset({1, 3})),
    (frozenset({1}), frozenset({2}), frozenset({3})),
)


class StaleRankingError(RuntimeError):
    pass


@dataclass
class DonorPool:
    """Rows eligible to donate one segment and the fitness used to rank them."""

    rows: np.ndarray
    fitness: np.ndarray


def segmented_children(
    genes: np.ndarray,
    grades: np.ndarray,
    pools: dict[frozenset[int], DonorPool],
    pairings: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """One child per entry of ``pairings``, each assembled block-wise from ranked donors."""
    children = np.empty((len(pairings), genes.shape[1]), dtype=np.int64)
    for pid, parts in enumerate(PAIRINGS):
        slots = np.flatnonzero(pairings == pid)
        if not len(slots):
            continue
        for part in parts:
            pool = pools[part]
            donors = pool.rows[select_rank_indices(pool.fitness, len(slots), rng)]
            cols = np.flatnonzero(np.isin(grades, list(part)))
            children[np.ix_(slots, cols)] = genes[np.ix_(donors, cols)]
    return children


@dataclass
class RankedPopulation:
    """Population snapshot carrying total and seven segment fitness values per member."""

    genes: np.ndarray
    grades: np.ndarray
    total: np.ndarray
    segments: np.ndarray  # (N, 7) in SEGMENTS order
    checksum: int = field(default=0)

    @classmethod
    def rank(cls, members: Sequence[Chromosome], instance: Instance, weights: FitnessWeights | None = None):
        weights = weights or FitnessWeights()
        genes = np.stack([m.genes for m in members])
        total = np.array([total_fitness(m, instance, weights) for m in members], dtype=np.int64)
        segments = np.array([all_segment_fitness(m, instance, weights) for m in members], dtype=np.int64)
        return cls(genes, instance.grades.copy(), total, segments, _checksum(genes))

    def pools(self) -> dict[frozenset[int], DonorPool]:
        rows = np.arange(len(self.genes))
        return {seg: DonorPool(rows, self.segments[:, k]) for k, seg in enumerate(SEGMENTS)}


def _checksum(genes: np.ndarray) -> int:
    return hash(np.ascontiguousarray(genes).tobytes())


def segmented_crossover_child(population: RankedPopulation, rng, parent_count: int = 2) -> Chromosome:
    """Half the time a uniform child from total-fitness parents, otherwise a segmented one."""
    rng = as_rng(rng)
    if population.checksum != _checksum(population.genes):
        raise StaleRankingError("segment rankings no longer match the population")
    if rng.random() < 0.5:
        parents = select_rank_indices(population.total, parent_count, rng)
        return Chromosome(uniform_children(population.genes[parents][None, :, :], rng)[0])
    pairing = np.array([rng.integers(0, len(PAIRINGS))])
    return Chromosome(segmented_children(population.genes, population.grades, population.pools(), pairing, rng)[0])


# --------------------------------------------------------------------------- niching

NICHE_COUNT = 7
NICHE_MASKS = SEGMENT_MASKS  # niche k optimises segment k; the last niche is the full roster


def niche_sizes(total: int) -> list[int]:
    """Half the population (rounded down) for the last niche, the rest round-robin."""
    main = total // 2
    rest = total - main
    if rest < NICHE_COUNT - 1:
        raise ValueError(f"population of {total} is too small for {NICHE_COUNT} non-empty niches")
    sizes = [rest // 6 + (1 if h < rest % 6 else 0) for h in range(NICHE_COUNT - 1)]
    return sizes + [main]


@dataclass
class NichedPopulation:
    """Genes stored niche by niche (contiguous blocks in niche order)."""

    genes: np.ndarray
    sizes: list[int]

    @property
    def labels(self) -> np.ndarray:
        return np.repeat(np.arange(len(self.sizes)), self.sizes)

    def niche(self, h: int) -> np.ndarray:
        start = sum(self.sizes[:h])
        return self.genes[start : start + self.sizes[h]]


def niche_step(population: NichedPopulation, instance: Instance, weights: FitnessWeights | None, rng, config=None) -> NichedPopulation:
    """Advance every niche by one generation and migrate members between niches."""
    from .engine import GAConfig, advance_niched

    config = config or GAConfig(population_size=len(population.genes))
    genes = advance_niched(population.genes, population.sizes, instance, weights or FitnessWeights(), config, as_rng(rng))
    return NichedPopulation(genes, list(population.sizes))


__all__ = [
    "DonorPool",
    "ExtensionConfig",
    "NICHE_COUNT",
    "NichedPopulation",
    "OscillationSchedule",
    "PAIRINGS",
    "RankedPopulation",
    "StaleRankingError",
    "intelligent_mutation_rate",
    "learn_weight",
    "local_swap_pass",
    "niche_sizes",
    "niche_step",
    "oscillating_weights",
    "reinit_children",
    "reinit_count",
    "segmented_children",
    "segmented_crossover_child",
    "shrink_population",
    "swap_classes",
    "swap_eligible",
    "swap_improve",
]
