"""Chromosome evaluation: preference cost, coverage shortfall and derived fitness values."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .model import Chromosome, Instance

# The seven non-empty grade sets, in the order used for cached segment fitness.
SEGMENTS: tuple[frozenset[int], ...] = tuple(
    frozenset(s) for s in ((1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (1, 2, 3))
)
FULL_MASK = 7


def segment_mask(segment: Iterable[int]) -> int:
    """Bitmask for a set of grades (bit 0 = grade 1)."""
    grades = set(segment)
    if not grades or not grades <= {1, 2, 3}:
        raise ValueError(f"segment must be a non-empty subset of grades 1..3, got {sorted(grades)}")
    return sum(1 << (g - 1) for g in grades)


SEGMENT_MASKS: tuple[int, ...] = tuple(segment_mask(s) for s in SEGMENTS)


@dataclass(frozen=True)
class FitnessWeights:
    demand_weight: int = 5
    senior_weight: int = 0
    prev_week_threshold: int = 10

    def __post_init__(self):
        if self.demand_weight < 0 or self.senior_weight < 0:
            raise ValueError("fitness weights must be non-negative")


class CostModel:
    """Dense arrays for one instance, evaluated through the active kernel."""

    def __init__(self, instance: Instance, weights: FitnessWeights | None = None, backend: str | None = None):
        self.instance = instance
        self.weights = weights or FitnessWeights()
        self.backend = backend
        self.cover = instance.library.cover
        self.penalty = instance.penalty_matrix(self.weights.prev_week_threshold)
        self.grade = instance.grades
        self.demand = instance.demand.array
        self.senior = instance.seniors
        self.has_seniors = instance.senior_flags is not None

    def costs(self, genes: np.ndarray, masks: int | np.ndarray = FULL_MASK):
        """``(pref, shortfall, senior_excess)`` for every row of ``genes``."""
        return kernels.population_costs(
            genes, self.cover, self.penalty, self.grade, self.demand, masks, self.senior, backend=self.backend
        )

    def combine(self, pref, shortfall, excess, weights: FitnessWeights | None = None):
        w = weights or self.weights
        total = pref + w.demand_weight * shortfall
        if self.has_seniors and w.senior_weight:
            total = total + w.senior_weight * excess
        return total

    def fitness(self, genes: np.ndarray, weights: FitnessWeights | None = None) -> np.ndarray:
        return self.combine(*self.costs(genes), weights=weights)

    def segment_fitness(self, genes: np.ndarray, mask: int | np.ndarray, weights: FitnessWeights | None = None):
        w = weights or self.weights
        pref, short, _ = self.costs(genes, mask)
        return pref + w.demand_weight * short


def _cost_model(instance: Instance, weights: FitnessWeights | None) -> CostModel:
    weights = weights or FitnessWeights()
    cache = instance.__dict__.setdefault("_cost_models", {})
    model = cache.get(weights)
    if model is None:
        model = cache[weights] = CostModel(instance, weights)
    return model


def _genes(chromosome: Chromosome | Sequence[int]) -> np.ndarray:
    genes = chromosome.genes if isinstance(chromosome, Chromosome) else np.asarray(chromosome, dtype=np.int64)
    return genes[None, :]


def coverage_shortfall(chromosome: Chromosome | Sequence[int], instance: Instance) -> int:
    """Missing nurse-shifts summed over slots and cumulative grade rows."""
    _, short, _ = _cost_model(instance, None).costs(_genes(chromosome))
    return int(short[0])


def preference_cost(
    chromosome: Chromosome | Sequence[int], instance: Instance, weights: FitnessWeights | None = None
) -> int:
    """Sum of each nurse's penalty for its assigned pattern, including any carried penalty."""
    pref, _, _ = _cost_model(instance, weights).costs(_genes(chromosome))
    return int(pref[0])


def senior_weekend_excess(chromosome: Chromosome | Sequence[int], instance: Instance) -> int:
    """Seniors beyond one on Sunday plus seniors beyond one on Saturday."""
    if instance.senior_flags is None:
        raise ValueError("instance has no senior flags")
    _, _, excess = _cost_model(instance, None).costs(_genes(chromosome))
    return int(excess[0])


def total_fitness(chromosome: Chromosome | Sequence[int], instance: Instance, weights: FitnessWeights | None = None) -> int:
    """Preference cost plus weighted shortfall (plus weighted senior excess when flagged).

    When given a :class:`Chromosome`, its preference and shortfall caches are refreshed.
    """
    model = _cost_model(instance, weights)
    pref, short, excess = model.costs(_genes(chromosome))
    if isinstance(chromosome, Chromosome):
        chromosome.cached_pref = int(pref[0])
        chromosome.cached_shortfall = int(short[0])
    return int(model.combine(pref, short, excess)[0])


def segment_fitness(
    chromosome: Chromosome | Sequence[int],
    instance: Instance,
    weights: FitnessWeights | None,
    segment: Iterable[int],
) -> int:
    """Fitness of the nurses in a grade set against the demand rows of that set."""
    model = _cost_model(instance, weights)
    return int(model.segment_fitness(_genes(chromosome), segment_mask(segment))[0])


def all_segment_fitness(
    chromosome: Chromosome | Sequence[int], instance: Instance, weights: FitnessWeights | None = None
) -> tuple[int, ...]:
    """The seven segment fitness values in :data:`SEGMENTS` order; cached on chromosomes."""
    model = _cost_model(instance, weights)
    genes = np.repeat(_genes(chromosome), len(SEGMENTS), axis=0)
    values = tuple(int(v) for v in model.segment_fitness(genes, np.array(SEGMENT_MASKS, dtype=np.uint8)))
    if isinstance(chromosome, Chromosome):
        chromosome.cached_segment_fitness = values
    return values
