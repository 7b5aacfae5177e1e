"""Exhaustive optimum for tiny instances and an independent feasibility recount."""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .fitness import FitnessWeights
from .model import SLOTS, Chromosome, Instance

DEFAULT_LIMIT = 10**7


class SearchSpaceTooLarge(ValueError):
    def __init__(self, size: int, limit: int):
        super().__init__(f"search space has {size} assignments, above the limit of {limit}")
        self.size = size
        self.limit = limit


@dataclass(frozen=True)
class OracleResult:
    optimum: Chromosome
    optimum_fitness: int
    feasible_optimum: Chromosome | None
    feasible_cost: int | None
    enumerated: int


def _decode(rank: int, instance: Instance) -> Chromosome:
    table, sizes = instance.alphabet_table
    genes = []
    for i in range(instance.size - 1, -1, -1):
        rank, digit = divmod(rank, int(sizes[i]))
        genes.append(int(table[i, digit]))
    return Chromosome(genes[::-1])


def brute_force_solve(
    instance: Instance,
    weights: FitnessWeights | None = None,
    limit: int = DEFAULT_LIMIT,
    backend: str | None = None,
) -> OracleResult:
    """Enumerate every assignment, first nurse slowest, and keep the earliest minimum.

    The objective is the same total fitness the GA minimises, so the result
    is meaningful even when no assignment covers the demand.
    """
    weights = weights or FitnessWeights()
    size = instance.search_space
    if size > limit:
        raise SearchSpaceTooLarge(size, limit)
    table, sizes = instance.alphabet_table
    senior_weight = weights.senior_weight if instance.senior_flags is not None else 0
    best_rank, best_total, feas_rank, feas_pref, count = kernels.enumerate_optimum(
        table,
        sizes,
        instance.library.cover,
        instance.penalty_matrix(weights.prev_week_threshold),
        instance.grades,
        instance.demand.array,
        instance.seniors,
        weights.demand_weight,
        senior_weight,
        backend=backend,
    )
    feasible = _decode(feas_rank, instance) if feas_rank >= 0 else None
    return OracleResult(
        optimum=_decode(best_rank, instance),
        optimum_fitness=int(best_total),
        feasible_optimum=feasible,
        feasible_cost=int(feas_pref) if feasible is not None else None,
        enumerated=int(count),
    )


def check_feasible(chromosome: Chromosome, instance: Instance) -> tuple[bool, list[int]]:
    """Recount coverage slot by slot; slack is supply minus demand for each (slot, grade).

    The slack list is ordered slot-major: (slot 1, grade 1), (slot 1, grade 2), ...
    """
    slack = []
    for k in range(SLOTS):
        for s in (1, 2, 3):
            supply = 0
            for nurse, gene in zip(instance.nurses, chromosome.genes):
                if nurse.grade <= s and instance.library[int(gene)].slots[k]:
                    supply += 1
            slack.append(supply - instance.demand.required[k][s - 1])
    return all(v >= 0 for v in slack), slack


__all__ = ["DEFAULT_LIMIT", "OracleResult", "SearchSpaceTooLarge", "brute_force_solve", "check_feasible"]
