"""Selection, crossover, mutation and substitution.

Each operator has a batch form working on gene matrices (used by the GA loop)
and a single-chromosome form that delegates to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import Chromosome, Instance, as_rng


# --------------------------------------------------------------------------- heuristics


def population_size_heuristic(genome_length: int, p0: float, selection_intensity: float) -> int:
    """Population size from genome length, target probability and selection intensity."""
    if genome_length < 1 or not 0 < p0 <= 1 or selection_intensity <= 0:
        raise ValueError("need genome_length >= 1, 0 < p0 <= 1 and selection_intensity > 0")
    s = selection_intensity
    length = genome_length
    size = 1 + (10.28 - 12.07 * s + 7.30 * s * s) * math.sqrt(length) * math.log(length) * (1 / math.sqrt(p0) - 1)
    return max(1, round(size))


def mutation_rate_heuristics(genome_length: int, population_size: int) -> tuple[float, float]:
    """Per-gene mutation rates ``1/L`` and ``1.75 / (N sqrt(L))``, both capped at 1."""
    if genome_length < 1 or population_size < 1:
        raise ValueError("genome length and population size must be positive")
    rate_a = min(1.0, 1 / genome_length)
    rate_b = min(1.0, 1.75 / (population_size * math.sqrt(genome_length)))
    return rate_a, rate_b


# --------------------------------------------------------------------------- selection


def ranks(fitness: np.ndarray) -> np.ndarray:
    """Rank 1 for the worst (largest) fitness up to N for the best; ties by index."""
    fitness = np.asarray(fitness)
    order = np.argsort(-fitness, kind="stable")
    result = np.empty(len(fitness), dtype=np.int64)
    result[order] = np.arange(1, len(fitness) + 1)
    return result


def rank_probabilities(fitness: Sequence[float]) -> np.ndarray:
    r = ranks(np.asarray(fitness))
    return r / r.sum()


def select_rank_indices(fitness: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` indices with probability proportional to rank.

    A uniform integer in ``1..sum(ranks)`` is located in the running sum of
    ranks taken in population order.
    """
    cumulative = np.cumsum(ranks(fitness))
    draws = rng.integers(1, cumulative[-1] + 1, size=count)
    return np.searchsorted(cumulative, draws, side="left")


def proportional_probabilities(costs: Sequence[float]) -> np.ndarray:
    """Selection probability proportional to cost magnitude; uniform when all are zero."""
    costs = np.asarray(costs, dtype=float)
    total = costs.sum()
    if total == 0:
        return np.full(len(costs), 1 / len(costs))
    return costs / total


def select_proportional_indices(fitness: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    cumulative = np.cumsum(proportional_probabilities(fitness))
    cumulative[-1] = 1.0
    return np.searchsorted(cumulative, rng.random(count), side="right")


def select_indices(kind: str, fitness: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    if kind == "rank":
        return select_rank_indices(fitness, count, rng)
    if kind == "proportional":
        return select_proportional_indices(fitness, count, rng)
    raise ValueError(f"unknown selection {kind!r}")


def rank_select(population: Sequence[Chromosome], fitnesses: Sequence[float], rng) -> Chromosome:
    return population[int(select_rank_indices(np.asarray(fitnesses), 1, as_rng(rng))[0])]


def proportional_select(population: Sequence[Chromosome], fitnesses: Sequence[float], rng) -> Chromosome:
    return population[int(select_proportional_indices(np.asarray(fitnesses), 1, as_rng(rng))[0])]


# --------------------------------------------------------------------------- crossover


def uniform_children(parents: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Children from parent stacks of shape (children, parents, genes)."""
    count, parent_count, length = parents.shape
    choice = rng.integers(0, parent_count, size=(count, length))
    return np.take_along_axis(parents, choice[:, None, :], axis=1)[:, 0, :]


def k_point_children(parents: np.ndarray, k: int, rng: np.random.Generator, cuts: np.ndarray | None = None) -> np.ndarray:
    """k-point crossover; segments cycle through the parents in order.

    A cut value ``c`` splits after gene ``c`` (1-based), so the gene at
    0-based position ``p`` lies in segment ``#{c : c <= p}``.
    """
    count, parent_count, length = parents.shape
    if not 1 <= k <= length - 1:
        raise ValueError(f"k must lie in 1..{length - 1}, got {k}")
    if cuts is None:
        keys = rng.random((count, length - 1))
        cuts = np.sort(np.argsort(keys, axis=1)[:, :k] + 1, axis=1)
    cuts = np.asarray(cuts).reshape(count, k)
    positions = np.arange(length)
    segment = (cuts[:, :, None] <= positions[None, None, :]).sum(axis=1)
    choice = segment % parent_count
    return np.take_along_axis(parents, choice[:, None, :], axis=1)[:, 0, :]


def _stack(parents: Sequence[Chromosome | Sequence[int]]) -> np.ndarray:
    if not 2 <= len(parents) <= 4:
        raise ValueError("crossover needs 2 to 4 parents")
    rows = [p.genes if isinstance(p, Chromosome) else np.asarray(p, dtype=np.int64) for p in parents]
    if len({len(r) for r in rows}) != 1:
        raise ValueError("parents differ in length")
    return np.stack(rows)[None, :, :]


def crossover_uniform(parents: Sequence[Chromosome | Sequence[int]], rng) -> Chromosome:
    return Chromosome(uniform_children(_stack(parents), as_rng(rng))[0])


def crossover_k_point(
    parents: Sequence[Chromosome | Sequence[int]], k: int, rng, cuts: Sequence[int] | None = None
) -> Chromosome:
    """k-point crossover; ``cuts`` fixes the cut positions instead of drawing them."""
    stack = _stack(parents)
    fixed = None if cuts is None else np.asarray(sorted(cuts))[None, :]
    if fixed is not None and (len(set(cuts)) != k or fixed.min() < 1 or fixed.max() > stack.shape[2] - 1):
        raise ValueError("cuts must be k distinct positions in 1..L-1")
    return Chromosome(k_point_children(stack, k, as_rng(rng), fixed)[0])


# --------------------------------------------------------------------------- mutation


def mutate_genes(genes: np.ndarray, instance: Instance, per_gene_rate, rng: np.random.Generator) -> np.ndarray:
    """Redraw each gene with the given probability from its nurse's alphabet.

    ``per_gene_rate`` may be a scalar or one rate per row.
    """
    genes = np.array(genes, dtype=np.int64, copy=True)
    if genes.ndim == 1:
        genes = genes[None, :]
    table, sizes = instance.alphabet_table
    rate = np.broadcast_to(np.asarray(per_gene_rate, dtype=float).reshape(-1, 1), (genes.shape[0], 1))
    hit = rng.random(genes.shape) < rate
    picks = (rng.random(genes.shape) * sizes).astype(np.int64)
    fresh = table[np.arange(instance.size), picks]
    return np.where(hit, fresh, genes)


def mutate(parent: Chromosome, instance: Instance, per_gene_rate: float | None = None, rng=None) -> Chromosome:
    rate = 1 / instance.size if per_gene_rate is None else per_gene_rate
    return Chromosome(mutate_genes(parent.genes, instance, rate, as_rng(rng))[0])


def reproduce(parent: Chromosome) -> Chromosome:
    return parent.copy()


# --------------------------------------------------------------------------- substitution


SUBSTITUTION_KINDS = ("total", "best_x_percent", "tournament_fraction", "three_lives", "distance", "mix")


@dataclass(frozen=True)
class Substitution:
    """Replacement rule; ``value`` is the percentage for best-X% or the fight probability."""

    kind: str = "best_x_percent"
    value: float = 20.0

    def __post_init__(self):
        if self.kind not in SUBSTITUTION_KINDS:
            raise ValueError(f"unknown substitution {self.kind!r}")
        if self.kind == "best_x_percent" and not 0 < self.value <= 100:
            raise ValueError("best_x_percent needs 0 < x <= 100")
        if self.kind == "tournament_fraction" and not 0 <= self.value <= 1:
            raise ValueError("tournament_fraction needs 0 <= f <= 1")

    def __str__(self) -> str:
        if self.kind in ("best_x_percent", "tournament_fraction"):
            return f"{self.kind}({self.value:g})"
        return self.kind


@dataclass
class Generation:
    """Gene matrix with per-row evaluation results and lives counters."""

    genes: np.ndarray
    pref: np.ndarray
    shortfall: np.ndarray
    excess: np.ndarray
    fitness: np.ndarray
    lives: np.ndarray

    def __len__(self) -> int:
        return len(self.genes)

    def take(self, index: np.ndarray) -> Generation:
        return Generation(
            self.genes[index], self.pref[index], self.shortfall[index], self.excess[index],
            self.fitness[index], self.lives[index],
        )

    @staticmethod
    def concat(parts: Sequence[Generation]) -> Generation:
        return Generation(*(np.concatenate([getattr(p, f) for p in parts]) for f in
                            ("genes", "pref", "shortfall", "excess", "fitness", "lives")))


def _best_order(fitness: np.ndarray) -> np.ndarray:
    return np.argsort(fitness, kind="stable")


def substitute_arrays(parents: Generation, children: Generation, strategy: Substitution, rng: np.random.Generator) -> Generation:
    """Next generation (without elitism) from equally sized parent and child sets."""
    size = len(parents)
    if len(children) != size:
        raise ValueError(f"size mismatch: {size} parents, {len(children)} children")
    kind = strategy.kind
    if kind == "total":
        return children.take(np.arange(size))
    if kind == "best_x_percent":
        keep = min(size, math.ceil(strategy.value * size / 100 - 1e-9))
        survivors = parents.take(_best_order(parents.fitness)[:keep])
        fill = children.take(_best_order(children.fitness)[: size - keep])
        return Generation.concat([survivors, fill])
    if kind in ("tournament_fraction", "mix"):
        fraction = strategy.value if kind == "tournament_fraction" else 0.75
        fights = rng.random(size) < fraction
        parent_wins = fights & ~(children.fitness < parents.fitness)
        if kind == "mix":
            elite = _best_order(parents.fitness)[: math.ceil(0.05 * size - 1e-9)]
            parent_wins[elite] = True
        merged = children.take(np.arange(size))
        keep = np.flatnonzero(parent_wins)
        for field in ("genes", "pref", "shortfall", "excess", "fitness", "lives"):
            getattr(merged, field)[keep] = getattr(parents, field)[keep]
        return merged
    if kind == "three_lives":
        merged = parents.take(np.arange(size))
        child_better = children.fitness < parents.fitness
        merged.lives[child_better] -= 1
        replaced = np.flatnonzero(merged.lives <= 0)
        fresh = children.take(replaced)
        fresh.lives[:] = 3
        for field in ("genes", "pref", "shortfall", "excess", "fitness", "lives"):
            getattr(merged, field)[replaced] = getattr(fresh, field)
        return merged
    if kind == "distance":
        pool = Generation.concat([parents, children])
        centroid = pool.genes.mean(axis=0)
        distance = np.abs(pool.genes - centroid).sum(axis=1)
        order = np.lexsort((np.arange(len(pool)), pool.fitness, -distance))
        return pool.take(order[:size])
    raise ValueError(f"unknown substitution {kind!r}")


def apply_elitism(generation: Generation, best_genes: np.ndarray, best_row: Generation) -> Generation:
    """Put the best-ever individual back in place of the worst member if it was lost."""
    if np.any(np.all(generation.genes == best_genes, axis=1)):
        return generation
    worst = int(np.argsort(generation.fitness, kind="stable")[-1])
    for field in ("genes", "pref", "shortfall", "excess", "fitness", "lives"):
        getattr(generation, field)[worst] = getattr(best_row, field)[0]
    return generation


def substitute(
    parents: Sequence[Chromosome],
    children: Sequence[Chromosome],
    fitnesses: tuple[Sequence[float], Sequence[float]],
    strategy: Substitution,
    elitism: bool = False,
    rng=None,
    best_ever: tuple[Chromosome, float] | None = None,
) -> list[Chromosome]:
    """Chromosome-level wrapper around :func:`substitute_arrays`.

    ``fitnesses`` holds the parent and child fitness sequences. With
    ``elitism`` the ``best_ever`` pair (defaulting to the best parent) is
    guaranteed to survive.
    """
    parent_fit, child_fit = (np.asarray(f, dtype=float) for f in fitnesses)
    if len(parents) != len(children) or len(parent_fit) != len(parents) or len(child_fit) != len(children):
        raise ValueError("parents, children and fitnesses must have equal sizes")

    def pack(members: Sequence[Chromosome], fit: np.ndarray) -> Generation:
        zeros = np.zeros(len(members), dtype=np.int64)
        return Generation(
            np.stack([m.genes for m in members]), zeros.copy(), zeros.copy(), zeros.copy(), fit.copy(),
            np.array([m.lives for m in members], dtype=np.int64),
        )

    nxt = substitute_arrays(pack(parents, parent_fit), pack(children, child_fit), strategy, as_rng(rng))
    if elitism:
        if best_ever is None:
            pos = int(_best_order(parent_fit)[0])
            best_ever = (parents[pos], parent_fit[pos])
        best_row = pack([best_ever[0]], np.array([best_ever[1]], dtype=float))
        nxt = apply_elitism(nxt, best_ever[0].genes, best_row)
    return [Chromosome(g, lives=int(lv)) for g, lv in zip(nxt.genes, nxt.lives)]
