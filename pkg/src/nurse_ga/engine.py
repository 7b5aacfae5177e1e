"""The GA main loop.

A run keeps its population as a gene matrix split into contiguous niches. A
plain run has a single niche scored on total fitness; with niching there are
seven, the last of which is scored on total fitness and may borrow grade
blocks from the others. Selection, breeding and substitution always happen
inside a niche.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .extensions import (
    NICHE_MASKS,
    PAIRINGS,
    DonorPool,
    ExtensionConfig,
    intelligent_mutation_rate,
    learn_weight,
    niche_sizes,
    oscillating_weights,
    reinit_count,
    segmented_children,
    shrink_population,
    swap_classes,
    swap_eligible,
    swap_improve,
)
from .fitness import FULL_MASK, SEGMENT_MASKS, SEGMENTS, CostModel, FitnessWeights
from .model import Chromosome, Instance, random_genes
from .operators import (
    Generation,
    Substitution,
    apply_elitism,
    k_point_children,
    mutate_genes,
    proportional_probabilities,
    ranks,
    substitute_arrays,
    uniform_children,
)

SEED_BASE = 543210


@dataclass(frozen=True)
class GAConfig:
    population_size: int = 300
    mutation_prob: float = 0.01
    reproduction_prob: float = 0.02
    crossover: str = "uniform"
    k_points: int = 1
    parent_count: int = 4
    selection: str = "rank"
    substitution: Substitution = field(default_factory=Substitution)
    elitism: bool = True
    max_generations: int | None = None
    time_limit: float | None = None
    stagnation_limit: int | None = 20
    seed: int = SEED_BASE + 1
    mutation_gene_rate: float | None = None
    extensions: ExtensionConfig = field(default_factory=ExtensionConfig)

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population_size must be positive")
        if not 0 <= self.mutation_prob <= 1 or not 0 <= self.reproduction_prob <= 1:
            raise ValueError("operator probabilities must lie in [0, 1]")
        if self.mutation_prob + self.reproduction_prob > 1 + 1e-12:
            raise ValueError("mutation_prob + reproduction_prob must not exceed 1")
        if self.crossover not in ("uniform", "k_point"):
            raise ValueError(f"unknown crossover {self.crossover!r}")
        if self.k_points < 1:
            raise ValueError("k_points must be at least 1")
        if not 2 <= self.parent_count <= 4:
            raise ValueError("parent_count must lie in 2..4")
        if self.selection not in ("rank", "proportional"):
            raise ValueError(f"unknown selection {self.selection!r}")
        if self.mutation_gene_rate is not None and not 0 <= self.mutation_gene_rate <= 1:
            raise ValueError("mutation_gene_rate must lie in [0, 1]")
        stops = (self.max_generations, self.time_limit, self.stagnation_limit)
        if all(s is None for s in stops):
            raise ValueError("at least one termination rule is required")
        if self.extensions.oscillation is not None and self.max_generations is None and self.time_limit is None:
            raise ValueError("oscillating weights need max_generations or time_limit to stop")
        if self.extensions.niching:
            niche_sizes(self.population_size)


@dataclass
class EvolveResult:
    best: Chromosome
    best_fitness: int
    feasible: bool
    generations: int
    wall_time: float
    history: list[int]
    stopped_by: str
    final_population_size: int


# --------------------------------------------------------------------------- internal state


class _Layout:
    """Contiguous niche blocks; immutable once built, so derived arrays are cached."""

    def __init__(self, sizes: list[int], masks: list[int]):
        self.sizes = list(sizes)
        self.masks = list(masks)
        self.count = len(self.sizes)
        self.starts = np.concatenate([[0], np.cumsum(self.sizes)[:-1]]).astype(np.int64)
        self.labels = np.repeat(np.arange(self.count), self.sizes)
        self.row_masks = np.repeat(np.array(self.masks, dtype=np.uint8), self.sizes)
        self.blocks = [slice(int(s), int(s) + n) for s, n in zip(self.starts, self.sizes)]

    def block(self, h: int) -> slice:
        return self.blocks[h]


class _State:
    """Everything a run mutates from one generation to the next."""

    def __init__(self, instance: Instance, config: GAConfig, weights: FitnessWeights, model: CostModel,
                 genes: np.ndarray, layout: _Layout, rng: np.random.Generator):
        self.instance = instance
        self.config = config
        self.ext = config.extensions
        self.base_weights = weights
        self.weights = weights
        self.model = model
        self.layout = layout
        self.rng = rng
        self.main = layout.count - 1
        self.stagnation = 0
        self.generation = 0
        self.pop = self._evaluate(genes, layout.row_masks)
        self._score(self.pop, layout.labels)
        self._set_best(self._best_main_row())

    # evaluation -------------------------------------------------------------

    def _evaluate(self, genes: np.ndarray, masks: np.ndarray) -> Generation:
        pref, short, excess = self.model.costs(genes, masks)
        zeros = np.zeros(len(genes), dtype=np.int64)
        return Generation(genes, pref, short, excess, zeros.copy(), np.full(len(genes), 3, dtype=np.int64))

    def _score(self, gen: Generation, labels: np.ndarray) -> None:
        w = self.weights
        fitness = gen.pref + w.demand_weight * gen.shortfall
        if self.model.has_seniors and w.senior_weight:
            fitness = fitness + np.where(labels == self.main, w.senior_weight * gen.excess, 0)
        gen.fitness = fitness

    def _main_fitness(self, pref, short, excess):
        return self.model.combine(pref, short, excess, self.weights)

    # best-ever bookkeeping -------------------------------------------------

    def _best_main_row(self) -> int:
        block = self.layout.block(self.main)
        return block.start + int(np.argmin(self.pop.fitness[block]))

    def _set_best(self, row: int) -> None:
        self.best = self.pop.take(np.array([row]))
        self.best.genes = self.best.genes.copy()

    def best_fitness(self) -> int:
        b = self.best
        return int(self._main_fitness(b.pref, b.shortfall, b.excess)[0])

    # one generation ---------------------------------------------------------

    def step(self) -> None:
        cfg, ext, rng, inst = self.config, self.ext, self.rng, self.instance
        if ext.oscillation is not None:
            self.weights = oscillating_weights(self.generation, ext.oscillation)
        labels = self.layout.labels
        self._score(self.pop, labels)
        self.best.fitness = np.array([self.best_fitness()])
        pop = self.pop
        size = len(pop)

        parents = self._select_within_niches(pop.fitness, labels, cfg.parent_count)
        first = parents[:, 0]
        draw = rng.random(size)
        if ext.intelligent_mutation:
            p_mut = intelligent_mutation_rate(pop.shortfall[first], self.stagnation, cfg.mutation_prob)
        else:
            p_mut = np.full(size, cfg.mutation_prob)
        is_mut = draw < p_mut
        is_rep = ~is_mut & (draw < p_mut + cfg.reproduction_prob)
        is_cx = ~is_mut & ~is_rep

        children = pop.genes[first].copy()
        cx_rows = np.flatnonzero(is_cx)
        if len(cx_rows):
            segmented = self._segmented_rows(cx_rows, labels)
            plain = np.setdiff1d(cx_rows, segmented, assume_unique=True)
            if len(plain):
                stack = pop.genes[parents[plain]]
                if cfg.crossover == "uniform":
                    children[plain] = uniform_children(stack, rng)
                else:
                    children[plain] = k_point_children(stack, cfg.k_points, rng)
            if len(segmented):
                children[segmented] = self._segmented(segmented, labels)
        mut_rows = np.flatnonzero(is_mut)
        if len(mut_rows):
            gene_rate = cfg.mutation_gene_rate if cfg.mutation_gene_rate is not None else 1 / inst.size
            children[mut_rows] = mutate_genes(children[mut_rows], inst, gene_rate, rng)
        if ext.reinit:
            count = min(size, reinit_count(ext.reinit_fraction, size))
            if count:
                slots = rng.choice(size, size=count, replace=False)
                children[slots] = random_genes(inst, count, rng)

        row_masks = self.layout.row_masks
        kids = self._evaluate(children, row_masks)
        if ext.swap_intensity is not None:
            self._local_swaps(kids, row_masks)
        self._score(kids, labels)

        nxt = []
        for h in range(self.layout.count):
            block = self.layout.block(h)
            nxt.append(substitute_arrays(pop.take(np.arange(block.start, block.stop)),
                                         kids.take(np.arange(block.start, block.stop)), cfg.substitution, rng))
        self.pop = Generation.concat(nxt)
        if self.layout.count > 1 and ext.migration_fraction > 0:
            self._migrate()
        if cfg.elitism:
            block = self.layout.block(self.main)
            main = self.pop.take(np.arange(block.start, block.stop))
            main = apply_elitism(main, self.best.genes[0], self.best)
            for name in ("genes", "pref", "shortfall", "excess", "fitness", "lives"):
                getattr(self.pop, name)[block] = getattr(main, name)
        if ext.dynamic_population:
            self._shrink()

        row = self._best_main_row()
        if self.pop.fitness[row] < self.best.fitness[0]:
            self._set_best(row)
            self.stagnation = 0
        else:
            self.stagnation += 1
        if ext.learning_weight:
            feasible = self.pop.shortfall[row] == 0
            demand_weight = learn_weight(self.weights.demand_weight, bool(feasible), self.base_weights.demand_weight)
            self.weights = replace(self.weights, demand_weight=demand_weight)
        self.generation += 1

    # helpers ----------------------------------------------------------------

    def _select_within_niches(self, fitness: np.ndarray, labels: np.ndarray, per_child: int) -> np.ndarray:
        """Parent rows for every child slot, drawn from the slot's own niche."""
        rng = self.rng
        layout = self.layout
        size = len(fitness)
        if self.config.selection == "rank":
            weight = np.concatenate([ranks(fitness[layout.block(h)]) for h in range(layout.count)]).astype(np.int64)
            cumulative = np.cumsum(weight)
            starts = layout.starts
            offsets = np.where(starts > 0, cumulative[starts - 1], 0)
            totals = np.array([weight[layout.block(h)].sum() for h in range(layout.count)], dtype=np.int64)
            draws = rng.integers(1, totals[labels][:, None] + 1, size=(size, per_child))
            return np.searchsorted(cumulative, offsets[labels][:, None] + draws, side="left")
        probs = np.concatenate([proportional_probabilities(fitness[layout.block(h)]) for h in range(layout.count)])
        cumulative = np.cumsum(probs)
        draws = rng.random((size, per_child))
        rows = np.searchsorted(cumulative, labels[:, None] + draws, side="right")
        lo = layout.starts[labels][:, None]
        hi = lo + np.array(layout.sizes)[labels][:, None] - 1
        return np.clip(rows, lo, hi)

    def _segmented_rows(self, cx_rows: np.ndarray, labels: np.ndarray) -> np.ndarray:
        """Crossover slots that receive a segmented child (a fair coin per eligible slot)."""
        if self.layout.count > 1:
            eligible = cx_rows[labels[cx_rows] == self.main]
        elif self.ext.segmented_crossover:
            eligible = cx_rows
        else:
            return np.empty(0, dtype=np.int64)
        coin = self.rng.random(len(eligible)) < 0.5
        return eligible[coin]

    def _segmented(self, rows: np.ndarray, labels: np.ndarray) -> np.ndarray:
        pop = self.pop
        if self.layout.count > 1:
            pools = {
                seg: DonorPool(np.arange(self.layout.block(h).start, self.layout.block(h).stop),
                               pop.fitness[self.layout.block(h)])
                for h, seg in enumerate(SEGMENTS[:-1])
            }
        else:
            masks = np.repeat(np.array(SEGMENT_MASKS[:-1], dtype=np.uint8), len(pop))
            stacked = np.tile(pop.genes, (len(SEGMENT_MASKS) - 1, 1))
            pref, short, _ = self.model.costs(stacked, masks)
            seg_fit = (pref + self.weights.demand_weight * short).reshape(len(SEGMENT_MASKS) - 1, len(pop))
            rows_all = np.arange(len(pop))
            pools = {seg: DonorPool(rows_all, seg_fit[k]) for k, seg in enumerate(SEGMENTS[:-1])}
        pairings = self.rng.integers(0, len(PAIRINGS), size=len(rows))
        return segmented_children(pop.genes, self.instance.grades, pools, pairings, self.rng)

    def _local_swaps(self, kids: Generation, row_masks: np.ndarray) -> None:
        ext = self.ext
        chance = self.rng.random(len(kids)) < ext.swap_probability
        eligible = np.flatnonzero(chance & swap_eligible(kids.shortfall, ext.swap_intensity))
        if not len(eligible):
            return
        classes = swap_classes(self.instance)
        if not classes:
            return
        changed = [r for r in eligible if swap_improve(kids.genes[r], self.model.penalty, classes)]
        if changed:
            rows = np.array(changed)
            pref, short, excess = self.model.costs(kids.genes[rows], row_masks[rows])
            kids.pref[rows], kids.shortfall[rows], kids.excess[rows] = pref, short, excess

    def _migrate(self) -> None:
        pairs = math.ceil(self.ext.migration_fraction * len(self.pop) - 1e-9)
        if not pairs:
            return
        a = self.rng.integers(0, len(self.pop), size=pairs)
        b = self.rng.integers(0, len(self.pop), size=pairs)
        genes = self.pop.genes
        for x, y in zip(a, b):
            genes[[x, y]] = genes[[y, x]]
        moved = np.unique(np.concatenate([a, b]))
        pref, short, excess = self.model.costs(genes[moved], self.layout.row_masks[moved])
        self.pop.pref[moved], self.pop.shortfall[moved], self.pop.excess[moved] = pref, short, excess
        self.pop.lives[moved] = 3
        self._score(self.pop, self.layout.labels)

    def _shrink(self) -> None:
        current = len(self.pop)
        target = shrink_population(current, self.config.population_size, self.ext.shrink_rate)
        if target < current:
            keep = np.sort(np.argsort(self.pop.fitness, kind="stable")[:target])
            self.pop = self.pop.take(keep)
            self.layout = _Layout([target], self.layout.masks)

    def best_chromosome(self) -> Chromosome:
        b = self.best
        return Chromosome(b.genes[0].copy(), int(b.pref[0]), int(b.shortfall[0]))


def _initial_layout(config: GAConfig) -> _Layout:
    if config.extensions.niching:
        return _Layout(niche_sizes(config.population_size), list(NICHE_MASKS))
    return _Layout([config.population_size], [FULL_MASK])


def evolve(
    instance: Instance,
    config: GAConfig | None = None,
    weights: FitnessWeights | None = None,
    backend: str | None = None,
) -> EvolveResult:
    """Run the GA until a termination rule fires and return the best roster found.

    The reported fitness uses ``weights`` even when the run itself varies the
    weights (oscillation or learning), so results stay comparable.
    """
    config = config or GAConfig()
    weights = weights or FitnessWeights()
    rng = np.random.default_rng(config.seed)
    model = CostModel(instance, weights, backend)
    started = time.perf_counter()
    genes = random_genes(instance, config.population_size, rng)
    state = _State(instance, config, weights, model, genes, _initial_layout(config), rng)
    history = [state.best_fitness()]
    overall = state.best_chromosome()
    overall_fit = int(model.fitness(overall.genes[None, :])[0])
    stopped_by = "max_generations"
    while True:
        if config.max_generations is not None and state.generation >= config.max_generations:
            stopped_by = "max_generations"
            break
        if config.time_limit is not None and time.perf_counter() - started >= config.time_limit:
            stopped_by = "time_limit"
            break
        if (
            config.stagnation_limit is not None
            and config.extensions.oscillation is None
            and state.stagnation >= config.stagnation_limit
        ):
            stopped_by = "stagnation"
            break
        state.step()
        history.append(state.best_fitness())
        candidate = state.best_chromosome()
        fit = int(model.fitness(candidate.genes[None, :])[0])
        if fit < overall_fit:
            overall, overall_fit = candidate, fit
    wall = time.perf_counter() - started
    return EvolveResult(
        best=overall,
        best_fitness=overall_fit,
        feasible=overall.cached_shortfall == 0,
        generations=state.generation,
        wall_time=wall,
        history=history,
        stopped_by=stopped_by,
        final_population_size=len(state.pop),
    )


def advance_niched(genes: np.ndarray, sizes: list[int], instance: Instance, weights: FitnessWeights,
                   config: GAConfig, rng: np.random.Generator) -> np.ndarray:
    """One niched generation starting from explicit genes; returns the new gene matrix."""
    ext = replace(config.extensions, niching=True, dynamic_population=False)
    config = replace(config, population_size=int(sum(sizes)), extensions=ext)
    layout = _Layout(list(sizes), list(NICHE_MASKS))
    state = _State(instance, config, weights, CostModel(instance, weights), np.array(genes, dtype=np.int64), layout, rng)
    state.step()
    return state.pop.genes


def run_seed(run_index: int, base: int = SEED_BASE) -> int:
    """Seed of the given 1-based run."""
    return base + run_index


__all__ = ["EvolveResult", "GAConfig", "SEED_BASE", "advance_niched", "evolve", "run_seed"]
