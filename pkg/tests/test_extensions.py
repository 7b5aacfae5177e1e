import math

import numpy as np
import pytest

from nurse_ga.engine import GAConfig, evolve
from nurse_ga.extensions import (
    PAIRINGS,
    ExtensionConfig,
    NichedPopulation,
    OscillationSchedule,
    RankedPopulation,
    StaleRankingError,
    intelligent_mutation_rate,
    learn_weight,
    local_swap_pass,
    niche_sizes,
    niche_step,
    oscillating_weights,
    reinit_count,
    segmented_children,
    segmented_crossover_child,
    shrink_population,
    swap_classes,
    swap_improve,
)
from nurse_ga.fitness import FitnessWeights, coverage_shortfall, total_fitness
from nurse_ga.model import Chromosome, random_genes


def test_intelligent_mutation_base_value():
    assert intelligent_mutation_rate(0, 0) == 0.005


def test_intelligent_mutation_monotone():
    grid = np.arange(0, 300)
    assert np.all(np.diff(intelligent_mutation_rate(grid, 0)) >= 0)
    assert np.all(np.diff(intelligent_mutation_rate(0, grid)) >= 0)
    assert intelligent_mutation_rate(10**6, 10**6) == 1.0


def test_shrink_examples():
    assert shrink_population(1200, 1200) == 1188
    assert shrink_population(400, 1200) == 400


def test_shrink_trajectory_never_below_floor():
    for initial in (7, 30, 300, 1200, 2000):
        size = initial
        for _ in range(2000):
            size = shrink_population(size, initial)
            assert size >= math.ceil(initial / 3)
        assert size == math.ceil(initial / 3)


def test_learn_weight_bounds(rng):
    for g0 in (1, 2, 5, 10, 25):
        g = g0
        for flag in rng.random(500) < 0.5:
            g = learn_weight(g, bool(flag), g0)
            assert math.ceil(g0 / 3) <= g <= 3 * g0
    assert learn_weight(5, True, 5) == 4 and learn_weight(5, False, 5) == 6


def test_reinit_count():
    assert reinit_count(0.01, 1200) == 12
    assert reinit_count(0.0, 1200) == 0


def test_oscillation_schedule():
    a, b = FitnessWeights(demand_weight=5), FitnessWeights(demand_weight=1)
    schedule = OscillationSchedule(a, b, 3, 2)
    assert [oscillating_weights(g, schedule).demand_weight for g in range(10)] == [5, 5, 5, 1, 1] * 2
    with pytest.raises(ValueError):
        OscillationSchedule(a, b, 0, 2)


def test_equal_oscillation_weights_match_plain_run(ward):
    weights = FitnessWeights()
    plain = GAConfig(population_size=60, max_generations=8, seed=7)
    osc = GAConfig(population_size=60, max_generations=8, seed=7,
                   extensions=ExtensionConfig(oscillation=OscillationSchedule(weights, weights, 2, 3)))
    assert evolve(ward, plain, weights).history == evolve(ward, osc, weights).history


def test_swap_example_two_nurses():
    genes = np.array([0, 1])
    penalty = np.array([[5, 1], [2, 9]])
    assert swap_improve(genes, penalty, [[0, 1]])
    assert genes.tolist() == [1, 0]
    assert (5 + 9) - (penalty[0, 1] + penalty[1, 0]) == 11


def test_swap_three_cycle():
    genes = np.array([0, 1, 2])
    # no pair swap helps, the rotation a<-b<-c<-a does
    penalty = np.array([[5, 0, 9], [9, 5, 0], [0, 9, 5]])
    assert swap_improve(genes, penalty, [[0, 1, 2]])
    assert genes.tolist() == [1, 2, 0]


def test_swap_classes_group_grade_and_level(ward):
    for members in swap_classes(ward):
        keys = {(ward.nurses[p].grade, ward.nurses[p].hours_level) for p in members}
        assert len(keys) == 1


def test_swap_pass_never_worse_and_keeps_coverage(ward, rng):
    weights = FitnessWeights()
    for genes in random_genes(ward, 500, rng):
        before = Chromosome(genes)
        after = local_swap_pass(before, ward, "max", rng, swap_probability=1.0, weights=weights)
        assert total_fitness(after.genes, ward, weights) <= total_fitness(genes, ward, weights)
        assert coverage_shortfall(after.genes, ward) == coverage_shortfall(genes, ward)


def test_swap_respects_intensity(ward, rng):
    genes = random_genes(ward, 1, rng)[0]
    chrom = Chromosome(genes)
    assert coverage_shortfall(genes, ward) > 0
    untouched = local_swap_pass(chrom, ward, 0, rng, swap_probability=1.0)
    assert untouched == chrom


def test_extension_config_validation():
    with pytest.raises(ValueError):
        ExtensionConfig(niching=True, dynamic_population=True)
    with pytest.raises(ValueError):
        ExtensionConfig(swap_intensity=3)
    with pytest.raises(ValueError):
        ExtensionConfig(migration_fraction=1.5)


def test_segmented_children_copy_whole_blocks(ward, rng):
    members = [Chromosome(g) for g in random_genes(ward, 30, rng)]
    ranked = RankedPopulation.rank(members, ward)
    pairings = np.repeat(np.arange(len(PAIRINGS)), 25)
    kids = segmented_children(ranked.genes, ranked.grades, ranked.pools(), pairings, rng)
    for kid, pid in zip(kids, pairings):
        for part in PAIRINGS[pid]:
            cols = np.isin(ward.grades, list(part))
            assert (ranked.genes[:, cols] == kid[cols]).all(axis=1).any()


def test_segmented_child_is_legal(ward, rng):
    ranked = RankedPopulation.rank([Chromosome(g) for g in random_genes(ward, 20, rng)], ward)
    for _ in range(50):
        child = segmented_crossover_child(ranked, rng)
        for col, alphabet in enumerate(ward.alphabets):
            assert child.genes[col] in alphabet


def test_stale_ranking_detected(ward, rng):
    ranked = RankedPopulation.rank([Chromosome(g) for g in random_genes(ward, 5, rng)], ward)
    ranked.genes[0] = ranked.genes[1]
    with pytest.raises(StaleRankingError):
        segmented_crossover_child(ranked, rng)


def test_niche_sizes():
    assert niche_sizes(1200) == [100] * 6 + [600]
    assert sum(niche_sizes(301)) == 301
    with pytest.raises(ValueError):
        niche_sizes(10)


def test_niche_step_preserves_sizes(ward, rng):
    sizes = niche_sizes(120)
    population = NichedPopulation(random_genes(ward, 120, rng), sizes)
    config = GAConfig(population_size=120, max_generations=1,
                      extensions=ExtensionConfig(niching=True, migration_fraction=0.1))
    for _ in range(3):
        population = niche_step(population, ward, None, rng, config)
        assert population.sizes == sizes
        assert population.genes.shape == (120, ward.size)
        assert np.bincount(population.labels).tolist() == sizes
