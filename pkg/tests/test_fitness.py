import warnings

import numpy as np
import pytest

from nurse_ga import kernels
from nurse_ga.dataio import load_instance
from nurse_ga.fitness import (
    SEGMENTS,
    FitnessWeights,
    all_segment_fitness,
    coverage_shortfall,
    preference_cost,
    segment_fitness,
    senior_weekend_excess,
    total_fitness,
)
from nurse_ga.model import Chromosome, Instance, Nurse, random_genes

from .conftest import FIXTURES, ZERO_WISHES, make_instance

A1_ROWS = [[2] * 7 + [1] * 7, [2] * 7 + [1] * 7, [5] * 7 + [1] * 7]
VACATION = 218


def reference_costs(genes, instance, grades=(1, 2, 3), threshold=10):
    """Straight loops over slots and grade rows, used to pin the kernels."""
    pref = 0
    for nurse, gene in zip(instance.nurses, genes):
        if nurse.grade in grades:
            carry = nurse.prev_penalty if nurse.prev_penalty is not None and nurse.prev_penalty >= threshold else 0
            pref += nurse.penalties[int(gene)] + carry
    short = 0
    for slot in range(14):
        for row in grades:
            supply = sum(
                1
                for nurse, gene in zip(instance.nurses, genes)
                if nurse.grade in grades and nurse.grade <= row and instance.library[int(gene)].slots[slot]
            )
            short += max(instance.demand.required[slot][row - 1] - supply, 0)
    return pref, short


def test_all_vacation_against_reference_demand():
    inst = make_instance([(1, 7, 0), (2, 7, 0), (3, 7, 0)], A1_ROWS)
    assert coverage_shortfall([VACATION] * 3, inst) == 84


def test_single_full_timer_misses_friday_and_saturday():
    rows = [[1] * 7 + [0] * 7, [0] * 14, [0] * 14]
    inst = make_instance([(1, 1, 0)], rows)
    assert coverage_shortfall([1], inst) == 2


def test_full_coverage_has_no_shortfall():
    rows = [[1] * 5 + [0] * 9, [1] * 5 + [0] * 9, [1] * 5 + [0] * 9]
    inst = make_instance([(1, 1, 0)], rows)
    assert coverage_shortfall([1], inst) == 0


def test_example_penalty_table_preference_cost():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        inst = load_instance(
            FIXTURES / "a1_demand.txt",
            FIXTURES / "a5_qualifications.txt",
            FIXTURES / "a5_wishes.txt",
            penalties=FIXTURES / "a5_penalties.txt",
        )
    assert preference_cost([1, 57], inst) == 16


def test_carried_penalty_is_added_above_threshold():
    base = make_instance([(1, 7, 0)], penalties={1: {218: 3, 219: 3}})
    n = base.nurses[0]
    carried = Nurse(1, 1, 7, 0, ZERO_WISHES, n.day_range, n.night_range, n.penalties, 7, 12)
    inst = Instance((carried,), base.library, base.demand)
    assert preference_cost([218], inst, FitnessWeights(prev_week_threshold=10)) == 15
    assert preference_cost([218], inst, FitnessWeights(prev_week_threshold=13)) == 3


def _priced_single_nurse():
    rows = [[0] * 5 + [1, 1] + [1] + [0] * 6, [0] * 14, [0] * 14]
    inst = make_instance([(1, 1, 0)], rows)
    penalties = {j: 22 for j in inst.nurses[0].alphabet}
    return make_instance([(1, 1, 0)], rows, penalties={1: penalties})


def test_total_fitness_arithmetic():
    inst = _priced_single_nurse()
    assert preference_cost([1], inst) == 22 and coverage_shortfall([1], inst) == 3
    assert total_fitness([1], inst, FitnessWeights(demand_weight=10)) == 52
    assert total_fitness([1], inst, FitnessWeights(demand_weight=0)) == 22


def test_total_fitness_refreshes_caches():
    inst = _priced_single_nurse()
    ch = Chromosome([1])
    total_fitness(ch, inst)
    assert (ch.cached_pref, ch.cached_shortfall) == (22, 3)


def test_segment_of_highest_grade_on_empty_roster():
    inst = make_instance([(1, 7, 0), (2, 7, 0), (3, 7, 0)], A1_ROWS)
    w = FitnessWeights(demand_weight=10)
    assert segment_fitness([VACATION] * 3, inst, w, {1}) == 10 * 21


def test_segment_uses_only_its_own_supply():
    rows = [[0] * 14, [1] + [0] * 13, [0] * 14]
    inst = make_instance([(1, 1, 0), (2, 7, 0)], rows)
    w = FitnessWeights(demand_weight=1)
    genes = [1, VACATION]
    assert segment_fitness(genes, inst, w, {2}) == inst.nurses[1].penalties[VACATION] + 1
    assert segment_fitness(genes, inst, w, {1, 2}) == preference_cost(genes, inst)


def _senior_instance():
    lib = make_instance([(1, 1, 0)]).library
    sunday = next(p.index for p in lib if p.kind == "day" and p.shifts == 5 and p.slots[0] and not p.slots[6])
    both = next(p.index for p in lib if p.kind == "day" and p.shifts == 5 and p.slots[0] and p.slots[6])
    inst = make_instance([(1, 1, 0), (1, 1, 0), (1, 1, 0)], senior_flags=(True, True, False))
    return inst, sunday, both


def test_senior_weekend_excess_examples():
    inst, sunday, both = _senior_instance()
    weekday_only = next(p.index for p in inst.library if p.kind == "day" and p.shifts == 5 and not p.slots[0] and not p.slots[6])
    assert senior_weekend_excess([weekday_only, weekday_only, both], inst) == 0
    assert senior_weekend_excess([sunday, sunday, weekday_only], inst) == 1
    assert senior_weekend_excess([both, both, weekday_only], inst) == 2


def test_senior_term_enters_total_fitness():
    inst, _, both = _senior_instance()
    genes = [both, both, both]
    plain = total_fitness(genes, inst, FitnessWeights(senior_weight=0))
    assert total_fitness(genes, inst, FitnessWeights(senior_weight=7)) == plain + 14


def test_senior_excess_requires_flags():
    inst = make_instance([(1, 1, 0)])
    with pytest.raises(ValueError):
        senior_weekend_excess([1], inst)


def test_fuzzed_segment_identities(ward, rng):
    w = FitnessWeights(demand_weight=10)
    for genes in random_genes(ward, 1000, rng):
        segs = all_segment_fitness(Chromosome(genes), ward, w)
        assert segs[SEGMENTS.index(frozenset({1, 2, 3}))] == total_fitness(genes, ward, w)
        singles = sum(segment_fitness(genes, ward, FitnessWeights(demand_weight=0), {g}) for g in (1, 2, 3))
        assert singles == preference_cost(genes, ward)


def test_fitness_monotone_in_demand_weight(ward, rng):
    for genes in random_genes(ward, 200, rng):
        values = [total_fitness(genes, ward, FitnessWeights(demand_weight=g)) for g in (0, 1, 5, 25)]
        assert values == sorted(values)


@pytest.mark.parametrize("backend", kernels.available_backends())
def test_kernel_matches_reference_loops(ward, rng, backend):
    genes = random_genes(ward, 60, rng)
    for mask, grades in ((7, (1, 2, 3)), (1, (1,)), (6, (2, 3)), (5, (1, 3))):
        pref, short, _ = kernels.population_costs(
            genes, ward.library.cover, ward.penalty_matrix(10), ward.grades, ward.demand.array, mask, ward.seniors,
            backend=backend,
        )
        for row, g in enumerate(genes):
            assert (int(pref[row]), int(short[row])) == reference_costs(g, ward, grades)


def test_backends_agree_on_random_population(ward, rng):
    if len(kernels.available_backends()) < 2:
        pytest.skip("compiled backend not built")
    genes = random_genes(ward, 500, rng)
    masks = rng.integers(1, 8, size=500).astype(np.uint8)
    args = (genes, ward.library.cover, ward.penalty_matrix(10), ward.grades, ward.demand.array, masks, ward.seniors)
    for a, b in zip(kernels.population_costs(*args, backend="python"), kernels.population_costs(*args, backend="cython")):
        np.testing.assert_array_equal(a, b)
