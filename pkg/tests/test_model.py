import itertools
import re
import warnings
from math import comb

import numpy as np
import pytest

from nurse_ga.dataio import read_patterns
from nurse_ga.model import (
    Chromosome,
    DemandTable,
    Nurse,
    days_off_bounds,
    enumerate_pattern_library,
    legal_ranges,
    random_chromosome,
    random_genes,
    restrict_by_previous_week,
)

from .conftest import FIXTURES, ZERO_WISHES, make_instance

# Critical chi-square value for 55 degrees of freedom at the 1% level.
CHI2_55_CRITICAL_1PCT = 82.292


def test_block_sizes_match_binomial_counts(library):
    assert library.block("day", 5) == (1, 21)
    assert library.block("night", 4) == (22, 56)
    for (side, shifts), (lo, hi) in library.blocks.items():
        assert hi - lo + 1 == comb(7, shifts)


def test_library_totals(library):
    kinds = [p.kind for p in library]
    assert len(library) == 219
    # The empty pattern appears once on each side.
    assert kinds.count("empty") == 2
    assert kinds.count("day") + 1 == sum(comb(7, k) for k in range(6)) == 120
    assert kinds.count("night") + 1 == sum(comb(7, k) for k in range(5)) == 99


def test_second_full_time_pattern(library):
    assert library[2].slots == (1, 1, 1, 1, 0, 1, 0) + (0,) * 7


def test_enumeration_is_deterministic():
    assert enumerate_pattern_library() == enumerate_pattern_library()


def test_slot_counts_and_exclusivity(library):
    for p in library:
        assert p.shifts == sum(p.slots)
        if p.kind == "day":
            assert not any(p.slots[7:])
        elif p.kind == "night":
            assert not any(p.slots[:7])
        else:
            assert p.shifts == 0


def test_days_off_examples(library):
    assert days_off_bounds(library[1]) == (6, 7)
    assert days_off_bounds(library[22]) == (5, 7)
    assert days_off_bounds((0,) * 14) == (1, 7)


def test_days_off_matches_scan(library):
    for p in library:
        week = [p.slots[d] or p.slots[d + 7] for d in range(7)]
        free = [d + 1 for d in range(7) if not week[d]]
        assert (p.first_day_off, p.last_day_off) == (min(free), max(free))


def test_printed_table_agrees_except_known_typos(library):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        read_patterns(FIXTURES / "a4_patterns.txt")
    flagged = sorted(int(re.search(r"pattern (\d+) lists", str(w.message)).group(1)) for w in caught)
    assert flagged == [10, 44]
    printed = {}
    for line in (FIXTURES / "a4_patterns.txt").read_text().splitlines()[1:]:
        if line.strip() and not line.startswith("#"):
            cols = [int(v) for v in line.split()]
            printed[cols[0]] = cols
    for index, cols in printed.items():
        if index in (10, 44):
            continue
        p = library[index]
        assert list(p.slots) == cols[1:15]
        assert (p.first_day_off, p.last_day_off) == (cols[16], cols[17])


def test_legal_ranges_examples(library):
    assert legal_ranges(1, library) == ((1, 21), (22, 56))
    assert legal_ranges(2, library) == ((57, 91), (92, 126))
    day, night = legal_ranges(7, library)
    assert [library[j].shifts for j in range(day[0], day[1] + 1)] == [0]
    assert [library[j].shifts for j in range(night[0], night[1] + 1)] == [0]


def _nurse(library, last_off, level=1):
    day, night = legal_ranges(level, library)
    return Nurse(1, 1, level, 0, ZERO_WISHES, day, night, {}, last_off, None)


def test_rest_rule_keeps_everything_after_sunday_free(library):
    nurse = _nurse(library, 7)
    assert restrict_by_previous_week(nurse, (nurse.day_range, nurse.night_range), library) == ((1, 21), (22, 56))


def test_rest_rule_drops_late_first_day_off(library):
    nurse = _nurse(library, 5)
    day, night = restrict_by_previous_week(nurse, (nurse.day_range, nurse.night_range), library)
    kept = set(range(day[0], day[1] + 1))
    assert all(library[j].first_day_off <= 5 for j in kept)
    assert {j for j in range(1, 22) if library[j].first_day_off == 6}.isdisjoint(kept)


def test_rest_rule_sunday_only_leaves_six_day_patterns(library):
    nurse = _nurse(library, 1)
    day, _ = restrict_by_previous_week(nurse, (nurse.day_range, nurse.night_range), library)
    brute = [j for j in range(1, 22) if library[j].first_day_off == 1]
    assert list(range(day[0], day[1] + 1)) == brute
    assert len(brute) == 6


def test_rest_rule_never_enlarges_and_is_idempotent(library):
    for level, last in itertools.product(range(1, 8), range(1, 8)):
        nurse = _nurse(library, last, level)
        base = (nurse.day_range, nurse.night_range)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            once = restrict_by_previous_week(nurse, base, library)
            twice = restrict_by_previous_week(nurse, once, library)
        assert once == twice
        for small, big in zip(once, base):
            if small is not None:
                assert big[0] <= small[0] <= small[1] <= big[1]


def test_rest_rule_falls_back_with_warning(library):
    # A 5-night nurse does not exist, so force an impossible restriction via a tiny range.
    nurse = Nurse(1, 1, 1, 0, ZERO_WISHES, (1, 1), None, {}, 1, None)
    assert library[1].first_day_off == 6
    with pytest.warns(RuntimeWarning):
        assert restrict_by_previous_week(nurse, ((1, 1), None), library) == ((1, 1), None)


def test_all_vacation_instance_has_one_chromosome(rng):
    inst = make_instance([(1, 7, 0), (2, 7, 0)], ranges={1: ((218, 218), None), 2: ((218, 218), None)})
    assert inst.search_space == 1
    assert random_chromosome(inst, rng).genes.tolist() == [218, 218]


def test_random_chromosome_is_uniform_over_alphabet(rng):
    inst = make_instance([(1, 1, 0)])
    draws = random_genes(inst, 100_000, rng)[:, 0]
    counts = np.bincount(draws, minlength=57)[1:57]
    assert set(np.unique(draws)) <= set(range(1, 57))
    expected = len(draws) / 56
    chi2 = ((counts - expected) ** 2 / expected).sum()
    assert chi2 < CHI2_55_CRITICAL_1PCT


def test_random_chromosome_seeded():
    inst = make_instance([(1, 1, 0), (2, 2, 1), (3, 3, 2)])
    assert random_chromosome(inst, 7) == random_chromosome(inst, 7)


def test_nurse_validation():
    with pytest.raises(ValueError):
        Nurse(1, 4, 1, 0, ZERO_WISHES, (1, 21), None)
    with pytest.raises(ValueError):
        Nurse(1, 1, 8, 0, ZERO_WISHES, (1, 21), None)
    with pytest.raises(ValueError):
        Nurse(1, 1, 1, 0, (5,) + (0,) * 13, (1, 21), None)


def test_instance_requires_grade_grouping():
    with pytest.raises(ValueError, match="grouped"):
        make_instance([(2, 1, 0), (1, 1, 0)])


def test_instance_rejects_range_of_wrong_level():
    with pytest.raises(ValueError, match="block"):
        make_instance([(1, 2, 0)], ranges={1: ((1, 21), None)})


def test_demand_table_indexing():
    rows = [[2] * 7 + [1] * 7, [2] * 7 + [1] * 7, [5] * 7 + [1] * 7]
    table = DemandTable.from_grade_rows(rows)
    assert table[1, 3] == 5 and table[8, 3] == 1 and table.array.shape == (14, 3)
    with pytest.raises(ValueError):
        DemandTable(((0, 0, -1),) * 14)


def test_chromosome_copy_is_independent():
    a = Chromosome([1, 2, 3], cached_pref=4)
    b = a.copy()
    b.genes[0] = 9
    assert a.genes.tolist() == [1, 2, 3] and b.cached_pref == 4


def test_penalty_matrix_carries_previous_week():
    base = make_instance([(1, 7, 0)])
    nurse = base.nurses[0]
    carried = Nurse(nurse.id, 1, 7, 0, ZERO_WISHES, nurse.day_range, nurse.night_range, nurse.penalties, 7, 12)
    inst = type(base)((carried,), base.library, base.demand)
    assert inst.penalty_matrix(10)[0, 218] == nurse.penalties[218] + 12
    assert inst.penalty_matrix(20)[0, 218] == nurse.penalties[218]
