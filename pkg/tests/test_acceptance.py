"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line in the summary."""

import itertools
import math
import statistics
import subprocess
import sys
import time

import numpy as np
import pytest

from nurse_ga.dataio import export_lp, parse_lp_objective
from nurse_ga.engine import GAConfig, evolve, run_seed
from nurse_ga.exact import brute_force_solve
from nurse_ga.extensions import (
    ExtensionConfig,
    intelligent_mutation_rate,
    learn_weight,
    local_swap_pass,
    shrink_population,
)
from nurse_ga.fitness import CostModel, FitnessWeights, coverage_shortfall, total_fitness
from nurse_ga.harness import ARCHETYPE_WEIGHTS, ArchetypeSpec, generate_instance, toy_instance
from nurse_ga.model import Chromosome, enumerate_pattern_library, legal_ranges, random_genes
from nurse_ga.operators import mutation_rate_heuristics, proportional_probabilities

from .conftest import ACCEPTANCE_LINES

HISTORIES: list[list[int]] = []
RUNS = 20


def report(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def tracked(instance, config, weights=None):
    result = evolve(instance, config, weights)
    HISTORIES.append(result.history)
    return result


@pytest.fixture(scope="module")
def fluctuating():
    return generate_instance(ArchetypeSpec("fluctuating", seed=1)), ARCHETYPE_WEIGHTS["fluctuating"]


def _runs(instance, weights, extensions=ExtensionConfig()):
    return [tracked(instance, GAConfig(seed=run_seed(r), extensions=extensions), weights) for r in range(1, RUNS + 1)]


@pytest.fixture(scope="module")
def plain_runs(fluctuating):
    return _runs(*fluctuating)


@pytest.fixture(scope="module")
def segmented_runs(fluctuating):
    return _runs(*fluctuating, ExtensionConfig(segmented_crossover=True))


def test_criterion_01_pattern_counts():
    started = time.perf_counter()
    library = enumerate_pattern_library()
    (d_lo, d_hi), (n_lo, n_hi) = legal_ranges(1, library)
    counts = (d_hi - d_lo + 1, n_hi - n_lo + 1, len(library))
    elapsed = time.perf_counter() - started
    report(1, counts == (21, 35, 219) and elapsed < 1, f"day/night/total = {counts}, {elapsed * 1000:.1f} ms")


def test_criterion_02_parameter_heuristics():
    a, b = mutation_rate_heuristics(20, 1000)
    report(2, a == 0.05 and round(b, 4) == 0.0004, f"rates = ({a}, {b:.6f})")


def test_criterion_03_proportional_example():
    percent = [round(100 * p) for p in proportional_probabilities([48, 123, 55, 99])]
    report(3, percent == [15, 38, 17, 30], f"percentages = {percent}")


def test_criterion_04_oracle_equivalence():
    started = time.perf_counter()
    hits = total = 0
    for seed in range(50):
        toy = toy_instance(seed)
        optimum = brute_force_solve(toy).optimum_fitness
        for r in range(1, 6):
            result = tracked(toy, GAConfig(population_size=200, seed=run_seed(r)))
            hits += result.best_fitness == optimum
            total += 1
    elapsed = time.perf_counter() - started
    rate = hits / total
    report(4, rate >= 0.9 and elapsed <= 60, f"optimum hit in {hits}/{total} runs ({rate:.0%}), {elapsed:.1f} s")


def test_criterion_05_segmented_feasibility(plain_runs, segmented_runs):
    plain = 100 * statistics.fmean(r.feasible for r in plain_runs)
    seg = 100 * statistics.fmean(r.feasible for r in segmented_runs)
    ok = seg >= 3 * plain and not (plain == 0 and seg == 0)
    report(5, ok, f"feasibility plain {plain:.0f}% vs segmented {seg:.0f}% (needs >= 3x)")


def test_criterion_06_niching_speed(fluctuating, segmented_runs):
    niched = _runs(*fluctuating, ExtensionConfig(niching=True))
    t_niche = statistics.fmean(r.wall_time for r in niched)
    t_seg = statistics.fmean(r.wall_time for r in segmented_runs)
    report(6, t_niche <= 0.5 * t_seg,
           f"mean wall niching {t_niche * 1000:.0f} ms vs segmented {t_seg * 1000:.0f} ms (ratio {t_niche / t_seg:.2f}, needs <= 0.5)")


def test_criterion_07_local_swap(fluctuating, plain_runs):
    instance, weights = fluctuating
    rng = np.random.default_rng(7)
    violations = 0
    for genes in random_genes(instance, 10_000, rng):
        swapped = local_swap_pass(Chromosome(genes), instance, "max", rng, swap_probability=1.0, weights=weights)
        if total_fitness(swapped.genes, instance, weights) > total_fitness(genes, instance, weights):
            violations += 1
        elif coverage_shortfall(swapped.genes, instance) != coverage_shortfall(genes, instance):
            violations += 1
    swap_runs = _runs(instance, weights, ExtensionConfig(swap_intensity="max"))
    with_swap = statistics.fmean(r.best_fitness for r in swap_runs)
    without = statistics.fmean(r.best_fitness for r in plain_runs)
    report(7, violations == 0 and with_swap <= without,
           f"{violations} fuzz violations in 10^4; mean best {with_swap:.1f} with swap vs {without:.1f} without")


def test_criterion_08_elitism_monotone(fluctuating):
    instance, weights = fluctuating
    if not HISTORIES:
        for r in range(1, 6):
            tracked(instance, GAConfig(seed=run_seed(r)), weights)
    broken = sum(any(b > a for a, b in zip(h, h[1:])) for h in HISTORIES)
    report(8, broken == 0, f"{broken} of {len(HISTORIES)} run histories ever increased")


def test_criterion_09_lp_fidelity():
    mismatches = checked = 0
    order_ok = True
    for seed in range(20):
        toy = toy_instance(100 + seed, space_limit=10**5)
        text = export_lp(toy)
        positions = [text.find(k) for k in ("minimize", "subject to", "integers", "end")]
        order_ok &= -1 not in positions and positions == sorted(positions)
        coef = parse_lp_objective(text)
        genes = np.array(list(itertools.product(*toy.alphabets)), dtype=np.int64)
        lookup = np.zeros((toy.size + 1, int(genes.max()) + 1), dtype=np.int64)
        for (i, j), c in coef.items():
            lookup[i, j] = c
        from_lp = lookup[np.arange(1, toy.size + 1), genes].sum(axis=1)
        internal, _, _ = CostModel(toy).costs(genes)
        mismatches += int(np.count_nonzero(from_lp != internal))
        checked += len(genes)
    report(9, mismatches == 0 and order_ok, f"{mismatches} mismatches over {checked} assignments; keyword order ok={order_ok}")


def _cli(*args):
    result = subprocess.run([sys.executable, "-m", "nurse_ga", *map(str, args)], capture_output=True)
    return result.returncode


@pytest.mark.filterwarnings("ignore:no patterns file")
def test_criterion_10_determinism(tmp_path):
    grid = tmp_path / "grid.json"
    grid.write_text(
        '{"repetitions": 2, "instances": [{"name": "f", "archetype": "fluctuating", "seed": 1}],'
        ' "configs": [{"name": "base", "population_size": 50, "max_generations": 5},'
        ' {"name": "niche", "population_size": 50, "max_generations": 5, "extensions": {"niching": true}}]}'
    )
    commands = {
        "roster": ["solve", "--archetype", "fluctuating", "--seed", "543211", "--population", "80", "--output"],
        "csv": ["experiment", grid, "--seed", "543210", "--no-timing", "--output"],
        "lp": ["export-lp", "--archetype", "restrictive", "--seed", "3", "--output"],
    }
    identical = {}
    for name, args in commands.items():
        outputs = []
        for attempt in range(2):
            path = tmp_path / f"{name}{attempt}"
            assert _cli(*args, path) in (0, 3)
            outputs.append(path.read_bytes())
        identical[name] = outputs[0] == outputs[1] and bool(outputs[0])
    report(10, all(identical.values()), f"byte-identical reruns: {identical}")


def test_criterion_11_bounds():
    rng = np.random.default_rng(11)
    learn_ok = shrink_ok = True
    for g0 in range(1, 40):
        g = g0
        for flag in rng.random(300) < rng.random():
            g = learn_weight(g, bool(flag), g0)
            learn_ok &= math.ceil(g0 / 3) <= g <= 3 * g0
    for initial in range(1, 2001, 37):
        size = initial
        for _ in range(600):
            size = shrink_population(size, initial, float(rng.uniform(0, 0.5)))
            shrink_ok &= size >= math.ceil(initial / 3)
    base = intelligent_mutation_rate(0, 0)
    report(11, learn_ok and shrink_ok and base == 0.005,
           f"learn_weight in bounds={learn_ok}, shrink floor held={shrink_ok}, base rate={base}")
