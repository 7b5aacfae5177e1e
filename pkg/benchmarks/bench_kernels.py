"""Compare the compiled and numpy kernels on population evaluation and exhaustive search.

Usage: python3 benchmarks/bench_kernels.py [--population N] [--repeats R]
"""

import argparse
import timeit

import numpy as np

from nurse_ga import kernels
from nurse_ga.exact import brute_force_solve
from nurse_ga.fitness import FULL_MASK, CostModel
from nurse_ga.harness import ArchetypeSpec, generate_instance, toy_instance
from nurse_ga.model import random_genes


def bench_population(backend: str, population: int, repeats: int) -> float:
    instance = generate_instance(ArchetypeSpec("normal", seed=1))
    model = CostModel(instance, backend=backend)
    genes = random_genes(instance, population, np.random.default_rng(0))
    masks = np.full(population, FULL_MASK, dtype=np.uint8)
    return min(timeit.repeat(lambda: model.costs(genes, masks), number=10, repeat=repeats)) / 10


def bench_enumeration(backend: str, repeats: int) -> tuple[float, int]:
    toy = toy_instance(27)  # about 9 * 10^5 assignments
    seconds = min(timeit.repeat(lambda: brute_force_solve(toy, backend=backend), number=1, repeat=repeats))
    return seconds, toy.search_space


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--population", type=int, default=300)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the numpy fallback is measured")
    print(f"{'backend':<8} {'evaluate N=' + str(args.population):>18} {'enumerate':>22}")
    timings = {}
    for name in backends:
        pop = bench_population(name, args.population, args.repeats)
        enum, space = bench_enumeration(name, args.repeats)
        timings[name] = (pop, enum)
        print(f"{name:<8} {pop * 1e3:>15.3f} ms {enum * 1e3:>12.1f} ms ({space} rows)")
    if {"python", "cython"} <= timings.keys():
        (pop_py, enum_py), (pop_c, enum_c) = timings["python"], timings["cython"]
        print(f"speed-up: evaluate x{pop_py / pop_c:.1f}, enumerate x{enum_py / enum_c:.1f}")

if __name__ == "__main__":
    main()
