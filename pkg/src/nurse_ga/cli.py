"""Command line entry point: ``nurse-ga {solve,export-lp,generate,experiment,oracle}``."""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from dataclasses import fields, replace
from pathlib import Path

from .dataio import DataError, PenaltySynthesisConfig, export_lp, load_instance, load_instance_dir, write_instance, write_schedule
from .engine import SEED_BASE, GAConfig, evolve
from .exact import DEFAULT_LIMIT, SearchSpaceTooLarge, brute_force_solve
from .extensions import ExtensionConfig, OscillationSchedule
from .fitness import FitnessWeights
from .harness import ARCHETYPE_WEIGHTS, ARCHETYPES, ArchetypeSpec, generate_instance, run_experiment
from .model import Instance
from .operators import SUBSTITUTION_KINDS, Substitution

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3


class UsageError(Exception):
    pass


def _swap_intensity(text: str):
    if text == "max":
        return "max"
    if text in ("0", "1", "5"):
        return int(text)
    raise argparse.ArgumentTypeError("swap intensity must be 0, 1, 5 or max")


# --------------------------------------------------------------------------- argument groups


def _add_seed(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--seed", type=int, help="RNG seed (required unless --random)")
    group.add_argument("--random", action="store_true", help="draw a fresh seed and report it on stderr")


def _add_instance(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("instance")
    g.add_argument("--instance-dir", type=Path, help="directory with demand.txt, qualifications.txt, ...")
    g.add_argument("--demand", type=Path)
    g.add_argument("--qualifications", type=Path)
    g.add_argument("--wishes", type=Path)
    g.add_argument("--patterns", type=Path)
    g.add_argument("--penalties", type=Path)
    g.add_argument("--previous", type=Path)
    g.add_argument("--rest-rule", action="store_true", help="restrict patterns by the previous week's last day off")
    g.add_argument("--archetype", choices=ARCHETYPES)
    g.add_argument("--nurses", type=int, help="nurse count for --archetype")
    g.add_argument("--instance-seed", type=int, help="archetype seed (defaults to --seed)")
    s = parser.add_argument_group("penalty synthesis")
    s.add_argument("--quality-weight", type=int, default=1)
    s.add_argument("--wish-weight", type=int, default=1)
    s.add_argument("--cross-kind-surcharge", type=int, default=18)
    s.add_argument("--clamp-max", type=int, default=100)


def _add_weights(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("fitness weights")
    g.add_argument("--demand-weight", type=int, help="shortfall weight (default 5, archetype default otherwise)")
    g.add_argument("--senior-weight", type=int, default=0)
    g.add_argument("--prev-week-threshold", type=int, default=10)


def _add_ga(parser: argparse.ArgumentParser) -> None:
    d = GAConfig()
    g = parser.add_argument_group("genetic algorithm")
    g.add_argument("--population", type=int, default=d.population_size)
    g.add_argument("--mutation-prob", type=float, default=d.mutation_prob)
    g.add_argument("--reproduction-prob", type=float, default=d.reproduction_prob)
    g.add_argument("--mutation-gene-rate", type=float)
    g.add_argument("--crossover", choices=("uniform", "k_point"), default=d.crossover)
    g.add_argument("--k-points", type=int, default=d.k_points)
    g.add_argument("--parents", type=int, default=d.parent_count)
    g.add_argument("--selection", choices=("rank", "proportional"), default=d.selection)
    g.add_argument("--substitution", choices=SUBSTITUTION_KINDS, default=d.substitution.kind)
    g.add_argument("--substitution-value", type=float, default=d.substitution.value)
    g.add_argument("--no-elitism", action="store_true")
    g.add_argument("--max-generations", type=int)
    g.add_argument("--time-limit", type=float, help="seconds")
    g.add_argument("--stagnation-limit", type=int, default=d.stagnation_limit, help="0 disables")
    e = parser.add_argument_group("extensions")
    e.add_argument("--intelligent-mutation", action="store_true")
    e.add_argument("--reinit", action="store_true")
    e.add_argument("--reinit-fraction", type=float, default=0.01)
    e.add_argument("--swap-intensity", type=_swap_intensity)
    e.add_argument("--swap-probability", type=float, default=0.10)
    e.add_argument("--oscillation", nargs=4, type=int, metavar=("GENS_A", "GENS_B", "WEIGHT_A", "WEIGHT_B"),
                   help="alternate demand weights A and B for the given generation counts")
    e.add_argument("--dynamic-population", action="store_true")
    e.add_argument("--shrink-rate", type=float, default=0.01)
    e.add_argument("--learning-weight", action="store_true")
    e.add_argument("--segmented-crossover", action="store_true")
    e.add_argument("--niching", action="store_true")
    e.add_argument("--migration-fraction", type=float, default=0.01)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nurse-ga", description="Weekly nurse rostering with a genetic algorithm.")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="optimise one instance and write the roster")
    _add_instance(solve)
    _add_weights(solve)
    _add_ga(solve)
    _add_seed(solve)
    solve.add_argument("--output", type=Path, help="roster file (stdout if omitted)")

    lp = sub.add_parser("export-lp", help="write the integer program in LP text format")
    _add_instance(lp)
    _add_weights(lp)
    _add_seed(lp)
    lp.add_argument("--output", type=Path)

    gen = sub.add_parser("generate", help="write a seeded archetype instance as files")
    gen.add_argument("--archetype", choices=ARCHETYPES, required=True)
    gen.add_argument("--nurses", type=int)
    _add_seed(gen)
    gen.add_argument("--output-dir", type=Path, required=True)
    s = gen.add_argument_group("penalty synthesis")
    s.add_argument("--quality-weight", type=int, default=1)
    s.add_argument("--wish-weight", type=int, default=1)
    s.add_argument("--cross-kind-surcharge", type=int, default=18)
    s.add_argument("--clamp-max", type=int, default=100)

    exp = sub.add_parser("experiment", help="run a JSON grid of instances and configs, write CSV")
    exp.add_argument("grid", type=Path)
    _add_weights(exp)
    _add_ga(exp)
    _add_seed(exp)
    exp.add_argument("--repetitions", type=int)
    exp.add_argument("--output", type=Path)
    exp.add_argument("--no-timing", action="store_true", help="write NA for wall times (byte-reproducible CSV)")

    oracle = sub.add_parser("oracle", help="exhaustive optimum of a tiny instance")
    _add_instance(oracle)
    _add_weights(oracle)
    _add_seed(oracle)
    oracle.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    oracle.add_argument("--output", type=Path)
    return parser


# --------------------------------------------------------------------------- conversions


def _seed(args, required: bool) -> int | None:
    if args.random:
        seed = secrets.randbelow(2**31)
        print(f"seed: {seed}", file=sys.stderr)
        return seed
    if args.seed is None and required:
        raise UsageError("--seed is required (or pass --random)")
    return args.seed


def _synthesis(args) -> PenaltySynthesisConfig:
    return PenaltySynthesisConfig(args.quality_weight, args.wish_weight, args.cross_kind_surcharge, args.clamp_max)


def _instance(args, seed: int | None) -> tuple[Instance, str | None]:
    files = (args.demand, args.qualifications, args.wishes)
    sources = sum([args.instance_dir is not None, args.archetype is not None, any(f is not None for f in files)])
    if sources != 1:
        raise UsageError("give exactly one of --instance-dir, --archetype or --demand/--qualifications/--wishes")
    if args.archetype is not None:
        instance_seed = args.instance_seed if args.instance_seed is not None else seed
        if instance_seed is None:
            raise UsageError("--archetype needs --instance-seed or --seed")
        spec = ArchetypeSpec(args.archetype, args.nurses, instance_seed)
        return generate_instance(spec, _synthesis(args)), args.archetype
    common = {"synthesis": _synthesis(args), "apply_rest_rule": args.rest_rule}
    if args.instance_dir is not None:
        return load_instance_dir(args.instance_dir, **common), None
    if None in files:
        raise UsageError("--demand, --qualifications and --wishes must be given together")
    instance = load_instance(
        args.demand, args.qualifications, args.wishes,
        patterns=args.patterns, penalties=args.penalties, previous=args.previous, **common,
    )
    return instance, None


def _weights(args, archetype: str | None) -> FitnessWeights:
    base = ARCHETYPE_WEIGHTS[archetype] if archetype else FitnessWeights()
    demand_weight = args.demand_weight if args.demand_weight is not None else base.demand_weight
    return FitnessWeights(demand_weight, args.senior_weight, args.prev_week_threshold)


def _ga_config(args, seed: int, weights: FitnessWeights) -> GAConfig:
    oscillation = None
    if args.oscillation:
        gens_a, gens_b, weight_a, weight_b = args.oscillation
        oscillation = OscillationSchedule(
            replace(weights, demand_weight=weight_a), replace(weights, demand_weight=weight_b), gens_a, gens_b
        )
    ext = ExtensionConfig(
        intelligent_mutation=args.intelligent_mutation,
        reinit=args.reinit,
        reinit_fraction=args.reinit_fraction,
        swap_intensity=args.swap_intensity,
        swap_probability=args.swap_probability,
        oscillation=oscillation,
        dynamic_population=args.dynamic_population,
        shrink_rate=args.shrink_rate,
        learning_weight=args.learning_weight,
        segmented_crossover=args.segmented_crossover,
        niching=args.niching,
        migration_fraction=args.migration_fraction,
    )
    return GAConfig(
        population_size=args.population,
        mutation_prob=args.mutation_prob,
        reproduction_prob=args.reproduction_prob,
        crossover=args.crossover,
        k_points=args.k_points,
        parent_count=args.parents,
        selection=args.selection,
        substitution=Substitution(args.substitution, args.substitution_value),
        elitism=not args.no_elitism,
        max_generations=args.max_generations,
        time_limit=args.time_limit,
        stagnation_limit=args.stagnation_limit or None,
        seed=seed,
        mutation_gene_rate=args.mutation_gene_rate,
        extensions=ext,
    )


def _open_out(path: Path | None):
    return open(path, "w", encoding="utf-8", newline="\n") if path else sys.stdout


# --------------------------------------------------------------------------- commands


def _cmd_solve(args) -> int:
    seed = _seed(args, required=True)
    instance, archetype = _instance(args, seed)
    weights = _weights(args, archetype)
    result = evolve(instance, _ga_config(args, seed, weights), weights)
    out = _open_out(args.output)
    try:
        write_schedule(instance, result.best, out, weights)
    finally:
        if out is not sys.stdout:
            out.close()
    print(
        f"fitness={result.best_fitness} feasible={result.feasible} generations={result.generations} "
        f"stopped_by={result.stopped_by} wall_s={result.wall_time:.3f}",
        file=sys.stderr,
    )
    return EXIT_OK if result.feasible else EXIT_INFEASIBLE


def _cmd_export_lp(args) -> int:
    instance, archetype = _instance(args, _seed(args, required=False))
    out = _open_out(args.output)
    try:
        export_lp(instance, out, _weights(args, archetype))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _cmd_generate(args) -> int:
    seed = _seed(args, required=True)
    instance = generate_instance(ArchetypeSpec(args.archetype, args.nurses, seed), _synthesis(args))
    for path in write_instance(instance, args.output_dir).values():
        print(path, file=sys.stderr)
    return EXIT_OK


_CONFIG_FIELDS = {f.name for f in fields(GAConfig)} - {"extensions", "substitution", "seed"}
_EXT_FIELDS = {f.name for f in fields(ExtensionConfig)} - {"oscillation"}


def _grid_config(entry: dict, default: GAConfig) -> GAConfig:
    entry = dict(entry)
    entry.pop("name", None)
    unknown = set(entry) - _CONFIG_FIELDS - {"extensions", "substitution"}
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    ext_entry = entry.pop("extensions", {}) or {}
    bad = set(ext_entry) - _EXT_FIELDS
    if bad:
        raise UsageError(f"unknown extension keys: {', '.join(sorted(bad))}")
    if "substitution" in entry:
        sub = entry.pop("substitution")
        entry["substitution"] = Substitution(sub["kind"], float(sub.get("value", 20.0)))
    return replace(default, extensions=replace(default.extensions, **ext_entry), **entry)


def _cmd_experiment(args) -> int:
    seed = _seed(args, required=True)
    try:
        grid = json.loads(args.grid.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read grid {args.grid}: {exc}") from exc
    inst_entries = grid.get("instances") or []
    cfg_entries = grid.get("configs") or []
    if not inst_entries or not cfg_entries:
        raise UsageError("experiment grid needs at least one instance and one config")

    instances, weights = {}, {}
    for entry in inst_entries:
        name = entry["name"]
        if "archetype" in entry:
            spec = ArchetypeSpec(entry["archetype"], entry.get("nurses"), int(entry.get("seed", 1)))
            instances[name] = generate_instance(spec)
            base = ARCHETYPE_WEIGHTS[entry["archetype"]]
        elif "dir" in entry:
            instances[name] = load_instance_dir((args.grid.parent / entry["dir"]).resolve())
            base = FitnessWeights()
        else:
            raise UsageError(f"instance {name!r} needs 'archetype' or 'dir'")
        demand_weight = entry.get("demand_weight", args.demand_weight if args.demand_weight is not None else base.demand_weight)
        weights[name] = FitnessWeights(demand_weight, args.senior_weight, args.prev_week_threshold)

    default = _ga_config(args, SEED_BASE + 1, FitnessWeights())
    configs = {entry["name"]: _grid_config(entry, default) for entry in cfg_entries}
    repetitions = args.repetitions or int(grid.get("repetitions", 20))
    out = _open_out(args.output)
    try:
        run_experiment(instances, configs, repetitions, seed, weights, out, timing=not args.no_timing)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _cmd_oracle(args) -> int:
    instance, archetype = _instance(args, _seed(args, required=False))
    weights = _weights(args, archetype)
    result = brute_force_solve(instance, weights, args.limit)
    out = _open_out(args.output)
    try:
        write_schedule(instance, result.optimum, out, weights)
        out.write(f"enumerated {result.enumerated}\n")
        if result.feasible_cost is None:
            out.write("no feasible assignment\n")
        else:
            out.write(f"best feasible preference cost {result.feasible_cost}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


COMMANDS = {
    "solve": _cmd_solve,
    "export-lp": _cmd_export_lp,
    "generate": _cmd_generate,
    "experiment": _cmd_experiment,
    "oracle": _cmd_oracle,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"nurse-ga: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchSpaceTooLarge as exc:
        print(f"nurse-ga: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (DataError, OSError, ValueError) as exc:
        print(f"nurse-ga: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
