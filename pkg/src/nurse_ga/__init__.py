"""Weekly nurse rostering with a genetic algorithm, an exact oracle and LP export."""

from .dataio import DataError, export_lp, load_instance, load_instance_dir, write_instance, write_schedule
from .engine import EvolveResult, GAConfig, evolve
from .exact import brute_force_solve, check_feasible
from .extensions import ExtensionConfig, OscillationSchedule
from .fitness import FitnessWeights, coverage_shortfall, preference_cost, total_fitness
from .harness import ArchetypeSpec, generate_instance, run_experiment
from .kernels import BACKEND
from .model import Chromosome, DemandTable, Instance, Nurse, PatternLibrary, ShiftPattern, default_library
from .operators import Substitution

__version__ = "0.1.0"

__all__ = [
    "ArchetypeSpec",
    "BACKEND",
    "Chromosome",
    "DataError",
    "DemandTable",
    "EvolveResult",
    "ExtensionConfig",
    "FitnessWeights",
    "GAConfig",
    "Instance",
    "Nurse",
    "OscillationSchedule",
    "PatternLibrary",
    "ShiftPattern",
    "Substitution",
    "brute_force_solve",
    "check_feasible",
    "coverage_shortfall",
    "default_library",
    "evolve",
    "export_lp",
    "generate_instance",
    "load_instance",
    "load_instance_dir",
    "preference_cost",
    "run_experiment",
    "total_fitness",
    "write_instance",
    "write_schedule",
]
