"""Large-scale many-objective optimization with swarm and adversarial offspring."""

from .algorithm import CsodConfig, MixingPolicy, RunResult, mix_counts, run, step
from .baselines import BaselineConfig, nsga2_run, non_dominated_sort, random_search
from .core import (Bounds, ConfigError, ContractError, EvaluationError, Individual,
                   Population, evaluate_population, init_population, make_rng)
from .lsmop import LsmopInstance, make_instance, sample_pf
from .metrics import igd, significance

__all__ = [
    "BaselineConfig", "Bounds", "ConfigError", "ContractError", "CsodConfig",
    "EvaluationError", "Individual", "LsmopInstance", "MixingPolicy", "Population",
    "RunResult", "evaluate_population", "igd", "init_population", "make_instance",
    "make_rng", "mix_counts", "non_dominated_sort", "nsga2_run", "random_search",
    "run", "sample_pf", "significance", "step",
]
