"""MOEA-CSOD: swarm and adversarial offspring under reference-vector-guided selection."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import dan, lsmop
from .core import Bounds, ConfigError, ContractError, Population, evaluate_population, init_population
from .lmocso import MutationParams, compete_and_update, polynomial_mutation
from .metrics import igd
from .refvec import DegenerateRangeError, ReferenceVectorSet, adapt, vectors_for_population
from .selection import ApdParams, elitist_select


@dataclass(frozen=True)
class MixingPolicy:
    """Share of offspring drawn from the generator, uniform in [low, high]."""

    low: float = 0.2
    high: float = 0.8
    per_generation: bool = True
    fixed: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.low <= self.high <= 1.0:
            raise ConfigError(f"need 0 <= low <= high <= 1, got {self.low}, {self.high}")
        if self.fixed is not None and not self.low <= self.fixed <= self.high:
            raise ConfigError(f"fixed lambda {self.fixed} outside [{self.low}, {self.high}]")

    def draw(self, rng: np.random.Generator) -> float:
        if self.fixed is not None:
            return self.fixed
        return float(rng.uniform(self.low, self.high))


def mix_counts(lam: float, n: int, low: float = 0.2, high: float = 0.8) -> tuple[int, int]:
    """(generator offspring, swarm offspring) for a population of ``n``."""
    if not low <= lam <= high:
        raise ContractError(f"lambda {lam} outside [{low}, {high}]")
    if n < 1:
        raise ContractError("offspring target must be positive")
    # guard against lam * n landing one ulp above an integer
    n_dan = min(math.ceil(lam * n - 1e-9), n)
    return n_dan, n - n_dan


@dataclass(frozen=True)
class CsodConfig:
    N: int
    t_max: int = 50
    alpha: float = 2.0
    mixing: MixingPolicy = field(default_factory=MixingPolicy)
    dan: dan.DanConfig = field(default_factory=dan.DanConfig)
    mutation: MutationParams | None = None
    pf_points: int = 10000

    def __post_init__(self):
        if self.t_max < 0:
            raise ConfigError("t_max must be nonnegative")
        if self.N < 2:
            raise ConfigError(f"population size must be at least 2, got {self.N}")


@dataclass(frozen=True)
class StepInfo:
    lam: float
    n_dan: int
    n_cso: int
    union: Population


@dataclass(frozen=True)
class CsodState:
    population: Population
    vectors: ReferenceVectorSet
    model: dan.DanModel
    t: int
    lam: float | None = None
    info: StepInfo | None = None


@dataclass
class RunResult:
    algorithm: str
    population: Population
    igd: list[float]
    sizes: list[int]
    seed: int | None = None
    wall_time: float = 0.0
    lambdas: list[float] = field(default_factory=list)

    @property
    def final_igd(self) -> float:
        return self.igd[-1]


def reference_front(problem, count: int) -> np.ndarray:
    if isinstance(problem, lsmop.LsmopInstance):
        return _cached_front(problem.id, problem.M, problem.D, count)
    raise ContractError("pass a reference set explicitly for non-LSMOP problems")


_FRONTS: dict[tuple[int, int, int], np.ndarray] = {}


def _cached_front(id: int, M: int, D: int, count: int) -> np.ndarray:
    # only the shape class and M matter, so D is ignored when caching
    key = (id, M, count)
    if key not in _FRONTS:
        front = lsmop.sample_pf(lsmop.make_instance(id, M, max(D, M)), count)
        front.setflags(write=False)
        _FRONTS[key] = front
    return _FRONTS[key]


def cso_offspring(pop: Population, n: int, bounds: Bounds, mutation: MutationParams,
                  rng: np.random.Generator) -> Population:
    """``n`` mutated swarm candidates: updated losers first, then pass-through members.

    Extra competition rounds are run when one round yields fewer than ``n``.
    """
    if n == 0:
        return Population.empty(pop.n_var, pop.n_obj)
    xs, vs = [], []
    while len(xs) < n:
        losers = dict(compete_and_update(pop, bounds, rng)) if len(pop) >= 2 else {}
        for ind in losers.values():
            xs.append(ind.x)
            vs.append(ind.v)
        for i in range(len(pop)):
            if i not in losers:
                xs.append(pop.X[i])
                vs.append(pop.V[i])
    X = polynomial_mutation(np.stack(xs[:n]), bounds, mutation, rng)
    return Population.unevaluated(X, pop.n_obj, np.stack(vs[:n]))


def init_state(problem, config: CsodConfig, rng: np.random.Generator) -> CsodState:
    V = vectors_for_population(problem.n_obj, config.N)
    if len(V) != config.N:
        raise ConfigError(f"N={config.N} but the reference design has {len(V)} vectors")
    pop = init_population(problem, config.N, rng)
    model = dan.init_model(problem.bounds.dim, config.dan, rng)
    lam = None if config.mixing.per_generation else config.mixing.draw(rng)
    return CsodState(pop, ReferenceVectorSet.from_vectors(V), model, 0, lam)


def step(state: CsodState, problem, config: CsodConfig, rng: np.random.Generator) -> CsodState:
    if state.t >= config.t_max:
        raise ContractError(f"generation {state.t} already reached t_max={config.t_max}")
    pop, vset = state.population, state.vectors
    bounds = problem.bounds
    mutation = config.mutation or MutationParams.default(bounds.dim)

    lam = config.mixing.draw(rng) if state.lam is None or config.mixing.per_generation else state.lam
    n_dan, n_cso = mix_counts(lam, len(vset), config.mixing.low, config.mixing.high)

    model = state.model
    real = bounds.normalize(pop.X)
    if len(real) >= 4:
        model = dan.train(model, real, config.dan, rng)
    from_dan = dan.sample_offspring(model, n_dan, bounds, rng, problem.n_obj)
    from_cso = cso_offspring(pop, n_cso, bounds, mutation, rng)
    offspring = evaluate_population(problem, from_dan.concat(from_cso))

    union = pop.concat(offspring)
    params = ApdParams(problem.n_obj, state.t + 1, config.t_max, config.alpha)
    selected = elitist_select(union, vset, params).with_generation(state.t + 1)
    try:
        vset = adapt(vset, selected.F.max(axis=0), selected.F.min(axis=0))
    except DegenerateRangeError:
        pass
    keep_lam = None if config.mixing.per_generation else lam
    return CsodState(selected, vset, model, state.t + 1, keep_lam,
                     StepInfo(lam, n_dan, n_cso, union))


def run(problem, config: CsodConfig, rng: np.random.Generator, seed: int | None = None,
        reference: np.ndarray | None = None) -> RunResult:
    start = time.perf_counter()
    ref = reference_front(problem, config.pf_points) if reference is None else reference
    state = init_state(problem, config, rng)
    trace = [igd(state.population.F, ref)]
    sizes = [len(state.population)]
    lambdas = []
    while state.t < config.t_max:
        state = step(state, problem, config, rng)
        trace.append(igd(state.population.F, ref))
        sizes.append(len(state.population))
        lambdas.append(state.info.lam)
    return RunResult("moea-csod", state.population, trace, sizes, seed,
                     time.perf_counter() - start, lambdas)

