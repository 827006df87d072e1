"""NSGA-II and uniform random search, run under the same protocol as MOEA-CSOD."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .algorithm import RunResult, reference_front
from .core import Bounds, ConfigError, ContractError, Population, evaluate_population, init_population
from .lmocso import MutationParams, polynomial_mutation
from .metrics import igd


def dominates(a: np.ndarray, b: np.ndarray) -> bool:
    return bool(np.all(a <= b) and np.any(a < b))


def non_dominated_sort(F: np.ndarray) -> list[list[int]]:
    """Fronts of indices, best first; each front lists indices in ascending order."""
    F = np.asarray(F, dtype=np.float64)
    if len(F) == 0:
        raise ContractError("cannot sort an empty set")
    le = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    dom = le & lt  # dom[i, j]: i dominates j
    counts = dom.sum(axis=0)
    fronts = []
    current = np.flatnonzero(counts == 0)
    while current.size:
        fronts.append(current.tolist())
        counts = counts - dom[current].sum(axis=0)
        counts[current] = -1
        current = np.flatnonzero(counts == 0)
    return fronts


def crowding_distance(F: np.ndarray) -> np.ndarray:
    F = np.atleast_2d(np.asarray(F, dtype=np.float64))
    n, M = F.shape
    if n == 0:
        raise ContractError("crowding distance of an empty front")
    dist = np.zeros(n)
    if n <= 2:
        dist[:] = np.inf
        return dist
    for k in range(M):
        order = np.argsort(F[:, k], kind="stable")
        col = F[order, k]
        dist[order[0]] = dist[order[-1]] = np.inf
        span = col[-1] - col[0]
        if span > 0:
            dist[order[1:-1]] += (col[2:] - col[:-2]) / span
    return dist


def rank_and_crowding(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rank = np.empty(len(F), dtype=np.intp)
    crowd = np.empty(len(F))
    for r, front in enumerate(non_dominated_sort(F)):
        rank[front] = r
        crowd[front] = crowding_distance(F[front])
    return rank, crowd


def truncate(F: np.ndarray, n: int) -> np.ndarray:
    """Indices of the best ``n`` rows by rank, then by larger crowding distance."""
    rank, crowd = rank_and_crowding(F)
    order = np.lexsort((-crowd, rank))
    return np.sort(order[:n])


def tournament(rank: np.ndarray, crowd: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Binary tournaments: lower rank wins, then larger crowding, then the first drawn."""
    a = rng.integers(0, len(rank), n)
    b = rng.integers(0, len(rank), n)
    a_wins = (rank[a] < rank[b]) | ((rank[a] == rank[b]) & (crowd[a] >= crowd[b]))
    return np.where(a_wins, a, b)


@dataclass(frozen=True)
class Nsga2Params:
    pc: float = 1.0
    eta_c: float = 20.0
    mutation: MutationParams | None = None

    def __post_init__(self):
        if not 0.0 <= self.pc <= 1.0:
            raise ConfigError(f"pc must lie in [0, 1], got {self.pc}")
        if self.eta_c <= 0:
            raise ConfigError(f"eta_c must be positive, got {self.eta_c}")


def sbx(P1: np.ndarray, P2: np.ndarray, bounds: Bounds, pc: float, eta: float,
        rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover, row-wise.

    Each variable crosses with probability 0.5 and is swapped between the two
    children with probability 0.5.
    """
    u = rng.random(P1.shape)
    beta = np.where(u <= 0.5, (2.0 * u) ** (1.0 / (eta + 1.0)),
                    (1.0 / (2.0 - 2.0 * u)) ** (1.0 / (eta + 1.0)))
    beta = beta * np.where(rng.random(P1.shape) < 0.5, -1.0, 1.0)
    beta = np.where(rng.random(P1.shape) < 0.5, beta, 1.0)
    beta = np.where(rng.random((P1.shape[0], 1)) < pc, beta, 1.0)
    mean, half = (P1 + P2) / 2.0, (P1 - P2) / 2.0
    return bounds.clip(mean + beta * half), bounds.clip(mean - beta * half)


@dataclass(frozen=True)
class BaselineConfig:
    N: int
    t_max: int = 50
    nsga2: Nsga2Params = field(default_factory=Nsga2Params)
    pf_points: int = 10000

    def __post_init__(self):
        if self.N < 2:
            raise ConfigError(f"population size must be at least 2, got {self.N}")
        if self.t_max < 0:
            raise ConfigError("t_max must be nonnegative")


def nsga2_run(problem, config: BaselineConfig, rng: np.random.Generator, seed: int | None = None,
              reference: np.ndarray | None = None) -> RunResult:
    start = time.perf_counter()
    ref = reference_front(problem, config.pf_points) if reference is None else reference
    bounds = problem.bounds
    params = config.nsga2
    mutation = params.mutation or MutationParams.default(bounds.dim)
    N = config.N

    pop = init_population(problem, N, rng)
    rank, crowd = rank_and_crowding(pop.F)
    trace, sizes = [igd(pop.F, ref)], [N]
    for t in range(1, config.t_max + 1):
        half = (N + 1) // 2
        mates = tournament(rank, crowd, 2 * half, rng)
        c1, c2 = sbx(pop.X[mates[:half]], pop.X[mates[half:]], bounds, params.pc, params.eta_c, rng)
        children = polynomial_mutation(np.vstack([c1, c2])[:N], bounds, mutation, rng)
        offspring = evaluate_population(problem, Population.unevaluated(children, problem.n_obj))
        union = pop.concat(offspring)
        pop = union.take(truncate(union.F, N)).with_generation(t)
        rank, crowd = rank_and_crowding(pop.F)
        trace.append(igd(pop.F, ref))
        sizes.append(len(pop))
    return RunResult("nsga2", pop, trace, sizes, seed, time.perf_counter() - start)


def random_search(problem, config: BaselineConfig, rng: np.random.Generator,
                  seed: int | None = None, reference: np.ndarray | None = None,
                  archive: bool = False) -> RunResult:
    """Fresh uniform samples each generation; keeps the non-dominated union capped at N.

    With ``archive=True`` every evaluated sample is kept, so the IGD trace cannot rise.
    """
    start = time.perf_counter()
    ref = reference_front(problem, config.pf_points) if reference is None else reference
    pop = init_population(problem, config.N, rng)
    if not archive:
        pop = pop.take(_front_capped(pop.F, config.N))
    trace, sizes = [igd(pop.F, ref)], [len(pop)]
    for t in range(1, config.t_max + 1):
        union = pop.concat(init_population(problem, config.N, rng))
        pop = union if archive else union.take(_front_capped(union.F, config.N))
        pop = pop.with_generation(t)
        trace.append(igd(pop.F, ref))
        sizes.append(len(pop))
    return RunResult("random", pop, trace, sizes, seed, time.perf_counter() - start)


def _front_capped(F: np.ndarray, n: int) -> np.ndarray:
    front = np.asarray(non_dominated_sort(F)[0])
    if len(front) <= n:
        return front
    keep = np.argsort(-crowding_distance(F[front]), kind="stable")[:n]
    return np.sort(front[keep])
