"""Value types shared by every module: bounds, individuals, populations, RNG."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np


class ConfigError(ValueError):
    """Invalid user-supplied configuration."""


class ContractError(ValueError):
    """A caller broke an operation's precondition."""


class EvaluationError(ArithmeticError):
    """Objective evaluation produced a non-finite value."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    """Counter-based (Philox) generator; identical seeds give identical draws."""
    return np.random.Generator(np.random.Philox(seed))


def derive_seed(*key: int) -> np.random.SeedSequence:
    """Seed sequence for an independent sub-stream identified by integer keys."""
    return np.random.SeedSequence([int(k) & 0xFFFFFFFFFFFFFFFF for k in key])


def split(rng: np.random.Generator, n: int) -> list[np.random.Generator]:
    """Independent child streams; never share one stream across workers."""
    return [np.random.Generator(bg) for bg in rng.bit_generator.spawn(n)]


def _frozen(a, ndim: int) -> np.ndarray:
    arr = np.array(a, dtype=np.float64, ndmin=ndim)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Bounds:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = _frozen(self.lower, 1)
        upper = _frozen(self.upper, 1)
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ConfigError(f"bounds shapes differ: {lower.shape} vs {upper.shape}")
        if not np.all(lower < upper):
            raise ConfigError("every lower bound must be strictly below its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower

    def clip(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x)
        return bool(np.all((x >= self.lower) & (x <= self.upper)))

    def normalize(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x) - self.lower) / self.span

    def denormalize(self, y: np.ndarray) -> np.ndarray:
        return self.clip(self.lower + np.asarray(y) * self.span)


class Problem(Protocol):
    """Anything with box bounds and a batched objective function."""

    bounds: Bounds

    @property
    def n_obj(self) -> int: ...

    def evaluate(self, x: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True)
class Individual:
    x: np.ndarray
    f: np.ndarray
    v: np.ndarray

    @property
    def evaluated(self) -> bool:
        return bool(np.all(np.isfinite(self.f)))


@dataclass(frozen=True)
class Population:
    """Row-aligned decision, objective and velocity matrices.

    Rows of ``F`` are NaN until the population has been evaluated.
    """

    X: np.ndarray
    F: np.ndarray
    V: np.ndarray
    generation: int = 0

    def __post_init__(self):
        X = _frozen(self.X, 2)
        F = _frozen(self.F, 2)
        V = _frozen(self.V, 2)
        if X.shape != V.shape:
            raise ContractError(f"X {X.shape} and V {V.shape} must match")
        if F.shape[0] != X.shape[0]:
            raise ContractError(f"{F.shape[0]} objective rows for {X.shape[0]} members")
        if self.generation < 0:
            raise ContractError("generation must be nonnegative")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "V", V)

    @classmethod
    def empty(cls, n_var: int, n_obj: int, generation: int = 0) -> Population:
        return cls(np.empty((0, n_var)), np.empty((0, n_obj)), np.empty((0, n_var)), generation)

    @classmethod
    def from_individuals(cls, members: Sequence[Individual], generation: int = 0) -> Population:
        if not members:
            raise ContractError("use Population.empty for an empty population")
        return cls(
            np.stack([m.x for m in members]),
            np.stack([m.f for m in members]),
            np.stack([m.v for m in members]),
            generation,
        )

    @classmethod
    def unevaluated(cls, X: np.ndarray, n_obj: int, V: np.ndarray | None = None,
                    generation: int = 0) -> Population:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        F = np.full((X.shape[0], n_obj), np.nan)
        return cls(X, F, np.zeros_like(X) if V is None else V, generation)

    def __len__(self) -> int:
        return self.X.shape[0]

    def __getitem__(self, i: int) -> Individual:
        return Individual(self.X[i], self.F[i], self.V[i])

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def n_var(self) -> int:
        return self.X.shape[1]

    @property
    def n_obj(self) -> int:
        return self.F.shape[1]

    def take(self, idx) -> Population:
        idx = np.asarray(idx, dtype=np.intp)
        return Population(self.X[idx], self.F[idx], self.V[idx], self.generation)

    def concat(self, other: Population) -> Population:
        return Population(
            np.vstack([self.X, other.X]),
            np.vstack([self.F, other.F]),
            np.vstack([self.V, other.V]),
            max(self.generation, other.generation),
        )

    def with_generation(self, t: int) -> Population:
        if t < self.generation:
            raise ContractError(f"generation cannot go back from {self.generation} to {t}")
        return Population(self.X, self.F, self.V, t)


def init_population(problem: Problem, n: int, rng: np.random.Generator) -> Population:
    """``n`` uniform individuals inside the problem bounds, zero velocity, evaluated."""
    if n < 2:
        raise ConfigError(f"population size must be at least 2, got {n}")
    b = problem.bounds
    X = b.lower + rng.random((n, b.dim)) * b.span
    pop = Population.unevaluated(b.clip(X), problem.n_obj)
    return evaluate_population(problem, pop)


def evaluate_population(problem: Problem, pop: Population) -> Population:
    if len(pop) == 0:
        return Population.empty(pop.n_var, problem.n_obj, pop.generation)
    if pop.n_var != problem.bounds.dim:
        raise ContractError(
            f"members have {pop.n_var} variables, problem expects {problem.bounds.dim}"
        )
    F = problem.evaluate(pop.X)
    return Population(pop.X, F, pop.V, pop.generation)
