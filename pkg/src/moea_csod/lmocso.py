"""Competitive swarm offspring operator and polynomial mutation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Bounds, ContractError, Individual, Population


@dataclass(frozen=True)
class MutationParams:
    pm: float
    eta_m: float = 20.0

    def __post_init__(self):
        if not 0.0 <= self.pm <= 1.0:
            raise ContractError(f"pm must lie in [0, 1], got {self.pm}")
        if self.eta_m <= 0:
            raise ContractError(f"eta_m must be positive, got {self.eta_m}")

    @classmethod
    def default(cls, n_var: int) -> MutationParams:
        return cls(pm=1.0 / n_var, eta_m=20.0)


@dataclass(frozen=True)
class Competition:
    """One pairing as drawn: indices into the population and the two coefficients."""

    winner: int
    loser: int
    r0: float
    r1: float


def shift_fitness(F: np.ndarray) -> np.ndarray:
    """Distance from each point to its closest improver, zero for dominated points."""
    F = np.asarray(F, dtype=np.float64)
    if len(F) < 2:
        raise ContractError("shift-based fitness needs at least two members")
    # gaps[p, q, k] = max(0, f_k(q) - f_k(p))
    gaps = np.maximum(0.0, F[None, :, :] - F[:, None, :])
    dist = np.sqrt(np.sum(gaps**2, axis=2))
    np.fill_diagonal(dist, np.inf)
    return dist.min(axis=1)


def learn_from_winner(x_loser, v_loser, x_winner, r0: float, r1: float, bounds: Bounds):
    """Velocity and clipped position of a loser after one competitive update."""
    x_loser = np.asarray(x_loser, dtype=np.float64)
    v_loser = np.asarray(v_loser, dtype=np.float64)
    v_new = r0 * v_loser + r1 * (np.asarray(x_winner) - x_loser)
    x_new = x_loser + v_new + r0 * (v_new - v_loser)
    return bounds.clip(x_new), v_new


def pair_up(n: int, fitness: np.ndarray, rng: np.random.Generator) -> list[Competition]:
    """Shuffle, pair consecutive members, and draw (r0, r1) for every pair."""
    order = rng.permutation(n)
    pairs = []
    for a, b in zip(order[0::2], order[1::2]):
        r0, r1 = rng.random(2)
        # ties go to the first of the shuffled pair
        winner, loser = (a, b) if fitness[a] >= fitness[b] else (b, a)
        pairs.append(Competition(int(winner), int(loser), float(r0), float(r1)))
    return pairs


def compete_and_update(pop: Population, bounds: Bounds, rng: np.random.Generator,
                       trace: list[Competition] | None = None) -> list[tuple[int, Individual]]:
    """Update the loser of each random pair toward its winner.

    Returns ``(population index, updated individual)`` for every loser; winners and
    an odd leftover are untouched. Updated objectives are NaN until re-evaluated.
    """
    if len(pop) < 2:
        raise ContractError("competition needs at least two particles")
    pairs = pair_up(len(pop), shift_fitness(pop.F), rng)
    if trace is not None:
        trace.extend(pairs)
    nan_f = np.full(pop.n_obj, np.nan)
    out = []
    for c in pairs:
        x, v = learn_from_winner(pop.X[c.loser], pop.V[c.loser], pop.X[c.winner], c.r0, c.r1, bounds)
        out.append((c.loser, Individual(x, nan_f, v)))
    return out


def polynomial_perturbation(x, lower, upper, u, eta: float) -> np.ndarray:
    """Bounded polynomial perturbation of every entry of ``x`` given uniform draws ``u``."""
    x = np.asarray(x, dtype=np.float64)
    lower = np.asarray(lower, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    span = upper - lower
    d1 = (x - lower) / span
    d2 = (upper - x) / span
    power = 1.0 / (eta + 1.0)
    lo = u <= 0.5
    with np.errstate(invalid="ignore"):
        delta = np.where(
            lo,
            (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (eta + 1.0)) ** power - 1.0,
            1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (eta + 1.0)) ** power,
        )
    return np.clip(x + delta * span, lower, upper)


def polynomial_mutation(x: np.ndarray, bounds: Bounds, params: MutationParams,
                        rng: np.random.Generator) -> np.ndarray:
    """Mutate each variable with probability ``pm``; works row-wise on matrices."""
    x = np.asarray(x, dtype=np.float64)
    mask = rng.random(x.shape) < params.pm
    u = rng.random(x.shape)
    mutated = polynomial_perturbation(x, bounds.lower, bounds.upper, u, params.eta_m)
    return np.where(mask, mutated, x)
