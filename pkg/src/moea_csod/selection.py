"""Reference-vector-guided environmental selection with angle-penalized distance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ContractError, Population
from .refvec import ReferenceVectorSet


@dataclass(frozen=True)
class TranslatedObjectives:
    values: np.ndarray
    zmin: np.ndarray


@dataclass(frozen=True)
class ApdParams:
    M: int
    t: int
    t_max: int
    alpha: float = 2.0

    def __post_init__(self):
        if not 0 <= self.t <= self.t_max:
            raise ContractError(f"need 0 <= t <= t_max, got t={self.t}, t_max={self.t_max}")
        if self.alpha <= 0:
            raise ContractError(f"alpha must be positive, got {self.alpha}")

    @property
    def penalty_scale(self) -> float:
        if self.t_max == 0:
            return 0.0
        return self.M * (self.t / self.t_max) ** self.alpha


def translate(F: np.ndarray) -> TranslatedObjectives:
    F = np.asarray(F, dtype=np.float64)
    if F.ndim != 2 or len(F) == 0:
        raise ContractError("translate needs a non-empty (n, M) objective matrix")
    zmin = F.min(axis=0)
    return TranslatedObjectives(F - zmin, zmin)


def _cosines(Fp: np.ndarray, V: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(Fp, axis=1, keepdims=True)
    at_ideal = norms[:, 0] == 0.0
    cos = (Fp @ V.T) / np.where(norms == 0.0, 1.0, norms)
    # A member at the ideal point has angle 0 to every vector.
    cos[at_ideal] = 1.0
    return np.clip(cos, -1.0, 1.0)


def assign(Fp: np.ndarray, V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vector index and angle for each translated objective vector."""
    cos = _cosines(Fp, V)
    k = np.argmax(cos, axis=1)
    return k, np.arccos(cos[np.arange(len(k)), k])


def partition(tf: TranslatedObjectives, vset: ReferenceVectorSet) -> list[list[int]]:
    V = vset.current
    if len(V) < 1:
        raise ContractError("need at least one reference vector")
    k, _ = assign(tf.values, V)
    groups: list[list[int]] = [[] for _ in range(len(V))]
    for i, j in enumerate(k):
        groups[j].append(i)
    return groups


def apd(f: np.ndarray, theta: float, gamma: float, params: ApdParams) -> float:
    if theta < 0:
        raise ContractError(f"theta must be nonnegative, got {theta}")
    if gamma <= 0:
        raise ContractError(f"gamma must be positive, got {gamma}")
    penalty = params.penalty_scale * theta / gamma
    return (1.0 + penalty) * float(np.linalg.norm(f))


def select_indices(F: np.ndarray, vset: ReferenceVectorSet, params: ApdParams) -> np.ndarray:
    """Index of the minimum-APD member of every non-empty subpopulation, by vector order."""
    tf = translate(F)
    k, theta = assign(tf.values, vset.current)
    gamma = np.maximum(vset.min_angle, np.finfo(np.float64).tiny)
    dist = (1.0 + params.penalty_scale * theta / gamma[k]) * np.linalg.norm(tf.values, axis=1)
    chosen = []
    for j in np.unique(k):
        members = np.flatnonzero(k == j)
        chosen.append(members[np.argmin(dist[members])])
    return np.asarray(chosen, dtype=np.intp)


def elitist_select(pop: Population, vset: ReferenceVectorSet, params: ApdParams) -> Population:
    if len(pop) == 0:
        raise ContractError("cannot select from an empty population")
    return pop.take(select_indices(pop.F, vset, params))
