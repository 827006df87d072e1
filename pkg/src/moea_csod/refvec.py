"""Uniform unit reference vectors and their adaptation to objective ranges."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import ConfigError, ContractError

DEGENERATE_RANGE = 1e-12


class DegenerateRangeError(ValueError):
    """All objectives have zero range, so adapted directions are undefined."""


def _compositions(M: int, H: int) -> np.ndarray:
    """All nonnegative integer vectors of length M summing to H (stars and bars)."""
    rows = []
    for bars in combinations(range(H + M - 1), M - 1):
        edges = (-1, *bars, H + M - 1)
        rows.append([edges[i + 1] - edges[i] - 1 for i in range(M)])
    return np.array(rows, dtype=np.float64)


def _unit(W: np.ndarray) -> np.ndarray:
    return W / np.linalg.norm(W, axis=1, keepdims=True)


def simplex_lattice(M: int, H: int) -> np.ndarray:
    """C(H+M-1, M-1) unit vectors from the simplex-lattice design, one per row."""
    if M < 1 or H < 1:
        raise ContractError(f"need M >= 1 and H >= 1, got M={M}, H={H}")
    return _unit(_compositions(M, H) / H)


def two_layer_vectors(M: int, H1: int, H2: int) -> np.ndarray:
    """Boundary layer at resolution H1 plus an inner layer shrunk halfway to the centroid."""
    if M < 2 or H1 < 1 or H2 < 1:
        raise ContractError(f"need M >= 2, H1 >= 1, H2 >= 1, got {M}, {H1}, {H2}")
    outer = simplex_lattice(M, H1)
    inner = _unit(0.5 * _compositions(M, H2) / H2 + 0.5 / M)
    V = np.vstack([outer, inner])
    _, first = np.unique(np.round(V, 12), axis=0, return_index=True)
    return V[np.sort(first)]


def lattice_count(M: int, H: int) -> int:
    return math.comb(H + M - 1, M - 1)


def vectors_for_population(M: int, N: int) -> np.ndarray:
    """Reference vectors whose count is exactly ``N``.

    Tries single-layer resolutions first, then two-layer designs with the inner
    resolution below the outer one.
    """
    H = 1
    while lattice_count(M, H) <= N:
        if lattice_count(M, H) == N:
            return simplex_lattice(M, H)
        H += 1
    for H1 in range(1, H):
        for H2 in range(1, H1 + 1):
            if lattice_count(M, H1) + lattice_count(M, H2) == N:
                V = two_layer_vectors(M, H1, H2)
                if len(V) == N:
                    return V
    nearest = lattice_count(M, max(H - 1, 1))
    raise ConfigError(
        f"population size N={N} matches no lattice design for M={M} "
        f"(nearest single layer has {nearest} vectors)"
    )


def min_angles(vectors: np.ndarray) -> np.ndarray:
    """Smallest angle from each unit vector to any other vector in the set."""
    V = np.asarray(vectors, dtype=np.float64)
    if V.ndim != 2 or len(V) < 2:
        raise ContractError("min_angles needs at least two vectors")
    cos = np.clip(V @ V.T, -1.0, 1.0)
    np.fill_diagonal(cos, -np.inf)
    return np.arccos(cos.max(axis=1))


@dataclass(frozen=True)
class ReferenceVectorSet:
    initial: np.ndarray
    current: np.ndarray
    min_angle: np.ndarray

    @classmethod
    def from_vectors(cls, vectors: np.ndarray) -> ReferenceVectorSet:
        V = np.array(vectors, dtype=np.float64)
        V.setflags(write=False)
        return cls(V, V, min_angles(V))

    def __len__(self) -> int:
        return len(self.current)


def adapt(vset: ReferenceVectorSet, zmax: np.ndarray, zmin: np.ndarray) -> ReferenceVectorSet:
    """Scale each initial vector by the objective ranges and renormalize."""
    zmax = np.asarray(zmax, dtype=np.float64)
    zmin = np.asarray(zmin, dtype=np.float64)
    if np.any(zmax < zmin):
        raise ContractError("zmax must be componentwise >= zmin")
    span = zmax - zmin
    if np.all(span <= 0.0):
        raise DegenerateRangeError("objective range is zero in every component")
    # tiny ranges are floored too, so products never underflow to a zero row
    span = np.maximum(span, DEGENERATE_RANGE)
    V = _unit(vset.initial * span)
    V.setflags(write=False)
    return ReferenceVectorSet(vset.initial, V, min_angles(V))
