"""LSMOP1-9 large-scale benchmark problems.

Every objective has the form ``f_k = h_k(x_f) * (1 + g_k(L(x_s)))`` where ``x_f``
holds the first M-1 (position) variables and ``x_s`` the remaining distance
variables. ``L`` is the linear or nonlinear variable linkage, and ``g_k`` is a
landscape function evaluated on the k-th contiguous group of linked distance
variables, averaged over the group size.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path

import numpy as np

from .core import Bounds, ConfigError, ContractError, EvaluationError


class Linkage(enum.Enum):
    LINEAR = "linear"
    NONLINEAR = "nonlinear"


class Shape(enum.Enum):
    LINEAR = "linear"
    SPHERICAL = "spherical"
    DISCONNECTED = "disconnected"


# Landscapes take (n, k) arrays and return (n,) values, all minimized at 0.

def sphere(z):
    return np.sum(z**2, axis=1)


def schwefel(z):
    if z.shape[1] == 0:
        return np.zeros(z.shape[0])
    return np.max(np.abs(z), axis=1)


def rosenbrock(z):
    a, b = z[:, :-1], z[:, 1:]
    return np.sum(100.0 * (a**2 - b) ** 2 + (a - 1.0) ** 2, axis=1)


def rastrigin(z):
    return np.sum(z**2 - 10.0 * np.cos(2.0 * np.pi * z) + 10.0, axis=1)


def griewank(z):
    if z.shape[1] == 0:
        return np.zeros(z.shape[0])
    i = np.arange(1, z.shape[1] + 1)
    return np.sum(z**2, axis=1) / 4000.0 - np.prod(np.cos(z / np.sqrt(i)), axis=1) + 1.0


def ackley(z):
    k = z.shape[1]
    if k == 0:
        return np.zeros(z.shape[0])
    out = (
        20.0
        - 20.0 * np.exp(-0.2 * np.sqrt(np.sum(z**2, axis=1) / k))
        - np.exp(np.sum(np.cos(2.0 * np.pi * z), axis=1) / k)
        + np.e
    )
    # exp(1) - exp(mean cos) can round to a few ulps below zero at the optimum
    return np.maximum(out, 0.0)


LANDSCAPES = {
    "sphere": sphere,
    "schwefel": schwefel,
    "rosenbrock": rosenbrock,
    "rastrigin": rastrigin,
    "griewank": griewank,
    "ackley": ackley,
}

# Linked value at which each landscape attains its minimum of 0.
LANDSCAPE_OPTIMUM = {name: 0.0 for name in LANDSCAPES} | {"rosenbrock": 1.0}

# (landscape for odd k, landscape for even k), k counted from 1
_ASSIGNMENT = {
    1: ("sphere", "sphere"),
    2: ("griewank", "schwefel"),
    3: ("rastrigin", "rosenbrock"),
    4: ("ackley", "griewank"),
    5: ("sphere", "sphere"),
    6: ("rosenbrock", "schwefel"),
    7: ("ackley", "rosenbrock"),
    8: ("griewank", "sphere"),
    9: ("sphere", "ackley"),
}

# Disconnected-front segments of the position variables for LSMOP9.
_LSMOP9_INTERVALS = (0.0, 0.251412, 0.631627, 0.859401)


@dataclass(frozen=True)
class LsmopInstance:
    id: int
    M: int
    D: int
    bounds: Bounds
    linkage: Linkage
    shape: Shape
    landscapes: tuple[str, ...]

    @property
    def n_obj(self) -> int:
        return self.M

    @property
    def name(self) -> str:
        return f"LSMOP{self.id}"

    @property
    def xf_len(self) -> int:
        return self.M - 1

    @property
    def xs_len(self) -> int:
        return self.D - self.M + 1

    @cached_property
    def groups(self) -> list[np.ndarray]:
        """Indices into x_s feeding each g_k."""
        return np.array_split(np.arange(self.xs_len), self.M)

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return evaluate(self, x)

    def __hash__(self):
        return hash((self.id, self.M, self.D))


def make_instance(id: int, M: int, D: int, bounds: Bounds | None = None) -> LsmopInstance:
    if id not in range(1, 10):
        raise ConfigError(f"LSMOP id must be in 1..9, got {id}")
    if M < 2:
        raise ConfigError(f"need at least 2 objectives, got {M}")
    if D <= M - 1:
        raise ConfigError(f"D={D} leaves no distance variables for M={M}")
    if bounds is None:
        bounds = Bounds(
            np.zeros(D), np.concatenate([np.ones(M - 1), np.full(D - M + 1, 10.0)])
        )
    elif bounds.dim != D:
        raise ConfigError(f"bounds have {bounds.dim} entries for D={D}")
    odd, even = _ASSIGNMENT[id]
    landscapes = tuple(odd if k % 2 == 1 else even for k in range(1, M + 1))
    linkage = Linkage.LINEAR if id <= 4 else Linkage.NONLINEAR
    shape = Shape.LINEAR if id <= 4 else Shape.SPHERICAL if id <= 8 else Shape.DISCONNECTED
    return LsmopInstance(id, M, D, bounds, linkage, shape, landscapes)


def _linkage_coefficients(instance: LsmopInstance) -> np.ndarray:
    ratio = np.arange(1, instance.xs_len + 1) / instance.xs_len
    if instance.linkage is Linkage.LINEAR:
        return 1.0 + ratio
    return 1.0 + np.cos(0.5 * np.pi * ratio)


def apply_linkage(instance: LsmopInstance, x: np.ndarray) -> np.ndarray:
    """Linked distance variables; accepts one vector or a row-per-solution matrix."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    if X.shape[1] != instance.D:
        raise ContractError(f"expected {instance.D} variables, got {X.shape[1]}")
    m = instance.xf_len
    lo, span = instance.bounds.lower[m:], instance.bounds.span[m:]
    xs = X[:, m:]
    z = _linkage_coefficients(instance) * (xs - lo) - X[:, :1] * span
    return z[0] if single else z


def landscape_values(instance: LsmopInstance, x: np.ndarray) -> np.ndarray:
    """g_k for every row of ``x``; shape (n, M), all nonnegative."""
    z = np.atleast_2d(apply_linkage(instance, x))
    G = np.zeros((z.shape[0], instance.M))
    for k, (idx, name) in enumerate(zip(instance.groups, instance.landscapes)):
        if idx.size:
            G[:, k] = LANDSCAPES[name](z[:, idx]) / idx.size
    return G


def shape_values(instance: LsmopInstance, xf: np.ndarray) -> np.ndarray:
    """h_k(x_f) for the linear and spherical shapes; shape (n, M)."""
    xf = np.atleast_2d(xf)
    n, M = xf.shape[0], instance.M
    if instance.shape is Shape.LINEAR:
        head, tail = xf, 1.0 - xf
    elif instance.shape is Shape.SPHERICAL:
        head, tail = np.cos(0.5 * np.pi * xf), np.sin(0.5 * np.pi * xf)
    else:
        raise ContractError("the disconnected shape is not separable into h_k factors")
    # h_k = prod_{j<=M-k} head_j * tail_{M-k+1}, with no tail factor for k = 1
    prods = np.cumprod(np.hstack([np.ones((n, 1)), head]), axis=1)
    H = np.empty((n, M))
    for k in range(1, M + 1):
        H[:, k - 1] = prods[:, M - k]
        if k > 1:
            H[:, k - 1] *= tail[:, M - k]
    return H


def evaluate(instance: LsmopInstance, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    G = landscape_values(instance, X)
    xf = X[:, : instance.xf_len]
    if instance.shape is Shape.DISCONNECTED:
        scale = 2.0 + G.sum(axis=1, keepdims=True)
        F = np.empty((X.shape[0], instance.M))
        F[:, :-1] = xf
        F[:, -1] = scale[:, 0] * (
            instance.M - np.sum(xf / scale * (1.0 + np.sin(3.0 * np.pi * xf)), axis=1)
        )
    else:
        F = shape_values(instance, xf) * (1.0 + G)
    bad = ~np.isfinite(F)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise EvaluationError(f"{instance.name}: non-finite objective {col} in row {row}", int(row))
    return F[0] if single else F


def _lattice_points(M: int, n: int) -> np.ndarray:
    """Largest simplex lattice with at most ``n`` points (at least one point)."""
    if n < M:
        return np.full((1, M), 1.0 / M)
    H = 1
    while math.comb(H + M, M - 1) <= n:
        H += 1
    pts = []
    for bars in combinations(range(H + M - 1), M - 1):
        edges = (-1, *bars, H + M - 1)
        pts.append([edges[i + 1] - edges[i] - 1 for i in range(M)])
    return np.array(pts, dtype=np.float64) / H


def _grid(dim: int, n: int) -> np.ndarray:
    per_axis = max(int(math.floor(n ** (1.0 / dim) + 1e-9)), 1)
    axes = np.linspace(0.0, 1.0, per_axis) if per_axis > 1 else np.zeros(1)
    mesh = np.meshgrid(*([axes] * dim), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def sample_pf(instance: LsmopInstance, count: int = 10000) -> np.ndarray:
    """Deterministic reference set on the true Pareto front, at most ``count`` points."""
    if count < 1:
        raise ContractError("need at least one reference point")
    M = instance.M
    if instance.shape is Shape.LINEAR:
        P = _lattice_points(M, count)
    elif instance.shape is Shape.SPHERICAL:
        W = _lattice_points(M, count)
        P = W / np.linalg.norm(W, axis=1, keepdims=True)
    else:
        lo1, hi1, lo2, hi2 = _LSMOP9_INTERVALS
        split_at = (hi1 - lo1) / (hi2 - lo2 + hi1 - lo1)
        X = _grid(M - 1, count)
        low = X <= split_at
        X = np.where(low, X * (hi1 - lo1) / split_at + lo1,
                     (X - split_at) * (hi2 - lo2) / (1.0 - split_at) + lo2)
        last = 2.0 * (M - np.sum(X / 2.0 * (1.0 + np.sin(3.0 * np.pi * X)), axis=1))
        P = np.hstack([X, last[:, None]])
    return np.unique(P, axis=0)


def pf_preimage(instance: LsmopInstance, xf: np.ndarray) -> np.ndarray:
    """A decision vector with position part ``xf`` whose landscapes are all zero.

    Solves the linkage for the linked value that minimizes each group's landscape.
    The result may leave the bounds for Rosenbrock groups when ``xf[0]`` is near 1.
    """
    xf = np.asarray(xf, dtype=np.float64)
    m = instance.xf_len
    if xf.shape != (m,):
        raise ContractError(f"expected {m} position variables")
    target = np.empty(instance.xs_len)
    for idx, name in zip(instance.groups, instance.landscapes):
        target[idx] = LANDSCAPE_OPTIMUM[name]
    lo, span = instance.bounds.lower[m:], instance.bounds.span[m:]
    xs = lo + (target + xf[0] * span) / _linkage_coefficients(instance)
    return np.concatenate([xf, xs])


def save_pf(points: np.ndarray, path: str | Path) -> None:
    """One point per line, whitespace-separated, round-trippable floats."""
    np.savetxt(path, points, fmt="%.17g")


def load_pf(path: str | Path) -> np.ndarray:
    return np.atleast_2d(np.loadtxt(path, dtype=np.float64))
