"""Slow, loop-based reference implementations used only to check the library."""

import itertools
import math


def igd_loops(A, R):
    total = 0.0
    for r in R:
        best = math.inf
        for a in A:
            best = min(best, math.sqrt(sum((ri - ai) ** 2 for ri, ai in zip(r, a))))
        total += best
    return total / len(R)


def dominates(a, b):
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def fronts_by_peeling(F):
    remaining = set(range(len(F)))
    fronts = []
    while remaining:
        front = sorted(i for i in remaining
                       if not any(dominates(F[j], F[i]) for j in remaining if j != i))
        fronts.append(front)
        remaining -= set(front)
    return fronts


def _norm(v):
    return math.sqrt(sum(x * x for x in v))


def _angle(u, v):
    return math.acos(max(-1.0, min(1.0, sum(a * b for a, b in zip(u, v)))))


def apd_select(F, V, t, t_max, alpha):
    """Brute-force reference-vector selection; returns the set of chosen indices."""
    M = len(F[0])
    zmin = [min(f[k] for f in F) for k in range(M)]
    Fp = [[f[k] - zmin[k] for k in range(M)] for f in F]
    gamma = [min(_angle(V[j], V[i]) for i in range(len(V)) if i != j) for j in range(len(V))]
    scale = M * (t / t_max) ** alpha
    best = {}
    for i, f in enumerate(Fp):
        n = _norm(f)
        if n == 0.0:
            j, theta = 0, 0.0
        else:
            cosines = [sum(a * b for a, b in zip(f, v)) / n for v in V]
            j = max(range(len(V)), key=lambda k: (cosines[k], -k))
            theta = math.acos(max(-1.0, min(1.0, cosines[j])))
        d = (1.0 + scale * theta / gamma[j]) * n
        if j not in best or d < best[j][0]:
            best[j] = (d, i)
    return {i for _, i in best.values()}


def mlp_forward_loops(weights, biases, activations, x):
    """Scalar-loop forward pass for a single input vector."""
    act = {"tanh": math.tanh, "linear": lambda a: a,
           "sigmoid": lambda a: 1.0 / (1.0 + math.exp(-a))}
    h = list(x)
    for W, b, tag in zip(weights, biases, activations):
        h = [act[tag](sum(h[i] * W[i][j] for i in range(len(h))) + b[j]) for j in range(len(b))]
    return h


def rank_sum_distribution(a, b):
    """Exact two-sided p-value of the rank-sum of ``a`` by enumerating label assignments."""
    pooled = sorted(a + b)
    ranks = {}
    for v in set(pooled):
        positions = [i + 1 for i, p in enumerate(pooled) if p == v]
        ranks[v] = sum(positions) / len(positions)
    observed = sum(ranks[v] for v in a)
    all_ranks = [ranks[v] for v in pooled]
    n = len(a)
    sums = [sum(all_ranks[i] for i in combo) for combo in itertools.combinations(range(len(pooled)), n)]
    mean = n * (len(pooled) + 1) / 2
    extreme = sum(1 for s in sums if abs(s - mean) >= abs(observed - mean) - 1e-12)
    return observed, extreme / len(sums)


def central_differences(f, arrays, h=1e-5):
    """Central finite-difference gradient of scalar ``f()`` w.r.t. every entry of ``arrays`` (mutated in place and restored)."""
    out = []
    for a in arrays:
        g = a.copy()
        flat, gflat = a.reshape(-1), g.reshape(-1)
        for i in range(flat.size):
            old = flat[i]
            flat[i] = old + h
            up = f()
            flat[i] = old - h
            down = f()
            flat[i] = old
            gflat[i] = (up - down) / (2 * h)
        out.append(g)
    return out
