import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from moea_csod import lsmop
from moea_csod.baselines import (BaselineConfig, Nsga2Params, crowding_distance, nsga2_run,
                                 non_dominated_sort, random_search, rank_and_crowding, sbx,
                                 tournament, truncate)
from moea_csod.core import Bounds, ConfigError, make_rng

PROBLEM = lsmop.make_instance(2, 3, 12)
CFG = BaselineConfig(N=20, t_max=5, pf_points=200)


def test_sort_examples():
    assert non_dominated_sort(np.array([[1.0, 1.0], [2.0, 2.0]])) == [[0], [1]]
    assert non_dominated_sort(np.array([[0.0, 1.0], [1.0, 0.0]])) == [[0, 1]]
    F = make_rng(0).random((8, 3))
    assert non_dominated_sort(F) == oracles.fronts_by_peeling(F.tolist())


points = arrays(np.float64, st.tuples(st.integers(1, 12), st.integers(1, 4)),
                elements=st.integers(0, 3).map(float))


@settings(max_examples=150, deadline=None)
@given(F=points)
def test_sort_matches_peeling(F):
    fronts = non_dominated_sort(F)
    assert fronts == oracles.fronts_by_peeling(F.tolist())
    assert sorted(i for f in fronts for i in f) == list(range(len(F)))


def test_crowding_examples():
    assert np.all(np.isinf(crowding_distance(np.array([[0.0, 1.0], [1.0, 0.0]]))))
    d = crowding_distance(np.array([[0.0, 2.0], [1.0, 1.0], [2.0, 0.0]]))
    assert np.isinf(d[0]) and np.isinf(d[2]) and d[1] == 2.0
    dup = crowding_distance(np.array([[0.0, 2.0], [1.0, 1.0], [1.0, 1.0], [2.0, 0.0]]))
    assert np.all(np.isfinite(dup[1:3])) and min(dup[1:3]) >= 0


def test_tournament_prefers_lower_rank():
    rank = np.array([0, 1, 2, 0])
    crowd = np.array([1.0, np.inf, np.inf, 0.5])
    rng = make_rng(1)
    for _ in range(50):
        seeds = rng.integers(0, 2**32)
        a = make_rng(seeds).integers(0, 4, 10)
        winners = tournament(rank, crowd, 10, make_rng(seeds))
        b = make_rng(seeds)
        b.integers(0, 4, 10)
        b = b.integers(0, 4, 10)
        assert np.all(rank[winners] == np.minimum(rank[a], rank[b]))


def test_truncate_keeps_first_front():
    F = np.array([[0.0, 1.0], [1.0, 0.0], [2.0, 2.0], [3.0, 3.0]])
    assert list(truncate(F, 2)) == [0, 1]
    rank, _ = rank_and_crowding(F)
    assert list(rank) == [0, 0, 1, 2]


def test_sbx_closure_and_identity():
    b = Bounds(np.zeros(5), np.ones(5))
    rng = make_rng(2)
    P1, P2 = rng.random((50, 5)), rng.random((50, 5))
    c1, c2 = sbx(P1, P2, b, 1.0, 20.0, rng)
    assert b.contains(c1) and b.contains(c2)
    d1, d2 = sbx(P1, P2, b, 0.0, 20.0, rng)
    assert np.allclose(d1, P1, atol=1e-15) and np.allclose(d2, P2, atol=1e-15)


def test_nsga2_run():
    a = nsga2_run(PROBLEM, CFG, make_rng(3), seed=3)
    b = nsga2_run(PROBLEM, CFG, make_rng(3), seed=3)
    assert len(a.igd) == 6 and a.igd == b.igd
    assert np.array_equal(a.population.X, b.population.X)
    assert len(nsga2_run(PROBLEM, BaselineConfig(N=20, t_max=0, pf_points=200), make_rng(3)).igd) == 1


def test_nsga2_improves_on_zdt1():
    class Zdt1:
        n_obj = 2
        bounds = Bounds(np.zeros(10), np.ones(10))

        def evaluate(self, X):
            X = np.atleast_2d(X)
            g = 1 + 9 * X[:, 1:].mean(axis=1)
            return np.column_stack([X[:, 0], g * (1 - np.sqrt(X[:, 0] / g))])

    t = np.linspace(0, 1, 200)
    ref = np.column_stack([t, 1 - np.sqrt(t)])
    res = nsga2_run(Zdt1(), BaselineConfig(N=40, t_max=150), make_rng(4), reference=ref)
    assert res.igd[-1] < 0.05 < res.igd[0]


def test_random_search():
    a = random_search(PROBLEM, CFG, make_rng(5))
    assert a.igd == random_search(PROBLEM, CFG, make_rng(5)).igd
    assert all(s <= CFG.N for s in a.sizes)
    arch = random_search(PROBLEM, CFG, make_rng(5), archive=True)
    assert all(x >= y for x, y in zip(arch.igd, arch.igd[1:]))
    assert len(random_search(PROBLEM, BaselineConfig(N=20, t_max=0, pf_points=200), make_rng(5)).igd) == 1


def test_config_validation():
    with pytest.raises(ConfigError):
        Nsga2Params(pc=2.0)
    with pytest.raises(ConfigError):
        BaselineConfig(N=1)
