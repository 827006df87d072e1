import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from moea_csod.core import ContractError, Population
from moea_csod.refvec import ReferenceVectorSet, simplex_lattice
from moea_csod.selection import (ApdParams, apd, elitist_select, partition, select_indices,
                                 translate)

BASIS = ReferenceVectorSet.from_vectors(np.eye(2))


def test_translate_examples():
    tf = translate(np.array([[1.0, 2.0], [3.0, 1.0]]))
    assert np.array_equal(tf.zmin, [1, 1]) and np.array_equal(tf.values, [[0, 1], [2, 0]])
    assert np.array_equal(translate(np.array([[5.0, 7.0]])).values, [[0, 0]])
    F = np.array([[0.0, 3.0], [2.0, 0.0]])
    assert np.array_equal(translate(F).values, F)
    with pytest.raises(ContractError):
        translate(np.empty((0, 2)))


def test_partition_examples():
    assert partition(translate(np.array([[1.0, 0.0], [0.0, 0.0]])), BASIS)[0] == [0, 1]
    tie = translate(np.array([[0.0, 0.0], [1.0, 1.0]]))
    assert partition(tie, BASIS) == [[0, 1], []]
    tf = translate(np.array([[2.0, 0.0], [0.0, 3.0], [1.0, 1.0]]))
    assert partition(tf, BASIS) == [[0, 2], [1]]


def test_apd_examples():
    p0 = ApdParams(M=2, t=0, t_max=10)
    assert apd(np.array([3.0, 4.0]), 0.7, 0.3, p0) == 5.0
    pt = ApdParams(M=2, t=5, t_max=10)
    assert apd(np.array([3.0, 4.0]), 0.0, 0.3, pt) == 5.0
    full = ApdParams(M=2, t=10, t_max=10, alpha=2.0)
    assert apd(np.array([1.0, 0.0]), 0.4, 0.4, full) == pytest.approx(3.0, abs=1e-15)
    with pytest.raises(ContractError):
        apd(np.ones(2), 0.1, 0.0, full)
    with pytest.raises(ContractError):
        apd(np.ones(2), -0.1, 1.0, full)


def test_apd_params_validation():
    with pytest.raises(ContractError):
        ApdParams(2, 11, 10)
    with pytest.raises(ContractError):
        ApdParams(2, 1, 10, alpha=0.0)


def _pop(F):
    F = np.asarray(F, dtype=np.float64)
    return Population(np.zeros((len(F), 1)), F, np.zeros((len(F), 1)))


def test_elitist_select_examples():
    params = ApdParams(M=2, t=3, t_max=10)
    one = elitist_select(_pop([[0.4, 0.6]]), BASIS, params)
    assert len(one) == 1
    twins = select_indices(np.array([[1.0, 0.5], [1.0, 0.5], [0.0, 2.0]]), BASIS, params)
    assert list(twins) == [0, 2]
    F = [[0.2, 0.1], [0.5, 0.1], [0.1, 0.4], [0.1, 0.9]]
    assert set(select_indices(np.array(F), BASIS, params)) == oracles.apd_select(F, np.eye(2).tolist(), 3, 10, 2.0)


def test_selected_subset_is_elitist():
    rng = np.random.default_rng(0)
    F = rng.random((30, 3))
    V = ReferenceVectorSet.from_vectors(simplex_lattice(3, 3))
    idx = select_indices(F, V, ApdParams(3, 5, 10))
    assert len(idx) <= len(V) and len(set(idx)) == len(idx)


unit_rows = arrays(np.float64, st.tuples(st.integers(2, 10), st.integers(2, 4)),
                   elements=st.floats(0, 10, allow_nan=False))


@settings(max_examples=80, deadline=None)
@given(F=unit_rows, shift=st.floats(-50, 50), t=st.integers(0, 10))
def test_translation_invariance(F, shift, t):
    M = F.shape[1]
    V = ReferenceVectorSet.from_vectors(simplex_lattice(M, 2))
    params = ApdParams(M, t, 10)
    base = select_indices(F, V, params)
    moved = select_indices(F + float(np.round(shift)), V, params)
    assert set(base) == set(moved)


@settings(max_examples=80, deadline=None)
@given(F=unit_rows)
def test_partition_is_exhaustive_and_disjoint(F):
    V = ReferenceVectorSet.from_vectors(simplex_lattice(F.shape[1], 3))
    groups = partition(translate(F), V)
    flat = sorted(i for g in groups for i in g)
    assert flat == list(range(len(F)))


@settings(max_examples=60, deadline=None)
@given(theta=st.floats(0, 3), dtheta=st.floats(0, 1), norm=st.floats(0.01, 10), t=st.integers(0, 10))
def test_apd_monotone(theta, dtheta, norm, t):
    params = ApdParams(3, t, 10)
    f = np.array([norm, 0.0, 0.0])
    assert apd(f, theta + dtheta, 0.5, params) >= apd(f, theta, 0.5, params)
    assert apd(2 * f, theta, 0.5, params) > apd(f, theta, 0.5, params)


def test_matches_oracle_on_random_instances():
    rng = np.random.default_rng(123)
    for _ in range(50):
        M = int(rng.integers(2, 5))
        n = int(rng.integers(1, 13))
        F = rng.random((n, M))
        V = rng.random((int(rng.integers(2, 5)), M))
        V /= np.linalg.norm(V, axis=1, keepdims=True)
        t = int(rng.integers(0, 11))
        got = set(select_indices(F, ReferenceVectorSet.from_vectors(V), ApdParams(M, t, 10)))
        assert got == oracles.apd_select(F.tolist(), V.tolist(), t, 10, 2.0)
