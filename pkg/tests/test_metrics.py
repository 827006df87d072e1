import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from moea_csod.core import ContractError, make_rng
from moea_csod.metrics import igd, rank_sum_pvalue, rank_sum_statistic, significance


def test_igd_examples():
    R = np.array([[0.0, 0.0], [1.0, 1.0]])
    assert igd(R, R) == 0.0
    assert igd(np.array([[0.0, 0.0]]), R) == pytest.approx(math.sqrt(2) / 2, abs=1e-15)
    rng = make_rng(0)
    A, B = rng.random((7, 3)), rng.random((9, 3))
    assert abs(igd(A, B) - oracles.igd_loops(A.tolist(), B.tolist())) <= 1e-12


def test_igd_chunking_is_exact():
    rng = make_rng(1)
    A, R = rng.random((30, 4)), rng.random((100, 4))
    assert igd(A, R, chunk=7) == pytest.approx(igd(A, R), abs=1e-14)


def test_igd_contract():
    with pytest.raises(ContractError):
        igd(np.empty((0, 2)), np.ones((3, 2)))
    with pytest.raises(ContractError):
        igd(np.ones((2, 3)), np.ones((3, 2)))


sets = arrays(np.float64, st.tuples(st.integers(1, 10), st.just(3)),
              elements=st.floats(-5, 5, allow_nan=False))


@settings(max_examples=100, deadline=None)
@given(A=sets, R=sets, extra=arrays(np.float64, 3, elements=st.floats(-5, 5)))
def test_igd_monotone_in_approximation(A, R, extra):
    assert igd(np.vstack([A, extra]), R) <= igd(A, R) + 1e-12


def test_rank_sum_against_enumeration():
    a, b = [1.0, 2.0, 3.0], [4.0, 5.0, 6.0]
    stat, p = oracles.rank_sum_distribution(a, b)
    assert rank_sum_statistic(a, b) == stat == 6.0
    assert rank_sum_pvalue(a, b) == pytest.approx(p, abs=1e-12)
    rng = make_rng(2)
    for _ in range(5):
        x, y = rng.random(4).tolist(), rng.random(5).tolist()
        stat, p = oracles.rank_sum_distribution(x, y)
        assert rank_sum_statistic(x, y) == pytest.approx(stat)
        assert rank_sum_pvalue(x, y) == pytest.approx(p, abs=1e-12)


def test_significance_examples():
    same = [0.3, 0.5, 0.4, 0.6, 0.2]
    assert significance(same, same) == "≈"
    assert significance([1.0] * 5, [10.0] * 5) == "-"
    assert significance([10.0] * 5, [1.0] * 5) == "+"
    with pytest.raises(ContractError):
        significance([1.0, 2.0], [3.0, 4.0, 5.0])
