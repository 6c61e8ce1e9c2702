"""Smoke tests of the python bindings against hand-checked values."""

import math

import pytest

import otw


def test_prefix_sums():
    assert otw.prefix_sums([1, 2, 3]) == [1, 3, 6]
    assert otw.windowed_prefix_sums([1, 2, 3], 2) == [1, 3, 5]
    assert otw.windowed_prefix_sums([1, 2, 3], 1) == [1, 2, 3]


def test_split_and_normalize():
    pos, neg = otw.split_signs([1, -2, 0])
    assert pos == [1, 0, 0]
    assert neg == [0, 2, 0]
    assert otw.z_normalize([1, 3]) == [-1, 1]
    assert otw.z_normalize([5, 5, 5]) == [0, 0, 0]


def test_smooth_l1():
    assert otw.smooth_l1(0.5, 1.0) == pytest.approx(0.125)
    assert otw.smooth_l1(2.0, 1.0) == pytest.approx(1.5)
    assert otw.smooth_l1_deriv(-2.0, 1.0) == -1.0


def test_otw_values():
    assert otw.otw([1, 0], [0, 1], m=1, s=2) == pytest.approx(1.0)
    assert otw.otw([2, 0], [0, 1], m=3, s=2) == pytest.approx(5.0)
    assert otw.otw([1, 2, 3], [3, 5, 7], m=1, s=1) == pytest.approx(9.0)
    assert otw.otw([-1, 0], [0, -1], m=1, s=2, sign="split") == pytest.approx(1.0)
    with pytest.raises(ValueError):
        otw.otw([1, 2], [1, 2, 3])


def test_otw_grad():
    ga, gb = otw.otw_grad([1, 0], [0, 0], m=1, s=2, beta=0.5)
    assert ga == [2, 1]
    assert gb == [-2, -1]


def test_dtw_against_oracle():
    assert otw.dtw([1, 2, 3], [3, 2, 1], cost="abs") == 4.0
    assert otw.dtw([1, 2, 3], [3, 2, 1], cost="sq") == 8.0
    assert otw.dtw([1, 2, 3], [3, 2, 1], cost="abs") == otw.dtw_brute_force(
        [1, 2, 3], [3, 2, 1], cost="abs"
    )
    assert otw.dtw([0, 1], [1, 0], window=0, cost="sq") == 2.0
    assert otw.minkowski([0, 3], [4, 0], order=2) == pytest.approx(5.0)


def test_oracle_values():
    assert otw.wasserstein_1d([0.5, 0.5], [1, 0]) == pytest.approx(0.5)
    a_hat, b_hat = otw.extend_with_sink([1, 2], [0, 3])
    assert a_hat == [1, 2, 3]
    assert b_hat == [0, 3, 3]
    assert otw.sink_cost_matrix(1, 0.7) == [[0, 0.7], [0.7, 0]]
    assert otw.unbalanced_ot([1], [2], 0.7) == pytest.approx(0.7)

    lhs, rhs, holds = otw.check_upper_bound([1], [2], 0.7)
    assert (lhs, rhs, holds) == (pytest.approx(0.7), pytest.approx(0.7), True)

    delta, bound, holds = otw.check_shift_sensitivity([1, 0, 0, 0], [1, 0, 0, 0], 1, 1.0)
    assert delta == pytest.approx(1.0)
    assert bound == pytest.approx(1.0)
    assert holds


def test_transport_lp():
    plan, objective = otw.solve_transport_lp([1, 1], [1, 1], [[0, 1], [1, 0]])
    assert objective == pytest.approx(0.0)
    assert sum(sum(row) for row in plan) == pytest.approx(2.0)


def test_upper_bound_sweep():
    passes, instances, max_violation = otw.upper_bound_sweep(count=100, seed=5)
    assert passes == instances == 100
    assert max_violation == 0.0


def test_eval_helpers():
    preds, err = otw.one_nn([[0, 0], [1, 1]], [1, 2], [[0.9, 1.1]], [2], metric="l1")
    assert preds == [2]
    assert err == 0.0

    matrix = [[0, 1, 10, 10], [1, 0, 10, 10], [10, 10, 0, 1], [10, 10, 1, 0]]
    assert otw.agglomerative_cluster(matrix, 2) == [0, 0, 1, 1]
    assert otw.rand_index([0, 0, 1], [0, 1, 1]) == pytest.approx(1 / 3)


def test_synthetic():
    rows, labels = otw.make_synthetic(length=32, per_class=2, pulse_width=4,
                                      left_offset=4, right_offset=24, seed=9)
    assert len(rows) == 8
    assert sorted(set(labels)) == [0, 1, 2, 3]
    # Noiseless square-left sample: unit plateau.
    assert rows[0][4:8] == [1, 1, 1, 1]
    assert all(v == 0 for v in rows[0][:4])


def test_pairwise():
    series = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]
    matrix = otw.pairwise_matrix(series, metric="otw", m=1, s=2)
    assert matrix[0][0] == 0.0
    assert matrix[0][1] == matrix[1][0] == pytest.approx(1.0)
    assert math.isfinite(matrix[2][1])
