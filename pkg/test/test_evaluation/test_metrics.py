"""
Test the result matrix and the continual-learning metrics.
"""

import numpy as np
import pytest

from relmem.data import Task  # type: ignore
from relmem.evaluation import (  # type: ignore
    ResultMatrix,
    accuracy,
    accuracy_curve,
    evaluate_model,
    forgetting,
)

R3 = [
    [0.9, 0.1, 0.1],
    [0.7, 0.8, 0.2],
    [0.5, 0.6, 0.9],
]


def test_accuracy_is_mean_of_last_row():
    assert accuracy(R3) == pytest.approx((0.5 + 0.6 + 0.9) / 3)


def test_forgetting_is_positive_for_lost_accuracy():
    # (0.9 - 0.5 + 0.8 - 0.6) / 2
    assert forgetting(R3) == pytest.approx(0.3)
    improved = [[0.5, 0.0], [0.7, 0.9]]
    assert forgetting(improved) == pytest.approx(-0.2)


def test_single_task():
    r = ResultMatrix.from_array([[0.75]])
    assert accuracy(r) == pytest.approx(0.75)
    assert forgetting(r) == 0.0


def test_accuracy_curve():
    curve = accuracy_curve(R3)
    np.testing.assert_allclose(curve, [0.9, 0.75, 2.0 / 3.0])


def test_result_matrix_rows():
    r = ResultMatrix(2)
    assert not r.is_complete()
    r.set_row(0, [1.0, 0.0])
    r.set_row(1, [0.5, 0.5])
    assert r.is_complete()
    values = r.values
    values[0, 0] = 0.0
    assert r.values[0, 0] == 1.0


@pytest.mark.parametrize("row", [[0.5], [0.5, 0.5, 0.5], [1.5, 0.0], [-0.1, 0.0]])
def test_result_matrix_rejects_bad_rows(row):
    r = ResultMatrix(2)
    with pytest.raises(ValueError):
        r.set_row(0, row)


def test_result_matrix_shape_checks():
    with pytest.raises(ValueError):
        ResultMatrix(0)
    with pytest.raises(ValueError):
        ResultMatrix.from_array([[0.1, 0.2]])
    with pytest.raises(ValueError):
        accuracy(np.zeros((0, 0)))


def test_evaluate_model_counts_argmax_hits():
    task_a = Task([0, 1], np.zeros((1, 2)), [0], np.eye(2)[[0, 1, 1, 0]], [0, 1, 1, 1])
    task_b = Task([0, 1], np.zeros((1, 2)), [0], np.eye(2)[[1, 1]], [0, 0])
    row = evaluate_model(lambda x: x, [task_a, task_b])
    np.testing.assert_allclose(row, [0.75, 0.0])


def test_evaluate_model_checks_predictor():
    task = Task([0, 1], np.zeros((1, 2)), [0], np.eye(2), [0, 1])
    with pytest.raises(ValueError):
        evaluate_model(lambda x: x[:1], [task])
    with pytest.raises(ValueError):
        evaluate_model(lambda x: x, [])
