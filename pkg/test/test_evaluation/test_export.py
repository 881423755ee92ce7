"""
Test the CSV artifacts.
"""

import numpy as np
import pytest

from relmem.evaluation import (  # type: ignore
    RESULTS_HEADER,
    ResultMatrix,
    fmt,
    read_csv,
    read_result_matrix_csv,
    results_row,
    write_csv,
    write_result_matrix_csv,
    write_results_csv,
)


def test_fmt_uses_six_decimals():
    assert fmt(0.5) == "0.500000"
    assert fmt(1) == "1.000000"
    assert fmt(2.0 / 3.0) == "0.666667"


def test_results_row():
    r = ResultMatrix.from_array([[0.8, 0.0], [0.6, 0.9]])
    assert results_row("gcl", 3, r) == ["gcl", "3", "2", "0.750000", "0.200000"]


def test_results_file(tmp_path):
    path = write_results_csv(tmp_path / "results.csv", [["er", "0", "1", "0.500000", "0.000000"]])
    text = path.read_text(encoding="utf-8")
    assert text == "method,seed,task_count,acc,fgt\ner,0,1,0.500000,0.000000\n"
    rows = read_csv(path)
    assert list(rows[0]) == list(RESULTS_HEADER)


def test_result_matrix_file(tmp_path):
    r = ResultMatrix.from_array([[0.25, 0.0], [0.5, 1.0]])
    path = write_result_matrix_csv(tmp_path / "R.csv", r)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "R_0_0,R_0_1,R_1_0,R_1_1"
    assert lines[1] == "0.250000,0.000000,0.500000,1.000000"
    np.testing.assert_allclose(read_result_matrix_csv(path).values, r.values)


def test_non_square_matrix_file(tmp_path):
    path = write_csv(tmp_path / "bad.csv", ["R_0_0", "R_0_1"], [["0.1", "0.2"]])
    with pytest.raises(ValueError):
        read_result_matrix_csv(path)
