"""Shared fixtures: the explicit D_5 walk matrices and an isolated config directory"""

import pytest

from src.exact_linalg import BigMatrix

W_D5_ROWS = [
    [1, 1, 3, 4, 10],
    [1, 1, 3, 4, 10],
    [1, 3, 4, 10, 14],
    [1, 2, 4, 6, 14],
    [1, 1, 2, 4, 6],
]

HAT_D5_ROWS = [
    [1, 1, 3, 4],
    [1, 3, 4, 10],
    [1, 2, 4, 6],
    [1, 1, 2, 4],
]

B_D5_ROWS = [
    [0, 1, 0, 0],
    [2, 0, 1, 0],
    [0, 1, 0, 1],
    [0, 0, 1, 0],
]


@pytest.fixture
def w_d5():
    return BigMatrix.from_rows(W_D5_ROWS)


@pytest.fixture
def hat_d5():
    return BigMatrix.from_rows(HAT_D5_ROWS)


@pytest.fixture
def b_d5():
    return BigMatrix.from_rows(B_D5_ROWS)


@pytest.fixture
def config_dir(tmp_path):
    return tmp_path / "dynkin-walk"
