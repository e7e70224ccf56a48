from fractions import Fraction as F

import numpy as np
import pytest

from coopgame import game_from_table

STRICT = {
    (1,): F(1), (2,): F(1, 2), (3,): F(1, 3),
    (1, 2): F(1, 3), (1, 3): F(1, 4), (2, 3): F(1, 5), (1, 2, 3): F(1, 6),
}
WITH_NULL = {
    (1,): F(1), (2,): F(0), (3,): F(1, 2),
    (1, 2): F(1), (1, 3): F(1, 3), (2, 3): F(1, 2), (1, 2, 3): F(1, 3),
}


@pytest.fixture
def strict_game():
    return game_from_table(3, {k: float(v) for k, v in STRICT.items()})


@pytest.fixture
def null_game():
    return game_from_table(3, {k: float(v) for k, v in WITH_NULL.items()})


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
