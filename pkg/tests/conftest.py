"""Shared helpers for the test suite."""

from __future__ import annotations

import random

import pytest

from wvgcontrol import Game


@pytest.fixture
def example1() -> Game:
    """The worked six-player game (1, 2, 2, 2, 3, 3; 8)."""
    return Game((1, 2, 2, 2, 3, 3), 8)


def random_game(rng: random.Random, max_players: int = 16, max_weight: int = 50) -> Game:
    n = rng.randint(1, max_players)
    weights = tuple(rng.randint(0, max_weight) for _ in range(n))
    quota = rng.randint(1, max(sum(weights), 1) + 5)
    return Game(weights, quota)
