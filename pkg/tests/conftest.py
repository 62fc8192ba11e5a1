"""Shared randomized matroid generators for the property suites."""

import random

import pytest

from hppmat import matroid


def random_matroid(rng: random.Random, max_n: int = 7):
    """A small random matroid via a random rational matrix (always yields a
    valid matroid; covers a wide range of ranks and structures)."""
    n = rng.randint(1, max_n)
    r = rng.randint(1, min(4, n))
    while True:
        cols = [
            [rng.randint(-2, 2) for _ in range(r)]
            for _ in range(n)
        ]
        try:
            return matroid.from_matrix(cols)
        except Exception:
            continue


def random_loopless_matroid(rng: random.Random, max_n: int = 7):
    while True:
        m = random_matroid(rng, max_n)
        if not m.loops():
            return m


@pytest.fixture
def rng():
    return random.Random(20240817)
