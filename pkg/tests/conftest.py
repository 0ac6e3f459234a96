"""Shared helpers: seeded random mode generators used across the suite."""
import numpy as np
import pytest

from homsim import GaussianMode, TimeGrid, make_sampled_mode

MODE_GRID = TimeGrid(-8.0, 8.0, 2048)


def random_gaussian_mode(rng) -> GaussianMode:
    return GaussianMode(center=rng.uniform(-1.5, 1.5),
                        carrier=rng.uniform(-12.0, 12.0))


def random_sampled_mode(rng, grid: TimeGrid = MODE_GRID):
    """Smooth band-limited mode: a few Gaussian humps with a mild phase."""
    t = grid.times
    env = np.zeros_like(t)
    for _ in range(rng.integers(1, 4)):
        center = rng.uniform(-2.0, 2.0)
        width = rng.uniform(0.6, 1.5)
        env += rng.uniform(0.3, 1.0) * np.exp(-((t - center) / width) ** 2)
    phase = (rng.uniform(-6.0, 6.0) * t
             + rng.uniform(-1.0, 1.0) * t ** 2
             + rng.uniform(0.0, 2.0) * np.sin(rng.uniform(0.5, 2.0) * t))
    return make_sampled_mode(env, phase, grid)


def random_mode(rng, grid: TimeGrid = MODE_GRID):
    if rng.random() < 0.5:
        return random_gaussian_mode(rng)
    return random_sampled_mode(rng, grid)


@pytest.fixture
def rng():
    return np.random.default_rng(20240808)
