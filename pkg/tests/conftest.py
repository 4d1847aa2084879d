import numpy as np
import pytest

from secexp.dists import Alphabet, SubDist


@pytest.fixture
def bern02():
    return SubDist.bernoulli(0.2)


@pytest.fixture
def skew3():
    return SubDist(Alphabet(("a", "b", "c")), np.array([0.5, 0.25, 0.25]))


@pytest.fixture
def ternary():
    return SubDist(Alphabet(("0", "1", "2")), np.array([0.5, 0.3, 0.2]))


def random_subdist(rng, size, total=None):
    """A random sub-distribution; total defaults to a uniform draw in (0, 1]."""
    raw = rng.random(size) + 1e-3
    if total is None:
        total = rng.uniform(0.2, 1.0)
    symbols = tuple(f"x{i}" for i in range(size))
    return SubDist(Alphabet(symbols), raw / raw.sum() * total)


def random_dist(rng, size):
    return random_subdist(rng, size, total=1.0)
