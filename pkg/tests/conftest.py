import numpy as np
import pytest

from resgrass import EnsembleSpec, PolarizedSpace, SkewHermitian, exp_skew, random_predual, random_skew

SIZES = [(1, 1), (2, 3), (4, 4), (5, 2)]


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


@pytest.fixture(params=SIZES, ids=lambda s: f"{s[0]}x{s[1]}")
def space(request):
    return PolarizedSpace(*request.param)


def skew(space, seed, alpha=2.0, magnitude=1.0):
    return random_skew(space, EnsembleSpec(seed, alpha, magnitude))


def predual(space, seed, alpha=2.0):
    return random_predual(space, EnsembleSpec(seed, alpha))


def unitary(space, seed, magnitude=1.0):
    return exp_skew(skew(space, seed, magnitude=magnitude))


def haar_skew(space, rng):
    """Dense skew-Hermitian matrix without any decay structure."""
    x = rng.standard_normal((space.n, space.n)) + 1j * rng.standard_normal((space.n, space.n))
    return SkewHermitian(space, (x - x.conj().T) / 2)
