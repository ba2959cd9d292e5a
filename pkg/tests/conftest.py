import numpy as np
import pytest

from lumpcyl import (FiberCoordinates, InvalidLumpError, QuadratureConfig,
                     TargetValue, lump_from_coords)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture
def cfg():
    return QuadratureConfig()


@pytest.fixture
def fast_cfg():
    # loose speed quadrature for path-length tests; lengths asserted at
    # matching tolerances
    return QuadratureConfig(rel_tol=1e-5, x_panels=16)


def random_fiber_point(rng, n, p) -> FiberCoordinates:
    """Random valid point of the (p, 0) fibre of degree n."""
    while True:
        dim = 2 * n - 1
        z = rng.normal(size=dim) * 0.8 + 1j * rng.normal(size=dim) * 0.8
        if not p.infinite:
            z[n - 1] += 1.5        # keep zeta_n away from the bad locus
        coords = FiberCoordinates(n, p, tuple(z))
        try:
            lump_from_coords(coords)
        except InvalidLumpError:
            continue
        return coords
