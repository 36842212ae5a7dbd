import numpy as np
import pytest

from gaussify import PureState2


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def rand_pure(rng, cutoff, unit_norm=False, min_vacuum=0.0):
    """Random complex amplitude table, optionally normalized.

    ``min_vacuum`` redraws until |amps[0, 0]| clears the floor, for checks
    that divide by the vacuum amplitude.
    """
    while True:
        amps = rng.normal(size=(cutoff + 1, cutoff + 1)) + 1j * rng.normal(
            size=(cutoff + 1, cutoff + 1)
        )
        if unit_norm:
            amps = amps / np.sqrt(np.sum(np.abs(amps) ** 2))
        if abs(amps[0, 0]) >= min_vacuum:
            return PureState2(cutoff, amps)


def rand_gamma(rng, max_norm):
    """Random complex symmetric 2x2 with spectral norm scaled to max_norm."""
    from gaussify import GammaMatrix

    vals = rng.normal(size=3) + 1j * rng.normal(size=3)
    gm = GammaMatrix(vals[0], vals[1], vals[2])
    top = np.linalg.svd(gm.matrix, compute_uv=False)[0]
    scale = max_norm / top
    return GammaMatrix(gm.g1 * scale, gm.g2 * scale, gm.g12 * scale)
