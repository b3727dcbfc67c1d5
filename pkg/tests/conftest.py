import numpy as np
import pytest

from cloudradio import (NoiseModel, Region, associate, build_channel, sample_ppp,
                        select_cohort)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture
def noise_10db():
    return NoiseModel.from_snr_db(10.0)


def standard_drop(rng, lambda_b=0.3, side=10.0, mu=1.0, alpha=4.0):
    """One full geometry + channel realization of the reference network."""
    region = Region(side, side)
    while True:
        bs = sample_ppp(lambda_b, region, rng)
        ue = sample_ppp(10.0 * lambda_b, region, rng)
        if len(bs) and len(ue):
            assoc = associate(bs, ue)
            cohort = select_cohort(assoc, rng)
            if cohort.k >= 2:
                break
    H = build_channel(cohort, assoc, mu, alpha, rng)
    return bs, ue, assoc, cohort, H


@pytest.fixture
def drop(rng):
    return standard_drop(rng)


def random_complex(rng, k):
    return (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) / np.sqrt(2)
