"""
Shared fixtures: seeded random rasters and the synthetic multifocus pair
"""

import numpy as np
import pytest

from focusfuse.components import synth


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def random_image(rng):
    return rng.uniform(0.0, 255.0, (64, 64))


@pytest.fixture(scope="session")
def synthetic_pair():
    """(gt, a, b) from the 256x256 chart, seed 42, vertical half mask, sigma 2"""
    gt = synth.test_chart(256, 256, 42)
    a, b = synth.make_pair(gt, synth.FocusMask("vhalf"), 2.0)
    return gt, a, b
