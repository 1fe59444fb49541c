import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

import telegraph as tg


@pytest.fixture
def medium():
    return tg.MediumParams(k=1.0, c=1.0)


@pytest.fixture
def grid_fine():
    # [-8, 8] at dx = 1/256
    return tg.SpaceGrid(-8.0, 1.0 / 256, 4097)


@pytest.fixture
def grid_coarse():
    # [-4, 4] at dx = 1/64
    return tg.SpaceGrid(-4.0, 1.0 / 64, 513)


def gaussian(grid, center=0.0, width=1.0, amp=1.0):
    return tg.from_function(
        grid, lambda x: amp * np.exp(-((x - center) / width) ** 2))
