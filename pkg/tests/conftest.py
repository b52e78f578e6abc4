import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from selective_rips.metric import build_space
from selective_rips.sampling import SampleSpec, sample

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def planar_spaces(draw, min_n=1, max_n=8):
    """Random Euclidean point sets in the unit square."""
    n = draw(st.integers(min_n, max_n))
    pts = draw(arrays(np.float64, (n, 2), elements=st.floats(0, 1, allow_nan=False, width=32)))
    diff = pts[:, None, :] - pts[None, :, :]
    return build_space(np.sqrt((diff * diff).sum(-1)), coords=pts)


@st.composite
def scale_sequences(draw, length=4, lo=0.05, hi=1.5):
    values = draw(st.lists(st.floats(lo, hi, allow_nan=False), min_size=1, max_size=length))
    return tuple(sorted(values, reverse=True))


@pytest.fixture(scope="session")
def grid11():
    """The points {0, 1, ..., 10} on the line."""
    return sample(SampleSpec("interval", 11, length=10.0))


@pytest.fixture(scope="session")
def circle60():
    return sample(SampleSpec("circle", 60))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
