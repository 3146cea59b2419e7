import numpy as np
import pytest

from scalewave.model import make_params

# (mu, nu2) pairs giving delta = 0, 0.25, 1, 1 and 4
DELTA_CASES = {
    "d0": (3.0, 1.0),
    "d025": (2.0, 0.1875),
    "d1_mu2": (2.0, 0.0),
    "d1_mu3": (3.0, 0.75),
    "d4": (3.0, 0.0),
}


@pytest.fixture(params=sorted(DELTA_CASES), ids=sorted(DELTA_CASES))
def params(request):
    return make_params(*DELTA_CASES[request.param])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
