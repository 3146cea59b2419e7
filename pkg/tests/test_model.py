import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from scalewave.errors import ConfigError, NegativeCoefficient, NegativeDelta
from scalewave.fields import bump, constant, gaussian, sine
from scalewave.model import CauchyData, ScalarField, check_gradient, make_params, zero_field


def test_make_params_examples():
    p = make_params(0, 0)
    assert (p.delta, p.sqrt_delta) == (1.0, 1.0)
    p = make_params(3, 1)
    assert (p.delta, p.sqrt_delta) == (0.0, 0.0)
    with pytest.raises(NegativeDelta):
        make_params(1, 1)


@pytest.mark.parametrize("mu, nu2", [(-0.1, 0.0), (0.0, -1e-3)])
def test_negative_coefficient(mu, nu2):
    with pytest.raises(NegativeCoefficient):
        make_params(mu, nu2)


def test_delta_one_instances():
    assert make_params(0, 0).delta == 1.0
    assert make_params(2, 0).delta == 1.0
    assert make_params(3, 0.75).delta == 1.0


@given(st.floats(0, 50), st.floats(0, 10))
def test_delta_bit_exact(mu, nu2):
    delta = (mu - 1.0) ** 2 - 4.0 * nu2
    if delta < 0:
        with pytest.raises(NegativeDelta):
            make_params(mu, nu2)
        return
    p = make_params(mu, nu2)
    assert p.delta == delta
    assert abs(p.sqrt_delta ** 2 - p.delta) <= 1e-14 * max(p.delta, 1e-300) or p.delta == 0.0


def test_params_immutable():
    p = make_params(2, 0)
    with pytest.raises(Exception):
        p.mu = 3.0


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_builtin_gradients_match_finite_differences(dim, rng):
    pts = rng.uniform(-0.9, 0.9, size=(20,) if dim == 1 else (20, dim))
    for fld in (gaussian(dim, width=0.7), sine(dim, k=2.0), bump(dim, 1.2), constant(dim, 3.0)):
        assert check_gradient(fld, pts) < 1e-5


def test_bump_support_and_peak():
    b = bump(3, R=1.0, amplitude=2.0)
    assert b(np.zeros(3)) == pytest.approx(2.0)
    assert b(np.array([1.0, 0.0, 0.0])) == 0.0
    assert b(np.array([0.6, 0.6, 0.6])) == 0.0
    assert b.support_radius == 1.0


def test_field_linear_combination():
    g, s = gaussian(1), sine(1)
    x = np.linspace(-1, 1, 7)
    h = 2.0 * g + s * (-0.5)
    np.testing.assert_allclose(h(x), 2 * g(x) - 0.5 * s(x), rtol=0, atol=1e-15)
    np.testing.assert_allclose(h.gradient(x), 2 * g.gradient(x) - 0.5 * s.gradient(x), atol=1e-15)
    assert (g + zero_field(1)) is not None


def test_cauchy_data_dimension_checks():
    with pytest.raises(ConfigError):
        CauchyData(2, gaussian(2), gaussian(3))
    with pytest.raises(ConfigError):
        CauchyData(4, gaussian(1), gaussian(1))
    d = CauchyData(2, gaussian(2), zero_field(2))
    assert d.f.is_zero


def test_check_gradient_flags_wrong_gradient():
    bad = ScalarField(1, np.sin, lambda x: np.sin(x))
    assert check_gradient(bad, np.linspace(0.1, 1, 5)) > 1e-2
    assert math.isclose(check_gradient(ScalarField(1, np.sin), [0.0]), 0.0)
