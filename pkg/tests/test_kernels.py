import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scalewave.errors import DomainError
from scalewave.kernels import (
    E_delta_one,
    E_on_characteristic,
    K0_delta_one,
    K1_delta_one,
    KernelPoint,
    dE_db_delta_one,
    dE_db_on_characteristic,
    eval_E,
    eval_dE_db,
    kernel_dE_db,
    kernel_E,
    kernel_K0,
    kernel_K1,
    z_arg,
)
from scalewave.model import make_params
from scalewave.properties import (
    check_adjoint,
    check_characteristic,
    check_pde,
    check_symmetry,
)


def test_z_examples():
    assert z_arg(KernelPoint(1, 0, 1, 0)) == 0.0
    assert z_arg(KernelPoint(2.5, 0.3, 0.5, 0.3 + 2.0)) == 0.0
    assert z_arg(KernelPoint(1, 0, 0, 0)) == pytest.approx(1 / 9, rel=1e-15)


@pytest.mark.parametrize("t, x, b, y", [(1, 0, 1.5, 0), (1, 0, -0.1, 0), (1, 0, 0.5, 0.6)])
def test_kernel_point_validation(t, x, b, y):
    with pytest.raises(DomainError):
        KernelPoint(t, x, b, y)


def test_kernel_point_edge_tolerance():
    t, b = 1.7, 0.3
    y = (t - b) * (1 + 5e-13)
    assert 0.0 <= z_arg(KernelPoint(t, 0.0, b, y)) < 1e-12


def test_E_free_wave_is_one():
    p = make_params(0, 0)
    t = np.linspace(0.1, 3, 7)
    np.testing.assert_array_equal(eval_E(t, 0.1, 0.5 * t, 0.1 + 0.2 * t, p), 1.0)
    assert kernel_K1(2.0, 0.0, 0.7, p) == 1.0
    assert kernel_K0(2.0, 0.0, 0.7, p) == 0.0


def test_E_diagonal(params):
    for t in (0.0, 0.3, 2.0, 5.0):
        assert kernel_E(KernelPoint(t, 0.4, t, 0.4), params) == pytest.approx(
            2.0 ** (params.sqrt_delta - 1.0), rel=1e-14)


def test_E_on_characteristics(params):
    for t, b in ((1.0, 0.2), (3.0, 0.0), (2.5, 2.0)):
        ref = (2.0 ** (params.sqrt_delta - 1) * (1 + t) ** (-params.mu / 2)
               * (1 + b) ** (params.mu / 2))
        for s in (1, -1):
            assert kernel_E(KernelPoint(t, 0.1, b, 0.1 + s * (t - b)), params) == pytest.approx(
                ref, rel=1e-13)
    assert E_on_characteristic(1.0, 0.2, params) > 0


def test_dE_db_on_characteristics(params):
    for t, b in ((1.0, 0.2), (3.0, 0.0), (2.5, 2.0)):
        for s in (1, -1):
            got = kernel_dE_db(KernelPoint(t, 0.0, b, s * (t - b)), params)
            assert got == pytest.approx(dE_db_on_characteristic(t, b, params), rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("mu, nu2", [(2.0, 0.0), (3.0, 0.75), (0.0, 0.0)])
def test_delta_one_closed_forms(mu, nu2, rng):
    p = make_params(mu, nu2)
    t = rng.uniform(0, 4, 30)
    b = rng.uniform(0, 1, 30) * t
    y = (t - b) * rng.uniform(-1, 1, 30)
    np.testing.assert_allclose(eval_E(t, 0.0, b, y, p), E_delta_one(t, b, p), rtol=1e-14)
    np.testing.assert_allclose(eval_dE_db(t, 0.0, b, y, p), dE_db_delta_one(t, b, p),
                               rtol=1e-13, atol=1e-15)
    ys = t * rng.uniform(-1, 1, 30)
    np.testing.assert_allclose([kernel_K1(ti, 0.0, yi, p) for ti, yi in zip(t, ys)],
                               K1_delta_one(t, p), rtol=1e-14)
    np.testing.assert_allclose([kernel_K0(ti, 0.0, yi, p) for ti, yi in zip(t, ys)],
                               K0_delta_one(t, p), rtol=1e-13, atol=1e-15)


def test_closed_forms_reject_other_delta():
    with pytest.raises(DomainError):
        E_delta_one(1.0, 0.5, make_params(3, 1))


def test_K1_on_characteristic(params):
    for t in (0.5, 2.0):
        assert kernel_K1(t, 0.2, 0.2 + t, params) == pytest.approx(
            2 ** (params.sqrt_delta - 1) * (1 + t) ** (-params.mu / 2), rel=1e-13)


def test_dE_db_matches_finite_difference(params, rng):
    h = 1e-6
    for _ in range(10):
        t = rng.uniform(0.5, 3)
        b = rng.uniform(0.1, 0.8) * t
        y = 0.8 * (t - b - 2 * h) * rng.uniform(-1, 1)
        fd = (eval_E(t, 0.0, b + h, y, params, tol=1e-16)
              - eval_E(t, 0.0, b - h, y, params, tol=1e-16)) / (2 * h)
        assert eval_dE_db(t, 0.0, b, y, params) == pytest.approx(fd, rel=1e-6)


def test_K0_matches_one_sided_difference(params):
    # second-order one-sided difference into b > 0 at b = 0
    t, x, y, h = 2.0, 0.0, 0.5, 1e-5
    e = [eval_E(t, x, k * h, y, params, tol=1e-16) for k in range(3)]
    fd = (-3 * e[0] + 4 * e[1] - e[2]) / (2 * h)
    assert kernel_K0(t, x, y, params) == pytest.approx(-fd, rel=1e-5)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 3), st.floats(0, 1), st.floats(0, 1), st.floats(-2, 2))
def test_evenness_in_y(t, bf, sf, x):
    p = make_params(3.0, 1.0)
    b, s = bf * t, sf * t * (1 - bf)
    assert eval_E(t, x, b, x + s, p) == eval_E(t, x, b, x - s, p)


def test_identity_checks(params):
    for check in (check_pde, check_adjoint, check_characteristic, check_symmetry):
        res = check(params)
        assert res.passed, res.line()


def test_adjoint_potential_denominator_is_1_plus_b():
    # the (1+t)^2 variant of the zeroth-order term is not satisfied by E
    p = make_params(3.0, 1.0)
    from scalewave.properties import adjoint_residual, sample_interior

    t, x, b, y = sample_interior(20, np.random.default_rng(9))
    good = np.abs(adjoint_residual(p, t, x, b, y, 5e-4))
    e = eval_E(t, x, b, y, p)
    alt = good + 0 * e
    shift = (p.mu + p.nu2) * e * (1 / (1 + t) ** 2 - 1 / (1 + b) ** 2)
    alt = np.abs(adjoint_residual(p, t, x, b, y, 5e-4) + shift)
    assert np.max(good) < 1e-5
    assert np.max(alt) > 1e-2
