import math

import numpy as np
import pytest

from scalewave.errors import CFLViolation, ConfigError, DomainTooSmall
from scalewave.fd_oracle import Grid1D, fd_solve_1d, fd_solve_radial_3d, sample
from scalewave.fields import bump, gaussian, sine
from scalewave.model import CauchyData, ScalarField, make_params, zero_field
from scalewave.quadrature import QuadratureConfig
from scalewave.representation import free_wave_odd, solve_at

FREE = make_params(0, 0)


def at(data, params, dx, t, xs):
    grid = Grid1D.covering(min(xs), max(xs), dx, [t])
    sl = fd_solve_1d(data, params, grid, [t], report_x=xs)[0]
    return sample(sl, grid.x, xs)


def test_zero_data_stays_zero(params):
    d = CauchyData(1, zero_field(1), zero_field(1))
    grid = Grid1D(-2, 2, 801, 0.0025, 1.0)
    for sl in fd_solve_1d(d, params, grid, [0.0, 0.5, 1.0]):
        assert not np.any(sl.values)


def test_sine_dalembert_second_order():
    d = CauchyData(1, sine(1, 1.0), zero_field(1))
    xs = [0.1, 0.7]
    exact = np.sin(xs) * math.cos(1.0)
    errs = [np.max(np.abs(at(d, FREE, dx, 1.0, xs) - exact)) for dx in (1e-2, 5e-3)]
    assert errs[1] < 1e-4
    assert 3.4 <= errs[0] / errs[1] <= 4.6


def test_refinement_against_representation():
    p = make_params(2, 0.1875)
    d = CauchyData(1, gaussian(1, width=0.5), gaussian(1, width=0.7, amplitude=0.3))
    xs = [-0.4, 0.0, 0.3]
    ref = np.array([solve_at(d, p, 1.0, x, QuadratureConfig(interval_panels=16)) for x in xs])
    errs = [np.max(np.abs(at(d, p, dx, 1.0, xs) - ref)) for dx in (4e-3, 2e-3, 1e-3)]
    for a, b in zip(errs, errs[1:]):
        assert abs(math.log2(a / b) - 2.0) <= 0.3


def test_cfl_violation():
    with pytest.raises(CFLViolation):
        Grid1D(-1, 1, 201, 0.0095, 1.0)
    Grid1D(-1, 1, 201, 0.009, 1.0)


def test_domain_too_small():
    d = CauchyData(1, gaussian(1), zero_field(1))
    grid = Grid1D(-1, 1, 201, 0.008, 1.0)
    with pytest.raises(DomainTooSmall):
        fd_solve_1d(d, FREE, grid, report_x=[0.0])


def test_bad_request_times():
    grid = Grid1D(-1, 1, 201, 0.008, 0.8)
    d = CauchyData(1, gaussian(1), zero_field(1))
    with pytest.raises(ConfigError):
        fd_solve_1d(d, FREE, grid, [0.8001])
    with pytest.raises(ConfigError):
        fd_solve_1d(d, FREE, grid, [0.3333])


def test_covering_hits_requested_times():
    grid = Grid1D.covering(0, 1, 1e-2, [0.3, 1.0, 2.5])
    for t in (0.3, 1.0, 2.5):
        grid.step_index(t)
    assert grid.dt <= 0.8 * grid.dx + 1e-15


def test_discrete_finite_speed(params):
    R = 0.5
    d = CauchyData(1, bump(1, R), bump(1, R, amplitude=0.3))
    grid = Grid1D(-4, 4, 801, 0.008, 1.0)
    sl = fd_solve_1d(d, params, grid)[0]
    x = grid.x
    outside = np.abs(x) > R + grid.n_steps * grid.dx + 1e-12
    assert np.all(sl.values[outside] == 0.0)
    assert np.any(sl.values[~outside] != 0.0)


def test_richardson_ratio(params):
    d = CauchyData(1, gaussian(1, width=0.5), zero_field(1))
    xs = [0.2]
    vals = [at(d, params, dx, 1.0, xs)[0] for dx in (4e-3, 2e-3, 1e-3)]
    ratio = (vals[0] - vals[1]) / (vals[1] - vals[2])
    assert 3.4 <= ratio <= 4.6


def test_plain_leapfrog_bit_for_bit():
    d = CauchyData(1, gaussian(1, width=0.4), sine(1, 2.0, amplitude=0.1))
    grid = Grid1D(-3, 3, 601, 0.008, 1.2)
    got = fd_solve_1d(d, FREE, grid)[0].values

    x, dx, dt = grid.x, grid.dx, grid.dt

    def lap(v):
        out = np.zeros_like(v)
        out[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / (dx * dx)
        return out

    u_prev = d.u0(x).copy()
    u_prev[0] = u_prev[-1] = 0.0
    u = u_prev + dt * d.u1(x) + 0.5 * dt * dt * lap(u_prev)
    u[0] = u[-1] = 0.0
    for _ in range(1, grid.n_steps):
        u_next = 2.0 * u - u_prev + dt * dt * lap(u)
        u_next[0] = u_next[-1] = 0.0
        u_prev, u = u, u_next
    assert np.array_equal(got, u)


def test_slices_are_read_only():
    d = CauchyData(1, gaussian(1), zero_field(1))
    sl = fd_solve_1d(d, FREE, Grid1D(-3, 3, 301, 0.016, 0.32))[0]
    with pytest.raises(ValueError):
        sl.values[0] = 1.0


# radial 3-d ---------------------------------------------------------------------

def radial_at(data, params, dx, t, rs):
    grid = Grid1D.covering(0.0, max(rs), dx, [t], symmetric=True)
    sl = fd_solve_radial_3d(data, params, grid, [t], report_r=rs)[0]
    return sample(sl, grid.dx * np.arange(grid.nx // 2 + 1), rs)


def test_radial_zero_data():
    d = CauchyData(3, zero_field(3), zero_field(3))
    grid = Grid1D.covering(0.0, 1.0, 1e-2, [1.0], symmetric=True)
    assert not np.any(fd_solve_radial_3d(d, make_params(3, 1), grid)[0].values)


def test_radial_free_wave():
    g = gaussian(3, width=0.6)
    d = CauchyData(3, g, zero_field(3))
    rs = [0.0, 0.3, 0.8]
    fd = radial_at(d, FREE, 1e-3, 1.0, rs)
    ref = [free_wave_odd(g, 1.0, np.array([r, 0, 0]), QuadratureConfig()) for r in rs]
    np.testing.assert_allclose(fd, ref, rtol=1e-3, atol=1e-3 * max(map(abs, ref)))


@pytest.mark.parametrize("mu, nu2", [(2.0, 0.1875), (3.0, 1.0), (2.0, 0.0)])
def test_radial_against_representation(mu, nu2):
    p = make_params(mu, nu2)
    d = CauchyData(3, gaussian(3, width=0.6), gaussian(3, width=0.8, amplitude=0.2))
    rs = [0.2, 0.7]
    fd = radial_at(d, p, 1e-3, 1.2, rs)
    ref = [solve_at(d, p, 1.2, [r, 0, 0]) for r in rs]
    np.testing.assert_allclose(fd, ref, rtol=1e-2)


def test_radial_grid_must_be_symmetric():
    d = CauchyData(3, gaussian(3), zero_field(3))
    with pytest.raises(ConfigError):
        fd_solve_radial_3d(d, FREE, Grid1D(0, 2, 201, 0.008, 0.8))
    with pytest.raises(ConfigError):
        fd_solve_1d(d, FREE, Grid1D(-2, 2, 201, 0.016, 0.8))


def test_radial_rejects_non_radial_dim():
    d = CauchyData(1, gaussian(1), zero_field(1))
    with pytest.raises(ConfigError):
        fd_solve_radial_3d(d, FREE, Grid1D(-2, 2, 201, 0.016, 0.8))


def test_unused_scalar_field_helper():
    # a field without gradient still drives the radial solver
    f = ScalarField(3, lambda z: np.exp(-np.sum(z * z, -1)))
    d = CauchyData(3, f, zero_field(3))
    assert np.isfinite(radial_at(d, FREE, 1e-2, 0.5, [0.1])[0])
