"""Finite-difference reference solvers.

A second-order leapfrog scheme for the 1-d equation with a time-centred
damping term, and the radial 3-d problem through U = r u, which satisfies the
same 1-d equation with source r f.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import CFLViolation, ConfigError, DomainTooSmall
from .model import CauchyData, ModelParams

CFL_MAX = 0.9


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid of ``nx`` nodes on [x_min, x_max] and time step ``dt`` up to ``t_end``."""

    x_min: float
    x_max: float
    nx: int
    dt: float
    t_end: float

    def __post_init__(self):
        if self.nx < 3 or not self.x_max > self.x_min:
            raise ConfigError("grid needs nx >= 3 and x_max > x_min")
        if not (self.dt > 0.0 and self.t_end >= 0.0):
            raise ConfigError("grid needs dt > 0 and t_end >= 0")
        if self.dt > CFL_MAX * self.dx * (1.0 + 1e-12):
            raise CFLViolation(f"dt = {self.dt} exceeds {CFL_MAX} dx = {CFL_MAX * self.dx}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    def step_index(self, t: float) -> int:
        k = int(round(t / self.dt))
        if abs(k * self.dt - t) > 1e-9 * max(1.0, t):
            raise ConfigError(f"t = {t} is not a multiple of dt = {self.dt}")
        return k

    @classmethod
    def covering(cls, x_lo: float, x_hi: float, dx: float, times: Sequence[float],
                 cfl: float = 0.8, symmetric: bool = False) -> "Grid1D":
        """Grid whose numerical cone from every node in [x_lo, x_hi] stays interior.

        ``dt`` is chosen so that every requested time is an exact multiple of
        it, with ``dt <= cfl * dx``.  ``symmetric`` centres the grid at 0 with
        a node at the origin.
        """
        unit = _common_step(times)
        t_end = max(times)
        k = max(1, int(np.ceil(unit / (cfl * dx) - 1e-12)))
        dt = unit / k
        reach = t_end * dx / dt + 2.0 * dx
        if symmetric:
            half = max(abs(x_lo), abs(x_hi)) + reach
            m = int(np.ceil(half / dx))
            return cls(-m * dx, m * dx, 2 * m + 1, dt, t_end)
        lo, hi = x_lo - reach, x_hi + reach
        nx = int(np.ceil((hi - lo) / dx)) + 1
        return cls(lo, lo + (nx - 1) * dx, nx, dt, t_end)


def _common_step(times: Sequence[float]) -> float:
    """Largest step dividing every positive time (times rounded to 1e-12)."""
    fr = [Fraction(float(t)).limit_denominator(10**12) for t in times if t > 0.0]
    if not fr:
        return 1.0
    den = 1
    for f in fr:
        den = den * f.denominator // gcd(den, f.denominator)
    g = 0
    for f in fr:
        g = gcd(g, f.numerator * (den // f.denominator))
    return g / den


@dataclass(frozen=True)
class SolutionSlice:
    t: float
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)


def _laplacian(u: np.ndarray, dx: float) -> np.ndarray:
    out = np.zeros_like(u)
    out[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (dx * dx)
    return out


def _check_domain(grid: Grid1D, report_x: Optional[Sequence[float]]):
    if report_x is None:
        return
    reach = grid.n_steps * grid.dx
    lo, hi = min(report_x), max(report_x)
    if lo - reach < grid.x_min or hi + reach > grid.x_max:
        raise DomainTooSmall(
            f"numerical cone of [{lo}, {hi}] (reach {reach}) leaves [{grid.x_min}, {grid.x_max}]")


def _leapfrog(U0, U1, src, params: ModelParams, grid: Grid1D, times):
    """Core loop on node values; ``src(t)`` returns the source on the grid or None."""
    dt, dx = grid.dt, grid.dx
    mu, nu2 = params.mu, params.nu2
    want = sorted({grid.step_index(t): t for t in times}.items())
    out = []
    wi = 0

    def emit(k, u):
        nonlocal wi
        while wi < len(want) and want[wi][0] == k:
            out.append(SolutionSlice(want[wi][1], u.copy()))
            wi += 1

    u_prev = U0.copy()
    u_prev[0] = u_prev[-1] = 0.0
    emit(0, u_prev)
    if grid.n_steps == 0:
        return out
    # Taylor first step with u_tt(0) = u0'' - mu u1 - nu2 u0 + f(0)
    utt = _laplacian(u_prev, dx) - mu * U1 - nu2 * u_prev
    f0 = src(0.0)
    if f0 is not None:
        utt = utt + f0
    u = u_prev + dt * U1 + 0.5 * dt * dt * utt
    u[0] = u[-1] = 0.0
    emit(1, u)
    dt2 = dt * dt
    for n in range(1, grid.n_steps):
        tn = n * dt
        rhs = _laplacian(u, dx)
        if nu2 != 0.0:
            rhs = rhs - nu2 / (1.0 + tn) ** 2 * u
        fn = src(tn)
        if fn is not None:
            rhs = rhs + fn
        # time-centred damping; with mu = 0 this is the plain leapfrog update bit for bit
        cd = mu * dt / (2.0 * (1.0 + tn))
        u_next = (2.0 * u - (1.0 - cd) * u_prev + dt2 * rhs) / (1.0 + cd)
        u_next[0] = u_next[-1] = 0.0
        u_prev, u = u, u_next
        emit(n + 1, u)
    return out


def fd_solve_1d(data: CauchyData, params: ModelParams, grid: Grid1D,
                times: Optional[Sequence[float]] = None,
                report_x: Optional[Sequence[float]] = None) -> list:
    """Leapfrog solution sampled at ``times`` (default: ``[grid.t_end]``).

    Homogeneous Dirichlet values are imposed at both ends; the domain must be
    large enough for that to be harmless.  If ``report_x`` is given, raises
    DomainTooSmall when the numerical cone of dependence (speed dx/dt) of any
    reported point reaches the boundary.
    """
    if data.dim != 1:
        raise ConfigError("fd_solve_1d needs dim-1 data")
    times = [grid.t_end] if times is None else list(times)
    if max(times) > grid.t_end + 1e-12:
        raise ConfigError("requested time beyond t_end")
    _check_domain(grid, report_x)
    x = grid.x
    U0 = np.asarray(data.u0(x), dtype=float) + np.zeros_like(x)
    U1 = np.asarray(data.u1(x), dtype=float) + np.zeros_like(x)
    f = data.f
    src = (lambda t: None) if f.is_zero else (lambda t: f(t, x))
    return _leapfrog(U0, U1, src, params, grid, times)


def fd_solve_radial_3d(data: CauchyData, params: ModelParams, grid: Grid1D,
                       times: Optional[Sequence[float]] = None,
                       report_r: Optional[Sequence[float]] = None) -> list:
    """Radial 3-d solution via U = r u on a grid symmetric about r = 0.

    The data are sampled along the x1 axis and assumed radial.  The grid must
    be symmetric with a node at r = 0 (see ``Grid1D.covering(symmetric=True)``);
    the odd extension of U makes U(t, 0) = 0 automatically.  Returned slices
    hold u(t, r) on the nodes r >= 0, with the origin filled by the even
    parabolic extrapolation (4 u(h) - u(2h)) / 3.
    """
    if data.dim != 3:
        raise ConfigError("fd_solve_radial_3d needs dim-3 radial data")
    r = grid.x
    mid = grid.nx // 2
    if grid.nx % 2 == 0 or abs(r[mid]) > 1e-9 * grid.dx:
        raise ConfigError("radial grid must be symmetric about r = 0 with a node there")
    # exact antisymmetry of the node positions
    r = 0.5 * (r - r[::-1])
    times = [grid.t_end] if times is None else list(times)
    _check_domain(grid, None if report_r is None else [0.0, *report_r])
    pts = np.zeros((grid.nx, 3))
    pts[:, 0] = np.abs(r)
    U0 = r * data.u0(pts)
    U1 = r * data.u1(pts)
    f = data.f
    src = (lambda t: None) if f.is_zero else (lambda t: r * f(t, pts))
    slices = _leapfrog(U0, U1, src, params, grid, times)
    out = []
    rr = r[mid:]
    for sl in slices:
        U = sl.values[mid:]
        u = np.empty_like(U)
        u[1:] = U[1:] / rr[1:]
        u[0] = (4.0 * u[1] - u[2]) / 3.0
        out.append(SolutionSlice(sl.t, u))
    return out


def sample(slice_: SolutionSlice, grid_x: np.ndarray, xq) -> np.ndarray:
    """Cubic-spline interpolation of a slice at arbitrary points."""
    return CubicSpline(grid_x, slice_.values)(xq)
