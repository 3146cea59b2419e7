"""Integral representation of the solution in one, two and three space dimensions.

In 1-d the solution is a d'Alembert-like term plus kernel-weighted integrals of
the data over the backward characteristic triangle.  In dims 2 and 3 the data
enter through free-wave solutions w[.] (Kirchhoff for n = 3, Poisson via
descent for n = 2), weighted by the same one-dimensional kernels evaluated at
x = 0, y = s.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ConfigError, StepTooLarge
from .kernels import eval_E, eval_K0, eval_K1
from .model import CauchyData, ModelParams, ScalarField, SpacetimeField
from .quadrature import (
    QuadratureConfig,
    composite_nodes,
    disc_bracket,
    sphere_mean,
    sphere_mean_radial_derivative,
)


@dataclass(frozen=True)
class EvalRequest:
    """Evaluate u(t, x) for the given data, parameters and quadrature."""

    t: float
    x: np.ndarray
    data: CauchyData
    params: ModelParams
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        if x.shape != (self.data.dim,):
            raise ConfigError(f"x has {x.size} components but data has dim {self.data.dim}")
        if not self.t >= 0.0:
            raise ConfigError("t must be nonnegative")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "t", float(self.t))


def _step(t, cfg: QuadratureConfig):
    return cfg.t_derivative_step * np.maximum(1.0, np.abs(t))


# free-wave solution operators ------------------------------------------------

def _free_wave_3d(value, grad, t, x, cfg):
    """w = d/dt (t M(t)) = M + t M' for point callables ``value``/``grad``.

    The callables receive points of shape ``t.shape + (K, 3)``.
    """
    t = np.asarray(t, dtype=float)
    M = sphere_mean(value, x, t, cfg)
    if grad is not None:
        dM = sphere_mean_radial_derivative(grad, x, t, cfg)
    else:
        h = _step(t, cfg)
        dM = (np.asarray(sphere_mean(value, x, t + h, cfg))
              - np.asarray(sphere_mean(value, x, t - h, cfg))) / (2.0 * h)
    return M + t * dM


def _free_wave_2d(value, t, x, cfg):
    """w = (1/2) d/dt G(t), G(t) = t^2 * weighted disc mean, by central differences."""
    t = np.asarray(t, dtype=float)
    h = _step(t, cfg)
    dG = (np.asarray(disc_bracket(value, x, t + h, cfg))
          - np.asarray(disc_bracket(value, x, t - h, cfg))) / (2.0 * h)
    return 0.5 * dG


def _as_scalar(w, t):
    return float(w) if np.ndim(t) == 0 else w


def free_wave_odd(phi: ScalarField, t, x, cfg: QuadratureConfig):
    """Free-wave solution with data (phi, 0) in R^3 (Kirchhoff's formula).

    Computes d/dt (t * sphere mean) as M + t dM/dt.  dM/dt is the mean of
    grad(phi) . omega when ``phi`` has a gradient, otherwise a central
    difference with step ``cfg.t_derivative_step * max(1, t)``.  ``t`` may be
    an array; t = 0 gives phi(x).
    """
    if phi.dim != 3:
        raise ConfigError("free_wave_odd is implemented for n = 3")
    if phi.is_zero:
        return _as_scalar(np.zeros(np.shape(t)), t)
    x = np.asarray(x, dtype=float)
    return _as_scalar(_free_wave_3d(phi, phi.gradient, t, x, cfg), t)


def free_wave_even(phi: ScalarField, t, x, cfg: QuadratureConfig):
    """Free-wave solution with data (phi, 0) in R^2 (Poisson's formula).

    Returns (1/2) d/dt (t^2 * ball_weighted_mean(phi, x, t)) with a central
    difference in t.  The bracket is odd in t, so the stencil may cross 0.
    """
    if phi.dim != 2:
        raise ConfigError("free_wave_even is implemented for n = 2")
    if phi.is_zero:
        return _as_scalar(np.zeros(np.shape(t)), t)
    x = np.asarray(x, dtype=float)
    w = np.asarray(_free_wave_2d(phi, t, x, cfg))
    w = np.where(np.asarray(t) == 0.0, phi(x), w)
    return _as_scalar(w, t)


def free_wave(phi: ScalarField, t, x, cfg: QuadratureConfig):
    """Dispatch on dimension: 1-d d'Alembert average, 2-d Poisson, 3-d Kirchhoff."""
    if phi.dim == 1:
        x0 = float(np.atleast_1d(x)[0])
        t = np.asarray(t, dtype=float)
        return _as_scalar(0.5 * (phi(x0 + t) + phi(x0 - t)), t)
    if phi.dim == 2:
        return free_wave_even(phi, t, x, cfg)
    if phi.dim == 3:
        return free_wave_odd(phi, t, x, cfg)
    raise ConfigError(f"unsupported dimension {phi.dim}")


def iterated_t_operator(g, k: int, t: float, step: float) -> float:
    """((1/t) d/dt)^k g at t, by nested central differences.

    Raises
    ------
    StepTooLarge
        If the stencil would reach t <= 0, i.e. ``t <= k * step``.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return float(g(t))
    if t - k * step <= 0.0:
        raise StepTooLarge(f"stencil of half-width {k * step} leaves t > 0 at t={t}")
    inner = lambda s: iterated_t_operator(g, k - 1, s, step)  # noqa: E731
    return (inner(t + step) - inner(t - step)) / (2.0 * step * t)


def double_factorial(j: int) -> int:
    out = 1
    while j > 1:
        out *= j
        j -= 2
    return out


# solvers ---------------------------------------------------------------------

def solve_1d(req: EvalRequest) -> float:
    """u(t, x) in one space dimension from the kernel representation."""
    data, p, cfg = req.data, req.params, req.quad
    if data.dim != 1:
        raise ConfigError("solve_1d needs dim-1 data")
    t, x = req.t, float(req.x[0])
    if t == 0.0:
        return float(data.u0(x))
    mu = p.mu
    c = 2.0 ** (-p.sqrt_delta)
    u = 0.0
    y, wy = composite_nodes(x - t, x + t, cfg)
    if not data.u0.is_zero:
        u0y = data.u0(y)
        u += 0.5 * (1.0 + t) ** (-0.5 * mu) * float(data.u0(x + t) + data.u0(x - t))
        u += c * float(wy @ (u0y * eval_K0(t, x, y, p)))
    else:
        u0y = 0.0
    if not (data.u1.is_zero and (data.u0.is_zero or mu == 0.0)):
        g = data.u1(y) + mu * u0y
        u += c * float(wy @ (g * eval_K1(t, x, y, p)))
    if not data.f.is_zero:
        u += c * _source_1d(data.f, p, cfg, t, x)
    return u


def _source_1d(f: SpacetimeField, p, cfg, t, x):
    b, wb = composite_nodes(0.0, t, cfg)
    xi, wxi = composite_nodes(-1.0, 1.0, cfg)
    half = (t - b)[:, None]
    y = x + half * xi[None, :]
    w = wb[:, None] * half * wxi[None, :]
    bb = np.broadcast_to(b[:, None], y.shape)
    return float(np.sum(w * f(bb, y) * eval_E(t, x, bb, y, p)))


def _free_wave_points(dim, value, grad, s, x, cfg):
    if dim == 3:
        return _free_wave_3d(value, grad, s, x, cfg)
    return _free_wave_2d(value, s, x, cfg)


def solve_nd(req: EvalRequest) -> float:
    """u(t, x) in dims 2 and 3 from the free-wave representation."""
    data, p, cfg = req.data, req.params, req.quad
    n = data.dim
    if n not in (2, 3):
        raise ConfigError("solve_nd needs dim 2 or 3")
    t, x = req.t, req.x
    if t == 0.0:
        return float(data.u0(x))
    mu = p.mu
    c = 2.0 ** (1.0 - p.sqrt_delta)
    s, ws = composite_nodes(0.0, t, cfg)
    u = 0.0
    if not data.u0.is_zero:
        W0 = np.asarray(free_wave(data.u0, s, x, cfg))
        u += (1.0 + t) ** (-0.5 * mu) * free_wave(data.u0, t, x, cfg)
        u += c * float(ws @ (W0 * eval_K0(t, 0.0, s, p)))
    else:
        W0 = 0.0
    # w[u1 + mu u0] = w[u1] + mu w[u0] by linearity
    W1 = 0.0 if data.u1.is_zero else np.asarray(free_wave(data.u1, s, x, cfg))
    if not (data.u1.is_zero and (data.u0.is_zero or mu == 0.0)):
        u += c * float(ws @ ((W1 + mu * W0) * eval_K1(t, 0.0, s, p)))
    if not data.f.is_zero:
        u += c * _source_nd(data.f, p, cfg, t, x)
    return u


def _source_nd(f: SpacetimeField, p, cfg, t, x):
    b_nodes, wb = composite_nodes(0.0, t, cfg)
    total = 0.0
    for b, wbk in zip(b_nodes, wb):
        s, ws = composite_nodes(0.0, t - b, cfg)
        value = lambda pts, b=b: f(b, pts)  # noqa: E731
        grad = None if f.gradient_x is None else (lambda pts, b=b: f.gradient_x(b, pts))
        W = _free_wave_points(f.dim, value, grad, s, x, cfg)
        total += wbk * float(ws @ (W * eval_E(t, 0.0, b, s, p)))
    return total


def solve(req: EvalRequest) -> float:
    """Dispatch to :func:`solve_1d` or :func:`solve_nd` on the data dimension."""
    return solve_1d(req) if req.data.dim == 1 else solve_nd(req)


def solve_at(data: CauchyData, params: ModelParams, t: float, x,
             quad: Optional[QuadratureConfig] = None) -> float:
    """Convenience wrapper building an :class:`EvalRequest`."""
    return solve(EvalRequest(t, x, data, params, quad or QuadratureConfig()))


# support and Huygens checks ----------------------------------------------------

@dataclass(frozen=True)
class SupportReport:
    max_abs: float
    n_points: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_abs <= self.tolerance


def data_support_radius(data: CauchyData) -> float:
    """Radius R with all data supported in |x| <= R (+ t for the source)."""
    radii = [data.u0.support_radius, data.u1.support_radius, data.f.support_R]
    if any(r is None for r in radii):
        raise ConfigError("support checks need support metadata on u0, u1 and f")
    return max(radii)


def _scan(data, params, samples, quad, keep, tol):
    R = data_support_radius(data)
    worst, count = 0.0, 0
    for t, x in samples:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if not keep(t, float(np.linalg.norm(x)), R):
            continue
        worst = max(worst, abs(solve_at(data, params, t, x, quad)))
        count += 1
    return SupportReport(worst, count, tol)


def check_support(data: CauchyData, params: ModelParams, samples: Iterable[Sequence],
                  *, quad: Optional[QuadratureConfig] = None, margin: float = 0.05,
                  tol: float = 1e-8) -> SupportReport:
    """Max |u(t, x)| over samples outside the forward cone |x| > R + t + margin.

    ``samples`` yields ``(t, x)`` pairs; those inside the cone are skipped.
    """
    keep = lambda t, r, R: r > R + t + margin  # noqa: E731
    return _scan(data, params, samples, quad or QuadratureConfig(), keep, tol)


def check_huygens(data: CauchyData, params: ModelParams, samples: Iterable[Sequence],
                  *, quad: Optional[QuadratureConfig] = None, margin: float = 0.1,
                  tol: float = 1e-6) -> SupportReport:
    """Max |u(t, x)| over samples in the interior region |x| < t - R - margin.

    Small values are expected only for delta = 1, odd n and zero source.
    """
    keep = lambda t, r, R: r < t - R - margin  # noqa: E731
    return _scan(data, params, samples, quad or QuadratureConfig(), keep, tol)
