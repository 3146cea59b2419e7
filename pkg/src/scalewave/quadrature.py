"""Fixed-order quadrature rules: composite Gauss-Legendre, sphere and weighted-ball means.

All rules are deterministic and are configured only through
:class:`QuadratureConfig`.  Sphere and ball means accept an array of radii and
evaluate the integrand on every node at once.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Union

import numpy as np

from .errors import ConfigError
from .model import ScalarField

Integrand = Union[ScalarField, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class QuadratureConfig:
    """Resolution of every quadrature rule.

    Attributes
    ----------
    interval_order, interval_panels : int
        Gauss-Legendre nodes per panel and number of equal panels.
    sphere_order : (int, int)
        Azimuthal trapezoid nodes and polar Gauss nodes (in cos theta) for S^2.
    ball_order : (int, int)
        Gauss nodes in the polar angle theta (radius r sin theta) and azimuthal
        trapezoid nodes for the weighted disc mean.
    t_derivative_step : float
        Base step for central differences in t; scaled by ``max(1, t)``.
    """

    interval_order: int = 16
    interval_panels: int = 8
    sphere_order: tuple = (32, 16)
    ball_order: tuple = (24, 48)
    t_derivative_step: float = 1e-4

    def __post_init__(self):
        object.__setattr__(self, "sphere_order", tuple(int(v) for v in self.sphere_order))
        object.__setattr__(self, "ball_order", tuple(int(v) for v in self.ball_order))
        if self.interval_order < 2 or self.interval_panels < 1:
            raise ConfigError("interval_order must be >= 2 and interval_panels >= 1")
        if len(self.sphere_order) != 2 or min(self.sphere_order) < 1:
            raise ConfigError("sphere_order must be two positive integers")
        if len(self.ball_order) != 2 or min(self.ball_order) < 1:
            raise ConfigError("ball_order must be two positive integers")
        if not 0.0 < self.t_derivative_step < 0.1:
            raise ConfigError("t_derivative_step must lie in (0, 0.1)")

    def refined(self, factor: int = 2) -> "QuadratureConfig":
        """Every node count multiplied by ``factor`` (panels for the interval rule)."""
        return replace(
            self,
            interval_panels=self.interval_panels * factor,
            sphere_order=tuple(v * factor for v in self.sphere_order),
            ball_order=tuple(v * factor for v in self.ball_order),
        )


@lru_cache(maxsize=64)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_nodes(a: float, b: float, cfg: QuadratureConfig):
    """Nodes and weights of the composite Gauss-Legendre rule on [a, b]."""
    x, w = _leggauss(cfg.interval_order)
    edges = np.linspace(a, b, cfg.interval_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def integrate_interval(g: Callable, a: float, b: float, cfg: QuadratureConfig) -> float:
    """Composite Gauss-Legendre approximation of the integral of ``g`` over [a, b].

    ``g`` should accept an array of abscissae; scalar-only callables are
    handled by a fallback loop.
    """
    if b < a:
        raise ValueError("integrate_interval requires a <= b")
    if a == b:
        return 0.0
    nodes, weights = composite_nodes(a, b, cfg)
    try:
        vals = np.asarray(g(nodes), dtype=float)
        if vals.shape != nodes.shape:
            vals = np.broadcast_to(vals, nodes.shape)
    except (TypeError, ValueError):
        vals = np.array([float(g(v)) for v in nodes])
    return float(weights @ vals)


def _call(phi: Integrand, pts):
    return np.asarray(phi(pts), dtype=float)


@lru_cache(maxsize=16)
def sphere_rule(n_azimuth: int, n_polar: int):
    """Unit directions (K, 3) and weights summing to 1 for the product rule on S^2."""
    ct, wt = _leggauss(n_polar)
    alpha = 2.0 * np.pi * np.arange(n_azimuth) / n_azimuth
    st = np.sqrt(1.0 - ct * ct)
    omega = np.stack(
        [st[:, None] * np.cos(alpha)[None, :],
         st[:, None] * np.sin(alpha)[None, :],
         np.broadcast_to(ct[:, None], (n_polar, n_azimuth))],
        axis=-1,
    ).reshape(-1, 3)
    weights = np.repeat(0.5 * wt / n_azimuth, n_azimuth)
    omega.setflags(write=False)
    weights.setflags(write=False)
    return omega, weights


def _sphere_points(center, r, cfg):
    omega, weights = sphere_rule(*cfg.sphere_order)
    center = np.asarray(center, dtype=float)
    r = np.asarray(r, dtype=float)
    pts = center + r[..., None, None] * omega
    return pts, omega, weights


def sphere_mean(phi: Integrand, center, r, cfg: QuadratureConfig):
    """Surface average of ``phi`` over the sphere |z - center| = r in R^3.

    ``r`` may be an array; the result has the shape of ``r``.  ``phi`` is
    called once with points of shape ``r.shape + (K, 3)``.
    """
    pts, _, weights = _sphere_points(center, r, cfg)
    out = _call(phi, pts) @ weights
    return float(out) if np.ndim(r) == 0 else out


def sphere_mean_radial_derivative(grad: Callable, center, r, cfg: QuadratureConfig):
    """d/dr of :func:`sphere_mean`, i.e. the mean of grad(phi) . omega."""
    pts, omega, weights = _sphere_points(center, r, cfg)
    g = np.asarray(grad(pts), dtype=float)
    out = np.sum(g * omega, axis=-1) @ weights
    return float(out) if np.ndim(r) == 0 else out


@lru_cache(maxsize=16)
def disc_rule(n_theta: int, n_alpha: int):
    """sin(theta) values, unit directions and weights for the weighted disc integral.

    Integrates g(theta, alpha) sin(theta) over [0, pi/2] x [0, 2 pi).
    """
    x, w = _leggauss(n_theta)
    theta = 0.25 * np.pi * (x + 1.0)
    wtheta = 0.25 * np.pi * w * np.sin(theta)
    alpha = 2.0 * np.pi * np.arange(n_alpha) / n_alpha
    dirs = np.stack([np.cos(alpha), np.sin(alpha)], axis=-1)
    sin_t = np.repeat(np.sin(theta), n_alpha)
    omega = np.tile(dirs, (n_theta, 1))
    weights = np.repeat(wtheta, n_alpha) * (2.0 * np.pi / n_alpha)
    for arr in (sin_t, omega, weights):
        arr.setflags(write=False)
    return sin_t, omega, weights


def disc_bracket(phi: Integrand, center, r, cfg: QuadratureConfig):
    """G(r) = r^2 * weighted mean = (1/pi) * integral over B_r of phi / sqrt(r^2 - |y|^2).

    With y = r sin(theta) omega this is (r/pi) times the integral of
    phi(center + r sin(theta) omega) sin(theta) over theta in [0, pi/2] and
    the full circle of directions.  The expression is defined for signed
    ``r`` and is odd in ``r``, which lets central differences straddle r = 0.
    """
    sin_t, omega, weights = disc_rule(*cfg.ball_order)
    center = np.asarray(center, dtype=float)
    r = np.asarray(r, dtype=float)
    pts = center + (r[..., None] * sin_t)[..., None] * omega
    out = r / np.pi * (_call(phi, pts) @ weights)
    return float(out) if np.ndim(r) == 0 else out


def ball_weighted_mean(phi: Integrand, center, r, cfg: QuadratureConfig):
    """Mean over the disc B_r(center) of phi(z) / sqrt(r^2 - |z - center|^2).

    The mean divides by the disc area pi r^2, so phi = 1 gives 2/r.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0.0):
        raise ValueError("ball_weighted_mean requires r > 0")
    out = np.asarray(disc_bracket(phi, center, r_arr, cfg)) / (r_arr * r_arr)
    return float(out) if np.ndim(r) == 0 else out
