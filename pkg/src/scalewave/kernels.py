"""Kernel functions E, dE/db, K0 and K1 of the one-dimensional representation.

With r = y - x, D = (t+b+2)^2 - r^2, a = (1 - sqrt(delta))/2 and

    z = ((t-b)^2 - r^2) / D,

the source kernel is

    E(t,x;b,y) = (1+t)^(-mu/2 + a) (1+b)^(mu/2 + a) D^(-a) F(a, a; 1; z),

K1(t,x;y) = E(t,x;0,y) and K0(t,x;y) = -dE/db(t,x;0,y).  Everything depends on
``y - x`` only through ``r**2``.

The array functions ``eval_*`` are the workhorses; the ``kernel_*`` functions
taking a :class:`KernelPoint` are thin scalar wrappers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .hypergeom import DEFAULT_TOL, HypParams, hyp2f1
from .model import ModelParams

# admits quadrature nodes that land on a characteristic up to rounding
REL_EDGE_TOL = 1e-12
ABS_EDGE_TOL = 1e-14


@dataclass(frozen=True)
class KernelPoint:
    """A point (t, x; b, y) of the backward characteristic triangle."""

    t: float
    x: float
    b: float
    y: float

    def __post_init__(self):
        _validate(np.float64(self.t), np.float64(self.x), np.float64(self.b), np.float64(self.y))

    def mirrored(self) -> "KernelPoint":
        """The point (t, x; b, 2x - y) on the other side of x."""
        return KernelPoint(self.t, self.x, self.b, 2.0 * self.x - self.y)


def _validate(t, x, b, y):
    t, x, b, y = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (t, x, b, y)))
    if not np.all(np.isfinite(t) & np.isfinite(x) & np.isfinite(b) & np.isfinite(y)):
        raise DomainError("kernel arguments must be finite")
    if np.any(b < 0.0) or np.any(b > t):
        raise DomainError("kernel requires 0 <= b <= t")
    span = (t - b) * (1.0 + REL_EDGE_TOL) + ABS_EDGE_TOL
    if np.any(np.abs(y - x) > span):
        raise DomainError("kernel requires |y - x| <= t - b")


def _geometry(t, x, b, y, validate):
    t, x, b, y = (np.asarray(v, dtype=float) for v in (t, x, b, y))
    if validate:
        _validate(t, x, b, y)
    r2 = (y - x) ** 2
    tb2 = t + b + 2.0
    D = tb2 * tb2 - r2
    if np.any(~(D > 0.0)) or np.any(b <= -1.0) or np.any(t <= -1.0):
        raise DomainError("kernel evaluated where D <= 0 or 1 + t, 1 + b <= 0")
    # points on a characteristic up to the edge tolerance get z = 0 exactly
    gap = np.abs(t - b) - np.abs(y - x)
    gap = np.where(gap <= REL_EDGE_TOL * np.abs(t - b) + ABS_EDGE_TOL, 0.0, gap)
    num = gap * (np.abs(t - b) + np.abs(y - x))
    return t, b, r2, tb2, D, num / D


def _pow(base, e):
    return np.exp(e * np.log(base)) if e != 0.0 else np.ones_like(base)


def _prefactor(t, b, D, params: ModelParams):
    a = 0.5 * (1.0 - params.sqrt_delta)
    half_mu = 0.5 * params.mu
    return _pow(1.0 + t, a - half_mu) * _pow(1.0 + b, a + half_mu) * _pow(D, -a)


def _out(v):
    return float(v) if np.ndim(v) == 0 else v


def eval_z(t, x, b, y, *, validate: bool = True):
    """z(t,x;b,y) = ((t-b)^2 - (y-x)^2) / ((t+b+2)^2 - (y-x)^2), in [0, 1)."""
    return _out(_geometry(t, x, b, y, validate)[-1])


def eval_E(t, x, b, y, params: ModelParams, *, validate: bool = True, tol: float = DEFAULT_TOL):
    """E(t,x;b,y) on broadcast arrays.

    ``validate=False`` skips the triangle check, which the symmetry identity
    needs when the roles of (t, x) and (b, y) are swapped.
    """
    t, b, r2, tb2, D, z = _geometry(t, x, b, y, validate)
    a = 0.5 * (1.0 - params.sqrt_delta)
    F = hyp2f1(HypParams(a), z, tol=tol)
    return _out(_prefactor(t, b, D, params) * F)


def eval_dE_db(t, x, b, y, params: ModelParams, *, validate: bool = True,
               tol: float = DEFAULT_TOL):
    """Analytic dE/db, using dF/dz = a^2 F(a+1, a+1; 2; z)."""
    t, b, r2, tb2, D, z = _geometry(t, x, b, y, validate)
    sd = params.sqrt_delta
    a = 0.5 * (1.0 - sd)
    F = hyp2f1(HypParams(a), z, tol=tol)
    bracket = (0.5 * params.mu + a) / (1.0 + b) * F + (sd - 1.0) * tb2 / D * F
    if a != 0.0:
        F2 = hyp2f1(HypParams(a + 1.0, a + 1.0, 2.0), z, tol=tol)
        bracket = bracket + (1.0 - sd) ** 2 * (1.0 + t) * (r2 - (t - b) * tb2) / (D * D) * F2
    return _out(_prefactor(t, b, D, params) * bracket)


def eval_K1(t, x, y, params: ModelParams, *, tol: float = DEFAULT_TOL):
    return eval_E(t, x, 0.0, y, params, tol=tol)


def eval_K0(t, x, y, params: ModelParams, *, tol: float = DEFAULT_TOL):
    return _out(-np.asarray(eval_dE_db(t, x, 0.0, y, params, tol=tol)))


def z_arg(p: KernelPoint) -> float:
    return eval_z(p.t, p.x, p.b, p.y)


def kernel_E(p: KernelPoint, params: ModelParams, *, tol: float = DEFAULT_TOL) -> float:
    return eval_E(p.t, p.x, p.b, p.y, params, tol=tol)


def kernel_dE_db(p: KernelPoint, params: ModelParams, *, tol: float = DEFAULT_TOL) -> float:
    return eval_dE_db(p.t, p.x, p.b, p.y, params, tol=tol)


def kernel_K1(t: float, x: float, y: float, params: ModelParams) -> float:
    """K1(t,x;y) = E(t,x;0,y); requires |y - x| <= t."""
    return eval_K1(t, x, y, params)


def kernel_K0(t: float, x: float, y: float, params: ModelParams) -> float:
    """K0(t,x;y) = -dE/db(t,x;0,y); requires |y - x| <= t."""
    return eval_K0(t, x, y, params)


# closed forms for delta = 1, where F(0, 0; 1; z) = 1 and D drops out

def _require_delta_one(params):
    if params.delta != 1.0:
        raise DomainError(f"closed form needs delta = 1, got {params.delta}")


def E_delta_one(t, b, params: ModelParams):
    _require_delta_one(params)
    h = 0.5 * params.mu
    return _out((1.0 + np.asarray(t, dtype=float)) ** -h * (1.0 + np.asarray(b, dtype=float)) ** h)


def dE_db_delta_one(t, b, params: ModelParams):
    _require_delta_one(params)
    h = 0.5 * params.mu
    t, b = np.asarray(t, dtype=float), np.asarray(b, dtype=float)
    return _out(h * (1.0 + t) ** -h * (1.0 + b) ** (h - 1.0))


def K1_delta_one(t, params: ModelParams):
    return E_delta_one(t, 0.0, params)


def K0_delta_one(t, params: ModelParams):
    _require_delta_one(params)
    return _out(-0.5 * params.mu * (1.0 + np.asarray(t, dtype=float)) ** (-0.5 * params.mu))


# exact values used as checks

def E_on_diagonal(params: ModelParams) -> float:
    """E(t,x;t,x) = 2^(sqrt(delta) - 1)."""
    return 2.0 ** (params.sqrt_delta - 1.0)


def E_on_characteristic(t, b, params: ModelParams):
    """E(t,x;b,x +- (t-b)) = 2^(sqrt(delta)-1) (1+t)^(-mu/2) (1+b)^(mu/2)."""
    h = 0.5 * params.mu
    t, b = np.asarray(t, dtype=float), np.asarray(b, dtype=float)
    return _out(2.0 ** (params.sqrt_delta - 1.0) * (1.0 + t) ** -h * (1.0 + b) ** h)


def dE_db_on_characteristic(t, b, params: ModelParams):
    """dE/db at y = x +- (t - b), from the hypergeometric values at z = 0."""
    sd, mu = params.sqrt_delta, params.mu
    t, b = np.asarray(t, dtype=float), np.asarray(b, dtype=float)
    bracket = (-(1.0 - sd) ** 2 * (t - b) / 8.0 + (0.5 * mu + 0.5 * (1.0 - sd)) * (1.0 + t)
               + (sd - 1.0) * (t + b + 2.0) / 4.0)
    return _out(2.0 ** (sd - 1.0) * (1.0 + t) ** (-0.5 * mu - 1.0) * (1.0 + b) ** (0.5 * mu - 1.0)
                * bracket)
