"""Parameter and data model shared by the solvers.

Data fields are vectorised callables.  A field of dimension ``n`` is evaluated
on an array of points of shape ``(..., n)`` and returns an array of shape
``(...)``.  For ``n == 1`` the trailing axis is dropped: points are plain
coordinate arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError, NegativeCoefficient, NegativeDelta

Array = np.ndarray


@dataclass(frozen=True)
class ModelParams:
    """Coefficients of u_tt - Lap u + mu/(1+t) u_t + nu2/(1+t)^2 u = f.

    ``delta`` and ``sqrt_delta`` are derived on construction and must not be
    passed in.
    """

    mu: float
    nu2: float
    delta: float = field(init=False)
    sqrt_delta: float = field(init=False)

    def __post_init__(self):
        mu, nu2 = float(self.mu), float(self.nu2)
        if not (math.isfinite(mu) and math.isfinite(nu2)):
            raise NegativeCoefficient("mu and nu2 must be finite")
        if mu < 0.0 or nu2 < 0.0:
            raise NegativeCoefficient(f"mu={mu}, nu2={nu2}: coefficients must be nonnegative")
        # one fixed evaluation order, relied upon by exact-equality tests
        delta = (mu - 1.0) ** 2 - 4.0 * nu2
        if delta < 0.0:
            raise NegativeDelta(f"delta = (mu-1)^2 - 4 nu2 = {delta} < 0 is not supported")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu2", nu2)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "sqrt_delta", math.sqrt(delta))

    @property
    def is_delta_one(self) -> bool:
        return self.delta == 1.0


def make_params(mu: float, nu2: float) -> ModelParams:
    """Build validated model parameters.

    Raises
    ------
    NegativeCoefficient
        If ``mu < 0`` or ``nu2 < 0``.
    NegativeDelta
        If ``(mu - 1)**2 - 4*nu2 < 0``.
    """
    return ModelParams(mu, nu2)


def _combine_optional(g1, g2, a1, a2):
    if g1 is None or g2 is None:
        return None
    return lambda *args: a1 * np.asarray(g1(*args)) + a2 * np.asarray(g2(*args))


def _max_optional(r1, r2):
    if r1 is None or r2 is None:
        return None
    return max(r1, r2)


@dataclass(frozen=True)
class ScalarField:
    """Time-independent datum u0 or u1.

    Parameters
    ----------
    dim : int
        Spatial dimension.
    value : callable
        ``value(x)`` with ``x`` of shape ``(..., dim)`` (or ``(...)`` if dim 1).
    gradient : callable, optional
        ``gradient(x)`` returning shape ``(..., dim)`` (or ``(...)`` if dim 1).
    support_radius : float, optional
        The field vanishes for ``|x| > support_radius``.  Metadata only.
    """

    dim: int
    value: Callable[[Array], Array]
    gradient: Optional[Callable[[Array], Array]] = None
    support_radius: Optional[float] = None
    is_zero: bool = False

    def __call__(self, x):
        return np.asarray(self.value(np.asarray(x, dtype=float)), dtype=float)

    def __add__(self, other: "ScalarField") -> "ScalarField":
        return self.lincomb(1.0, other, 1.0)

    def __mul__(self, alpha: float) -> "ScalarField":
        alpha = float(alpha)
        grad = None if self.gradient is None else (lambda x: alpha * np.asarray(self.gradient(x)))
        return ScalarField(self.dim, lambda x: alpha * self(x), grad, self.support_radius,
                           self.is_zero or alpha == 0.0)

    __rmul__ = __mul__

    def lincomb(self, a: float, other: "ScalarField", b: float) -> "ScalarField":
        """The field ``a*self + b*other``."""
        _check_same_dim(self, other)
        if other.is_zero or b == 0.0:
            return self * a
        if self.is_zero or a == 0.0:
            return other * b
        return ScalarField(
            self.dim,
            lambda x: a * self(x) + b * other(x),
            _combine_optional(self.gradient, other.gradient, a, b),
            _max_optional(self.support_radius, other.support_radius),
        )


@dataclass(frozen=True)
class SpacetimeField:
    """Source term f(t, x); ``value(t, x)`` broadcasts ``t`` against ``x[..., 0]``.

    ``support_R`` means supp f is contained in {|x| <= R + t}.
    """

    dim: int
    value: Callable[[Array, Array], Array]
    gradient_x: Optional[Callable[[Array, Array], Array]] = None
    support_R: Optional[float] = None
    is_zero: bool = False

    def __call__(self, t, x):
        return np.asarray(self.value(np.asarray(t, dtype=float), np.asarray(x, dtype=float)),
                          dtype=float)

    def at(self, b: float) -> ScalarField:
        """Freeze time at ``b``."""
        grad = None if self.gradient_x is None else (lambda x: self.gradient_x(b, x))
        radius = None if self.support_R is None else self.support_R + b
        return ScalarField(self.dim, lambda x: self(b, x), grad, radius, self.is_zero)

    def __add__(self, other: "SpacetimeField") -> "SpacetimeField":
        _check_same_dim(self, other)
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        return SpacetimeField(
            self.dim,
            lambda t, x: self(t, x) + other(t, x),
            _combine_optional(self.gradient_x, other.gradient_x, 1.0, 1.0),
            _max_optional(self.support_R, other.support_R),
        )

    def __mul__(self, alpha: float) -> "SpacetimeField":
        alpha = float(alpha)
        grad = None if self.gradient_x is None else (
            lambda t, x: alpha * np.asarray(self.gradient_x(t, x)))
        return SpacetimeField(self.dim, lambda t, x: alpha * self(t, x), grad, self.support_R,
                              self.is_zero or alpha == 0.0)

    __rmul__ = __mul__


def zero_field(dim: int) -> ScalarField:
    def value(x):
        x = np.asarray(x, dtype=float)
        return np.zeros(x.shape if dim == 1 else x.shape[:-1])

    def gradient(x):
        return np.zeros(np.shape(x))

    return ScalarField(dim, value, gradient, 0.0, is_zero=True)


def zero_source(dim: int) -> SpacetimeField:
    def value(t, x):
        x = np.asarray(x, dtype=float)
        shape = x.shape if dim == 1 else x.shape[:-1]
        return np.zeros(np.broadcast_shapes(np.shape(t), shape))

    def gradient_x(t, x):
        return np.zeros(np.shape(x))

    return SpacetimeField(dim, value, gradient_x, 0.0, is_zero=True)


@dataclass(frozen=True)
class CauchyData:
    """Data triple (u0, u1, f) of the Cauchy problem; ``f=None`` means zero source."""

    dim: int
    u0: ScalarField
    u1: ScalarField
    f: Optional[SpacetimeField] = None

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ConfigError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.f is None:
            object.__setattr__(self, "f", zero_source(self.dim))
        for name in ("u0", "u1", "f"):
            if getattr(self, name).dim != self.dim:
                raise ConfigError(f"{name} has dim {getattr(self, name).dim}, expected {self.dim}")

    def scaled(self, alpha: float) -> "CauchyData":
        return CauchyData(self.dim, self.u0 * alpha, self.u1 * alpha, self.f * alpha)

    def __add__(self, other: "CauchyData") -> "CauchyData":
        return CauchyData(self.dim, self.u0 + other.u0, self.u1 + other.u1, self.f + other.f)


def _check_same_dim(a, b):
    if a.dim != b.dim:
        raise ConfigError(f"dimension mismatch: {a.dim} vs {b.dim}")


def check_gradient(fld: ScalarField, points, *, h: float = 1e-6) -> float:
    """Largest relative mismatch between ``fld.gradient`` and central differences.

    Returns 0.0 if the field carries no gradient.  The relative error is taken
    against ``max(1, |grad|)`` per component so vanishing components do not blow up.
    """
    if fld.gradient is None:
        return 0.0
    pts = np.asarray(points, dtype=float)
    n = fld.dim
    if n == 1:
        pts = pts[..., None]
    analytic = np.asarray(fld.gradient(pts[..., 0] if n == 1 else pts), dtype=float)
    if n == 1:
        analytic = analytic[..., None]
    worst = 0.0
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        plus, minus = pts + e, pts - e
        if n == 1:
            plus, minus = plus[..., 0], minus[..., 0]
        fd = (fld(plus) - fld(minus)) / (2.0 * h)
        err = np.abs(fd - analytic[..., k]) / np.maximum(1.0, np.abs(analytic[..., k]))
        worst = max(worst, float(np.max(err)))
    return worst
