"""Built-in data families with analytic gradients.

Each constructor returns a :class:`~scalewave.model.ScalarField`; sources are
obtained with :func:`as_source`, which makes a field constant in time.
"""

from __future__ import annotations

from typing import Any, Callable, Mapping

import numpy as np

from .errors import ConfigError
from .model import ScalarField, SpacetimeField, zero_field, zero_source


def _center(dim: int, center) -> np.ndarray:
    c = np.zeros(dim) if center is None else np.atleast_1d(np.asarray(center, dtype=float))
    if c.size == 1 and dim > 1:
        c = np.full(dim, float(c[0]))
    if c.shape != (dim,):
        raise ConfigError(f"center must have {dim} components, got {c.tolist()}")
    return c


def _rel(dim: int, x, c: np.ndarray):
    """Displacement and squared distance from ``c``; handles the dim-1 convention."""
    x = np.asarray(x, dtype=float)
    if dim == 1:
        d = x - c[0]
        return d, d * d
    d = x - c
    return d, np.sum(d * d, axis=-1)


def gaussian(dim: int, center=None, width: float = 1.0, amplitude: float = 1.0) -> ScalarField:
    """``amplitude * exp(-|x - center|^2 / width^2)``."""
    c = _center(dim, center)
    w2 = float(width) ** 2
    amp = float(amplitude)

    def value(x):
        _, r2 = _rel(dim, x, c)
        return amp * np.exp(-r2 / w2)

    def gradient(x):
        d, r2 = _rel(dim, x, c)
        v = amp * np.exp(-r2 / w2)
        return (-2.0 / w2) * d * (v if dim == 1 else v[..., None])

    return ScalarField(dim, value, gradient, None)


def sine(dim: int, k: float = 1.0, amplitude: float = 1.0, phase: float = 0.0) -> ScalarField:
    """Plane wave ``amplitude * sin(k x_1 + phase)``."""
    k, amp, ph = float(k), float(amplitude), float(phase)

    def value(x):
        x = np.asarray(x, dtype=float)
        x1 = x if dim == 1 else x[..., 0]
        return amp * np.sin(k * x1 + ph)

    def gradient(x):
        x = np.asarray(x, dtype=float)
        if dim == 1:
            return amp * k * np.cos(k * x + ph)
        g = np.zeros(x.shape)
        g[..., 0] = amp * k * np.cos(k * x[..., 0] + ph)
        return g

    return ScalarField(dim, value, gradient, None)


def bump(dim: int, R: float = 1.0, amplitude: float = 1.0, center=None) -> ScalarField:
    """Smooth compactly supported bump ``A exp(1 - 1/(1 - |x-c|^2/R^2))`` on |x-c| < R.

    The peak value at the center is ``amplitude``.
    """
    R = float(R)
    if R <= 0.0:
        raise ConfigError("bump radius R must be positive")
    c = _center(dim, center)
    amp = float(amplitude)

    def _parts(x):
        d, r2 = _rel(dim, x, c)
        s = r2 / (R * R)
        inside = s < 1.0
        q = np.where(inside, 1.0 - s, 1.0)
        v = np.where(inside, amp * np.exp(1.0 - 1.0 / q), 0.0)
        return d, q, v

    def value(x):
        return _parts(x)[2]

    def gradient(x):
        d, q, v = _parts(x)
        # d/dx exp(1 - 1/q) with q = 1 - |d|^2/R^2
        factor = -2.0 * v / (R * R * q * q)
        return d * (factor if dim == 1 else factor[..., None])

    support = R + float(np.linalg.norm(c))
    return ScalarField(dim, value, gradient, support)


def constant(dim: int, c: float = 1.0) -> ScalarField:
    c = float(c)
    if c == 0.0:
        return zero_field(dim)

    def value(x):
        x = np.asarray(x, dtype=float)
        return np.full(x.shape if dim == 1 else x.shape[:-1], c)

    def gradient(x):
        return np.zeros(np.shape(x))

    return ScalarField(dim, value, gradient, None)


def zero(dim: int) -> ScalarField:
    return zero_field(dim)


def as_source(fld: ScalarField) -> SpacetimeField:
    """The source f(t, x) = fld(x)."""
    if fld.is_zero:
        return zero_source(fld.dim)
    grad = None if fld.gradient is None else (lambda t, x: _broadcast_grad(fld, t, x))

    def value(t, x):
        v = fld(x)
        return v + np.zeros(np.broadcast_shapes(np.shape(t), v.shape))

    return SpacetimeField(fld.dim, value, grad, fld.support_radius)


def _broadcast_grad(fld, t, x):
    g = np.asarray(fld.gradient(x))
    lead = np.broadcast_shapes(np.shape(t), g.shape if fld.dim == 1 else g.shape[:-1])
    return np.broadcast_to(g, lead if fld.dim == 1 else lead + (fld.dim,))


FAMILIES: Mapping[str, Callable[..., ScalarField]] = {
    "gaussian": gaussian,
    "sine": sine,
    "bump": bump,
    "constant": constant,
    "zero": zero,
}


def build_field(dim: int, spec: Any) -> ScalarField:
    """Build a field from ``"name"`` or ``{"family": name, **kwargs}``."""
    if spec is None:
        return zero_field(dim)
    if isinstance(spec, str):
        name, kwargs = spec, {}
    elif isinstance(spec, Mapping):
        kwargs = dict(spec)
        name = kwargs.pop("family", None)
        if name is None:
            raise ConfigError(f"field spec {spec!r} lacks a 'family' key")
    else:
        raise ConfigError(f"cannot interpret field spec {spec!r}")
    if name not in FAMILIES:
        raise ConfigError(f"unknown field family {name!r}; choose from {sorted(FAMILIES)}")
    try:
        return FAMILIES[name](dim, **kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {name}: {exc}") from None
