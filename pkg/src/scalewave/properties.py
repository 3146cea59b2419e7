"""Finite-difference checks of the kernel identities.

Each check samples kernel points with a seeded generator and returns a
:class:`PropertyResult`.  Kernels are evaluated with a hypergeometric
tolerance far below the default, so that the differences are limited by
rounding rather than series truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kernels import E_on_characteristic, E_on_diagonal, eval_E
from .model import ModelParams

FD_TOL = 1e-16
PDE_STEPS = (1e-3, 5e-4)
CHAR_STEP = 1e-4


@dataclass(frozen=True)
class PropertyResult:
    name: str
    delta: float
    value: float
    tolerance: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name} delta={self.delta:g}: "
                f"{self.value:.3e} (tol {self.tolerance:.1e})")


def _E(p, t, x, b, y, **kw):
    return np.asarray(eval_E(t, x, b, y, p, tol=FD_TOL, **kw))


def sample_interior(n: int, rng: np.random.Generator, *, t_max: float = 3.0,
                    margin: float = 0.01):
    """Points with b in [margin, t - 3 margin] and |y - x| <= t - b - 2 margin.

    The margins keep every stencil used by the residual checks inside the
    characteristic triangle.
    """
    t = rng.uniform(0.2, t_max, n)
    b = rng.uniform(margin, t - 3.0 * margin)
    x = rng.uniform(-1.0, 1.0, n)
    span = t - b - 2.0 * margin
    y = x + span * rng.uniform(-1.0, 1.0, n)
    return t, x, b, y


def pde_residual(p: ModelParams, t, x, b, y, h: float):
    """E_tt - E_xx + mu/(1+t) E_t + nu2/(1+t)^2 E on the 5-point stencil in (t, x)."""
    e0 = _E(p, t, x, b, y)
    etp, etm = _E(p, t + h, x, b, y), _E(p, t - h, x, b, y)
    exp_, exm = _E(p, t, x + h, b, y), _E(p, t, x - h, b, y)
    e_tt = (etp - 2.0 * e0 + etm) / (h * h)
    e_xx = (exp_ - 2.0 * e0 + exm) / (h * h)
    e_t = (etp - etm) / (2.0 * h)
    return e_tt - e_xx + p.mu / (1.0 + t) * e_t + p.nu2 / (1.0 + t) ** 2 * e0


def adjoint_residual(p: ModelParams, t, x, b, y, h: float):
    """E_bb - E_yy - mu/(1+b) E_b + (mu+nu2)/(1+b)^2 E on the 5-point stencil in (b, y)."""
    e0 = _E(p, t, x, b, y)
    ebp, ebm = _E(p, t, x, b + h, y), _E(p, t, x, b - h, y)
    eyp, eym = _E(p, t, x, b, y + h), _E(p, t, x, b, y - h)
    e_bb = (ebp - 2.0 * e0 + ebm) / (h * h)
    e_yy = (eyp - 2.0 * e0 + eym) / (h * h)
    e_b = (ebp - ebm) / (2.0 * h)
    return e_bb - e_yy - p.mu / (1.0 + b) * e_b + (p.mu + p.nu2) / (1.0 + b) ** 2 * e0


def _decay_check(name, p, residual, n, rng, tol):
    """Residual bound at the finer step plus an O(h^2) rate on the sample maximum.

    Per point, the residual at a point where truncation is tiny is pure
    rounding noise, so the rate is measured on the maximum over the sample.
    A sample whose maximum is below the rounding floor counts as converged.
    """
    t, x, b, y = sample_interior(n, rng)
    h1, h2 = PDE_STEPS
    r1 = float(np.max(np.abs(residual(p, t, x, b, y, h1))))
    r2 = float(np.max(np.abs(residual(p, t, x, b, y, h2))))
    # a few ulps of E amplified by 1/h^2 in the second differences
    scale = float(np.max(np.abs(_E(p, t, x, b, y))))
    noise_floor = float(8.0 * np.finfo(float).eps * scale / (h2 * h2))
    ratio = r1 / r2 if r2 > 0.0 else np.inf
    decays = ratio >= 3.0 or r2 <= noise_floor
    passed = bool(r2 <= tol and decays)
    detail = {"residual_h1": r1, "ratio": ratio, "noise_floor": noise_floor}
    return PropertyResult(name, p.delta, r2, tol, passed, detail)


def check_pde(p: ModelParams, *, n: int = 20, seed: int = 0, tol: float = 1e-5) -> PropertyResult:
    """E solves the equation in (t, x): residual <= tol at h = 5e-4, with O(h^2) decay."""
    return _decay_check("pde_residual", p, pde_residual, n, np.random.default_rng(seed), tol)


def check_adjoint(p: ModelParams, *, n: int = 20, seed: int = 1,
                  tol: float = 1e-5) -> PropertyResult:
    """E solves the adjoint equation in (b, y), with the (1+b)^2 potential term."""
    return _decay_check("adjoint_residual", p, adjoint_residual, n,
                        np.random.default_rng(seed), tol)


def characteristic_residual(p: ModelParams, t, x, b, sign: int, h: float = CHAR_STEP):
    """[E_t - sign E_x] + 2^(sqrt(delta)-2) mu (1+t)^(-mu/2-1) (1+b)^(mu/2) at y = x + sign (t-b).

    Derivatives use one-sided second-order differences pointing into the
    triangle: t forward, and x forward (sign +1) or backward (sign -1).
    """
    y = x + sign * (t - b)

    def d_one_sided(f, step):
        return (-3.0 * f(0.0) + 4.0 * f(step) - f(2.0 * step)) / (2.0 * step)

    e_t = d_one_sided(lambda s: _E(p, t + s, x, b, y), h)
    # moving x towards y shrinks |y - x|; the signed step keeps the formula valid
    e_x = d_one_sided(lambda s: _E(p, t, x + s, b, y), sign * h)
    corr = (2.0 ** (p.sqrt_delta - 2.0) * p.mu * (1.0 + t) ** (-0.5 * p.mu - 1.0)
            * (1.0 + b) ** (0.5 * p.mu))
    return e_t - sign * e_x + corr


def check_characteristic(p: ModelParams, *, n: int = 50, seed: int = 2,
                         tol: float = 1e-6) -> PropertyResult:
    """Both characteristic identities at ``n`` sampled (t, b) pairs."""
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.1, 3.0, n)
    b = rng.uniform(0.0, 0.95, n) * t
    x = rng.uniform(-1.0, 1.0, n)
    worst = max(float(np.max(np.abs(characteristic_residual(p, t, x, b, s)))) for s in (1, -1))
    return PropertyResult("characteristic_identities", p.delta, worst, tol, worst <= tol)


def check_symmetry(p: ModelParams, *, n: int = 100, seed: int = 3,
                   tol: float = 1e-12) -> PropertyResult:
    """E(t,x;b,y) = (1+b)^mu (1+t)^(-mu) E(b,y;t,x), relative error."""
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.0, 3.0, n)
    b = rng.uniform(0.0, 1.0, n) * t
    x = rng.uniform(-1.0, 1.0, n)
    y = x + (t - b) * rng.uniform(-1.0, 1.0, n)
    lhs = np.asarray(eval_E(t, x, b, y, p))
    rhs = (1.0 + b) ** p.mu * (1.0 + t) ** (-p.mu) * np.asarray(eval_E(b, y, t, x, p, validate=False))
    worst = float(np.max(np.abs(lhs - rhs) / np.abs(lhs)))
    return PropertyResult("symmetry", p.delta, worst, tol, worst <= tol)


def check_special_values(p: ModelParams, *, n: int = 50, seed: int = 4,
                         tol: float = 1e-10) -> PropertyResult:
    """E on the diagonal b = t, y = x and on both characteristics, relative error."""
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.0, 5.0, n)
    b = rng.uniform(0.0, 1.0, n) * t
    x = rng.uniform(-1.0, 1.0, n)
    diag = np.asarray(eval_E(t, x, t, x, p))
    worst = float(np.max(np.abs(diag / E_on_diagonal(p) - 1.0)))
    ref = np.asarray(E_on_characteristic(t, b, p))
    for s in (1, -1):
        val = np.asarray(eval_E(t, x, b, x + s * (t - b), p))
        worst = max(worst, float(np.max(np.abs(val / ref - 1.0))))
    return PropertyResult("special_values", p.delta, worst, tol, worst <= tol)


def run_suite(p: ModelParams) -> list:
    """All kernel identity checks for one parameter pair."""
    return [check_pde(p), check_adjoint(p), check_characteristic(p), check_symmetry(p),
            check_special_values(p)]
