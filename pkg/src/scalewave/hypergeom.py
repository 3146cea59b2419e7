"""Gauss hypergeometric function F(a, b; c; z) for real parameters and 0 <= z < 1.

Two evaluation branches are used:

* the defining power series for ``z <= Z_SWITCH``;
* the connection formulas around ``z = 1`` for ``z > Z_SWITCH``, including the
  logarithmic case when ``c - a - b`` is a nonnegative integer (this happens
  for the kernel family a = b = (1 - sqrt(delta))/2, c = 1 whenever
  sqrt(delta) is an integer).

When ``c - a - b`` is close to, but not within ``LOG_CASE_TOL`` of, an integer
the generic connection formula cancels catastrophically; in that band the
function is continued from ``z = 1/2`` by re-expanding the hypergeometric ODE
in Taylor series (see ``_taylor_continue``).

All routines accept scalar or array ``z`` for a fixed parameter triple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma

from .errors import DomainError, NoConvergence

Z_SWITCH = 0.75
LOG_CASE_TOL = 1e-9
# below this distance to an integer the generic connection formula loses
# more than ~3 digits; use ODE continuation instead
NEAR_INT_BAND = 1e-3
MAX_TERMS = 10000
DEFAULT_TOL = 1e-13


@dataclass(frozen=True)
class HypParams:
    """Parameter triple (a, b; c) of F.  ``b`` defaults to ``a``."""

    a: float
    b: float | None = None
    c: float = 1.0

    def __post_init__(self):
        if self.b is None:
            object.__setattr__(self, "b", self.a)
        if _is_nonpos_int(self.c):
            raise DomainError(f"c = {self.c} is a nonpositive integer")

    def shifted(self) -> "HypParams":
        """Parameters (a+1, b+1; c+1) of the derivative recursion."""
        return HypParams(self.a + 1.0, self.b + 1.0, self.c + 1.0)


def _is_nonpos_int(v: float) -> bool:
    return v <= 0 and float(v).is_integer()


def _rgamma(v: float) -> float:
    if _is_nonpos_int(v):
        return 0.0
    return 1.0 / math.gamma(v)


def _tail_ratio(a, b, c, k, z):
    """Upper bound on |term_{j+1}/term_j| for every j >= k, or None if k is too small.

    For j >= max(-a, -b, 1-c) all factors are nonnegative and
    (j+a)/(j+1) <= 1 + max(a-1, 0)/(j+1), (j+b)/(j+c) <= 1 + max(b-c, 0)/(j+c),
    both decreasing in j.
    """
    if k < -a or k < -b or k + c <= 0:
        return None
    return z * (1.0 + max(a - 1.0, 0.0) / (k + 1.0)) * (1.0 + max(b - c, 0.0) / (k + c))


def _series(a, b, c, z, tol=DEFAULT_TOL, max_terms=MAX_TERMS):
    """Defining power series, vectorised over z, with a geometric tail bound."""
    z = np.asarray(z, dtype=float)
    total = np.ones_like(z)
    term = np.ones_like(z)
    zmax = float(np.max(z)) if z.size else 0.0
    for k in range(max_terms):
        coef = (a + k) * (b + k) / ((c + k) * (k + 1.0))
        term = term * (coef * z)
        total = total + term
        if coef == 0.0:
            # terminating (polynomial) case
            return total
        rho = _tail_ratio(a, b, c, k + 1, zmax)
        if rho is not None and rho < 1.0:
            tail = np.abs(term) * rho / (1.0 - rho)
            if np.all(tail <= tol * np.abs(total)):
                return total
    raise NoConvergence(f"series for F({a}, {b}; {c}; z<={zmax}) did not converge in {max_terms} terms")


def _connection_generic(a, b, c, w, tol):
    """Non-integer s = c - a - b > 0; w = 1 - z."""
    s = c - a - b
    gc = math.gamma(c)
    A = gc * math.gamma(s) * _rgamma(c - a) * _rgamma(c - b)
    B = gc * math.gamma(-s) * _rgamma(a) * _rgamma(b)
    out = np.zeros_like(w)
    if A != 0.0:
        out = out + A * _series(a, b, 1.0 - s, w, tol)
    if B != 0.0:
        out = out + B * w**s * _series(c - a, c - b, s + 1.0, w, tol)
    return out


def _connection_log(a, b, m, w, tol, max_terms=MAX_TERMS):
    """Logarithmic case c = a + b + m, m a nonnegative integer; w = 1 - z."""
    c = a + b + m
    gc = math.gamma(c)
    out = np.zeros_like(w)
    if m > 0:
        pre = math.gamma(m) * gc * _rgamma(a + m) * _rgamma(b + m)
        fin = np.zeros_like(w)
        coef = 1.0
        wn = np.ones_like(w)
        for n in range(m):
            fin = fin + coef * wn
            if n + 1 < m:
                coef *= (a + n) * (b + n) / ((n + 1.0) * (1.0 - m + n))
                wn = wn * w
        out = out + pre * fin

    pre = -((-1.0) ** m) * gc * _rgamma(a) * _rgamma(b)
    if pre == 0.0:
        return out
    logw = np.log(w)
    wmax = float(np.max(w))
    total = np.zeros_like(w)
    coef = 1.0 / math.factorial(m)
    wpow = w**m
    for n in range(max_terms):
        bracket = (logw - digamma(n + 1.0) - digamma(n + m + 1.0)
                   + digamma(a + n + m) + digamma(b + n + m))
        term = coef * wpow * bracket
        total = total + term
        coef *= (a + m + n) * (b + m + n) / ((n + 1.0) * (n + m + 1.0))
        wpow = wpow * w
        if coef == 0.0:
            break
        rho = _tail_ratio(a + m, b + m, m + 1.0, n + 1, wmax)
        if rho is not None:
            # the bracket grows at most like log(n), absorbed by the extra factor
            rho *= 1.0 + 4.0 / (n + 2.0)
            if rho < 1.0:
                tail = np.abs(term) * rho / (1.0 - rho)
                if np.all(tail <= tol * np.abs(pre * total + out)):
                    break
    else:
        raise NoConvergence(f"log-case connection series for F({a}, {b}; {c}) did not converge")
    return out + pre * total


def _taylor_continue(a, b, c, z, tol, z0=0.5):
    """Continue F from z0 to z by repeated Taylor re-expansion of the ODE.

    Each step covers at most half the distance to the singular point z = 1, so
    every local series converges at least like 2^-n.  Errors compound over the
    steps, so the local expansions run at a tolerance well below ``tol``.
    """
    tol = min(tol, 1e-16)
    f = float(_series(a, b, c, np.array([z0]), tol)[0])
    fp = a * b / c * float(_series(a + 1, b + 1, c + 1, np.array([z0]), tol)[0])
    x = z0
    while x < z:
        h = min(z - x, 0.5 * (1.0 - x))
        p0, p1 = x * (1.0 - x), 1.0 - 2.0 * x
        q0, q1 = c - (a + b + 1.0) * x, -(a + b + 1.0)
        c_prev, c_cur = f, fp          # c_n, c_{n+1}
        f_new, fp_new = f + fp * h, fp
        hn = h                         # h^(n+1)
        for n in range(MAX_TERMS):
            c_next = -((p1 * n * (n + 1.0) + q0 * (n + 1.0)) * c_cur
                       + (-n * (n - 1.0) + q1 * n - a * b) * c_prev) / (p0 * (n + 2.0) * (n + 1.0))
            hn_next = hn * h
            f_new += c_next * hn_next
            fp_new += (n + 2.0) * c_next * hn
            c_prev, c_cur, hn = c_cur, c_next, hn_next
            if n > 4 and abs(c_next * hn_next) <= 0.1 * tol * abs(f_new) \
                    and abs(c_prev * hn / h) <= 0.1 * tol * abs(f_new):
                break
        else:
            raise NoConvergence("Taylor continuation did not converge")
        f, fp, x = f_new, fp_new, x + h
    return f


def _near_one(a, b, c, z, tol):
    if _is_nonpos_int(a) or _is_nonpos_int(b):
        return _series(a, b, c, z, tol)
    s = c - a - b
    if s < 0.0 and abs(s - round(s)) >= LOG_CASE_TOL:
        # Euler transformation: F(a,b;c;z) = (1-z)^s F(c-a,c-b;c;z), new s = -s > 0
        return (1.0 - z) ** s * _near_one(c - a, c - b, c, z, tol)
    m = round(s)
    dist = abs(s - m)
    w = 1.0 - z
    if dist < LOG_CASE_TOL:
        if m < 0:
            return (1.0 - z) ** s * _near_one(c - a, c - b, c, z, tol)
        # snap onto the exact log case
        return _connection_log(a, b, int(m), w, tol)
    if dist < NEAR_INT_BAND:
        return np.array([_taylor_continue(a, b, c, float(zi), tol) for zi in z])
    return _connection_generic(a, b, c, w, tol)


def _evaluate(a, b, c, z, tol):
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(~np.isfinite(z)) or np.any(z < 0.0) or np.any(z >= 1.0):
        raise DomainError("hyp2f1 is only evaluated for 0 <= z < 1")
    out = np.empty_like(z)
    low = z <= Z_SWITCH
    if np.any(low):
        out[low] = _series(a, b, c, z[low], tol)
    if np.any(~low):
        out[~low] = _near_one(a, b, c, z[~low], tol)
    return float(out[0]) if scalar else out


def hyp2f1(p: HypParams, z, *, tol: float = DEFAULT_TOL):
    """F(p.a, p.b; p.c; z) for 0 <= z < 1 (scalar or array z).

    Raises DomainError outside [0, 1) and NoConvergence if a branch cannot
    reach ``tol`` within ``MAX_TERMS`` terms.
    """
    return _evaluate(float(p.a), float(p.b), float(p.c), z, tol)


def hyp2f1_deriv(p: HypParams, z, *, tol: float = DEFAULT_TOL):
    """dF/dz via F_z(a, b; c; z) = (a b / c) F(a+1, b+1; c+1; z)."""
    factor = p.a * p.b / p.c
    if factor == 0.0:
        return 0.0 * np.asarray(z, dtype=float) if np.ndim(z) else 0.0
    return factor * hyp2f1(p.shifted(), z, tol=tol)
