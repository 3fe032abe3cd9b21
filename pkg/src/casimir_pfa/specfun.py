"""Modified Bessel functions of integer and half-integer order.

Backed by scipy's scaled routines (ive, kve) for moderate order/argument,
with a uniform large-order (Debye) asymptotic expansion taking over in the
regime where the scaled values leave the double range (order >> argument).
Log-space values are the internal currency of the geometry engines: every
mode factor is a ratio of exponentially large/small Bessel values, and only
the logs survive at large order.

Uniform expansion, with z = x/nu, t = 1/sqrt(1+z^2):

    I_nu(x) ~ exp(nu*eta(z)) / sqrt(2 pi nu (1+z^2)^(1/2)) * sum_k u_k(t)/nu^k
    K_nu(x) ~ exp(-nu*eta(z)) sqrt(pi/(2 nu)) (1+z^2)^(-1/4) * sum_k (-1)^k u_k(t)/nu^k

    eta(z) = sqrt(1+z^2) + ln(z / (1 + sqrt(1+z^2)))

The polynomials u_k follow the classical recurrence
u_{k+1}(t) = t^2 (1-t^2) u_k'(t)/2 + (1/8) int_0^t (1 - 5 s^2) u_k(s) ds,
generated here once with exact rational coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import special

from .core import DomainError, RangeError

__all__ = [
    "BesselOrder",
    "MAX_ORDER",
    "bessel_i",
    "bessel_k",
    "bessel_i_prime",
    "bessel_k_prime",
    "log_bessel_i",
    "log_bessel_k",
    "log_bessel_i_prime",
    "log_bessel_k_prime_mag",
    "log_add",
    "debye_eta",
    "debye_u",
    "debye_t",
]

#: Default cap on |order| accepted by the public evaluators. High enough for
#: every supported geometry at the tightest acceptance gaps (near-touching
#: concentric shells need ~1e3 angular modes at rel_tol 1e-8).
MAX_ORDER = 4096


@dataclass(frozen=True)
class BesselOrder:
    """Order nu = twice_nu / 2, supporting integers and half-integers.

    Accessors honor the reflection symmetries K_{-nu} = K_nu (any nu) and
    I_{-n} = I_n (integer n only).
    """

    twice_nu: int

    def __post_init__(self):
        if abs(self.twice_nu) > 2 * MAX_ORDER:
            raise DomainError(f"|order| exceeds the supported maximum {MAX_ORDER}")

    @classmethod
    def integer(cls, n: int) -> "BesselOrder":
        return cls(2 * n)

    @classmethod
    def half_integer(cls, l: int) -> "BesselOrder":
        """Order nu = l + 1/2."""
        return cls(2 * l + 1)

    @property
    def nu(self) -> float:
        return self.twice_nu / 2.0

    @property
    def is_integer(self) -> bool:
        return self.twice_nu % 2 == 0


def _as_nu(order) -> float:
    if isinstance(order, BesselOrder):
        return order.nu
    nu = float(order)
    if abs(nu) > MAX_ORDER:
        raise DomainError(f"|order| exceeds the supported maximum {MAX_ORDER}")
    if (2 * nu) != round(2 * nu):
        raise DomainError(f"only integer and half-integer orders are supported, got {nu}")
    return nu


def _check_x(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("argument must be positive")
    return arr


# ---------------------------------------------------------------------------
# Debye polynomials and the uniform expansion
# ---------------------------------------------------------------------------

def _generate_debye_polys(kmax: int) -> list[list[Fraction]]:
    polys = [[Fraction(1)]]
    for _ in range(kmax):
        u = polys[-1]
        du = [i * c for i, c in enumerate(u)][1:] or [Fraction(0)]
        terms = []
        # t^2 (1 - t^2) u'/2
        a = [Fraction(0)] * (len(du) + 2)
        for i, c in enumerate(du):
            a[i + 2] += c / 2
        b = [Fraction(0)] * (len(du) + 4)
        for i, c in enumerate(du):
            b[i + 4] -= c / 2
        # (1/8) int_0^t (1 - 5 s^2) u ds
        c1 = [Fraction(0)] + [c / (8 * (i + 1)) for i, c in enumerate(u)]
        c2 = [Fraction(0)] * 3 + [-5 * c / (8 * (i + 3)) for i, c in enumerate(u)]
        terms = [a, b, c1, c2]
        out = [Fraction(0)] * max(len(t) for t in terms)
        for t in terms:
            for i, c in enumerate(t):
                out[i] += c
        polys.append(out)
    return polys


_DEBYE_KMAX = 12
#: u_k coefficients, ascending powers of t, floats (exact rationals rounded).
_U_COEF = [np.array([float(c) for c in p]) for p in _generate_debye_polys(_DEBYE_KMAX)]

#: Minimum order at which the truncated uniform expansion reaches ~1e-13.
#: Below it scipy's scaled routines stay within double range for any
#: argument this package can produce.
_DEBYE_MIN_ORDER = 25.0

# Scaled-value guard bands: outside them we switch to the expansion early
# enough that no precision has been lost to sub/supernormal floats.
_TINY = 1e-280
_HUGE = 1e280


def _debye_series(t: np.ndarray, nu: np.ndarray, sign: int) -> np.ndarray:
    s = np.ones_like(t)
    fac = np.ones_like(t)
    for k in range(1, len(_U_COEF)):
        fac = fac * (sign / nu)
        s = s + np.polyval(_U_COEF[k][::-1], t) * fac
    return s


def _log_debye(nu: np.ndarray, x: np.ndarray, kind: str) -> np.ndarray:
    z = x / nu
    r = np.sqrt(1.0 + z * z)
    eta = r + np.log(z / (1.0 + r))
    t = 1.0 / r
    if kind == "i":
        return (nu * eta - 0.5 * np.log(2.0 * np.pi * nu) - 0.5 * np.log(r)
                + np.log(_debye_series(t, nu, +1)))
    return (-nu * eta + 0.5 * np.log(np.pi / (2.0 * nu)) - 0.5 * np.log(r)
            + np.log(_debye_series(t, nu, -1)))


# ---------------------------------------------------------------------------
# Log-space evaluators (nu >= 0, broadcastable arrays)
# ---------------------------------------------------------------------------

def log_bessel_i(nu, x):
    """ln I_nu(x) for nu >= 0, elementwise over broadcast arrays."""
    nu_b, x_b = np.broadcast_arrays(np.asarray(nu, dtype=float), np.asarray(x, dtype=float))
    if np.any(nu_b < 0):
        raise DomainError("log_bessel_i requires nu >= 0")
    if np.any(~(x_b > 0)):
        raise DomainError("argument must be positive")
    v = special.ive(nu_b, x_b)
    safe = v > _TINY
    out = np.where(safe, np.log(np.where(safe, v, 1.0)) + x_b, -np.inf)
    if not np.all(safe):
        bad = ~safe
        if np.any(nu_b[bad] < _DEBYE_MIN_ORDER):
            raise RangeError("I_nu underflowed outside the uniform-expansion regime")
        out = np.asarray(out)
        out[bad] = _log_debye(nu_b[bad], x_b[bad], "i")
    return out if out.ndim else float(out)


def log_bessel_k(nu, x):
    """ln K_nu(x) for nu >= 0, elementwise over broadcast arrays."""
    nu_b, x_b = np.broadcast_arrays(np.asarray(nu, dtype=float), np.asarray(x, dtype=float))
    if np.any(nu_b < 0):
        raise DomainError("log_bessel_k requires nu >= 0")
    if np.any(~(x_b > 0)):
        raise DomainError("argument must be positive")
    v = special.kve(nu_b, x_b)
    safe = np.isfinite(v) & (v < _HUGE)
    out = np.where(safe, np.log(np.where(safe, v, 1.0)) - x_b, np.inf)
    if not np.all(safe):
        bad = ~safe
        if np.any(nu_b[bad] < _DEBYE_MIN_ORDER):
            raise RangeError("K_nu overflowed outside the uniform-expansion regime")
        out = np.asarray(out)
        out[bad] = _log_debye(nu_b[bad], x_b[bad], "k")
    return out if out.ndim else float(out)


def log_add(a, b):
    """ln(exp(a) + exp(b)), overflow-safe."""
    hi = np.maximum(a, b)
    lo = np.minimum(a, b)
    return hi + np.log1p(np.exp(lo - hi))


def log_bessel_i_prime(nu, x):
    """ln I'_nu(x) via I'_nu = (I_{nu-1} + I_{nu+1})/2; positive for x > 0."""
    nu_b = np.asarray(nu, dtype=float)
    lo = log_bessel_i(np.abs(nu_b - 1.0), x)
    hi = log_bessel_i(nu_b + 1.0, x)
    return log_add(lo, hi) - math.log(2.0)


def log_bessel_k_prime_mag(nu, x):
    """ln |K'_nu(x)| via K'_nu = -(K_{nu-1} + K_{nu+1})/2 (always negative)."""
    nu_b = np.asarray(nu, dtype=float)
    lo = log_bessel_k(np.abs(nu_b - 1.0), x)
    hi = log_bessel_k(nu_b + 1.0, x)
    return log_add(lo, hi) - math.log(2.0)


# ---------------------------------------------------------------------------
# Public plain/scaled evaluators (any supported order, sign honored)
# ---------------------------------------------------------------------------

def bessel_i(order, x, *, scaled: bool = False):
    """I_nu(x), or I_nu(x) * exp(-x) when scaled=True.

    Negative orders follow scipy's analytic continuation, which reproduces
    I_{-n} = I_n for integers and the cosh form for nu = -1/2.
    Raises RangeError if the unscaled value overflows; the scaled form is
    always representable.
    """
    nu = _as_nu(order)
    arr = _check_x(x)
    v = special.ive(nu, arr)
    if scaled:
        return v if np.ndim(x) else float(v)
    out = v * np.exp(arr)
    if np.any(~np.isfinite(out)):
        raise RangeError("I_nu overflowed; request the scaled value instead")
    return out if np.ndim(x) else float(out)


def bessel_k(order, x, *, scaled: bool = False):
    """K_nu(x), or K_nu(x) * exp(+x) when scaled=True. K_{-nu} = K_nu."""
    nu = abs(_as_nu(order))
    arr = _check_x(x)
    v = special.kve(nu, arr)
    if np.any(~np.isfinite(v)):
        raise RangeError("K_nu overflowed even in scaled form; use log_bessel_k")
    if scaled:
        return v if np.ndim(x) else float(v)
    out = v * np.exp(-arr)
    return out if np.ndim(x) else float(out)


def bessel_i_prime(order, x, *, scaled: bool = False):
    """I'_nu(x) = (I_{nu-1}(x) + I_{nu+1}(x)) / 2 (scaled: times exp(-x))."""
    nu = _as_nu(order)
    arr = _check_x(x)
    v = 0.5 * (special.ive(nu - 1.0, arr) + special.ive(nu + 1.0, arr))
    if scaled:
        return v if np.ndim(x) else float(v)
    out = v * np.exp(arr)
    if np.any(~np.isfinite(out)):
        raise RangeError("I'_nu overflowed; request the scaled value instead")
    return out if np.ndim(x) else float(out)


def bessel_k_prime(order, x, *, scaled: bool = False):
    """K'_nu(x) = -(K_{nu-1}(x) + K_{nu+1}(x)) / 2 (scaled: times exp(+x))."""
    nu = abs(_as_nu(order))
    arr = _check_x(x)
    v = -0.5 * (special.kve(nu - 1.0, arr) + special.kve(nu + 1.0, arr))
    if np.any(~np.isfinite(v)):
        raise RangeError("K'_nu overflowed even in scaled form")
    if scaled:
        return v if np.ndim(x) else float(v)
    out = v * np.exp(-arr)
    return out if np.ndim(x) else float(out)


# ---------------------------------------------------------------------------
# Debye helper functions (also used by the small-gap derivation pipeline)
# ---------------------------------------------------------------------------

def debye_eta(y):
    """eta(y) = sqrt(1+y^2) + ln(y / (1 + sqrt(1+y^2))), y > 0."""
    arr = _check_x(y)
    r = np.sqrt(1.0 + arr * arr)
    out = r + np.log(arr / (1.0 + r))
    return out if np.ndim(y) else float(out)


def debye_u(t):
    """First correction polynomial u(t) = (3 t - 5 t^3) / 24."""
    arr = np.asarray(t, dtype=float)
    out = (3.0 * arr - 5.0 * arr**3) / 24.0
    return out if np.ndim(t) else float(out)


def debye_t(alpha, y):
    """t_alpha(y) = 1 / sqrt(1 + alpha^2 y^2) in (0, 1]."""
    if alpha < 1:
        raise DomainError("alpha must be >= 1")
    arr = np.asarray(y, dtype=float)
    if np.any(arr < 0):
        raise DomainError("y must be nonnegative")
    out = 1.0 / np.sqrt(1.0 + (alpha * arr) ** 2)
    return out if np.ndim(y) else float(out)
