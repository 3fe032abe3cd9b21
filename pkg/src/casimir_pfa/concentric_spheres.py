"""Casimir and electrostatic interaction energies for two concentric,
perfectly conducting spherical shells of radii a < b, alpha = b/a.

Exact Casimir energy (normalized to e_hat = E a), with nu = l + 1/2:

    e_hat = (1/pi) * sum_{l>=1} nu * int_0^inf dy ln[(1 - F_nu^TE)(1 - F_nu^TM)]

    F_nu^TE = I_nu(y) K_nu(alpha y) / (I_nu(alpha y) K_nu(y))
    F_nu^TM = sigma_I(y) sigma_K(alpha y) / (sigma_I(alpha y) sigma_K(y))

    sigma_I(z) = I_nu(z) + 2 z I'_nu(z)    (positive)
    sigma_K(z) = K_nu(z) + 2 z K'_nu(z)    (negative for nu >= 3/2)

The small-gap module also exposes the uniform-expansion derivation chain
(delta-eta, the closed-form sum over l of nu^2 exp(-2 nu k delta_eta), the
k-sum and final y-integral) as an auditable pipeline, kept independent of
the exact evaluator so the two can cross-validate.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CLOSED_FORM,
    DEFAULT_REL_TOL,
    DomainError,
    EnergyValue,
    ModeSector,
    PfaSurface,
    Truncation,
)
from .numerics import (
    BESSEL_SERIES_CEILING,
    integrate_semi_infinite,
    sum_until_converged,
)
from .specfun import debye_eta, log_add, log_bessel_i, log_bessel_k

__all__ = [
    "ConcentricSpheres",
    "mode_factor_te",
    "mode_factor_tm",
    "casimir_cs_exact",
    "casimir_cs_small_gap",
    "casimir_cs_pfa",
    "casimir_cs_large_alpha",
    "large_alpha_constant",
    "electro_cs_exact",
    "electro_cs_pfa",
    "delta_eta",
    "delta_eta_quadratic",
    "mode_sum_over_l",
    "mode_sum_over_l_leading",
    "small_gap_energy_pipeline",
]

_PFA_SCALE = {
    PfaSurface.INNER: lambda alpha: 1.0,
    PfaSurface.OUTER: lambda alpha: alpha**2,
    PfaSurface.GEOMETRIC_MEAN: lambda alpha: alpha,
}


@dataclass(frozen=True)
class ConcentricSpheres:
    """Radius ratio alpha = b/a > 1 of the outer to the inner shell."""

    alpha: float

    def __post_init__(self):
        if not (self.alpha > 1 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must satisfy alpha > 1, got {self.alpha}")

    @property
    def gap(self) -> float:
        return self.alpha - 1.0


def _log1m_exp(log_f: np.ndarray) -> np.ndarray:
    small = log_f < -700.0
    return np.where(small, -np.exp(np.maximum(log_f, -745.0)),
                    np.log(-np.expm1(np.minimum(log_f, -1e-320))))


def _log_sigma_i(nu: float, z: np.ndarray) -> np.ndarray:
    """ln(I_nu(z) + z (I_{nu-1}(z) + I_{nu+1}(z))); every term positive."""
    lz = np.log(z)
    deriv = log_add(lz + log_bessel_i(nu - 1.0, z), lz + log_bessel_i(nu + 1.0, z))
    return log_add(log_bessel_i(nu, z), deriv)


def _log_sigma_k(nu: float, z: np.ndarray) -> np.ndarray:
    """ln |K_nu(z) - z (K_{nu-1}(z) + K_{nu+1}(z))|.

    The derivative part dominates for every nu >= 3/2 (it is at least
    2 sqrt(nu^2 + z^2) times K_nu / 2), so sigma_K is strictly negative and
    the cancellation in the subtraction is bounded.
    """
    lz = np.log(z)
    big = log_add(lz + log_bessel_k(nu - 1.0, z), lz + log_bessel_k(nu + 1.0, z))
    return big + np.log1p(-np.exp(log_bessel_k(nu, z) - big))


def _check_mode(l: int):
    if l < 1:
        raise DomainError(f"angular index l must be >= 1, got {l}")
    if l + 0.5 > BESSEL_SERIES_CEILING:
        raise DomainError(f"angular index {l} exceeds the mode ceiling")


def log_mode_factor_te(l: int, alpha: float, y) -> np.ndarray:
    _check_mode(l)
    nu = l + 0.5
    z = np.asarray(y, dtype=float)
    return (log_bessel_i(nu, z) - log_bessel_i(nu, alpha * z)
            + log_bessel_k(nu, alpha * z) - log_bessel_k(nu, z))


def log_mode_factor_tm(l: int, alpha: float, y) -> np.ndarray:
    _check_mode(l)
    nu = l + 0.5
    z = np.asarray(y, dtype=float)
    return (_log_sigma_i(nu, z) - _log_sigma_i(nu, alpha * z)
            + _log_sigma_k(nu, alpha * z) - _log_sigma_k(nu, z))


def mode_factor_te(l: int, alpha: float, y):
    """F_nu^TE in (0, 1) for l >= 1, alpha > 1, y > 0."""
    if not alpha > 1:
        raise DomainError("alpha must be > 1")
    out = np.exp(log_mode_factor_te(l, alpha, y))
    return out if np.ndim(y) else float(out)


def mode_factor_tm(l: int, alpha: float, y):
    """F_nu^TM in (0, 1) for l >= 1, alpha > 1, y > 0."""
    if not alpha > 1:
        raise DomainError("alpha must be > 1")
    out = np.exp(log_mode_factor_tm(l, alpha, y))
    return out if np.ndim(y) else float(out)


def _mode_energy(l: int, alpha: float, sector: ModeSector, rel_tol: float,
                 stats: dict) -> float:
    nu = l + 0.5

    def integrand(y: np.ndarray) -> np.ndarray:
        total = np.zeros_like(y)
        if sector in (ModeSector.TE, ModeSector.BOTH):
            total = total + _log1m_exp(log_mode_factor_te(l, alpha, y))
        if sector in (ModeSector.TM, ModeSector.BOTH):
            total = total + _log1m_exp(log_mode_factor_tm(l, alpha, y))
        return total

    res = integrate_semi_infinite(integrand, rel_tol,
                                  initial_scale=max(1.0, 0.3 * nu))
    stats["abs_error"] += nu * res.abs_error
    stats["beta_cutoff"] = max(stats["beta_cutoff"], res.upper_limit)
    return nu * res.value


def casimir_cs_exact(cfg: ConcentricSpheres, sector: ModeSector = ModeSector.BOTH,
                     rel_tol: float = DEFAULT_REL_TOL) -> EnergyValue:
    """Exact Casimir interaction energy e_hat = E a (negative)."""
    alpha = cfg.alpha
    stats = {"abs_error": 0.0, "beta_cutoff": 0.0}
    total, report = sum_until_converged(
        lambda l: _mode_energy(l, alpha, sector, rel_tol, stats),
        rel_tol, min_terms=3, start=1, max_terms=BESSEL_SERIES_CEILING)
    raw = total / math.pi
    abs_error = stats["abs_error"] / math.pi + rel_tol * abs(raw)
    return EnergyValue(raw, abs_error,
                       Truncation(report.order_used, None, stats["beta_cutoff"]))


def casimir_cs_small_gap(cfg: ConcentricSpheres) -> EnergyValue:
    """Leading and next-to-leading small-gap law, PFA * (1 + (alpha-1))."""
    x = cfg.gap
    value = -math.pi**3 / (180.0 * x**3) * (1.0 + x)
    return EnergyValue(value, 0.0, CLOSED_FORM)


def casimir_cs_pfa(cfg: ConcentricSpheres,
                   surface: PfaSurface = PfaSurface.INNER) -> EnergyValue:
    """Proximity approximation e_hat = -pi^3/(180 (alpha-1)^3) * area scale."""
    x = cfg.gap
    value = -math.pi**3 / (180.0 * x**3) * _PFA_SCALE[surface](cfg.alpha)
    return EnergyValue(value, 0.0, CLOSED_FORM)


@functools.lru_cache(maxsize=8)
def large_alpha_constant(sector: ModeSector, rel_tol: float = 1e-10) -> float:
    """Constant C_sector of the widely separated limit e_hat = -C/alpha^4.

    Both constants come from the l = 1 (nu = 3/2) channel after expanding
    the mode factor to first order in the small reflection at the inner
    shell:

        C_TE = (1/pi^2) int_0^inf x^3 K_{3/2}(x) / I_{3/2}(x) dx
        C_TM = -(2/pi^2) int_0^inf x^3 sigma_K(x) / sigma_I(x) dx
    """
    nu = 1.5

    def te_integrand(x: np.ndarray) -> np.ndarray:
        return x**3 * np.exp(log_bessel_k(nu, x) - log_bessel_i(nu, x))

    def tm_integrand(x: np.ndarray) -> np.ndarray:
        # |sigma_K|/sigma_I; the sign of sigma_K and the overall minus in
        # C_TM cancel, leaving a positive integrand.
        return x**3 * np.exp(_log_sigma_k(nu, x) - _log_sigma_i(nu, x))

    if sector is ModeSector.TE:
        res = integrate_semi_infinite(te_integrand, rel_tol)
        return res.value / math.pi**2
    if sector is ModeSector.TM:
        res = integrate_semi_infinite(tm_integrand, rel_tol)
        return 2.0 * res.value / math.pi**2
    return (large_alpha_constant(ModeSector.TE, rel_tol)
            + large_alpha_constant(ModeSector.TM, rel_tol))


def casimir_cs_large_alpha(cfg: ConcentricSpheres,
                           sector: ModeSector = ModeSector.BOTH) -> EnergyValue:
    """Widely separated shells: e_hat = -C_sector / alpha^4."""
    value = -large_alpha_constant(sector) / cfg.alpha**4
    return EnergyValue(value, 0.0, CLOSED_FORM)


def electro_cs_exact(cfg: ConcentricSpheres) -> EnergyValue:
    """Electrostatic energy u_hat = U/(eps0 V^2 a) = 2 pi alpha/(alpha-1)."""
    return EnergyValue(2.0 * math.pi * cfg.alpha / cfg.gap, 0.0, CLOSED_FORM)


def electro_cs_pfa(cfg: ConcentricSpheres,
                   surface: PfaSurface = PfaSurface.INNER) -> EnergyValue:
    """Proximity approximation u_hat = 2 pi/(alpha-1) times the area scale."""
    value = 2.0 * math.pi / cfg.gap * _PFA_SCALE[surface](cfg.alpha)
    return EnergyValue(value, 0.0, CLOSED_FORM)


# ---------------------------------------------------------------------------
# Small-gap derivation pipeline (uniform expansion, kept separate from the
# exact evaluator so the closed form above can be audited independently)
# ---------------------------------------------------------------------------

def delta_eta(alpha: float, y) -> np.ndarray:
    """Exact eta(alpha y) - eta(y); controls the mode-factor decay e^{-2 nu k d}."""
    if not alpha > 1:
        raise DomainError("alpha must be > 1")
    arr = np.asarray(y, dtype=float)
    out = debye_eta(alpha * arr) - debye_eta(arr)
    return out if np.ndim(y) else float(out)


def delta_eta_quadratic(alpha: float, y) -> np.ndarray:
    """Two-term small-gap approximation
    (alpha-1) sqrt(1+y^2) - (alpha-1)^2 / (2 sqrt(1+y^2))."""
    if not alpha > 1:
        raise DomainError("alpha must be > 1")
    x = alpha - 1.0
    arr = np.asarray(y, dtype=float)
    r = np.sqrt(1.0 + arr * arr)
    out = x * r - 0.5 * x**2 / r
    return out if np.ndim(y) else float(out)


def mode_sum_over_l(k: int, deta) -> np.ndarray:
    """Closed form of sum_{l>=1} nu^2 q^nu with nu = l + 1/2, q = e^{-2 k deta}.

    Uses sum l^2 q^l = q(1+q)/(1-q)^3 and friends:
    sqrt(q) * [q(1+q)/(1-q)^3 + q/(1-q)^2 + q/(4(1-q))].
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    d = np.asarray(deta, dtype=float)
    if np.any(~(d > 0)):
        raise DomainError("delta-eta must be positive")
    q = np.exp(-2.0 * k * d)
    omq = -np.expm1(-2.0 * k * d)  # 1 - q, no cancellation
    out = np.sqrt(q) * (q * (1.0 + q) / omq**3 + q / omq**2 + 0.25 * q / omq)
    return out if np.ndim(deta) else float(out)


def mode_sum_over_l_leading(k: int, deta) -> np.ndarray:
    """Leading small-gap behavior 1/(4 k^3 deta^3) of mode_sum_over_l."""
    if k < 1:
        raise DomainError("k must be >= 1")
    d = np.asarray(deta, dtype=float)
    out = 1.0 / (4.0 * k**3 * d**3)
    return out if np.ndim(deta) else float(out)


def small_gap_energy_pipeline(alpha: float, rel_tol: float = 1e-9) -> float:
    """Assemble the uniform-expansion energy
    -(2/pi) int_0^inf dy sum_{k>=1} (1/k) sum_{l>=1} nu^2 e^{-2 nu k delta_eta(y)}.

    As alpha -> 1 this tends to the closed form
    -pi^3/(180 (alpha-1)^3) (1 + (alpha-1)), which is what
    casimir_cs_small_gap returns.
    """
    if not alpha > 1:
        raise DomainError("alpha must be > 1")

    def integrand(y: np.ndarray) -> np.ndarray:
        d = delta_eta(alpha, y)
        total = np.zeros_like(d)
        k = 1
        while True:
            term = mode_sum_over_l(k, d) / k
            total += term
            if np.max(term) <= rel_tol * np.max(total) or k > 10_000:
                break
            k += 1
        return total

    res = integrate_semi_infinite(integrand, rel_tol)
    return -2.0 / math.pi * res.value
