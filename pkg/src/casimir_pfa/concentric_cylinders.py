"""Casimir and electrostatic interaction energies for two concentric,
perfectly conducting cylinders of radii a < b, alpha = b/a.

Exact Casimir energy (per the scattering mode sum, normalized to
e_hat = E a^2/L):

    e_hat = (1/4pi) * int_0^inf dbeta beta * sum_n ln[(1 - F_n^TM)(1 - F_n^TE)]

    F_n^TM = I_n(beta) K_n(alpha beta) / (I_n(alpha beta) K_n(beta))
    F_n^TE = I'_n(beta) K'_n(alpha beta) / (I'_n(alpha beta) K'_n(beta))

The angular index runs over all integers; by symmetry the n = 0 term enters
once and each |n| >= 1 twice. Both factors lie in (0, 1), so the integrand
is negative and the energy is attractive.
"""

from __future__ import annotations

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
from .numerics import BESSEL_SERIES_CEILING, integrate_semi_infinite, sum_until_converged
from .specfun import (
    log_bessel_i,
    log_bessel_i_prime,
    log_bessel_k,
    log_bessel_k_prime_mag,
)

__all__ = [
    "ConcentricCylinders",
    "NTLO_QUADRATIC_COEFF",
    "LARGE_ALPHA_CONSTANT",
    "casimir_cc_exact",
    "casimir_cc_pfa",
    "casimir_cc_ntlo",
    "casimir_cc_large_alpha",
    "electro_cc_exact",
    "electro_cc_pfa",
]

#: Quadratic coefficient of the small-gap expansion, 1/10 + 2/pi^2.
NTLO_QUADRATIC_COEFF = 0.1 + 2.0 / math.pi**2

#: Constant of the large-separation law e_hat = -C/(8 pi alpha^2 ln alpha);
#: equals twice int_0^inf u K_0(u)/I_0(u) du, quoted as 1.26.
LARGE_ALPHA_CONSTANT = 1.26

_PFA_SCALE = {
    PfaSurface.INNER: lambda alpha: 1.0,
    PfaSurface.OUTER: lambda alpha: alpha,
    PfaSurface.GEOMETRIC_MEAN: lambda alpha: math.sqrt(alpha),
}


@dataclass(frozen=True)
class ConcentricCylinders:
    """Radius ratio alpha = b/a > 1 of the outer to the inner cylinder."""

    alpha: float

    def __post_init__(self):
        if not (self.alpha > 1 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must satisfy alpha > 1, got {self.alpha}")

    @property
    def gap(self) -> float:
        return self.alpha - 1.0


def _log1m_exp(log_f: np.ndarray) -> np.ndarray:
    """ln(1 - exp(log_f)) for log_f < 0, safe down to log_f -> -inf."""
    # For very negative log_f, ln(1 - F) = -F to double precision and the
    # subtraction inside expm1 would underflow to exactly zero.
    small = log_f < -700.0
    out = np.where(small, -np.exp(np.maximum(log_f, -745.0)),
                   np.log(-np.expm1(np.minimum(log_f, -1e-320))))
    return out


def log_mode_factor_tm(n: int, alpha: float, beta) -> np.ndarray:
    """ln F_n^TM at radial frequencies beta (array-valued)."""
    b = np.asarray(beta, dtype=float)
    n = abs(int(n))
    return (log_bessel_i(n, b) - log_bessel_i(n, alpha * b)
            + log_bessel_k(n, alpha * b) - log_bessel_k(n, b))


def log_mode_factor_te(n: int, alpha: float, beta) -> np.ndarray:
    """ln F_n^TE at radial frequencies beta (array-valued)."""
    b = np.asarray(beta, dtype=float)
    n = abs(int(n))
    return (log_bessel_i_prime(n, b) - log_bessel_i_prime(n, alpha * b)
            + log_bessel_k_prime_mag(n, alpha * b) - log_bessel_k_prime_mag(n, b))


def _mode_energy(n: int, alpha: float, sector: ModeSector, rel_tol: float,
                 stats: dict) -> float:
    """int_0^inf dbeta beta ln[(1-F_n^TM)(1-F_n^TE)] restricted to sector."""

    def integrand(beta: np.ndarray) -> np.ndarray:
        total = np.zeros_like(beta)
        if sector in (ModeSector.TM, ModeSector.BOTH):
            total = total + _log1m_exp(log_mode_factor_tm(n, alpha, beta))
        if sector in (ModeSector.TE, ModeSector.BOTH):
            total = total + _log1m_exp(log_mode_factor_te(n, alpha, beta))
        return beta * total

    res = integrate_semi_infinite(integrand, rel_tol,
                                  initial_scale=max(1.0, 0.5 * n))
    stats["abs_error"] += res.abs_error
    stats["beta_cutoff"] = max(stats["beta_cutoff"], res.upper_limit)
    return res.value


def casimir_cc_exact(cfg: ConcentricCylinders, sector: ModeSector = ModeSector.BOTH,
                     rel_tol: float = DEFAULT_REL_TOL) -> EnergyValue:
    """Exact Casimir interaction energy e_hat = E a^2/L (negative)."""
    alpha = cfg.alpha
    stats = {"abs_error": 0.0, "beta_cutoff": 0.0}
    e0 = _mode_energy(0, alpha, sector, rel_tol, stats)
    tail, report = sum_until_converged(
        lambda n: 2.0 * _mode_energy(n, alpha, sector, rel_tol, stats),
        rel_tol, min_terms=2, start=1, max_terms=BESSEL_SERIES_CEILING)
    raw = (e0 + tail) / (4.0 * math.pi)
    abs_error = (stats["abs_error"] / (4.0 * math.pi)) + rel_tol * abs(raw)
    return EnergyValue(raw, abs_error,
                       Truncation(report.order_used, None, stats["beta_cutoff"]))


def casimir_cc_pfa(cfg: ConcentricCylinders,
                   surface: PfaSurface = PfaSurface.INNER) -> EnergyValue:
    """Proximity approximation e_hat = -pi^3/(360 (alpha-1)^3) * area scale."""
    x = cfg.gap
    value = -math.pi**3 / (360.0 * x**3) * _PFA_SCALE[surface](cfg.alpha)
    return EnergyValue(value, 0.0, CLOSED_FORM)


def casimir_cc_ntlo(cfg: ConcentricCylinders) -> EnergyValue:
    """Small-gap expansion through second order in alpha - 1."""
    x = cfg.gap
    value = (-math.pi**3 / (360.0 * x**3)
             * (1.0 + 0.5 * x - NTLO_QUADRATIC_COEFF * x**2))
    return EnergyValue(value, 0.0, CLOSED_FORM)


def casimir_cc_large_alpha(cfg: ConcentricCylinders) -> EnergyValue:
    """Large-separation law e_hat = -1.26 / (8 pi alpha^2 ln(alpha))."""
    alpha = cfg.alpha
    value = -LARGE_ALPHA_CONSTANT / (8.0 * math.pi * alpha**2 * math.log(alpha))
    return EnergyValue(value, 0.0, CLOSED_FORM)


def electro_cc_exact(cfg: ConcentricCylinders) -> EnergyValue:
    """Electrostatic energy u_hat = U/(eps0 V^2 L) = pi / ln(alpha)."""
    return EnergyValue(math.pi / math.log(cfg.alpha), 0.0, CLOSED_FORM)


def electro_cc_pfa(cfg: ConcentricCylinders,
                   surface: PfaSurface = PfaSurface.INNER) -> EnergyValue:
    """Proximity approximation u_hat = pi/(alpha-1) times the area scale."""
    value = math.pi / cfg.gap * _PFA_SCALE[surface](cfg.alpha)
    return EnergyValue(value, 0.0, CLOSED_FORM)
