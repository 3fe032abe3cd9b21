"""Sphere-plane electrostatics (bispherical series), its small-gap
asymptotics, and quoted Casimir ratio-to-PFA reference models.

With a the sphere radius, d the minimum gap, and cosh(beta) = 1 + d/a, the
exact electrostatic energy (u_hat = U/(eps0 V^2 a)) is the image-charge
series

    u_hat = 2 pi sinh(beta) sum_{n>=1} 1/sinh(n beta),

while the proximity approximation integrates the parallel-plate energy over
the facing hemisphere: u_hat_PFA = -pi ln(2 d/a), meaningful for d/a < 1/2.

Small-gap structure: u_hat = u_hat_PFA + C + (d/3a) u_hat_PFA + O(...) with
the additive constant C = 2 pi (euler_gamma + ln 2) that the proximity
approximation cannot produce (constants in the energy exert no force).
Ratio comparisons therefore use the offset reference u_hat_PFA + C; see
electro_sp_ratio_small_gap.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CLOSED_FORM,
    DEFAULT_REL_TOL,
    DomainError,
    EnergyValue,
    Truncation,
)
from .numerics import SCALAR_SERIES_CEILING, sum_until_converged

__all__ = [
    "SpherePlane",
    "SpherePlaneRatioModel",
    "SMALL_GAP_ENERGY_OFFSET",
    "electro_sp_exact",
    "electro_sp_sum_asymptotic",
    "electro_sp_pfa",
    "electro_sp_ratio_small_gap",
    "casimir_sp_ratio_model",
]

#: Additive constant of the small-gap expansion of the exact energy,
#: 2 pi (euler_gamma + ln 2); absent from the proximity approximation.
SMALL_GAP_ENERGY_OFFSET = 2.0 * math.pi * (np.euler_gamma + math.log(2.0))


@dataclass(frozen=True)
class SpherePlane:
    """Gap over radius d/a > 0; beta is the bispherical parameter."""

    d_over_a: float

    def __post_init__(self):
        if not (self.d_over_a > 0 and math.isfinite(self.d_over_a)):
            raise DomainError(f"d_over_a must be positive, got {self.d_over_a}")

    @property
    def beta(self) -> float:
        """arccosh(1 + d/a), computed cancellation-free for small gaps."""
        x = self.d_over_a
        return math.log1p(x + math.sqrt(x * (x + 2.0)))


class SpherePlaneRatioModel(enum.Enum):
    """Quoted linear ratio-to-PFA reference models for the Casimir energy.

    These reproduce published fits/expansions for this geometry; no exact
    Casimir evaluator backs them here, so they carry reference status only.
    """

    EM = "em"
    SCALAR_DIRICHLET = "dirichlet"
    SCALAR_NEUMANN = "neumann"


_RATIO_SLOPES = {
    SpherePlaneRatioModel.EM: -1.4,
    SpherePlaneRatioModel.SCALAR_DIRICHLET: 1.0 / 3.0,
    SpherePlaneRatioModel.SCALAR_NEUMANN: 1.0 / 3.0 - 10.0 / math.pi**2,
}


def electro_sp_exact(cfg: SpherePlane, rel_tol: float = DEFAULT_REL_TOL) -> EnergyValue:
    """u_hat = 2 pi sinh(beta) sum_{n>=1} 1/sinh(n beta) > 0."""
    beta = cfg.beta
    prefactor = 2.0 * math.pi * math.sinh(beta)
    total, report = sum_until_converged(
        lambda n: 1.0 / math.sinh(n * beta), rel_tol,
        min_terms=2, start=1, max_terms=SCALAR_SERIES_CEILING)
    value = prefactor * total
    return EnergyValue(value, rel_tol * abs(value),
                       Truncation(report.order_used, None, beta * report.order_used))


def electro_sp_sum_asymptotic(beta: float) -> float:
    """Small-beta asymptotics of S = sum_{n>=1} 1/sinh(n beta).

    Comparing the sum with its integral leaves the Euler constant:
    S = gamma/beta + (1/beta) ln(coth(beta/2)) + O(beta), using
    int_1^inf dn/sinh(n beta) = (1/beta) ln(coth(beta/2)).
    """
    if not beta > 0:
        raise DomainError("beta must be positive")
    return (np.euler_gamma + math.log(1.0 / math.tanh(beta / 2.0))) / beta


def electro_sp_pfa(cfg: SpherePlane) -> EnergyValue:
    """Proximity approximation u_hat = -pi ln(2 d/a), requires d/a < 1/2."""
    x = cfg.d_over_a
    if x >= 0.5:
        raise DomainError("the proximity approximation needs d/a < 1/2")
    return EnergyValue(-math.pi * math.log(2.0 * x), 0.0, CLOSED_FORM)


def electro_sp_ratio_small_gap(cfg: SpherePlane,
                               rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Ratio of the exact energy to the offset proximity reference
    u_hat_PFA + SMALL_GAP_ENERGY_OFFSET; tends to 1 + (d/3a) + O(x/ln x)."""
    exact = electro_sp_exact(cfg, rel_tol).value
    pfa = electro_sp_pfa(cfg).value
    return exact / (pfa + SMALL_GAP_ENERGY_OFFSET)


def casimir_sp_ratio_model(cfg: SpherePlane, model: SpherePlaneRatioModel) -> float:
    """Linear reference model for exact/PFA of the Casimir energy."""
    return 1.0 + _RATIO_SLOPES[model] * cfg.d_over_a
