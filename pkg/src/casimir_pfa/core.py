"""Shared domain types, normalization conventions, and the error taxonomy.

All energies are reported dimensionless in natural units (hbar = c = 1),
with the electrostatic prefactor eps0*V^2 divided out:

    concentric cylinders   e_hat = E * a^2 / L
    concentric spheres     e_hat = E * a
    cylinder-plane         e_hat = E * a^2 / L
    electrostatic (cyl.)   u_hat = U / (eps0 V^2 L)
    electrostatic (sph.)   u_hat = U / (eps0 V^2 a)

Casimir interaction energies are strictly negative (attraction);
electrostatic interaction energies are strictly positive.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "DEFAULT_REL_TOL",
    "ModeSector",
    "PfaSurface",
    "GapKind",
    "GapParameter",
    "Truncation",
    "CLOSED_FORM",
    "EnergyValue",
    "CasimirPfaError",
    "ConfigurationError",
    "DomainError",
    "RangeError",
    "AccuracyError",
    "NumericalSingularityError",
    "FitError",
    "normalize_energy",
    "GEOMETRY_TAGS",
]

#: Default relative tolerance for every converged quantity.
DEFAULT_REL_TOL = 1e-8


class CasimirPfaError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(CasimirPfaError):
    """Unknown geometry tag, invalid enum value, or inconsistent settings."""


class DomainError(CasimirPfaError, ValueError):
    """Numeric input outside the mathematical domain of an operation."""


class RangeError(CasimirPfaError, OverflowError):
    """A value is not representable in the requested (unscaled) form."""


class AccuracyError(CasimirPfaError):
    """Requested tolerance could not be met; carries the best estimate."""

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


class NumericalSingularityError(CasimirPfaError):
    """A matrix factorization hit a zero or negative pivot."""


class FitError(CasimirPfaError):
    """Least-squares fit failed (rank deficiency, insufficient data)."""


class ModeSector(enum.Enum):
    """Field sector: TE (Neumann boundary condition), TM (Dirichlet), or both.

    Every geometry exposing the decomposition satisfies
    energy(BOTH) = energy(TE) + energy(TM).
    """

    TE = "te"
    TM = "tm"
    BOTH = "both"


class PfaSurface(enum.Enum):
    """Area convention for the proximity force approximation.

    The geometric-mean energy equals sqrt(inner * outer) in every geometry
    where both are defined, since all choices rescale one formula.
    """

    INNER = "inner"
    OUTER = "outer"
    GEOMETRIC_MEAN = "geomean"


class GapKind(enum.Enum):
    """Which dimensionless gap parameter a geometry uses."""

    ALPHA_MINUS_ONE = "alpha_minus_one"  # concentric geometries, alpha = b/a
    D_OVER_A = "d_over_a"                # plane geometries, d = minimum distance


@dataclass(frozen=True)
class GapParameter:
    """A positive dimensionless gap (alpha - 1 or d/a)."""

    kind: GapKind
    value: float

    def __post_init__(self):
        if not (self.value > 0 and math.isfinite(self.value)):
            raise DomainError(f"gap parameter must be positive and finite, got {self.value}")

    @property
    def alpha(self) -> float:
        if self.kind is not GapKind.ALPHA_MINUS_ONE:
            raise ConfigurationError("alpha is only defined for concentric gap parameters")
        return 1.0 + self.value


@dataclass(frozen=True)
class Truncation:
    """Cutoffs actually used to produce a converged value.

    mode_cutoff: highest angular index retained (0 for closed forms,
                 number of series terms for scalar sums).
    matrix_size: retained non-negative multipole orders per parity block
                 (cylinder-plane only, None elsewhere).
    beta_cutoff: upper end of the radial-frequency integration, inf for
                 closed forms.
    """

    mode_cutoff: int
    matrix_size: int | None
    beta_cutoff: float

    def __post_init__(self):
        if self.mode_cutoff < 0:
            raise DomainError("mode_cutoff must be nonnegative")
        if not self.beta_cutoff > 0:
            raise DomainError("beta_cutoff must be positive")


#: Truncation record attached to closed-form (non-iterative) results.
CLOSED_FORM = Truncation(mode_cutoff=0, matrix_size=None, beta_cutoff=math.inf)


@dataclass(frozen=True)
class EnergyValue:
    """A dimensionless interaction energy with an error estimate."""

    value: float
    abs_error: float
    truncation: Truncation

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainError(f"energy value must be finite, got {self.value}")
        if not (self.abs_error >= 0):
            raise DomainError("abs_error must be nonnegative")


#: Casimir tags normalize with radius^2/length (cylindrical) or radius
#: (spherical); electrostatic tags divide out eps0 V^2 and one length.
GEOMETRY_TAGS = (
    "cc", "cs", "cp",
    "cc-electro", "cs-electro", "cp-electro", "sp-electro",
)


def normalize_energy(raw: float, geometry: str, *, radius: float = 1.0,
                     length: float = 1.0) -> float:
    """Strip scale factors from a raw energy, returning the dimensionless form.

    `raw` is the energy in natural units with the given cylinder/sphere
    radius `a = radius` and (for cylindrical geometries) length `length`.
    With the default unit scales this is the identity map.
    """
    if radius <= 0 or length <= 0:
        raise DomainError("radius and length must be positive")
    if geometry in ("cc", "cp"):
        return raw * radius**2 / length
    if geometry == "cs":
        return raw * radius
    if geometry in ("cc-electro", "cp-electro"):
        return raw / length
    if geometry in ("cs-electro", "sp-electro"):
        return raw / radius
    raise ConfigurationError(f"unknown geometry tag {geometry!r}; expected one of {GEOMETRY_TAGS}")
