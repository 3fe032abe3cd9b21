"""Exact Casimir and electrostatic interaction energies for perfect-conductor
geometries, their proximity-force approximations and small/large-gap
asymptotics, and least-squares extraction of the ratio-to-PFA coefficients.

Library layout:

    core                  shared types, normalization, error taxonomy
    specfun               modified Bessel machinery (log-space, uniform expansion)
    numerics              quadrature, series summation, log-determinants
    concentric_cylinders  coaxial cylinders (exact, PFA, NTLO, large gap, electro)
    concentric_spheres    concentric shells (exact, PFA, small/large gap, electro)
    cylinder_plane        cylinder parallel to a plane (determinant mode sum)
    sphere_plane          sphere-plane electrostatics and ratio reference models
    ratiofit              ratio curves, model fits, parameter sweeps
    service               FastAPI wrapper (pydantic request/response models)
    cli                   thin client over the service
"""

__version__ = "0.1.0"

from .core import (
    DEFAULT_REL_TOL,
    AccuracyError,
    CasimirPfaError,
    ConfigurationError,
    DomainError,
    EnergyValue,
    FitError,
    GapKind,
    GapParameter,
    ModeSector,
    NumericalSingularityError,
    PfaSurface,
    RangeError,
    Truncation,
    normalize_energy,
)
from .concentric_cylinders import (
    ConcentricCylinders,
    casimir_cc_exact,
    casimir_cc_large_alpha,
    casimir_cc_ntlo,
    casimir_cc_pfa,
    electro_cc_exact,
    electro_cc_pfa,
)
from .concentric_spheres import (
    ConcentricSpheres,
    casimir_cs_exact,
    casimir_cs_large_alpha,
    casimir_cs_pfa,
    casimir_cs_small_gap,
    electro_cs_exact,
    electro_cs_pfa,
    mode_factor_te,
    mode_factor_tm,
)
from .cylinder_plane import (
    CylinderPlane,
    casimir_cp_asymptotic,
    casimir_cp_exact,
    casimir_cp_pfa,
    electro_cp_exact,
    electro_cp_pfa,
    electro_cp_ratio_ntlo,
    matrix_element,
)
from .sphere_plane import (
    SpherePlane,
    SpherePlaneRatioModel,
    casimir_sp_ratio_model,
    electro_sp_exact,
    electro_sp_pfa,
    electro_sp_sum_asymptotic,
)
from .ratiofit import FitModel, FitResult, RatioCurve, evaluate_point, fit, sweep

__all__ = [name for name in dir() if not name.startswith("_")]
