"""Ratio-to-PFA curves from any geometry engine and least-squares fits of
the fixed model family, extracting the next-to-leading-order constant as
the linear coefficient.

Models (x is the gap parameter):

    linear      1 + b x
    quad        1 + b x + c x^2
    quadlog     1 + b x + c x^2 ln x
    cubiclog    1 + b x + c x^2 ln x + d x^3
    power       a x^b          (fitted in log-log coordinates)
    quartic     a / x^4
    affine      a + b x        (free intercept)

All fixed-intercept models subtract the constant 1 before solving. Fits are
unweighted least squares solved by orthogonal decomposition (SVD), never by
normal equations.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    DEFAULT_REL_TOL,
    AccuracyError,
    ConfigurationError,
    DomainError,
    EnergyValue,
    FitError,
    ModeSector,
    PfaSurface,
)
from . import concentric_cylinders as cc
from . import concentric_spheres as cs
from . import cylinder_plane as cp
from . import sphere_plane as sp

__all__ = ["FitModel", "RatioCurve", "FitResult", "PointResult", "fit",
           "evaluate_point", "sweep"]


class FitModel(enum.Enum):
    LINEAR = "linear"
    QUADRATIC = "quad"
    QUADLOG = "quadlog"
    CUBICLOG = "cubiclog"
    POWER_LAW = "power"
    FIXED_QUARTIC = "quartic"
    AFFINE = "affine"


_COEFF_NAMES = {
    FitModel.LINEAR: ("b",),
    FitModel.QUADRATIC: ("b", "c"),
    FitModel.QUADLOG: ("b", "c"),
    FitModel.CUBICLOG: ("b", "c", "d"),
    FitModel.POWER_LAW: ("a", "b"),
    FitModel.FIXED_QUARTIC: ("a",),
    FitModel.AFFINE: ("a", "b"),
}


@dataclass(frozen=True)
class RatioCurve:
    """Sampled (gap, exact/PFA) curve; x strictly increasing, y finite."""

    x: tuple[float, ...]
    y: tuple[float, ...]
    y_err: tuple[float, ...] | None = None
    geometry: str = ""
    sector: ModeSector | None = None

    def __post_init__(self):
        if len(self.x) != len(self.y):
            raise DomainError("x and y must have the same length")
        if self.y_err is not None and len(self.y_err) != len(self.x):
            raise DomainError("y_err must match the sample count")
        if len(self.x) == 0:
            raise DomainError("a curve needs at least one sample")
        xs = np.asarray(self.x)
        if np.any(np.diff(xs) <= 0):
            raise DomainError("x must be strictly increasing")
        if not np.all(np.isfinite(self.y)):
            raise DomainError("y must be finite")

    def window(self, x_min: float, x_max: float) -> "RatioCurve":
        keep = [i for i, v in enumerate(self.x) if x_min <= v <= x_max]
        if not keep:
            raise FitError(f"window [{x_min}, {x_max}] contains no samples")
        return RatioCurve(
            tuple(self.x[i] for i in keep),
            tuple(self.y[i] for i in keep),
            None if self.y_err is None else tuple(self.y_err[i] for i in keep),
            self.geometry, self.sector)


@dataclass(frozen=True)
class FitResult:
    """Model, coefficient vector (houses the NTLO constant as 'b' for the
    fixed-intercept models), residual RMS, and fit window."""

    model: FitModel
    coefficients: tuple[float, ...]
    residual_rms: float
    window: tuple[float, float]

    def __post_init__(self):
        if not (self.residual_rms >= 0):
            raise DomainError("residual_rms must be nonnegative")
        if not np.all(np.isfinite(self.coefficients)):
            raise DomainError("coefficients must be finite")

    @property
    def coefficient_names(self) -> tuple[str, ...]:
        return _COEFF_NAMES[self.model]

    def named_coefficients(self) -> dict[str, float]:
        return dict(zip(self.coefficient_names, self.coefficients))

    def predict(self, x) -> np.ndarray:
        xs = np.asarray(x, dtype=float)
        c = self.coefficients
        m = self.model
        if m is FitModel.LINEAR:
            return 1.0 + c[0] * xs
        if m is FitModel.QUADRATIC:
            return 1.0 + c[0] * xs + c[1] * xs**2
        if m is FitModel.QUADLOG:
            return 1.0 + c[0] * xs + c[1] * xs**2 * np.log(xs)
        if m is FitModel.CUBICLOG:
            return 1.0 + c[0] * xs + c[1] * xs**2 * np.log(xs) + c[2] * xs**3
        if m is FitModel.POWER_LAW:
            return c[0] * xs ** c[1]
        if m is FitModel.FIXED_QUARTIC:
            return c[0] / xs**4
        return c[0] + c[1] * xs


def _design(model: FitModel, xs: np.ndarray, ys: np.ndarray):
    """Return (columns, targets, column labels) of the linear problem."""
    if model is FitModel.LINEAR:
        return [xs], ys - 1.0, ("x",)
    if model is FitModel.QUADRATIC:
        return [xs, xs**2], ys - 1.0, ("x", "x^2")
    if model is FitModel.QUADLOG:
        return [xs, xs**2 * np.log(xs)], ys - 1.0, ("x", "x^2 ln x")
    if model is FitModel.CUBICLOG:
        return [xs, xs**2 * np.log(xs), xs**3], ys - 1.0, ("x", "x^2 ln x", "x^3")
    if model is FitModel.FIXED_QUARTIC:
        return [xs**-4.0], ys, ("x^-4",)
    if model is FitModel.AFFINE:
        return [np.ones_like(xs), xs], ys, ("1", "x")
    raise ConfigurationError(f"unsupported design for {model}")


def fit(curve: RatioCurve, model: FitModel,
        window: tuple[float, float] | None = None) -> FitResult:
    """Least-squares fit of the model over the window (default: full range).

    The power-law variant y = a x^b is solved in log-log coordinates and
    requires samples of a single sign. Raises FitError on rank deficiency
    (naming the collinear columns) or on too few samples.
    """
    if window is None:
        window = (float(curve.x[0]), float(curve.x[-1]))
    sub = curve.window(*window)
    xs = np.asarray(sub.x, dtype=float)
    ys = np.asarray(sub.y, dtype=float)

    ncoef = len(_COEFF_NAMES[model])
    if len(xs) < ncoef + 1:
        raise FitError(f"{model.value} needs at least {ncoef + 1} samples in the window, "
                       f"got {len(xs)}")

    if model is FitModel.POWER_LAW:
        signs = np.sign(ys)
        if np.any(signs == 0) or len(set(signs.tolist())) != 1:
            raise FitError("power-law fit requires samples of one nonzero sign")
        sgn = signs[0]
        cols = [np.ones_like(xs), np.log(xs)]
        target = np.log(np.abs(ys))
        labels = ("1", "ln x")
    else:
        cols, target, labels = _design(model, xs, ys)

    a = np.column_stack(cols)
    coef, _, rank, _ = np.linalg.lstsq(a, target, rcond=None)
    if rank < a.shape[1]:
        raise FitError(f"rank-deficient design matrix; collinear columns among {labels}")

    if model is FitModel.POWER_LAW:
        coefficients = (float(sgn * math.exp(coef[0])), float(coef[1]))
    else:
        coefficients = tuple(float(v) for v in coef)

    result = FitResult(model, coefficients, 0.0, window)
    resid = ys - result.predict(xs)
    return FitResult(model, coefficients, float(np.sqrt(np.mean(resid**2))), window)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointResult:
    """One grid point: exact energy, PFA reference, and their ratio."""

    gap: float
    exact: EnergyValue
    pfa: float
    ratio: float


def evaluate_point(geometry: str, x: float, *,
                   sector: ModeSector = ModeSector.BOTH,
                   pfa_surface: PfaSurface = PfaSurface.INNER,
                   rel_tol: float = DEFAULT_REL_TOL,
                   matrix_size: int | None = None) -> PointResult:
    """Exact and PFA evaluation at one gap value.

    x means alpha-1 for concentric geometries and d/a for the plane ones.
    For single-sector Casimir ratios of the concentric geometries the PFA
    reference is half the total, since the sectors degenerate in the
    proximity limit. The sphere-plane electrostatic ratio divides by the
    constant-offset reference (see sphere_plane); exact and pfa in the
    result stay unshifted.
    """
    if geometry == "cc":
        cfg = cc.ConcentricCylinders(1.0 + x)
        exact = cc.casimir_cc_exact(cfg, sector, rel_tol)
        pfa = cc.casimir_cc_pfa(cfg, pfa_surface).value
        if sector is not ModeSector.BOTH:
            pfa *= 0.5  # sectors contribute equally at leading order
        return PointResult(x, exact, pfa, exact.value / pfa)
    if geometry == "cs":
        cfg = cs.ConcentricSpheres(1.0 + x)
        exact = cs.casimir_cs_exact(cfg, sector, rel_tol)
        pfa = cs.casimir_cs_pfa(cfg, pfa_surface).value
        if sector is not ModeSector.BOTH:
            pfa *= 0.5
        return PointResult(x, exact, pfa, exact.value / pfa)
    if geometry == "cp":
        cfg = cp.CylinderPlane(x, matrix_size)
        exact = cp.casimir_cp_exact(cfg, sector, rel_tol)
        pfa = cp.casimir_cp_pfa(cfg, sector).value
        return PointResult(x, exact, pfa, exact.value / pfa)
    if geometry == "cc-electro":
        ccfg = cc.ConcentricCylinders(1.0 + x)
        exact = cc.electro_cc_exact(ccfg)
        pfa = cc.electro_cc_pfa(ccfg, pfa_surface).value
        return PointResult(x, exact, pfa, exact.value / pfa)
    if geometry == "cs-electro":
        scfg = cs.ConcentricSpheres(1.0 + x)
        exact = cs.electro_cs_exact(scfg)
        pfa = cs.electro_cs_pfa(scfg, pfa_surface).value
        return PointResult(x, exact, pfa, exact.value / pfa)
    if geometry == "cp-electro":
        pcfg = cp.CylinderPlane(x, None)
        exact = cp.electro_cp_exact(pcfg)
        pfa = cp.electro_cp_pfa(pcfg).value
        return PointResult(x, exact, pfa, exact.value / pfa)
    if geometry == "sp-electro":
        qcfg = sp.SpherePlane(x)
        exact = sp.electro_sp_exact(qcfg, rel_tol)
        pfa = sp.electro_sp_pfa(qcfg).value
        ratio = exact.value / (pfa + sp.SMALL_GAP_ENERGY_OFFSET)
        return PointResult(x, exact, pfa, ratio)
    raise ConfigurationError(f"unknown geometry {geometry!r}")


def sweep(geometry: str, grid: Sequence[float], *,
          sector: ModeSector = ModeSector.BOTH,
          pfa_surface: PfaSurface = PfaSurface.INNER,
          rel_tol: float = DEFAULT_REL_TOL,
          matrix_size: int | None = None) -> RatioCurve:
    """Evaluate exact and PFA energies over the grid, returning the ratio curve.

    The grid must be strictly increasing and valid for the geometry. A
    convergence failure at any grid point aborts the sweep naming the
    offending gap value.
    """
    pts = [float(v) for v in grid]
    if len(pts) == 0:
        raise DomainError("grid must not be empty")
    if any(b <= a for a, b in zip(pts, pts[1:])):
        raise DomainError("grid must be strictly increasing")

    xs, ys, errs = [], [], []
    for x in pts:
        try:
            point = evaluate_point(geometry, x, sector=sector,
                                   pfa_surface=pfa_surface, rel_tol=rel_tol,
                                   matrix_size=matrix_size)
        except AccuracyError as exc:
            raise AccuracyError(f"sweep failed to converge at gap {x}: {exc}",
                                best=exc.best) from exc
        xs.append(x)
        ys.append(point.ratio)
        rel = point.exact.abs_error / abs(point.exact.value) if point.exact.value else 0.0
        errs.append(abs(point.ratio) * max(rel, rel_tol))
    return RatioCurve(tuple(xs), tuple(ys), tuple(errs), geometry, sector)
