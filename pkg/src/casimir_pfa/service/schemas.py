"""Request/response models of the HTTP service.

Floats are serialized with full round-trip precision by pydantic, so a
client can reproduce results bit-for-bit. Non-finite truncation fields
(closed forms report an infinite integration cutoff) map to null.
"""

from __future__ import annotations

import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, model_validator

GeometryName = Literal[
    "cc", "cs", "cp", "cc-electro", "cs-electro", "cp-electro", "sp-electro",
]
SectorName = Literal["te", "tm", "both"]
SurfaceName = Literal["inner", "outer", "geomean"]
ModelName = Literal["linear", "quad", "quadlog", "cubiclog", "power", "quartic", "affine"]


class GridSpec(BaseModel):
    """min:max:count grid, linear or logarithmic spacing."""

    min: float = Field(gt=0)
    max: float = Field(gt=0)
    count: int = Field(ge=1)
    spacing: Literal["linear", "log"] = "linear"

    @model_validator(mode="after")
    def _ordered(self):
        if self.max < self.min:
            raise ValueError("grid max must be >= min")
        if self.count > 1 and self.max == self.min:
            raise ValueError("a multi-point grid needs max > min")
        return self

    def points(self) -> list[float]:
        if self.count == 1:
            return [self.min]
        if self.spacing == "log":
            return list(np.geomspace(self.min, self.max, self.count))
        return list(np.linspace(self.min, self.max, self.count))


class SweepSpec(BaseModel):
    """Which curve to compute; defaults follow the reference settings
    (matrix_size 101, rel_tol 1e-8)."""

    geometry: GeometryName
    sector: SectorName = "both"
    pfa_surface: SurfaceName = "inner"
    grid: GridSpec
    rel_tol: float = Field(default=1e-8, gt=0.0, le=1e-2)
    matrix_size: int | None = Field(default=101, ge=1)


class EnergyRequest(SweepSpec):
    pass


class EnergyRow(BaseModel):
    gap: float
    exact: float | None = None
    pfa: float | None = None
    ratio: float | None = None
    abs_error: float | None = None
    mode_cutoff: int | None = None
    matrix_size: int | None = None
    beta_cutoff: float | None = None
    status: str = "ok"


class EnergyResponse(BaseModel):
    geometry: GeometryName
    sector: SectorName
    pfa_surface: SurfaceName
    rows: list[EnergyRow]
    converged: bool


class FitSample(BaseModel):
    x: float
    y: float


class FitRequest(BaseModel):
    """Fit a model either to an in-request sample list or to a fresh sweep."""

    model: ModelName
    window: tuple[float, float] | None = None
    samples: list[FitSample] | None = None
    sweep: SweepSpec | None = None

    @model_validator(mode="after")
    def _one_source(self):
        if (self.samples is None) == (self.sweep is None):
            raise ValueError("provide exactly one of samples or sweep")
        if self.window is not None and self.window[0] > self.window[1]:
            raise ValueError("window must satisfy min <= max")
        return self


class FitResponse(BaseModel):
    model: ModelName
    window: tuple[float, float]
    coefficient_names: list[str]
    coefficients: list[float]
    residual_rms: float
    samples_used: int


class HealthResponse(BaseModel):
    status: str
    version: str


def finite_or_none(value: float | None) -> float | None:
    if value is None or not math.isfinite(value):
        return None
    return value
