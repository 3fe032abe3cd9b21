"""FastAPI service wrapping the computation package.

Endpoints:
    GET  /health     liveness and version
    POST /v1/energy  sweep exact/PFA energies over a grid (row-level errors
                     are reported in-band; converged=false if any row failed)
    POST /v1/fit     least-squares fit of a ratio curve, either supplied as
                     samples or computed from a sweep spec

Error contract: convergence failures inside /v1/fit return HTTP 422 with
detail.kind == "convergence"; fit failures (rank deficiency, too few
samples) return HTTP 422 with detail.kind == "fit".
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..core import AccuracyError, CasimirPfaError, DomainError, ModeSector, PfaSurface
from ..ratiofit import FitModel, RatioCurve, evaluate_point, fit, sweep
from .schemas import (
    EnergyRequest,
    EnergyResponse,
    EnergyRow,
    FitRequest,
    FitResponse,
    HealthResponse,
    finite_or_none,
)

_SECTORS = {s.value: s for s in ModeSector}
_SURFACES = {s.value: s for s in PfaSurface}
_MODELS = {m.value: m for m in FitModel}


def _energy_rows(req: EnergyRequest) -> tuple[list[EnergyRow], bool]:
    rows: list[EnergyRow] = []
    converged = True
    for gap in req.grid.points():
        try:
            point = evaluate_point(
                req.geometry, gap,
                sector=_SECTORS[req.sector],
                pfa_surface=_SURFACES[req.pfa_surface],
                rel_tol=req.rel_tol,
                matrix_size=req.matrix_size,
            )
        except AccuracyError as exc:
            converged = False
            rows.append(EnergyRow(gap=gap, status=f"failed: {exc}"))
            continue
        except DomainError as exc:
            raise HTTPException(status_code=422,
                                detail={"kind": "domain", "message": str(exc)})
        trunc = point.exact.truncation
        rows.append(EnergyRow(
            gap=gap,
            exact=point.exact.value,
            pfa=point.pfa,
            ratio=point.ratio,
            abs_error=point.exact.abs_error,
            mode_cutoff=trunc.mode_cutoff,
            matrix_size=trunc.matrix_size,
            beta_cutoff=finite_or_none(trunc.beta_cutoff),
            status="ok",
        ))
    return rows, converged


def create_app() -> FastAPI:
    app = FastAPI(
        title="casimir-pfa",
        version=__version__,
        description="Exact and proximity-approximated interaction energies "
                    "for conductor geometries, with ratio-curve fitting.",
    )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/v1/energy", response_model=EnergyResponse)
    def energy(req: EnergyRequest) -> EnergyResponse:
        rows, converged = _energy_rows(req)
        return EnergyResponse(
            geometry=req.geometry, sector=req.sector,
            pfa_surface=req.pfa_surface, rows=rows, converged=converged,
        )

    @app.post("/v1/fit", response_model=FitResponse)
    def fit_endpoint(req: FitRequest) -> FitResponse:
        try:
            if req.samples is not None:
                pairs = sorted((s.x, s.y) for s in req.samples)
                curve = RatioCurve(tuple(p[0] for p in pairs),
                                   tuple(p[1] for p in pairs))
            else:
                spec = req.sweep
                curve = sweep(
                    spec.geometry, spec.grid.points(),
                    sector=_SECTORS[spec.sector],
                    pfa_surface=_SURFACES[spec.pfa_surface],
                    rel_tol=spec.rel_tol,
                    matrix_size=spec.matrix_size,
                )
            result = fit(curve, _MODELS[req.model], req.window)
        except AccuracyError as exc:
            raise HTTPException(status_code=422,
                                detail={"kind": "convergence", "message": str(exc)})
        except CasimirPfaError as exc:
            raise HTTPException(status_code=422,
                                detail={"kind": "fit", "message": str(exc)})
        window = result.window
        n_used = len(curve.window(*window).x)
        return FitResponse(
            model=req.model,
            window=window,
            coefficient_names=list(result.coefficient_names),
            coefficients=list(result.coefficients),
            residual_rms=result.residual_rms,
            samples_used=n_used,
        )

    return app


app = create_app()
