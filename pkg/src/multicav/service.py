"""HTTP front end exposing the resonator computations to multiple clients.

Every computation endpoint accepts the same ``JobConfig`` document the
CLI consumes and returns the corresponding result section as JSON.  Run
with ``multicav serve`` or ``uvicorn multicav.service:app``.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import __version__
from .errors import InvalidInputError, MulticavError
from .jobs import JobConfig, SweepConfig, run_job, run_sweep
from .presets import preset, preset_names

app = FastAPI(
    title="multicav",
    version=__version__,
    description="Transfer-matrix computations for multi-element 1D resonators.",
)


class HealthResponse(BaseModel):
    status: str
    version: str


class PresetListResponse(BaseModel):
    presets: list[str]


class SpectrumPayload(BaseModel):
    k: list[float]
    transmission: list[float]
    denominator: list[float]


class SpectrumResponse(BaseModel):
    meta: dict
    spectrum: SpectrumPayload


class ResonanceRow(BaseModel):
    k0: float
    transmission_peak: float
    kappa_curvature: float
    kappa_halfmax: float | None
    neighbor_spacing: float | None
    overlap_flag: str


class ResonancesPayload(BaseModel):
    items: list[ResonanceRow]
    analytic_criterion: dict | None


class ResonancesResponse(BaseModel):
    meta: dict
    resonances: ResonancesPayload


class FieldSegmentRow(BaseModel):
    gap_index: int
    c_plus: list[float]
    c_minus: list[float]
    mean_intensity: float


class FieldsAtResonance(BaseModel):
    k0: float
    segments: list[FieldSegmentRow]


class FieldsPayload(BaseModel):
    items: list[FieldsAtResonance]


class FieldsResponse(BaseModel):
    meta: dict
    fields: FieldsPayload


class CouplingsResponse(BaseModel):
    meta: dict
    couplings: dict


class SweepResponse(BaseModel):
    meta: dict
    sweep: dict


@app.exception_handler(MulticavError)
async def _multicav_error(request, exc: MulticavError):
    status = 400 if isinstance(exc, InvalidInputError) else 422
    return JSONResponse(status_code=status,
                        content={"error": type(exc).__name__, "detail": str(exc)})


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.get("/presets", response_model=PresetListResponse)
def list_presets() -> PresetListResponse:
    return PresetListResponse(presets=preset_names())


@app.get("/presets/{name}")
def get_preset(name: str) -> dict:
    try:
        cfg = preset(name)
    except InvalidInputError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from None
    return {"name": name, "kind": type(cfg).__name__, "config": cfg.model_dump(mode="json")}


def _run_section(cfg: JobConfig, section: str) -> dict:
    cfg = cfg.model_copy(update={"outputs": [section]})
    return run_job(cfg)


@app.post("/spectrum", response_model=SpectrumResponse)
def spectrum(cfg: JobConfig) -> dict:
    return _run_section(cfg, "spectrum")


@app.post("/resonances", response_model=ResonancesResponse)
def resonances(cfg: JobConfig) -> dict:
    return _run_section(cfg, "resonances")


@app.post("/fields", response_model=FieldsResponse)
def fields(cfg: JobConfig) -> dict:
    return _run_section(cfg, "fields")


@app.post("/couplings", response_model=CouplingsResponse)
def couplings(cfg: JobConfig) -> dict:
    return _run_section(cfg, "couplings")


@app.post("/sweep", response_model=SweepResponse)
def sweep(cfg: SweepConfig) -> dict:
    return run_sweep(cfg)
