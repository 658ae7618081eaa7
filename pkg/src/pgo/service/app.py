"""FastAPI service wrapping the core package.

Each command endpoint accepts the flat run configuration and returns the
rendered document(s); clients (the CLI included) write them to disk verbatim,
so determinism is owned entirely by the table layer.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..config import RunConfig
from ..errors import ComputationError, ConfigError
from ..tables import build_documents, build_validate_report
from .schemas import (
    ConfigPayload,
    ErrorDetail,
    FileDocument,
    HealthResponse,
    TableResponse,
    ValidateResponse,
)

app = FastAPI(
    title="pgo service",
    version=__version__,
    description="Pseudo-Gaussian oscillator spectra, eigenfunctions and "
    "barrier transmission as table documents.",
)


@app.exception_handler(ConfigError)
async def _config_error(request: Request, exc: ConfigError):
    return JSONResponse(
        status_code=400,
        content={"error": ErrorDetail(type=type(exc).__name__, message=str(exc)).model_dump()},
    )


@app.exception_handler(ComputationError)
async def _computation_error(request: Request, exc: ComputationError):
    return JSONResponse(
        status_code=409,
        content={"error": ErrorDetail(type=type(exc).__name__, message=str(exc)).model_dump()},
    )


@app.get("/v1/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


def _run(command: str, payload: ConfigPayload) -> TableResponse:
    cfg = RunConfig(**payload.to_kwargs())
    docs, hard_fail = build_documents(command, cfg)
    return TableResponse(
        command=command,
        ok=not hard_fail,
        files=[
            FileDocument(filename=d.filename, media_type=d.media_type, content=d.content)
            for d in docs
        ],
    )


@app.post("/v1/potential", response_model=TableResponse)
def potential(payload: ConfigPayload) -> TableResponse:
    return _run("potential", payload)


@app.post("/v1/spectrum", response_model=TableResponse)
def spectrum(payload: ConfigPayload) -> TableResponse:
    return _run("spectrum", payload)


@app.post("/v1/wavefunction", response_model=TableResponse)
def wavefunction(payload: ConfigPayload) -> TableResponse:
    return _run("wavefunction", payload)


@app.post("/v1/transmission", response_model=TableResponse)
def transmission(payload: ConfigPayload) -> TableResponse:
    return _run("transmission", payload)


@app.post("/v1/validate", response_model=ValidateResponse)
def validate(payload: ConfigPayload) -> ValidateResponse:
    cfg = RunConfig(**payload.to_kwargs())
    doc, hard_fail = build_validate_report(cfg)
    report = json.loads(doc.content)
    return ValidateResponse(
        ok=not hard_fail,
        hard_failures=report["summary"]["hard_failures"],
        files=[FileDocument(filename=doc.filename, media_type=doc.media_type,
                            content=doc.content)],
    )
