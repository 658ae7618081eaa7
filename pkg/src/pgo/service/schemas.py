"""Pydantic request/response models for the service API."""

from __future__ import annotations

from pydantic import BaseModel, Field


class ConfigPayload(BaseModel):
    """Mirror of the flat run configuration; all fields optional with defaults."""

    lam: float = Field(default=0.0, alias="lambda")
    mu: float = 1.0
    s: int = 1
    n_trunc: int | None = None
    l: int = 0
    tau_mode: str = "regular"
    dim: int | None = None
    e_min: float | None = None
    e_max: float | None = None
    e_step: float | None = None
    levels: list[int] = [0]
    r_min: float = 0.0
    r_max: float | None = None
    n_points: int = 201
    hbar2_over_2m: float = 20.735
    energy_mev: float = 118.53
    step_length_fm: float = 0.96
    potential_form: str = "exact"
    potential_scale: float = 1.0
    sweep_count: int = 16
    sweep_fraction: float = 0.5
    oracle_points: int = 2001
    oracle_count: int | None = None
    format: str = "csv"

    model_config = {"populate_by_name": True}

    def to_kwargs(self) -> dict:
        data = self.model_dump(by_alias=False)
        data["levels"] = tuple(data["levels"])
        data.pop("out_dir", None)
        return data


class FileDocument(BaseModel):
    filename: str
    media_type: str
    content: str


class TableResponse(BaseModel):
    command: str
    ok: bool
    files: list[FileDocument]


class ValidateResponse(BaseModel):
    command: str = "validate"
    ok: bool
    hard_failures: int
    files: list[FileDocument]


class ErrorDetail(BaseModel):
    type: str
    message: str


class HealthResponse(BaseModel):
    status: str
    version: str
