"""Request and response models of the enumeration service."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class SentenceRequest(BaseModel):
    text: str


class SentenceInfo(BaseModel):
    id: str
    predicates: list[str]
    equality: bool
    m: int
    betas: list[str]
    delta: int
    delta_eff: int
    u: int


class TypeInfo(SentenceInfo):
    aux_predicates: list[str]
    compatible_one_types: list[str]


class ConfigRequest(BaseModel):
    config: list[int]


class SatResponse(BaseModel):
    satisfiable: bool


class SpectrumRequest(BaseModel):
    n: int = Field(ge=0)


class SpectrumResponse(BaseModel):
    in_spectrum: bool


class CountRequest(BaseModel):
    n: int = Field(ge=0)


class CountResponse(BaseModel):
    count: int


class EnumerateRequest(BaseModel):
    n: int = Field(ge=0)
    limit: Optional[int] = Field(default=None, ge=1)


class BenchRequest(BaseModel):
    sizes: list[int]
    limit: int = Field(default=1000, ge=1)


class BenchRowModel(BaseModel):
    n: int
    models: int
    mean_delay: float
    max_delay: float
    p99_delay: float


class BenchResponse(BaseModel):
    rows: list[BenchRowModel]
    slope: Optional[float]


class OracleRequest(BaseModel):
    n: int = Field(ge=0)


class OracleResponse(BaseModel):
    count: int
    models: list[list[str]]
