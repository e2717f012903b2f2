"""Request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from ..config import DictionarySpec, ExperimentConfig, SamplingSpec, SystemSpec
from ..harness import CurveTable, RunResult, SummaryRow


class HealthResponse(BaseModel):
    status: str
    version: str


class SnapshotRequest(BaseModel):
    system: SystemSpec = SystemSpec()
    sampling: SamplingSpec
    sigma_t: float = Field(0.0, ge=0.0)
    seed: int = 0


class SnapshotResponse(BaseModel):
    x: list[list[float]]
    y: list[list[float]]
    traj: list[int]
    step: list[int]
    sigma_t: float
    seed: int


class NoiseSpec(BaseModel):
    sigma2: float = Field(0.0, ge=0.0)
    mu: float = Field(0.0, ge=0.0)


class ReconstructKernelSpec(BaseModel):
    """A concrete kernel for the stateless reconstruction endpoint."""

    kind: Literal["dictionary", "rbf"]
    dictionary: DictionarySpec | None = None
    rho: float | None = None


class ReconstructRequest(BaseModel):
    """Reconstruct an observable composed with the dynamics from value samples.

    ``mode = "composed"`` expects the observable's values at the snapshot
    outputs; ``mode = "value-based"`` expects values at the inputs and uses
    the project/advance/reconstruct pipeline.
    """

    x: list[list[float]]
    y: list[list[float]]
    kernel: ReconstructKernelSpec
    noise: NoiseSpec = NoiseSpec()
    mode: Literal["composed", "value-based"] = "composed"
    values: list[float]
    query: list[list[float]]


class ReconstructResponse(BaseModel):
    values: list[float]


class RunRequest(BaseModel):
    config: ExperimentConfig
    seed: int | None = None
    sigma_t: float | None = None


class RunResponse(BaseModel):
    results: list[RunResult]


class MonteCarloRequest(BaseModel):
    config: ExperimentConfig
    seed: int | None = None


class MonteCarloResponse(BaseModel):
    runs: list[RunResult]
    summary: list[SummaryRow]


class CurvesRequest(BaseModel):
    config: ExperimentConfig
    seed: int
    sigma_t: float | None = None


class CurvesResponse(CurveTable):
    pass
