"""FastAPI service exposing snapshot generation, reconstruction and experiments."""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..config import ExperimentConfig
from ..estimators import NoiseModel, predict_composed, predict_value_based
from ..exceptions import ConfigurationError, KoopmanError
from ..harness import monte_carlo, reconstruction_curves, run_all_scenarios, run_scenario
from ..kernels import dictionary_kernel, rbf_kernel
from ..observables import SnapshotSet
from ..simulation import SamplingPlan, generate_snapshots
from . import schemas

app = FastAPI(
    title="koopman-kernels",
    version=__version__,
    description=(
        "Koopman operator estimation for nonlinear systems: snapshot generation, "
        "kernel-based observable reconstruction, and the benchmark experiment harness."
    ),
)


@app.exception_handler(KoopmanError)
async def koopman_error_handler(request: Request, exc: KoopmanError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


@app.post("/snapshots/generate", response_model=schemas.SnapshotResponse)
def snapshots_generate(req: schemas.SnapshotRequest) -> schemas.SnapshotResponse:
    sys = req.system.build()
    plan = SamplingPlan(
        n_traj=req.sampling.n_traj,
        traj_len=req.sampling.traj_len,
        init_low=req.sampling.init_low,
        init_high=req.sampling.init_high,
        sigma_t=req.sigma_t,
        seed=req.seed,
    )
    s = generate_snapshots(sys, plan)
    return schemas.SnapshotResponse(
        x=s.X.tolist(), y=s.Y.tolist(), traj=s.traj.tolist(), step=s.step.tolist(),
        sigma_t=s.sigma_t, seed=req.seed,
    )


@app.post("/reconstruct", response_model=schemas.ReconstructResponse)
def reconstruct(req: schemas.ReconstructRequest) -> schemas.ReconstructResponse:
    if req.kernel.kind == "dictionary":
        if req.kernel.dictionary is None:
            raise ConfigurationError("dictionary kernel needs a 'dictionary' spec")
        kernel = dictionary_kernel(req.kernel.dictionary.build())
    else:
        if req.kernel.rho is None:
            raise ConfigurationError("rbf kernel needs a concrete 'rho'")
        kernel = rbf_kernel(req.kernel.rho)
    data = SnapshotSet(np.asarray(req.x, dtype=float), np.asarray(req.y, dtype=float))
    noise = NoiseModel(sigma2=req.noise.sigma2, mu=req.noise.mu)
    values = np.asarray(req.values, dtype=float)
    query = np.asarray(req.query, dtype=float)
    if req.mode == "composed":
        out = predict_composed(kernel, data, noise, values, query)
    else:
        out = predict_value_based(kernel, data, noise, values, query)
    return schemas.ReconstructResponse(values=[float(v) for v in out])


@app.post("/experiments/run", response_model=schemas.RunResponse)
def experiments_run(req: schemas.RunRequest) -> schemas.RunResponse:
    config: ExperimentConfig = req.config
    if req.sigma_t is not None:
        seed = config.seed if req.seed is None else req.seed
        results = run_scenario(config, req.sigma_t, seed)
    else:
        results = run_all_scenarios(config, req.seed)
    return schemas.RunResponse(results=results)


@app.post("/experiments/monte-carlo", response_model=schemas.MonteCarloResponse)
def experiments_monte_carlo(req: schemas.MonteCarloRequest) -> schemas.MonteCarloResponse:
    result = monte_carlo(req.config, req.seed)
    return schemas.MonteCarloResponse(runs=result.runs, summary=result.summary)


@app.post("/experiments/curves", response_model=schemas.CurvesResponse)
def experiments_curves(req: schemas.CurvesRequest) -> schemas.CurvesResponse:
    table = reconstruction_curves(req.config, req.seed, req.sigma_t)
    return schemas.CurvesResponse(columns=table.columns, rows=table.rows)
