"""FastAPI front end wrapping the experiment runners."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..errors import ConfigError, GreenLabError
from ..experiments import COMMANDS, run_experiment
from .schemas import (
    ArtifactModel,
    DomainModel,
    DomainSummary,
    ExperimentRequest,
    ExperimentResponse,
    HealthResponse,
)

app = FastAPI(title="greenlab", version=__version__,
              description="Green's function and capacity-metric experiments "
                          "on planar domains")


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/domains/validate", response_model=DomainSummary)
def validate_domain(domain: DomainModel) -> DomainSummary:
    try:
        dom = domain.to_domain()
    except ConfigError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    try:
        n_curves = len(dom.boundary_curves())
    except NotImplementedError:
        n_curves = 0
    return DomainSummary(kind=dom.kind, scale=dom.scale, curves=n_curves)


@app.post("/run/{command}", response_model=ExperimentResponse)
def run(command: str, request: ExperimentRequest) -> ExperimentResponse:
    if command not in COMMANDS:
        raise HTTPException(status_code=404, detail=f"unknown command {command!r}")
    try:
        domain = request.domain.to_domain() if request.domain is not None else None
        result = run_experiment(
            command, domain, request.params, seed=request.seed,
            tolerances=request.tolerances, paper_ode=request.paper_ode,
            jobs=request.jobs,
        )
    except ConfigError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except GreenLabError as exc:
        raise HTTPException(status_code=400, detail=f"{type(exc).__name__}: {exc}")
    return ExperimentResponse(
        command=result.command,
        status=result.status,
        summary=result.summary,
        artifacts=[
            ArtifactModel(name=a.name, media_type=a.media_type, text=a.text,
                          sha256=a.sha256)
            for a in result.artifacts
        ],
    )
