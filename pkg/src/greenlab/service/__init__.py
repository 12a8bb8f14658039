from .app import app
from .schemas import (
    ArtifactModel,
    DomainModel,
    DomainSummary,
    ExperimentRequest,
    ExperimentResponse,
    HealthResponse,
)

__all__ = [
    "ArtifactModel",
    "DomainModel",
    "DomainSummary",
    "ExperimentRequest",
    "ExperimentResponse",
    "HealthResponse",
    "app",
]
