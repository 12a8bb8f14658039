"""Request/response models for the experiment service."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field

from ..geometry import Domain, domain_from_dict, domain_to_dict


class DomainModel(BaseModel):
    """Wire form of a domain description; mirrors the domain JSON file."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["UnitDisc", "HalfPlane", "Annulus", "Smooth"]
    r: float | None = None
    a: tuple[float, float] | None = None
    k: float | None = None
    curves: list[list[tuple[float, float]]] | None = None

    def to_domain(self) -> Domain:
        return domain_from_dict(self.model_dump(exclude_none=True))

    @classmethod
    def from_domain(cls, domain: Domain) -> "DomainModel":
        return cls.model_validate(domain_to_dict(domain))


class ExperimentRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    domain: DomainModel | None = None
    seed: int = 42
    tolerances: dict[str, float] = Field(default_factory=dict)
    params: dict[str, Any] = Field(default_factory=dict)
    paper_ode: bool = False
    jobs: int = 1


class ArtifactModel(BaseModel):
    name: str
    media_type: str
    text: str
    sha256: str


class ExperimentResponse(BaseModel):
    command: str
    status: Literal["ok", "tolerance_failure"]
    summary: dict[str, Any]
    artifacts: list[ArtifactModel]


class HealthResponse(BaseModel):
    status: str
    version: str


class DomainSummary(BaseModel):
    kind: str
    scale: float
    curves: int
