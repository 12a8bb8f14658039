"""Domain description files.

JSON schema (field names are fixed):
  {"kind": "UnitDisc"}
  {"kind": "HalfPlane", "a": [re, im], "k": k}
  {"kind": "Annulus", "r": r}
  {"kind": "Smooth", "curves": [[[re, im], ...], ...]}   # c_{-m}..c_m per curve
Unknown keys are rejected.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import ConfigError
from .curves import BoundaryCurve
from .domain import Annulus, Domain, HalfPlane, SmoothDomain, UnitDisc

_FIELDS = {
    "UnitDisc": {"kind"},
    "HalfPlane": {"kind", "a", "k"},
    "Annulus": {"kind", "r"},
    "Smooth": {"kind", "curves"},
}


def domain_from_dict(data: dict) -> Domain:
    if not isinstance(data, dict) or "kind" not in data:
        raise ConfigError("domain description must be an object with a 'kind' field")
    kind = data["kind"]
    if kind not in _FIELDS:
        raise ConfigError(f"unknown domain kind {kind!r}")
    extra = set(data) - _FIELDS[kind]
    if extra:
        raise ConfigError(f"unexpected field(s) {sorted(extra)} for kind {kind!r}")
    missing = _FIELDS[kind] - set(data)
    if missing:
        raise ConfigError(f"missing field(s) {sorted(missing)} for kind {kind!r}")
    try:
        if kind == "UnitDisc":
            return UnitDisc()
        if kind == "HalfPlane":
            a = data["a"]
            return HalfPlane(a=complex(a[0], a[1]), k=float(data["k"]))
        if kind == "Annulus":
            return Annulus(r=float(data["r"]))
        curves = []
        for coeff_list in data["curves"]:
            coeffs = np.array([complex(c[0], c[1]) for c in coeff_list])
            curves.append(BoundaryCurve(coeffs))
        return SmoothDomain(curves)
    except ConfigError:
        raise
    except Exception as exc:  # invalid numbers, bad radii, degenerate curves
        raise ConfigError(f"invalid domain description: {exc}") from exc


def domain_to_dict(domain: Domain) -> dict:
    if isinstance(domain, UnitDisc):
        return {"kind": "UnitDisc"}
    if isinstance(domain, HalfPlane):
        return {"kind": "HalfPlane", "a": [domain.a.real, domain.a.imag], "k": domain.k}
    if isinstance(domain, Annulus):
        return {"kind": "Annulus", "r": domain.r}
    if isinstance(domain, SmoothDomain):
        return {
            "kind": "Smooth",
            "curves": [[[c.real, c.imag] for c in curve.coeffs] for curve in domain.curves],
        }
    raise ConfigError(f"cannot serialize domain of type {type(domain).__name__}")


def load_domain(path) -> Domain:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"domain file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"domain file {path} is not valid JSON: {exc}")
    return domain_from_dict(data)


def save_domain(domain: Domain, path) -> None:
    Path(path).write_text(json.dumps(domain_to_dict(domain), indent=2, sort_keys=True))
