"""Deterministic experiment artifacts: CSV, JSON, SVG, and the manifest.

CSV cells use 17-significant-digit scientific notation so independent runs
can be diffed byte-for-byte; SVG output carries no timestamps or metadata.
"""

from __future__ import annotations

import hashlib
import io
import json
from dataclasses import dataclass

import numpy as np


def format_number(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.16e}"


def rows_to_csv(fieldnames: list[str], rows: list[dict]) -> str:
    out = io.StringIO()
    out.write(",".join(fieldnames) + "\n")
    for row in rows:
        out.write(",".join(format_number(row[name]) for name in fieldnames) + "\n")
    return out.getvalue()


def to_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=True) + "\n"


@dataclass(frozen=True)
class Artifact:
    name: str
    media_type: str
    text: str

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()


def csv_artifact(name: str, fieldnames: list[str], rows: list[dict]) -> Artifact:
    return Artifact(name=name, media_type="text/csv", text=rows_to_csv(fieldnames, rows))


def json_artifact(name: str, payload) -> Artifact:
    return Artifact(name=name, media_type="application/json", text=to_json(payload))


def manifest(artifacts: list[Artifact]) -> Artifact:
    listing = sorted(
        ({"name": a.name, "media_type": a.media_type, "sha256": a.sha256} for a in artifacts),
        key=lambda item: item["name"],
    )
    return Artifact(name="manifest.json", media_type="application/json",
                    text=to_json({"artifacts": listing}))


# -- minimal SVG ------------------------------------------------------------------


def _svg_header(width: int, height: int) -> str:
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'<rect width="{width}" height="{height}" fill="white"/>\n'
    )


def _polyline(points, color: str, width: float = 1.0) -> str:
    coords = " ".join(f"{x:.3f},{y:.3f}" for x, y in points)
    return f'<polyline fill="none" stroke="{color}" stroke-width="{width}" points="{coords}"/>\n'


def plot_trajectory(name: str, domain, paths, size: int = 480) -> Artifact:
    """Domain outline plus one or more complex trajectories."""
    theta = np.linspace(0.0, 2 * np.pi, 256)
    outlines = []
    try:
        for curve in domain.boundary_curves():
            outlines.append(curve.point(theta))
    except NotImplementedError:
        pass
    everything = np.concatenate(outlines + [np.asarray(p, dtype=complex) for p in paths])
    x0, x1 = everything.real.min(), everything.real.max()
    y0, y1 = everything.imag.min(), everything.imag.max()
    span = max(x1 - x0, y1 - y0, 1e-9) * 1.1
    cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)

    def to_px(zs):
        zs = np.asarray(zs, dtype=complex)
        xs = (zs.real - cx) / span * size + size / 2
        ys = size / 2 - (zs.imag - cy) / span * size
        return list(zip(xs, ys))

    body = _svg_header(size, size)
    for outline in outlines:
        body += _polyline(to_px(outline), "#888888", 1.0)
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    for i, p in enumerate(paths):
        body += _polyline(to_px(p), colors[i % len(colors)], 1.2)
    return Artifact(name=name, media_type="image/svg+xml", text=body + "</svg>\n")


def plot_residuals(name: str, rows, size: int = 480) -> Artifact:
    """log-log residual decay plot for a list of AsymptoticsRow-like objects."""
    js = np.array([row.j for row in rows], dtype=float)
    res = np.array([max(row.residual, 1e-300) for row in rows])
    logs = np.log10(res)
    finite = np.isfinite(logs)
    if not finite.any():
        logs = np.zeros_like(logs)
    lo, hi = logs.min() - 0.5, logs.max() + 0.5
    margin = 42

    def to_px(j, val):
        x = margin + (j - js.min()) / max(js.max() - js.min(), 1) * (size - 2 * margin)
        y = size - margin - (val - lo) / max(hi - lo, 1e-9) * (size - 2 * margin)
        return x, y

    body = _svg_header(size, size)
    body += _polyline([to_px(j, v) for j, v in zip(js, logs)], "#1f77b4", 1.5)
    for j, v in zip(js, logs):
        x, y = to_px(j, v)
        body += f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2.4" fill="#d62728"/>\n'
    body += (
        f'<text x="{size/2:.0f}" y="{size-8}" font-size="12" text-anchor="middle">'
        "step j</text>\n"
        f'<text x="14" y="{size/2:.0f}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 14 {size/2:.0f})">log10 residual</text>\n'
    )
    return Artifact(name=name, media_type="image/svg+xml", text=body + "</svg>\n")
