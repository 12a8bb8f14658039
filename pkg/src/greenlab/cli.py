"""greenlab command line: a thin client for the experiment service.

The CLI parses flags into an ExperimentRequest, posts it to the FastAPI app
(in-process by default, or to a remote instance via --server), and persists
the returned artifacts plus a manifest of content hashes.  Exit codes:
0 success, 1 tolerance failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="greenlab",
                                     description="Green's function and capacity-metric "
                                                 "experiments on planar domains")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--domain", help="domain description JSON file")
        p.add_argument("--out", default="out", help="output directory (default: out)")
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                       help="tolerance override, repeatable")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--paper-ode", action="store_true",
                       help="use the geodesic equation without the factor 2")
        p.add_argument("--server", help="base URL of a running greenlab service")

    p = sub.add_parser("robin", help="Robin report at a point")
    common(p)
    p.add_argument("--p", required=True, help="query point, e.g. 0.5+0.1j")
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--n-max", type=int, default=4)

    p = sub.add_parser("geodesic", help="integrate one capacity geodesic")
    common(p)
    p.add_argument("--z0", required=True)
    p.add_argument("--v0")
    p.add_argument("--angle", type=float, default=0.0)
    p.add_argument("--T", type=float, default=5.0)

    p = sub.add_parser("closed-geodesic", help="closed geodesic in a winding class")
    common(p)
    p.add_argument("--winding", type=int, default=1)

    p = sub.add_parser("spiral", help="search for a geodesic spiral")
    common(p)
    p.add_argument("--z0", required=True)
    p.add_argument("--T", type=float, default=200.0)
    p.add_argument("--angles", type=int, default=512)

    p = sub.add_parser("asymptotics", help="boundary-approach verification table")
    common(p)
    p.add_argument("--p0", required=True, help="boundary point, e.g. 1+0j")
    p.add_argument("--which", default="robin",
                   choices=["robin", "robin-derivative", "capacity", "cn",
                            "curvature", "rescaled"])
    p.add_argument("--alpha", type=int, default=0)
    p.add_argument("--beta", type=int, default=0)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--J", type=int, default=12)
    p.add_argument("--delta0", type=float)
    p.add_argument("--tangential", action="store_true")

    p = sub.add_parser("critical", help="critical points of the Green's function")
    common(p)
    p.add_argument("--zeta", help="pole, e.g. 0.7")
    p.add_argument("--sequence", action="store_true",
                   help="run the variable-domain tracking experiment")
    p.add_argument("--zeta0", default="1", help="boundary target for --sequence")
    p.add_argument("--steps", type=int, default=12)

    p = sub.add_parser("bergman", help="Bergman kernel values and identities")
    common(p)
    p.add_argument("--z", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--oracle", action="store_true",
                   help="also compare against the orthonormalization oracle")

    p = sub.add_parser("convergence", help="Green's function domain-family convergence")
    common(p)
    p.add_argument("--p", default="0.75")
    p.add_argument("--steps", type=int, default=8)

    p = sub.add_parser("acceptance", help="run the acceptance criteria")
    common(p)
    p.add_argument("--criteria", help="comma-separated criterion numbers")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _collect_params(args) -> dict:
    params: dict = {}
    mapping = {
        "robin": ["p", "order", "n_max"],
        "geodesic": ["z0", "v0", "angle", "T"],
        "closed-geodesic": ["winding"],
        "spiral": ["z0", "T", "angles"],
        "asymptotics": ["p0", "which", "alpha", "beta", "n", "J", "delta0", "tangential"],
        "critical": ["zeta", "zeta0", "steps"],
        "bergman": ["z", "w", "oracle"],
        "convergence": ["p", "steps"],
        "acceptance": ["criteria"],
    }
    for name in mapping.get(args.command, []):
        value = getattr(args, name.replace("-", "_"), None)
        if value is not None and value is not False:
            params[name] = value
    if args.command == "critical" and getattr(args, "sequence", False):
        params["experiment"] = "sequence"
        params.pop("zeta", None)
    elif args.command == "critical":
        params.pop("zeta0", None)
        params.pop("steps", None)
    return params


def _parse_tolerances(pairs) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"--tol expects NAME=VALUE, got {pair!r}")
        name, _, value = pair.partition("=")
        try:
            out[name] = float(value)
        except ValueError:
            raise ConfigError(f"--tol value for {name!r} is not a number: {value!r}")
    return out


def _load_domain_payload(path: str | None):
    if path is None:
        return None
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"domain file not found: {p}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"domain file {p} is not valid JSON: {exc}")


def _make_client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=3600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import app

    return TestClient(app)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0
    try:
        request = {
            "domain": _load_domain_payload(args.domain),
            "seed": args.seed,
            "tolerances": _parse_tolerances(args.tol),
            "params": _collect_params(args),
            "paper_ode": bool(getattr(args, "paper_ode", False)),
            "jobs": args.jobs,
        }
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    client = _make_client(args.server)
    response = client.post(f"/run/{args.command}", json=request)
    if response.status_code == 422:
        detail = response.json().get("detail", "invalid request")
        print(f"error: {detail}", file=sys.stderr)
        return 2
    if response.status_code != 200:
        print(f"error: service returned {response.status_code}: {response.text}",
              file=sys.stderr)
        return 2
    payload = response.json()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    listing = []
    for artifact in payload["artifacts"]:
        path = out_dir / artifact["name"]
        path.write_text(artifact["text"])
        listing.append({"name": artifact["name"], "media_type": artifact["media_type"],
                        "sha256": artifact["sha256"]})
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(
        json.dumps({"artifacts": sorted(listing, key=lambda e: e["name"])},
                   indent=2, sort_keys=True) + "\n"
    )
    summary = payload["summary"]
    for line in summary.pop("lines", []):
        print(line)
    print(json.dumps({"command": payload["command"], "status": payload["status"],
                      "summary": summary}, indent=2, sort_keys=True, default=str))
    print(f"artifacts written to {out_dir}")
    if payload["status"] != "ok":
        first = summary.get("first_failure")
        if first:
            print(f"tolerance failure: {first}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
