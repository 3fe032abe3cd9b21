"""Command-line front end: a thin client over the HTTP service.

By default requests are served in-process (the FastAPI app mounted on an
ASGI test transport, no network); --server http://host:port talks to a
running instance instead. `casimir-pfa serve` starts one with uvicorn.

Subcommands:
    energy  one CSV/JSON row per grid point (gap, exact, pfa, ratio, ...)
    fit     sweep + least-squares fit, or fit a curve file from `energy`
    serve   run the HTTP service

Exit codes: 0 success, 1 usage error, 2 convergence failure, 3 fit failure.

CSV dialect: comma separator, '.' decimal point, 17 significant digits
(lossless float round-trip), header line prefixed '#'.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

_CSV_COLUMNS = ("gap", "exact", "pfa", "ratio", "abs_error",
                "mode_cutoff", "matrix_size", "beta_cutoff", "status")

_GEOMETRIES = ("cc", "cs", "cp", "cc-electro", "cs-electro", "cp-electro", "sp-electro")
_MODELS = ("linear", "quad", "quadlog", "cubiclog", "power", "quartic", "affine")

_EXIT_OK = 0
_EXIT_USAGE = 1
_EXIT_CONVERGENCE = 2
_EXIT_FIT = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(_EXIT_USAGE)


class _UsageError(Exception):
    pass


def _parse_grid(text: str) -> dict[str, Any]:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise _UsageError(f"grid must be min:max:count[:log], got {text!r}")
    spacing = "linear"
    if len(parts) == 4:
        if parts[3] not in ("log", "linear"):
            raise _UsageError(f"grid spacing must be 'log' or 'linear', got {parts[3]!r}")
        spacing = parts[3]
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise _UsageError(f"malformed grid {text!r}: {exc}") from exc
    if lo <= 0 or hi <= 0:
        raise _UsageError("grid bounds must be positive")
    if hi < lo:
        raise _UsageError("grid max must be >= min")
    if count < 1:
        raise _UsageError("grid count must be >= 1")
    if count > 1 and hi == lo:
        raise _UsageError("a multi-point grid needs max > min")
    return {"min": lo, "max": hi, "count": count, "spacing": spacing}


def _parse_window(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise _UsageError(f"window must be min:max, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise _UsageError(f"malformed window {text!r}: {exc}") from exc
    if hi < lo:
        raise _UsageError("window max must be >= min")
    return lo, hi


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _make_client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=None)
    from fastapi.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app())


def _write_output(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _sweep_spec(args) -> dict[str, Any]:
    return {
        "geometry": args.geometry,
        "sector": args.sector,
        "pfa_surface": args.pfa,
        "grid": _parse_grid(args.grid),
        "rel_tol": args.tol,
        "matrix_size": None if args.matrix_size == 0 else args.matrix_size,
    }


def _energy_csv(response: dict) -> str:
    lines = ["# " + ",".join(_CSV_COLUMNS)]
    for row in response["rows"]:
        lines.append(",".join(_fmt(row.get(col)) for col in _CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def _fit_csv(response: dict) -> str:
    names = response["coefficient_names"]
    header = "# model,window_min,window_max," + ",".join(names) + ",residual_rms,samples_used"
    row = ",".join([
        response["model"],
        _fmt(float(response["window"][0])),
        _fmt(float(response["window"][1])),
        *[_fmt(float(v)) for v in response["coefficients"]],
        _fmt(float(response["residual_rms"])),
        str(response["samples_used"]),
    ])
    return header + "\n" + row + "\n"


def _read_curve_csv(path: str) -> list[dict[str, float]]:
    samples = []
    with open(path, encoding="utf-8") as fh:
        header: list[str] | None = None
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                header = [c.strip() for c in line.lstrip("#").split(",")]
                continue
            if header is None:
                raise _UsageError(f"{path}: missing '#'-prefixed header line")
            fields = dict(zip(header, line.split(",")))
            if fields.get("status", "ok") != "ok":
                continue
            try:
                samples.append({"x": float(fields["gap"]), "y": float(fields["ratio"])})
            except (KeyError, ValueError) as exc:
                raise _UsageError(f"{path}: bad curve row {line!r}: {exc}") from exc
    if not samples:
        raise _UsageError(f"{path}: no usable samples")
    return samples


def _post(client, path: str, payload: dict) -> tuple[int, dict]:
    resp = client.post(path, json=payload)
    try:
        body = resp.json()
    except Exception:
        body = {"detail": resp.text}
    return resp.status_code, body


def _cmd_energy(args) -> int:
    payload = _sweep_spec(args)
    with _make_client(args.server) as client:
        status, body = _post(client, "/v1/energy", payload)
    if status != 200:
        print(f"error: {body.get('detail')}", file=sys.stderr)
        return _EXIT_USAGE
    text = _energy_csv(body) if args.format == "csv" else json.dumps(body, indent=2) + "\n"
    _write_output(text, args.out)
    if not body["converged"]:
        print("error: one or more grid points failed to converge", file=sys.stderr)
        return _EXIT_CONVERGENCE
    return _EXIT_OK


def _cmd_fit(args) -> int:
    payload: dict[str, Any] = {"model": args.model}
    if args.window:
        payload["window"] = list(_parse_window(args.window))
    if args.infile:
        payload["samples"] = _read_curve_csv(args.infile)
    else:
        payload["sweep"] = _sweep_spec(args)
    with _make_client(args.server) as client:
        status, body = _post(client, "/v1/fit", payload)
    if status != 200:
        detail = body.get("detail")
        kind = detail.get("kind") if isinstance(detail, dict) else None
        print(f"error: {detail}", file=sys.stderr)
        if kind == "convergence":
            return _EXIT_CONVERGENCE
        if kind == "fit":
            return _EXIT_FIT
        return _EXIT_USAGE
    text = _fit_csv(body) if args.format == "csv" else json.dumps(body, indent=2) + "\n"
    _write_output(text, args.out)
    return _EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return _EXIT_OK


def _add_sweep_flags(p: argparse.ArgumentParser):
    p.add_argument("--geometry", required=True, choices=_GEOMETRIES)
    p.add_argument("--sector", default="both", choices=("te", "tm", "both"))
    p.add_argument("--pfa", default="inner", choices=("inner", "outer", "geomean"))
    p.add_argument("--grid", required=True,
                   help="min:max:count[:log], gap values (alpha-1 or d/a)")
    p.add_argument("--matrix-size", type=int, default=101,
                   help="multipole orders per parity block (cylinder-plane); 0 = auto-escalate")
    p.add_argument("--tol", type=float, default=1e-8, help="relative tolerance")


def _add_io_flags(p: argparse.ArgumentParser):
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--server", default=None,
                   help="base URL of a running service (default: in-process)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="casimir-pfa",
                     description="Casimir/electrostatic energies, proximity "
                                 "approximations, and ratio-curve fits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_energy = sub.add_parser("energy", help="sweep energies over a gap grid")
    _add_sweep_flags(p_energy)
    _add_io_flags(p_energy)
    p_energy.set_defaults(func=_cmd_energy)

    p_fit = sub.add_parser("fit", help="fit a ratio-to-PFA curve")
    _add_sweep_flags(p_fit)
    _add_io_flags(p_fit)
    p_fit.add_argument("--model", required=True, choices=_MODELS)
    p_fit.add_argument("--window", default=None, help="fit window min:max")
    p_fit.add_argument("--in", dest="infile", default=None,
                       help="fit a curve CSV written by `energy` instead of sweeping")
    p_fit.set_defaults(func=_cmd_fit)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return _EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
