"""Command-line front end: a thin client over the HTTP service.

By default the service runs in-process; --server points the same client at
a remote instance.  Exit codes: 0 all checks pass, 1 a verification check
failed, 2 bad arguments, 3 I/O error.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys

import click
import httpx


def _client(server):
    if server:
        return httpx.Client(base_url=server, timeout=None)
    from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _post(ctx, path: str, payload: dict) -> dict:
    with _client(ctx.obj["server"]) as client:
        resp = client.post(path, json=payload)
    if resp.status_code in (400, 422):
        click.echo(f"error: {resp.json().get('detail')}", err=True)
        sys.exit(2)
    if resp.status_code != 200:
        click.echo(f"error: service returned {resp.status_code}", err=True)
        sys.exit(1)
    return resp.json()


def _resolve(path: str) -> str:
    base = os.environ.get("MUBGEOM_OUT_DIR")
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _write(path: str, text: str) -> None:
    """Atomic write: temp file then rename."""
    path = _resolve(path)
    try:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        click.echo(f"I/O error writing {path}: {exc}", err=True)
        sys.exit(3)


def _emit(data: dict, out: str | None) -> None:
    text = json.dumps(data, indent=2)
    if out:
        _write(out, text)
    else:
        click.echo(text)


def _parse_ds(value: str) -> list:
    try:
        return [int(x) for x in value.split(",") if x.strip()]
    except ValueError:
        click.echo(f"error: cannot parse dimension list {value!r}", err=True)
        sys.exit(2)


def _prep_payload(prep: str, mddot, m0) -> dict:
    if prep == "balanced":
        return {"kind": "balanced"}
    if mddot is None or m0 is None:
        click.echo("error: --prep line requires --mddot and --m0", err=True)
        sys.exit(2)
    return {"kind": "line", "mddot": mddot, "m0": m0}


@click.group()
@click.option("--server", default=None, help="Remote service URL; default runs in-process.")
@click.pass_context
def main(ctx, server):
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


@main.command()
@click.option("--d", "ds", required=True, help="Comma-separated odd prime dimensions.")
@click.option("--backend", type=click.Choice(["exact", "float"]), default="exact")
@click.option("--tol", type=float, default=1e-10, help="Float-backend tolerance.")
@click.option("--out", default=None, help="Report output path (JSON).")
@click.pass_context
def verify(ctx, ds, backend, tol, out):
    """Run the full verification battery; exit 0 iff every check passes."""
    report = _post(ctx, "/verify", {"ds": _parse_ds(ds), "backend": backend, "tolerance": tol})
    _emit(report, out)
    for check in report["checks"]:
        status = check["status"].upper()
        residual = "" if check["residual"] is None else f" residual={check['residual']:.3e}"
        click.echo(f"{status:7s} {check['name']} (d={check['d']}){residual}", err=True)
    sys.exit(0 if report["all_passed"] else 1)


@main.command()
@click.option("--d", "d", required=True, type=int)
@click.option("--out", default=None, help="Lines-to-points JSON output path.")
@click.option("--csv-out", default=None, help="0/1 incidence matrix CSV output path.")
@click.pass_context
def geometry(ctx, d, out, csv_out):
    """Dump the point-line incidence structure."""
    report = _post(ctx, "/geometry", {"d": d})
    csv_text = report.pop("incidence_csv")
    if csv_out:
        _write(csv_out, csv_text)
    _emit(report, out)


@main.command()
@click.option("--d", "d", required=True, type=int)
@click.option("--prep", type=click.Choice(["balanced", "line"]), default="balanced")
@click.option("--mddot", type=int, default=None)
@click.option("--m0", type=int, default=None)
@click.option("--basis", "bases", multiple=True, help="Restrict to these bases (int or CB).")
@click.option("--unrotate", is_flag=True, default=False)
@click.option("--out", default=None)
@click.pass_context
def oracle(ctx, d, prep, mddot, m0, bases, unrotate, out):
    """Exact joint outcome tables, probabilities rendered as a/d^k."""
    payload = {
        "d": d,
        "preparation": _prep_payload(prep, mddot, m0),
        "unrotate": unrotate,
    }
    if bases:
        payload["bases"] = [b if b == "CB" else int(b) for b in bases]
    _emit(_post(ctx, "/oracle", payload), out)


@main.command()
@click.option("--d", "d", required=True, type=int)
@click.option("--prep", type=click.Choice(["balanced", "line"]), default="balanced")
@click.option("--mddot", type=int, default=None)
@click.option("--m0", type=int, default=None)
@click.option("--rule", type=click.Choice(["line_rule", "label_difference"]), default="line_rule")
@click.option("--trials", type=int, default=10000)
@click.option("--seed", type=int, default=None, help="Master seed; generated and printed if absent.")
@click.option("--workers", type=int, default=1)
@click.option("--unrotate", is_flag=True, default=False)
@click.option("--out", default=None, help="Transcript output path (JSON lines).")
@click.option("--summary-out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.pass_context
def simulate(ctx, d, prep, mddot, m0, rule, trials, seed, workers, unrotate, out, summary_out, fmt):
    """Seeded Monte Carlo protocol rounds with transcript export."""
    payload = {
        "d": d,
        "preparation": _prep_payload(prep, mddot, m0),
        "rule": rule,
        "trials": trials,
        "workers": workers,
        "unrotate": unrotate,
        "include_transcripts": True,
    }
    if seed is not None:
        payload["seed"] = seed
    report = _post(ctx, "/simulate", payload)
    summary = report["summary"]
    click.echo(f"seed: {summary['seed']}", err=True)
    if out:
        _write(out, "".join(json.dumps(t) + "\n" for t in report["transcripts"]))
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["basis", "trials", "successes"])
        for basis, stats in sorted(summary["per_basis"].items()):
            writer.writerow([basis, stats["trials"], stats["successes"]])
        writer.writerow(["total", summary["trials"], summary["successes"]])
        if summary_out:
            _write(summary_out, buf.getvalue())
        else:
            click.echo(buf.getvalue())
    else:
        summary_doc = {k: v for k, v in report.items() if k != "transcripts"}
        if summary_out:
            _write(summary_out, json.dumps(summary_doc, indent=2))
        else:
            click.echo(json.dumps(summary_doc, indent=2))


@main.command()
@click.option("--d", "d", required=True, type=int)
@click.option("--prep", type=click.Choice(["balanced", "line"]), default="balanced")
@click.option("--mddot", type=int, default=None)
@click.option("--m0", type=int, default=None)
@click.option("--rule", type=click.Choice(["line_rule", "label_difference"]), default="line_rule")
@click.option("--unrotate", is_flag=True, default=False)
@click.option("--out", default=None)
@click.pass_context
def evaluate(ctx, d, prep, mddot, m0, rule, unrotate, out):
    """Exact success probability of a (preparation, rule) pair, no sampling."""
    payload = {
        "d": d,
        "preparation": _prep_payload(prep, mddot, m0),
        "rule": rule,
        "unrotate": unrotate,
    }
    _emit(_post(ctx, "/evaluate", payload), out)


@main.command()
@click.option("--d", "ds", required=True, help="Comma-separated dimensions.")
@click.option("--out", default=None)
@click.pass_context
def conformance(ctx, ds, out):
    """Convention-resolution report: signs, phases, CB coefficient."""
    _emit(_post(ctx, "/conformance", {"ds": _parse_ds(ds)}), out)


@main.command()
@click.option("--d", "ds", required=True, help="Comma-separated dimensions.")
@click.option("--out", default=None)
@click.pass_context
def findings(ctx, ds, out):
    """Protocol findings: exact successes and support laws per strategy."""
    _emit(_post(ctx, "/findings", {"ds": _parse_ds(ds)}), out)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


@main.command()
@click.option("--out-dir", default="schemas")
def schemas(out_dir):
    """Write the versioned JSON schemas of every wire model."""
    from . import models

    names = [
        "VerifyRequest",
        "VerifyResponse",
        "GeometryRequest",
        "GeometryResponse",
        "OracleRequest",
        "OracleResponse",
        "SimulateRequest",
        "SimulateResponse",
        "EvaluateRequest",
        "EvaluateResponse",
        "ConformanceRequest",
        "ConformanceResponse",
        "FindingsRequest",
        "FindingsResponse",
    ]
    for name in names:
        schema = getattr(models, name).model_json_schema()
        _write(os.path.join(out_dir, f"{name}.json"), json.dumps(schema, indent=2))
    click.echo(f"wrote {len(names)} schemas to {out_dir}", err=True)


if __name__ == "__main__":
    main()
