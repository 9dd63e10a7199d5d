"""FastAPI service wrapping the exact engine.

All numbers in responses are either exact rationals rendered as strings
("a/d^k") or plain floats clearly produced by the float backend.
"""

from __future__ import annotations

import csv
import io

from fastapi import FastAPI, HTTPException

from . import __version__
from .arith import IsTwoError, NotPrimeError, OutOfRangeError, PrimeModulus, fraction_as_d_power
from .dapg import Line, incidence, verify_axioms
from .meanking import (
    Balanced,
    LineVector,
    evaluate_rule,
    exact_joint_distribution,
    findings_report,
    run_protocol,
    support_law_holds,
)
from .models import (
    ConformanceRequest,
    ConformanceResponse,
    EvaluateRequest,
    EvaluateResponse,
    FindingsRequest,
    FindingsResponse,
    GeometryRequest,
    GeometryResponse,
    OracleEntryModel,
    OracleRequest,
    OracleResponse,
    OracleTableModel,
    PreparationModel,
    SimulateRequest,
    SimulateResponse,
    VerifyRequest,
    VerifyResponse,
)
from .mub import CB, all_basis_labels
from .states import conformance, conformance_report
from .verify import run_verification

app = FastAPI(title="mubgeom", version=__version__)


def _modulus(d: int) -> PrimeModulus:
    try:
        return PrimeModulus(d)
    except (NotPrimeError, IsTwoError, OutOfRangeError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))


def _preparation(modulus: PrimeModulus, prep: PreparationModel):
    if prep.kind == "balanced":
        return Balanced()
    d = modulus.d
    return LineVector(Line(prep.mddot % d, prep.m0 % d))


def _basis(modulus: PrimeModulus, b):
    if b == "CB":
        return CB
    if not 0 <= b < modulus.d:
        raise HTTPException(status_code=400, detail=f"basis {b} out of range for d={modulus.d}")
    return b


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest) -> VerifyResponse:
    for d in req.ds:
        _modulus(d)
    report = run_verification(req.ds, req.backend, req.tolerance)
    return VerifyResponse(**report)


@app.post("/geometry", response_model=GeometryResponse)
def geometry(req: GeometryRequest) -> GeometryResponse:
    modulus = _modulus(req.d)
    inc = incidence(modulus.d)
    lines = [
        {
            "mddot": j.mddot,
            "m0": j.m0,
            "points": [{"m": p.m, "b": "CB" if p.b == CB else p.b} for p in inc.points_of[j]],
        }
        for j in inc.lines
    ]
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["line"] + [p.label() for p in inc.points])
    for j, row in zip(inc.lines, inc.matrix()):
        writer.writerow([j.label()] + row)
    annotated = None
    if modulus.d == 3:
        annotated = {
            "line": {"mddot": 1, "m0": 2},
            "points": [p.label() for p in inc.points_of[Line(1, 2)]],
            "note": "worked d=3 example: column b=1 row is m0 + (b/2)(2*mddot - 1) = 2 + 2*1 = 1 mod 3",
        }
    return GeometryResponse(
        version=__version__,
        d=modulus.d,
        num_lines=len(inc.lines),
        num_points=len(inc.points),
        lines=lines,
        incidence_csv=buf.getvalue(),
        axioms=verify_axioms(modulus).to_dict(),
        annotated_example=annotated,
    )


@app.post("/oracle", response_model=OracleResponse)
def oracle(req: OracleRequest) -> OracleResponse:
    modulus = _modulus(req.d)
    prep = _preparation(modulus, req.preparation)
    bases = (
        [_basis(modulus, b) for b in req.bases]
        if req.bases is not None
        else all_basis_labels(modulus)
    )
    tables = []
    for b in bases:
        table = exact_joint_distribution(modulus, prep, b, unrotate=req.unrotate)
        if table.total() != 1:
            raise HTTPException(status_code=500, detail="oracle table does not sum to 1")
        entries = [
            OracleEntryModel(
                m=m,
                mddot=j.mddot,
                m0=j.m0,
                probability=fraction_as_d_power(p, modulus.d),
            )
            for (m, j), p in sorted(table.entries.items(), key=lambda kv: (kv[0][0], kv[0][1]))
        ]
        marginal = {
            str(m): fraction_as_d_power(p, modulus.d) for m, p in sorted(table.king_marginal().items())
        }
        tables.append(
            OracleTableModel(
                basis="CB" if b == CB else b,
                entries=entries,
                king_marginal=marginal,
                sum_valid=True,
            )
        )
    support = None
    if isinstance(prep, LineVector) and not req.unrotate:
        support = support_law_holds(modulus, prep)
    return OracleResponse(
        version=__version__,
        d=modulus.d,
        preparation=req.preparation,
        unrotate=req.unrotate,
        tables=tables,
        support_law=support,
    )


@app.post("/simulate", response_model=SimulateResponse)
def simulate(req: SimulateRequest) -> SimulateResponse:
    import secrets

    modulus = _modulus(req.d)
    prep = _preparation(modulus, req.preparation)
    seed = req.seed if req.seed is not None else secrets.randbits(32)
    transcripts, summary = run_protocol(
        modulus,
        prep,
        req.rule,
        trials=req.trials,
        seed=seed,
        workers=req.workers,
        unrotate=req.unrotate,
    )
    if req.rule == "label_difference":
        # never a bare pass/fail for the literal-formula path: attach the
        # oracle agreement figures alongside the sampled summary
        summary["oracle_agreement"] = {
            k: str(v) if not isinstance(v, (bool, int, str, dict, list)) else v
            for k, v in _jsonable_eval(modulus, prep, req).items()
        }
    conv = conformance(PrimeModulus(min(modulus.d, 7) if modulus.d <= 7 else 3))
    return SimulateResponse(
        version=__version__,
        summary=summary,
        transcripts=[t.to_dict() for t in transcripts] if req.include_transcripts else [],
        resolved_conventions={
            "line_sum_sign": conv.line_sum_sign,
            "cb_overlap_coefficient": conv.cb_coefficient_measured,
            "incident_overlap_phase": conv.phase_measured,
        },
    )


def _jsonable_eval(modulus, prep, req):
    from .meanking import _jsonable

    return _jsonable(evaluate_rule(modulus, prep, req.rule, unrotate=req.unrotate))


@app.post("/evaluate", response_model=EvaluateResponse)
def evaluate(req: EvaluateRequest) -> EvaluateResponse:
    from .meanking import _jsonable

    modulus = _modulus(req.d)
    prep = _preparation(modulus, req.preparation)
    report = _jsonable(evaluate_rule(modulus, prep, req.rule, unrotate=req.unrotate))
    return EvaluateResponse(version=__version__, report=report)


@app.post("/conformance", response_model=ConformanceResponse)
def conformance_endpoint(req: ConformanceRequest) -> ConformanceResponse:
    for d in req.ds:
        _modulus(d)
    return ConformanceResponse(version=__version__, report=conformance_report(req.ds))


@app.post("/findings", response_model=FindingsResponse)
def findings(req: FindingsRequest) -> FindingsResponse:
    for d in req.ds:
        _modulus(d)
    return FindingsResponse(version=__version__, report=findings_report(req.ds))
