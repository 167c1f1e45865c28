"""HTTP service exposing the simulator and analysis pipeline.

All endpoints are stateless wrappers over the library: request bodies
carry file contents (configs, count files, documents) as strings,
responses carry the structured document plus its text rendering, so
clients can write either form to disk unchanged.
"""

from __future__ import annotations

from importlib.metadata import PackageNotFoundError, version

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..counts import (CountSet, bootstrap_fidelity_error, counts_to_truth_table,
                      format_counts, parse_counts, subtract_accidentals,
                      synth_counts)
from ..docio import render_doc
from ..errors import DomainError, ToolkitError
from ..fitting import FitSpec, fit, fitspec_from_config, similarity_doc
from ..gate import (GateParams, build_ideal_cnot, ideal_post_selection,
                    model_truth_table, params_from_config, params_to_config)
from ..metrics import (BASES, build_fidelity_report, fidelity_doc,
                       ideal_truth_table, table_bars_csv, table_doc,
                       truth_table)
from .schemas import (AnalyzeRequest, AnalyzeResponse, FitRequest, FitResponse,
                      HealthResponse, RenderRequest, RenderResponse,
                      SimulateRequest, SimulateResponse, SynthRequest,
                      SynthResponse)


def _service_version() -> str:
    try:
        return version("fibrecnot")
    except PackageNotFoundError:
        return "unknown"


def _normalize_bases(bases: list[str]) -> tuple[str, ...]:
    for b in bases:
        if b not in BASES:
            raise DomainError(f"unknown basis {b!r}")
    if not bases:
        raise DomainError("at least one basis is required")
    return tuple(b for b in BASES if b in bases)


def _source_tables(ideal: bool, config: str | None, bases: tuple[str, ...]):
    """Truth tables from either the exact ideal network or a configured model."""
    if ideal and config is not None:
        raise DomainError("choose the ideal gate or a config, not both")
    if not ideal and config is None:
        raise DomainError("either request the ideal gate or supply a config")
    if ideal:
        circuit = build_ideal_cnot()
        selection = ideal_post_selection()
        return [truth_table(circuit, b, selection) for b in bases]
    params = params_from_config(config)
    return [model_truth_table(params, b) for b in bases]


def create_app() -> FastAPI:
    app = FastAPI(title="fibrecnot", version=_service_version())

    @app.exception_handler(ToolkitError)
    async def toolkit_error_handler(request: Request, exc: ToolkitError):
        return JSONResponse(
            status_code=422,
            content={"detail": {"kind": type(exc).__name__,
                                "message": str(exc),
                                "line": getattr(exc, "line", None)}},
        )

    @app.get("/health", response_model=HealthResponse)
    async def health() -> HealthResponse:
        return HealthResponse(status="ok", version=_service_version())

    @app.post("/simulate", response_model=SimulateResponse)
    async def simulate(req: SimulateRequest) -> SimulateResponse:
        bases = _normalize_bases(req.bases)
        tables = _source_tables(req.ideal, req.config, bases)
        doc = {"kind": "truth_table_set", "tables": [table_doc(t) for t in tables]}
        bars = table_bars_csv(*tables) if req.include_bars else None
        return SimulateResponse(doc=doc, text=render_doc(doc), bars_csv=bars)

    @app.post("/analyze", response_model=AnalyzeResponse)
    async def analyze(req: AnalyzeRequest) -> AnalyzeResponse:
        count_set = parse_counts(req.counts)
        corrected = subtract_accidentals(count_set)
        reference_params = (None if req.reference_config is None
                            else params_from_config(req.reference_config))
        tables = []
        fid: dict[str, float] = {}
        err: dict[str, float] = {}
        notes = []
        for i, basis in enumerate(BASES):
            if basis not in count_set.bases():
                continue
            table = counts_to_truth_table(corrected, basis)
            tables.append(table)
            if reference_params is None:
                reference = ideal_truth_table(basis)
            else:
                reference = model_truth_table(reference_params, basis)
                notes.append(f"basis {basis} compared against the configured model, "
                             "not the ideal gate")
            boot = bootstrap_fidelity_error(count_set, basis, reference,
                                            resamples=req.resamples, seed=req.seed + i)
            fid[basis] = boot.fidelity
            err[basis] = boot.error
            clamped = corrected.clamped_outputs(basis)
            if clamped:
                notes.append(f"basis {basis}: {clamped} outputs clamped at zero "
                             "during accidental subtraction")
        report = build_fidelity_report(
            f_zz=fid.get("ZZ"), f_xx=fid.get("XX"),
            f_zz_err=err.get("ZZ"), f_xx_err=err.get("XX"),
            resamples=req.resamples, notes=notes)
        doc = fidelity_doc(report)
        doc["tables"] = [table_doc(t) for t in tables]
        bars = table_bars_csv(*tables) if req.include_bars else None
        return AnalyzeResponse(doc=doc, text=render_doc(doc), bars_csv=bars)

    @app.post("/fit", response_model=FitResponse)
    async def fit_endpoint(req: FitRequest) -> FitResponse:
        count_set = parse_counts(req.counts)
        if set(count_set.bases()) != set(BASES):
            raise DomainError("fitting needs count data for both bases")
        corrected = subtract_accidentals(count_set)
        e_zz = counts_to_truth_table(corrected, "ZZ")
        e_xx = counts_to_truth_table(corrected, "XX")
        spec = FitSpec() if req.fitspec is None else fitspec_from_config(req.fitspec)
        report = fit(e_zz, e_xx, spec)
        doc = similarity_doc(report)
        return FitResponse(doc=doc, text=render_doc(doc),
                           params_config=params_to_config(report.params))

    @app.post("/synth", response_model=SynthResponse)
    async def synth(req: SynthRequest) -> SynthResponse:
        bases = _normalize_bases(req.bases)
        tables = _source_tables(req.ideal, req.config, bases)
        rng = np.random.default_rng(req.seed)
        records = []
        for table in tables:
            drawn = synth_counts(table, req.trials, req.accidental_mean,
                                 integration_time=req.integration_time, rng=rng)
            records.extend(drawn.records)
        count_set = CountSet(tuple(records))
        header = (f"synthetic counts: trials={req.trials} "
                  f"accidental_mean={req.accidental_mean!r} seed={req.seed}")
        counts_text = format_counts(count_set, header=header)
        summary = (f"synthesized {len(records)} records "
                   f"({', '.join(bases)}), {req.trials} trials per input")
        return SynthResponse(counts=counts_text, text=summary + "\n")

    @app.post("/render", response_model=RenderResponse)
    async def render(req: RenderRequest) -> RenderResponse:
        return RenderResponse(text=render_doc(req.doc))

    return app


app = create_app()
