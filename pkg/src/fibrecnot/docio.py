"""Structured single-document serialization and text rendering.

Every report the toolkit emits exists in two forms: a human-readable
plain-text rendering and a JSON document tagged with a "kind" field.
This module owns the JSON framing and the kind dispatch used by the
report command.
"""

from __future__ import annotations

import json

from .errors import ParseError
from .gate import GateParams
from .metrics import (FidelityReport, render_fidelity_text, table_from_doc,
                      table_to_text)


def dump_doc(doc: dict) -> str:
    """Deterministic JSON bytes: sorted keys, two-space indent."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_doc(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON document: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ParseError("document must be a JSON object with a 'kind' field")
    return doc


def _render_table_set(doc: dict) -> str:
    tables = doc.get("tables", [])
    if not tables:
        raise ParseError("truth_table_set document holds no tables")
    return "\n".join(table_to_text(table_from_doc(t)) for t in tables)


def _render_analysis(doc: dict) -> str:
    process = doc.get("process_fidelity") or [None, None]
    average = doc.get("average_fidelity") or [None, None]
    report = FidelityReport(
        f_zz=doc.get("f_zz"), f_xx=doc.get("f_xx"),
        f_zz_err=doc.get("f_zz_err"), f_xx_err=doc.get("f_xx_err"),
        resamples=doc.get("resamples"),
        process_lower=process[0], process_upper=process[1],
        average_lower=average[0], average_upper=average[1],
        notes=tuple(doc.get("notes", ())),
    )
    parts = []
    for table in doc.get("tables", []):
        parts.append(table_to_text(table_from_doc(table)))
    parts.append(render_fidelity_text(report))
    return "\n".join(parts)


def _render_similarity(doc: dict) -> str:
    from .fitting import ReportRow, SimilarityReport, render_similarity_text

    try:
        rows = tuple(ReportRow(r["label"], r["s_zz"], r["s_xx"])
                     for r in doc["rows"])
        params = GateParams(**doc["params"])
        report = SimilarityReport(rows, params, doc["objective"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed similarity_report document: {exc}") from None
    return render_similarity_text(report)


_RENDERERS = {
    "truth_table": lambda doc: table_to_text(table_from_doc(doc)),
    "truth_table_set": _render_table_set,
    "analysis_report": _render_analysis,
    "similarity_report": _render_similarity,
}


def render_doc(doc: dict) -> str:
    """Human-readable text for any known document kind."""
    kind = doc.get("kind")
    renderer = _RENDERERS.get(kind)
    if renderer is None:
        raise ParseError(f"unknown document kind {kind!r}")
    return renderer(doc)
