"""Simulator and analysis toolkit for a post-selected fibre CNOT gate.

The library is layered: mode-space circuits (modes), two-photon
evolution (twophoton), truth tables and figures of merit (metrics), the
gate networks and imperfection model (gate), coincidence-count handling
(counts), model fitting (fitting), and serialization (docio).  A FastAPI
service (service) exposes the pipeline; the CLI (cli) is a thin client.
"""

from .counts import (BootstrapResult, CorrectedRecord, CorrectedSet, CountRecord,
                     CountSet, bootstrap_fidelity_error, counts_to_truth_table,
                     format_counts, parse_counts, subtract_accidentals, synth_counts)
from .docio import dump_doc, load_doc, render_doc
from .errors import (DegeneratePostSelectionError, DomainError, LayoutError,
                     NormalizationError, ParseError, ToolkitError, UnitarityError)
from .fitting import (ErrorBreakdown, FitSpec, ReportRow, SimilarityReport, fit,
                      fitspec_from_config, fitspec_to_config,
                      render_similarity_text, report_errors_breakdown,
                      similarity_doc)
from .gate import (GateParams, build_ideal_cnot, build_model_circuit, eta_deltas,
                   ideal_eta, ideal_layout, ideal_post_selection, max_visibility,
                   model_layout, model_post_selection, model_truth_table,
                   overlap_to_visibility, params_for_basis, params_from_config,
                   params_to_config, visibility_to_overlap)
from .metrics import (BASES, INPUT_LABELS, FidelityReport, TruthTable,
                      average_fidelity_bounds, build_fidelity_report, fidelity_doc,
                      ideal_truth_table, logical_fidelity, process_fidelity_bounds,
                      render_fidelity_text, similarity, table_bars_csv, table_doc,
                      table_from_doc, table_from_text, table_to_text, truth_table)
from .modes import (CircuitUnitary, ModeLayout, beamsplitter_block, compose, embed,
                    hv_swap, identity, phase_plate)
from .twophoton import (CoincidenceDistribution, PhotonPairState, PostSelection,
                        brute_force_oracle, coincidence_probabilities, evolve_pair,
                        evolve_state, pair_state, product_state)

__version__ = "0.1.0"

__all__ = [
    "BASES", "INPUT_LABELS", "BootstrapResult", "CircuitUnitary",
    "CoincidenceDistribution", "CorrectedRecord", "CorrectedSet", "CountRecord",
    "CountSet", "DegeneratePostSelectionError", "DomainError", "ErrorBreakdown",
    "FidelityReport", "FitSpec", "GateParams", "LayoutError", "ModeLayout",
    "NormalizationError", "ParseError", "PhotonPairState", "PostSelection",
    "ReportRow", "SimilarityReport", "ToolkitError", "TruthTable",
    "UnitarityError", "average_fidelity_bounds", "beamsplitter_block",
    "bootstrap_fidelity_error", "brute_force_oracle", "build_fidelity_report",
    "build_ideal_cnot", "build_model_circuit", "coincidence_probabilities",
    "compose", "counts_to_truth_table", "dump_doc", "embed", "eta_deltas",
    "evolve_pair", "evolve_state", "fidelity_doc", "fit", "fitspec_from_config",
    "fitspec_to_config", "format_counts", "hv_swap", "ideal_eta", "ideal_layout",
    "ideal_post_selection", "ideal_truth_table", "identity", "load_doc",
    "logical_fidelity", "max_visibility", "model_layout", "model_post_selection",
    "model_truth_table", "overlap_to_visibility", "pair_state", "params_for_basis",
    "params_from_config", "params_to_config", "parse_counts", "phase_plate",
    "process_fidelity_bounds", "product_state", "render_doc",
    "render_fidelity_text", "render_similarity_text", "report_errors_breakdown",
    "similarity", "similarity_doc", "subtract_accidentals", "synth_counts",
    "table_bars_csv", "table_doc", "table_from_doc", "table_from_text",
    "table_to_text", "truth_table", "visibility_to_overlap",
]
