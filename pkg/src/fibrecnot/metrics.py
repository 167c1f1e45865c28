"""Logical truth tables and gate figures of merit.

Logical encoding: |0> = |V>, |1> = |H> in the computational (ZZ) basis;
the diagonal (XX) basis states are (|H> +- |V>)/sqrt(2) for 0/1.  Truth
tables are 4x4 row-stochastic matrices over inputs 00, 01, 10, 11 with the
first bit the control qubit, rows in that fixed order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, LayoutError
from .modes import CircuitUnitary, beamsplitter_block, compose, embed
from .twophoton import PostSelection, coincidence_probabilities, evolve_state, product_state

BASES = ("ZZ", "XX")
INPUT_LABELS = ("00", "01", "10", "11")

ROW_SUM_TOL = 1e-9


def _check_basis(basis: str) -> None:
    if basis not in BASES:
        raise DomainError(f"unknown basis {basis!r}, expected one of {BASES}")


def _basis_bit_states(basis: str) -> tuple[tuple[float, float], tuple[float, float]]:
    """(amp_H, amp_V) for logical 0 and 1 in the given basis."""
    if basis == "ZZ":
        return ((0.0, 1.0), (1.0, 0.0))
    s = 1.0 / math.sqrt(2.0)
    return ((s, s), (s, -s))


@dataclass(frozen=True)
class TruthTable:
    """Row-stochastic logical truth table with optional success probabilities.

    success holds the post-selection success probability per input row and
    is None for tables estimated from count data, where the absolute rate
    is not recoverable.
    """

    basis: str
    probabilities: np.ndarray
    success: np.ndarray | None = None

    def __post_init__(self):
        _check_basis(self.basis)
        probs = np.array(self.probabilities, dtype=float)
        if probs.shape != (4, 4):
            raise DomainError(f"truth table shape {probs.shape}, expected (4, 4)")
        if np.any(probs < -1e-12):
            raise DomainError("truth table entries must be non-negative")
        probs = np.clip(probs, 0.0, None)
        sums = probs.sum(axis=1)
        if np.any(np.abs(sums - 1.0) >= ROW_SUM_TOL):
            raise DomainError(f"rows must sum to 1, got {sums}")
        probs.setflags(write=False)
        object.__setattr__(self, "probabilities", probs)
        if self.success is not None:
            succ = np.array(self.success, dtype=float)
            if succ.shape != (4,):
                raise DomainError("success probabilities must have shape (4,)")
            if np.any(succ <= 0.0) or np.any(succ > 1.0 + 1e-12):
                raise DomainError("success probabilities must lie in (0, 1]")
            succ.setflags(write=False)
            object.__setattr__(self, "success", succ)


def ideal_truth_table(basis: str) -> TruthTable:
    """Ideal post-selected CNOT table: plain permutation in ZZ, role-reversed in XX."""
    _check_basis(basis)
    eye = np.eye(4)
    if basis == "ZZ":
        # 00 -> 00, 01 -> 01, 10 -> 11, 11 -> 10
        probs = eye[[0, 1, 3, 2]]
    else:
        # 00 -> 00, 01 -> 11, 10 -> 10, 11 -> 01
        probs = eye[[0, 3, 2, 1]]
    return TruthTable(basis, probs, np.full(4, 1.0 / 9.0))


def _pol_bit(label: str) -> int:
    if "_H" in label:
        return 1
    if "_V" in label:
        return 0
    raise LayoutError(f"mode label {label!r} has no H/V polarization tag")


def _analysis_rotations(circuit: CircuitUnitary, selection: PostSelection) -> CircuitUnitary:
    """Hadamard-like rotation on every H/V pair of the detected arms.

    The block maps (|H> + |V>)/sqrt(2) onto the V mode and (|H> - |V>)/sqrt(2)
    onto the H mode, so reading mode polarization after it measures in the
    diagonal basis.
    """
    layout = circuit.layout
    block = beamsplitter_block(0.5, signed_side=0)
    rotations = []
    for label in sorted(selection.group_a | selection.group_b):
        if "_H" in label:
            partner = label.replace("_H", "_V", 1)
            if partner not in layout:
                raise LayoutError(f"no V partner for detected mode {label!r}")
            rotations.append(embed(layout, block, (label, partner)))
    return compose(circuit, *rotations)


def truth_table(circuit: CircuitUnitary, basis: str, selection: PostSelection,
                encoding: str | None = None) -> TruthTable:
    """Post-selected logical truth table of a circuit.

    Each of the four logical inputs is encoded in `encoding` (default: the
    same basis the table is tagged with) as a two-photon product state on
    the C_H/C_V and T_H/T_V launch ports, evolved, post-selected on one
    photon per arm, and read out in the same encoding.  Circuits that embed
    their own preparation and analysis mixers (the imperfection model) are
    evaluated with encoding="ZZ", i.e. bare H/V launch and readout.
    """
    _check_basis(basis)
    enc = basis if encoding is None else encoding
    _check_basis(enc)
    analyzed = circuit if enc == "ZZ" else _analysis_rotations(circuit, selection)
    states = _basis_bit_states(enc)
    layout = circuit.layout
    rows = np.zeros((4, 4))
    success = np.zeros(4)
    for row, (c_bit, t_bit) in enumerate((c, t) for c in (0, 1) for t in (0, 1)):
        amp_h, amp_v = states[c_bit]
        alpha = {"C_H": amp_h, "C_V": amp_v}
        amp_h, amp_v = states[t_bit]
        beta = {"T_H": amp_h, "T_V": amp_v}
        out = evolve_state(analyzed, product_state(layout, alpha, beta))
        dist = coincidence_probabilities(out, selection)
        for (mode_a, mode_b), p in dist.conditional.items():
            rows[row, 2 * _pol_bit(mode_a) + _pol_bit(mode_b)] += p
        success[row] = dist.success
    return TruthTable(basis, rows, success)


def logical_fidelity(measured: TruthTable, ideal: TruthTable) -> float:
    """Logical fidelity: mean overlap of measured rows with ideal rows."""
    if measured.basis != ideal.basis:
        raise DomainError("fidelity requires tables in the same basis")
    return float(np.sum(ideal.probabilities * measured.probabilities) / 4.0)


def process_fidelity_bounds(f_zz: float, f_xx: float) -> tuple[float, float]:
    """Bounds on process fidelity from the two basis fidelities.

    The lower bound f_zz + f_xx - 1 is reported unclamped even when negative.
    """
    return (f_zz + f_xx - 1.0, min(f_zz, f_xx))


def average_fidelity_bounds(f_zz: float, f_xx: float) -> tuple[float, float]:
    """Average gate fidelity bounds via F_avg = (d F_P + 1)/(d + 1), d = 4."""
    lower, upper = process_fidelity_bounds(f_zz, f_xx)
    return ((4.0 * lower + 1.0) / 5.0, (4.0 * upper + 1.0) / 5.0)


def similarity(measured, expected) -> float:
    """Normalized classical overlap S = (sum_ij sqrt(M_ij E_ij))^2 / 16."""
    m = measured.probabilities if isinstance(measured, TruthTable) else np.asarray(measured, float)
    e = expected.probabilities if isinstance(expected, TruthTable) else np.asarray(expected, float)
    if m.shape != (4, 4) or e.shape != (4, 4):
        raise DomainError("similarity expects 4x4 tables")
    # row sums of 1 bound the overlap sum by 4; clip float spill past 1
    return float(min(np.sum(np.sqrt(m * e)) ** 2 / 16.0, 1.0))


@dataclass(frozen=True)
class FidelityReport:
    """Fidelities, error bars, and derived bounds for one data set."""

    f_zz: float | None = None
    f_xx: float | None = None
    f_zz_err: float | None = None
    f_xx_err: float | None = None
    resamples: int | None = None
    process_lower: float | None = None
    process_upper: float | None = None
    average_lower: float | None = None
    average_upper: float | None = None
    notes: tuple[str, ...] = ()


def build_fidelity_report(f_zz=None, f_xx=None, f_zz_err=None, f_xx_err=None,
                          resamples=None, notes=()) -> FidelityReport:
    notes = list(notes)
    bounds = {}
    if f_zz is not None and f_xx is not None:
        lower, upper = process_fidelity_bounds(f_zz, f_xx)
        avg_lower, avg_upper = average_fidelity_bounds(f_zz, f_xx)
        bounds = dict(process_lower=lower, process_upper=upper,
                      average_lower=avg_lower, average_upper=avg_upper)
        if lower < 0.0:
            notes.append("process fidelity lower bound is negative; reported unclamped")
    else:
        missing = "XX" if f_xx is None else "ZZ"
        notes.append(f"basis {missing} absent; process fidelity bounds unavailable")
    return FidelityReport(f_zz=f_zz, f_xx=f_xx, f_zz_err=f_zz_err, f_xx_err=f_xx_err,
                          resamples=resamples, notes=tuple(notes), **bounds)


# -- serialization ----------------------------------------------------------

def _fmt(value: float) -> str:
    return f"{value:.12g}"


def table_to_text(table: TruthTable) -> str:
    """Plain-text form: basis header, optional success line, 4x4 matrix."""
    lines = [f"# basis: {table.basis}"]
    if table.success is not None:
        lines.append("# success: " + " ".join(_fmt(v) for v in table.success))
    for row in table.probabilities:
        lines.append(" ".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def table_from_text(text: str) -> TruthTable:
    from .errors import ParseError

    basis = None
    success = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.lower().startswith("basis:"):
                basis = body[len("basis:"):].strip()
            elif body.lower().startswith("success:"):
                fields = body[len("success:"):].split()
                try:
                    success = [float(f) for f in fields]
                except ValueError:
                    raise ParseError("bad success probabilities", lineno) from None
            continue
        fields = line.split()
        if len(fields) != 4:
            raise ParseError(f"expected 4 columns, got {len(fields)}", lineno)
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            raise ParseError("non-numeric table entry", lineno) from None
    if basis is None:
        raise ParseError("missing '# basis:' header")
    if len(rows) != 4:
        raise ParseError(f"expected 4 table rows, got {len(rows)}")
    try:
        return TruthTable(basis, np.array(rows), np.array(success) if success else None)
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def table_doc(table: TruthTable) -> dict:
    return {
        "kind": "truth_table",
        "basis": table.basis,
        "inputs": list(INPUT_LABELS),
        "probabilities": [[float(v) for v in row] for row in table.probabilities],
        "success": None if table.success is None else [float(v) for v in table.success],
    }


def table_from_doc(doc: dict) -> TruthTable:
    from .errors import ParseError

    if doc.get("kind") != "truth_table":
        raise ParseError(f"expected kind 'truth_table', got {doc.get('kind')!r}")
    success = doc.get("success")
    return TruthTable(doc["basis"], np.array(doc["probabilities"], dtype=float),
                      None if success is None else np.array(success, dtype=float))


def table_bars_csv(*tables: TruthTable) -> str:
    """Bar-height CSV, 16 input-output rows per basis, for plotting."""
    lines = ["basis,input,output,probability"]
    for table in tables:
        for i, in_label in enumerate(INPUT_LABELS):
            for j, out_label in enumerate(INPUT_LABELS):
                lines.append(f"{table.basis},{in_label},{out_label},"
                             f"{_fmt(table.probabilities[i, j])}")
    return "\n".join(lines) + "\n"


def fidelity_doc(report: FidelityReport) -> dict:
    return {
        "kind": "analysis_report",
        "f_zz": report.f_zz,
        "f_xx": report.f_xx,
        "f_zz_err": report.f_zz_err,
        "f_xx_err": report.f_xx_err,
        "resamples": report.resamples,
        "process_fidelity": [report.process_lower, report.process_upper],
        "average_fidelity": [report.average_lower, report.average_upper],
        "notes": list(report.notes),
    }


def render_fidelity_text(report: FidelityReport) -> str:
    lines = []
    for basis, f, err in (("ZZ", report.f_zz, report.f_zz_err),
                          ("XX", report.f_xx, report.f_xx_err)):
        if f is None:
            continue
        if err is None:
            lines.append(f"F_{basis} = {f:.4f}")
        else:
            lines.append(f"F_{basis} = {f:.4f} +- {err:.4f}")
    if report.process_lower is not None:
        lines.append(f"process fidelity: {report.process_lower:.4f} <= F_P <= "
                     f"{report.process_upper:.4f}")
        lines.append(f"average fidelity: {report.average_lower:.4f} <= F_avg <= "
                     f"{report.average_upper:.4f}")
    if report.resamples:
        lines.append(f"errors from {report.resamples} Poisson bootstrap resamples")
    for note in report.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"
