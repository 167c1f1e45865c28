"""Fit gate parameters to measured truth tables.

The fit maximizes the product of per-basis similarities between model
and measured tables over a chosen set of free parameters, using a
derivative-free scheme: a coarse grid per coordinate followed by
golden-section refinement, cycled until the objective stops improving.
Three nested parameter sets are reported: the exact ideal gate, mode
overlap alone, and overlap plus the four encoding/analysis mixing
proportions.  Each stage starts from the previous optimum, so the
reported objectives never decrease down the rows.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParseError
from .gate import (GateParams, max_visibility, model_truth_table,
                   overlap_to_visibility)
from .metrics import TruthTable, similarity

ROW_LABELS = ("IDEAL", "INTERFERENCE", "FULL MODEL")

# coordinate order fixes the lexicographic tie-break
_COORD_ORDER = ("overlap", "delta_3a", "delta_3b", "delta_4a", "delta_4b",
                "phase_c", "phase_t")
# mixing proportions are stored in their ZZ-configuration; deltas shift
# both configurations off their per-basis ideals by the same amount
_ZZ_ETA_IDEAL = {"delta_3a": 1.0, "delta_3b": 0.5, "delta_4a": 1.0, "delta_4b": 0.5}

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class FitSpec:
    """Free-parameter selection and optimizer controls.

    Parameters
    ----------
    free_overlap, free_eta, free_phases:
        Which parameter groups the full-model stage may vary.  The
        interference stage always varies overlap alone (and collapses to
        the ideal row when overlap is not free).  At least one group
        must be free.
    overlap_bounds:
        Search interval for the mode-overlap amplitude, within [0, 1].
    eta_delta_bounds:
        Interval for the shared per-mixer deviation from the ideal
        mixing proportions, within [-0.5, 0].  Positive deviations are
        excluded because every mixer is ideal at proportion 1 in one
        basis.
    phase_bounds:
        Interval for the residual phases, within [-pi, pi].
    grid_points:
        Points in the coarse scan of each coordinate (>= 3).
    tolerance:
        Stop refining when a full sweep improves the objective by less
        than this.
    max_sweeps:
        Hard cap on refinement sweeps.
    objective:
        Scalarization of the two similarities; only "product" exists.
    """

    free_overlap: bool = True
    free_eta: bool = True
    free_phases: bool = False
    overlap_bounds: tuple[float, float] = (0.5, 1.0)
    eta_delta_bounds: tuple[float, float] = (-0.2, 0.0)
    phase_bounds: tuple[float, float] = (-math.pi, math.pi)
    grid_points: int = 33
    tolerance: float = 1e-10
    max_sweeps: int = 40
    objective: str = "product"

    def __post_init__(self):
        if not (self.free_overlap or self.free_eta or self.free_phases):
            raise DomainError("fit needs at least one free parameter group")
        _check_bounds("overlap_bounds", self.overlap_bounds, 0.0, 1.0)
        _check_bounds("eta_delta_bounds", self.eta_delta_bounds, -0.5, 0.0)
        _check_bounds("phase_bounds", self.phase_bounds, -math.pi, math.pi)
        if self.grid_points < 3:
            raise DomainError("grid_points must be at least 3")
        if not (self.tolerance > 0 and math.isfinite(self.tolerance)):
            raise DomainError("tolerance must be positive and finite")
        if self.max_sweeps < 1:
            raise DomainError("max_sweeps must be at least 1")
        if self.objective != "product":
            raise DomainError(f"unknown objective {self.objective!r}")

    def free_coords(self) -> tuple[str, ...]:
        names = []
        if self.free_overlap:
            names.append("overlap")
        if self.free_eta:
            names.extend(("delta_3a", "delta_3b", "delta_4a", "delta_4b"))
        if self.free_phases:
            names.extend(("phase_c", "phase_t"))
        return tuple(names)

    def bounds_for(self, name: str) -> tuple[float, float]:
        if name == "overlap":
            return self.overlap_bounds
        if name.startswith("delta_"):
            return self.eta_delta_bounds
        return self.phase_bounds


def _check_bounds(label, bounds, lo, hi):
    if len(bounds) != 2:
        raise DomainError(f"{label} must be a (low, high) pair")
    a, b = bounds
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise DomainError(f"{label} must be an ordered finite pair")
    if a < lo - 1e-12 or b > hi + 1e-12:
        raise DomainError(f"{label} must lie within [{lo}, {hi}]")


@dataclass(frozen=True)
class ReportRow:
    label: str
    s_zz: float
    s_xx: float

    def __post_init__(self):
        if self.label not in ROW_LABELS:
            raise DomainError(f"unknown report row {self.label!r}")
        for value in (self.s_zz, self.s_xx):
            if not (0.0 <= value <= 1.0):
                raise DomainError("similarities must lie in [0, 1]")


@dataclass(frozen=True)
class SimilarityReport:
    """Three-row similarity summary plus the fitted parameters."""

    rows: tuple[ReportRow, ReportRow, ReportRow]
    params: GateParams
    objective: float

    def __post_init__(self):
        if tuple(r.label for r in self.rows) != ROW_LABELS:
            raise DomainError(f"report rows must be {ROW_LABELS}")

    def row(self, label: str) -> ReportRow:
        for r in self.rows:
            if r.label == label:
                return r
        raise DomainError(f"no report row {label!r}")


@dataclass(frozen=True)
class ErrorBreakdown:
    """Similarity gains per stage, in percentage points.

    Each basis carries (INTERFERENCE - IDEAL, FULL MODEL - INTERFERENCE).
    """

    zz: tuple[float, float]
    xx: tuple[float, float]


def _coords_to_params(coords: dict[str, float]) -> GateParams:
    kwargs = {}
    for name, value in coords.items():
        if name == "overlap":
            kwargs["overlap"] = value
        elif name == "phase_c":
            kwargs["residual_phase_c"] = value
        elif name == "phase_t":
            kwargs["residual_phase_t"] = value
        elif name in _ZZ_ETA_IDEAL:
            kwargs["eta_" + name[len("delta_"):]] = _ZZ_ETA_IDEAL[name] + value
        else:
            raise DomainError(f"unknown fit coordinate {name!r}")
    return GateParams(**kwargs)


def _objective_value(e_zz: TruthTable, e_xx: TruthTable, params: GateParams) -> tuple[float, float, float]:
    s_zz = similarity(model_truth_table(params, "ZZ"), e_zz)
    s_xx = similarity(model_truth_table(params, "XX"), e_xx)
    value = s_zz * s_xx
    if not math.isfinite(value):
        raise DomainError("fit objective is not finite")
    return value, s_zz, s_xx


def _golden_refine(f, lo, hi, best_x, best_f, xtol=1e-9):
    """Golden-section maximization on [lo, hi]; keeps the incumbent on a loss."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x, fx = (c, fc) if fc >= fd else (d, fd)
    if fx > best_f:
        return x, fx
    return best_x, best_f


def _line_search(f, lo, hi, incumbent_x, incumbent_f, grid_points):
    """Coarse grid plus golden refinement around the best grid point.

    The grid scan takes the first maximum in ascending coordinate order,
    which makes ties deterministic; the incumbent is only replaced by a
    strict improvement.
    """
    xs = np.linspace(lo, hi, grid_points)
    fs = [f(x) for x in xs]
    k = int(np.argmax(fs))
    best_x, best_f = incumbent_x, incumbent_f
    if fs[k] > best_f:
        best_x, best_f = float(xs[k]), fs[k]
    bracket_lo = float(xs[max(k - 1, 0)])
    bracket_hi = float(xs[min(k + 1, grid_points - 1)])
    return _golden_refine(f, bracket_lo, bracket_hi, best_x, best_f)


def _optimize(e_zz, e_xx, spec, names, seed_coords):
    """Coordinate descent over `names`, seeded and never worse than the seed."""
    coords = dict(seed_coords)
    best, _, _ = _objective_value(e_zz, e_xx, _coords_to_params(coords))
    for _ in range(spec.max_sweeps):
        start = best
        for name in names:
            lo, hi = spec.bounds_for(name)

            def f(x, _name=name):
                trial = dict(coords)
                trial[_name] = float(x)
                return _objective_value(e_zz, e_xx, _coords_to_params(trial))[0]

            x, fx = _line_search(f, lo, hi, coords[name], best, spec.grid_points)
            if fx > best:
                coords[name], best = x, fx
        if best - start < spec.tolerance:
            break
    return coords, best


def fit(e_zz: TruthTable, e_xx: TruthTable, spec: FitSpec | None = None) -> SimilarityReport:
    """Fit free parameters to a pair of measured truth tables.

    Parameters
    ----------
    e_zz, e_xx:
        Measured tables in the two bases, row-stochastic.
    spec:
        Optimizer controls; defaults free overlap and the four mixing
        proportions.

    Returns
    -------
    SimilarityReport
        The three nested stages with their per-basis similarities, the
        full-model parameters, and the final objective value.  Stage
        seeding makes the stage objectives non-decreasing.
    """
    if spec is None:
        spec = FitSpec()
    if e_zz.basis != "ZZ" or e_xx.basis != "XX":
        raise DomainError("fit needs one ZZ table and one XX table, in that order")

    ideal_coords = {name: (1.0 if name == "overlap" else 0.0)
                    for name in _COORD_ORDER}
    obj_i, s_zz_i, s_xx_i = _objective_value(e_zz, e_xx, _coords_to_params(ideal_coords))

    if spec.free_overlap:
        inter_coords, _ = _optimize(e_zz, e_xx, spec, ("overlap",), ideal_coords)
    else:
        inter_coords = dict(ideal_coords)
    _, s_zz_n, s_xx_n = _objective_value(e_zz, e_xx, _coords_to_params(inter_coords))

    full_names = tuple(n for n in _COORD_ORDER if n in spec.free_coords())
    full_coords, obj_f = _optimize(e_zz, e_xx, spec, full_names, inter_coords)
    _, s_zz_f, s_xx_f = _objective_value(e_zz, e_xx, _coords_to_params(full_coords))

    rows = (ReportRow("IDEAL", _unit(s_zz_i), _unit(s_xx_i)),
            ReportRow("INTERFERENCE", _unit(s_zz_n), _unit(s_xx_n)),
            ReportRow("FULL MODEL", _unit(s_zz_f), _unit(s_xx_f)))
    return SimilarityReport(rows, _coords_to_params(full_coords), obj_f)


def _unit(value: float) -> float:
    return min(max(value, 0.0), 1.0)


def report_errors_breakdown(report_or_zz, xx=None) -> ErrorBreakdown:
    """Per-stage similarity gains in percentage points.

    Accepts either a SimilarityReport or two (ideal, interference, full)
    triples, one per basis.
    """
    if isinstance(report_or_zz, SimilarityReport):
        if xx is not None:
            raise DomainError("pass either a report or two triples, not both")
        zz = tuple(r.s_zz for r in report_or_zz.rows)
        xx = tuple(r.s_xx for r in report_or_zz.rows)
    else:
        zz = tuple(float(v) for v in report_or_zz)
        if xx is None:
            raise DomainError("triple form needs both bases")
        xx = tuple(float(v) for v in xx)
    if len(zz) != 3 or len(xx) != 3:
        raise DomainError("each basis needs an (ideal, interference, full) triple")
    return ErrorBreakdown(
        zz=((zz[1] - zz[0]) * 100.0, (zz[2] - zz[1]) * 100.0),
        xx=((xx[1] - xx[0]) * 100.0, (xx[2] - xx[1]) * 100.0),
    )


def render_similarity_text(report: SimilarityReport) -> str:
    """Aligned plain-text layout of the three-row report."""
    lines = ["Similarity between model and measured truth tables",
             "",
             f"  {'model':<14}  {'S_ZZ':>7}  {'S_XX':>7}"]
    for row in report.rows:
        lines.append(f"  {row.label:<14}  {row.s_zz:>7.3f}  {row.s_xx:>7.3f}")
    gains = report_errors_breakdown(report)
    lines.append("")
    lines.append("Similarity gains (percentage points)")
    lines.append(f"  interference    ZZ {gains.zz[0]:+6.1f}   XX {gains.xx[0]:+6.1f}")
    lines.append(f"  encode/analyze  ZZ {gains.zz[1]:+6.1f}   XX {gains.xx[1]:+6.1f}")
    p = report.params
    rel = overlap_to_visibility(p.overlap) / max_visibility()
    lines.append("")
    lines.append("Fitted parameters (full model)")
    lines.append(f"  overlap = {p.overlap:.6f}")
    lines.append(f"  relative visibility = {rel:.4f}")
    for field in ("eta_3a", "eta_3b", "eta_4a", "eta_4b"):
        lines.append(f"  {field} = {getattr(p, field):.6f}")
    if p.residual_phase_c or p.residual_phase_t:
        lines.append(f"  residual_phase_c = {p.residual_phase_c:.6f}")
        lines.append(f"  residual_phase_t = {p.residual_phase_t:.6f}")
    lines.append("")
    lines.append(f"objective (S_ZZ * S_XX) = {report.objective:.6f}")
    return "\n".join(lines) + "\n"


def similarity_doc(report: SimilarityReport) -> dict:
    """Structured single-document form of the report."""
    gains = report_errors_breakdown(report)
    return {
        "kind": "similarity_report",
        "rows": [{"label": r.label, "s_zz": r.s_zz, "s_xx": r.s_xx}
                 for r in report.rows],
        "gains_pp": {"ZZ": list(gains.zz), "XX": list(gains.xx)},
        "params": {f.name: getattr(report.params, f.name)
                   for f in dataclasses.fields(report.params)},
        "relative_visibility": overlap_to_visibility(report.params.overlap) / max_visibility(),
        "objective": report.objective,
    }


_SPEC_FIELDS = {
    "free_overlap": bool, "free_eta": bool, "free_phases": bool,
    "overlap_min": float, "overlap_max": float,
    "eta_delta_min": float, "eta_delta_max": float,
    "phase_min": float, "phase_max": float,
    "grid_points": int, "tolerance": float, "max_sweeps": int,
    "objective": str,
}


def fitspec_to_config(spec: FitSpec) -> str:
    lines = [
        f"free_overlap = {str(spec.free_overlap).lower()}",
        f"free_eta = {str(spec.free_eta).lower()}",
        f"free_phases = {str(spec.free_phases).lower()}",
        f"overlap_min = {spec.overlap_bounds[0]!r}",
        f"overlap_max = {spec.overlap_bounds[1]!r}",
        f"eta_delta_min = {spec.eta_delta_bounds[0]!r}",
        f"eta_delta_max = {spec.eta_delta_bounds[1]!r}",
        f"phase_min = {spec.phase_bounds[0]!r}",
        f"phase_max = {spec.phase_bounds[1]!r}",
        f"grid_points = {spec.grid_points}",
        f"tolerance = {spec.tolerance!r}",
        f"max_sweeps = {spec.max_sweeps}",
        f"objective = {spec.objective}",
    ]
    return "\n".join(lines) + "\n"


def fitspec_from_config(text: str) -> FitSpec:
    """Read optimizer controls from `key = value` lines.

    Unknown or repeated keys fail with the offending line number; keys
    left out keep their defaults.
    """
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno)
        key, _, rhs = line.partition("=")
        key = key.strip()
        rhs = rhs.strip()
        if key not in _SPEC_FIELDS:
            raise ParseError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ParseError(f"duplicate key {key!r}", lineno)
        kind = _SPEC_FIELDS[key]
        try:
            if kind is bool:
                if rhs not in ("true", "false"):
                    raise ValueError
                values[key] = rhs == "true"
            elif kind is str:
                values[key] = rhs
            else:
                values[key] = kind(rhs)
        except ValueError:
            raise ParseError(f"bad value for {key!r}", lineno) from None

    defaults = FitSpec()

    def bounds(prefix, default):
        lo = values.get(prefix + "_min", default[0])
        hi = values.get(prefix + "_max", default[1])
        return (float(lo), float(hi))

    try:
        return FitSpec(
            free_overlap=values.get("free_overlap", defaults.free_overlap),
            free_eta=values.get("free_eta", defaults.free_eta),
            free_phases=values.get("free_phases", defaults.free_phases),
            overlap_bounds=bounds("overlap", defaults.overlap_bounds),
            eta_delta_bounds=bounds("eta_delta", defaults.eta_delta_bounds),
            phase_bounds=bounds("phase", defaults.phase_bounds),
            grid_points=int(values.get("grid_points", defaults.grid_points)),
            tolerance=float(values.get("tolerance", defaults.tolerance)),
            max_sweeps=int(values.get("max_sweeps", defaults.max_sweeps)),
            objective=str(values.get("objective", defaults.objective)),
        )
    except DomainError as exc:
        raise ParseError(str(exc)) from None
