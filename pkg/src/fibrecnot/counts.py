"""Coincidence-count records: parsing, accidental subtraction, synthesis.

Count file format, one record per line under a basis header:

    # comment
    basis ZZ
    input 00 counts <c00> <c01> <c10> <c11> acc <a00> <a01> <a10> <a11> t <seconds>

Counts are raw coincidences per logical output, acc the estimated
accidental counts for the same window, t the integration time.  A basis
that appears must come with all four input rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParseError
from .metrics import BASES, INPUT_LABELS, TruthTable, logical_fidelity


@dataclass(frozen=True)
class CountRecord:
    basis: str
    input_label: str
    counts: tuple[int, int, int, int]
    accidentals: tuple[float, float, float, float]
    integration_time: float

    def __post_init__(self):
        if self.basis not in BASES:
            raise DomainError(f"unknown basis {self.basis!r}")
        if self.input_label not in INPUT_LABELS:
            raise DomainError(f"unknown input label {self.input_label!r}")
        if len(self.counts) != 4 or any(c < 0 for c in self.counts):
            raise DomainError("counts must be four non-negative integers")
        if len(self.accidentals) != 4 or any(a < 0 for a in self.accidentals):
            raise DomainError("accidentals must be four non-negative values")
        if not self.integration_time > 0:
            raise DomainError("integration time must be positive")


@dataclass(frozen=True)
class CountSet:
    """All count records of a run; any basis present is complete."""

    records: tuple[CountRecord, ...]

    def __post_init__(self):
        seen = set()
        for rec in self.records:
            key = (rec.basis, rec.input_label)
            if key in seen:
                raise DomainError(f"duplicate record for basis {rec.basis} input {rec.input_label}")
            seen.add(key)
        for basis in self.bases():
            missing = [lab for lab in INPUT_LABELS if (basis, lab) not in seen]
            if missing:
                raise DomainError(f"basis {basis} is missing inputs {missing}")

    def bases(self) -> tuple[str, ...]:
        return tuple(b for b in BASES if any(r.basis == b for r in self.records))

    def record(self, basis: str, input_label: str) -> CountRecord:
        for rec in self.records:
            if rec.basis == basis and rec.input_label == input_label:
                return rec
        raise DomainError(f"no record for basis {basis} input {input_label}")


@dataclass(frozen=True)
class CorrectedRecord:
    basis: str
    input_label: str
    values: tuple[float, float, float, float]
    clamped: tuple[bool, bool, bool, bool]
    integration_time: float


@dataclass(frozen=True)
class CorrectedSet:
    records: tuple[CorrectedRecord, ...]

    def bases(self) -> tuple[str, ...]:
        return tuple(b for b in BASES if any(r.basis == b for r in self.records))

    def record(self, basis: str, input_label: str) -> CorrectedRecord:
        for rec in self.records:
            if rec.basis == basis and rec.input_label == input_label:
                return rec
        raise DomainError(f"no record for basis {basis} input {input_label}")

    def clamped_outputs(self, basis: str) -> int:
        return sum(sum(r.clamped) for r in self.records if r.basis == basis)


def parse_counts(text: str) -> CountSet:
    """Parse the count file format with line-level diagnostics."""
    records: list[CountRecord] = []
    current_basis: str | None = None
    seen_lines: dict[tuple[str, str], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if fields[0] == "basis":
            if len(fields) != 2:
                raise ParseError("basis header needs exactly one value", lineno)
            if fields[1] not in BASES:
                raise ParseError(f"unknown basis {fields[1]!r}", lineno)
            current_basis = fields[1]
            continue
        if fields[0] != "input":
            raise ParseError(f"expected 'basis' or 'input', got {fields[0]!r}", lineno)
        if current_basis is None:
            raise ParseError("input line before any basis header", lineno)
        if len(fields) != 14 or fields[2] != "counts" or fields[7] != "acc" or fields[12] != "t":
            raise ParseError(
                "expected 'input <label> counts <4 ints> acc <4 values> t <seconds>'", lineno)
        label = fields[1]
        if label not in INPUT_LABELS:
            raise ParseError(f"unknown input label {label!r}", lineno)
        if (current_basis, label) in seen_lines:
            first = seen_lines[(current_basis, label)]
            raise ParseError(f"duplicate input {label} for basis {current_basis} "
                             f"(first seen on line {first})", lineno)
        seen_lines[(current_basis, label)] = lineno
        try:
            counts = tuple(int(f) for f in fields[3:7])
        except ValueError:
            raise ParseError("counts must be integers", lineno) from None
        try:
            acc = tuple(float(f) for f in fields[8:12])
            t = float(fields[13])
        except ValueError:
            raise ParseError("accidentals and time must be numeric", lineno) from None
        try:
            records.append(CountRecord(current_basis, label, counts, acc, t))
        except DomainError as exc:
            raise ParseError(str(exc), lineno) from None
    if not records:
        raise ParseError("no count records found")
    return CountSet(tuple(records))


def format_counts(count_set: CountSet, header: str | None = None) -> str:
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    for basis in count_set.bases():
        lines.append(f"basis {basis}")
        for label in INPUT_LABELS:
            rec = count_set.record(basis, label)
            counts = " ".join(str(c) for c in rec.counts)
            acc = " ".join(f"{a:.12g}" for a in rec.accidentals)
            lines.append(f"input {label} counts {counts} acc {acc} t {rec.integration_time:.12g}")
    return "\n".join(lines) + "\n"


def subtract_accidentals(counts: CountSet | CountRecord):
    """Accidental-corrected counts, clamped at zero with per-output flags.

    Accepts a single record or a whole set and returns the corrected
    counterpart; clamp flags record which outputs were pushed below zero
    by the subtraction.
    """
    if isinstance(counts, CountRecord):
        values = []
        clamped = []
        for c, a in zip(counts.counts, counts.accidentals):
            v = c - a
            clamped.append(v < 0)
            values.append(max(v, 0.0))
        return CorrectedRecord(counts.basis, counts.input_label,
                               tuple(values), tuple(clamped),
                               counts.integration_time)
    return CorrectedSet(tuple(subtract_accidentals(rec) for rec in counts.records))


def counts_to_truth_table(corrected: CorrectedSet, basis: str) -> TruthTable:
    """Row-normalized table from corrected counts; success rates are absent."""
    if basis not in corrected.bases():
        raise DomainError(f"no counts for basis {basis}")
    rows = np.zeros((4, 4))
    for i, label in enumerate(INPUT_LABELS):
        values = np.array(corrected.record(basis, label).values, dtype=float)
        total = values.sum()
        if total <= 0.0:
            raise DomainError(f"all corrected counts vanish for basis {basis} input {label}")
        rows[i] = values / total
    return TruthTable(basis, rows, success=None)


def synth_counts(table: TruthTable, trials: int, accidental_mean: float,
                 seed: int | None = None, integration_time: float = 1.0,
                 rng: np.random.Generator | None = None) -> CountSet:
    """Draw synthetic counts from a truth table.

    Parameters
    ----------
    table: source probabilities, one multinomial draw of `trials` events
        per input row.
    accidental_mean: mean of the independent Poisson accidentals added to
        every output channel; the same mean is recorded in the accidentals
        field, the way a measured accidental estimate would be.
    seed: seeds a fresh generator; ignored when `rng` is given, which lets
        callers thread one generator through several tables.
    """
    if trials < 1:
        raise DomainError("trials must be at least 1")
    if accidental_mean < 0:
        raise DomainError("accidental mean must be non-negative")
    if rng is None:
        rng = np.random.default_rng(seed)
    records = []
    for i, label in enumerate(INPUT_LABELS):
        signal = rng.multinomial(trials, table.probabilities[i])
        noise = rng.poisson(accidental_mean, size=4)
        counts = tuple(int(c) for c in signal + noise)
        acc = (float(accidental_mean),) * 4
        records.append(CountRecord(table.basis, label, counts, acc, integration_time))
    return CountSet(tuple(records))


@dataclass(frozen=True)
class BootstrapResult:
    fidelity: float
    error: float
    resamples: int


def bootstrap_fidelity_error(count_set: CountSet, basis: str, ideal: TruthTable,
                             resamples: int = 200, seed: int = 0) -> BootstrapResult:
    """Standard error of the logical fidelity under Poisson resampling.

    Each corrected count is treated as the mean of a Poisson variable,
    redrawn `resamples` times (at least 100); the fidelity is recomputed
    per resample and its sample standard deviation reported.
    """
    if resamples < 100:
        raise DomainError("bootstrap needs at least 100 resamples")
    corrected = subtract_accidentals(count_set)
    point = logical_fidelity(counts_to_truth_table(corrected, basis), ideal)
    lams = np.array([corrected.record(basis, lab).values for lab in INPUT_LABELS])
    rng = np.random.default_rng(seed)
    fids = np.empty(resamples)
    for k in range(resamples):
        draw = rng.poisson(lams).astype(float)
        totals = draw.sum(axis=1)
        # a fully zero resampled row carries no information; spread it evenly
        draw[totals == 0] = 0.25
        totals[totals == 0] = 1.0
        table = TruthTable(basis, draw / totals[:, None], success=None)
        fids[k] = logical_fidelity(table, ideal)
    return BootstrapResult(point, float(np.std(fids, ddof=1)), resamples)
