"""Truth tables, figures of merit, and their serialized forms."""

import numpy as np
import pytest

from fibrecnot.errors import DomainError, ParseError
from fibrecnot.metrics import (TruthTable, average_fidelity_bounds,
                               build_fidelity_report, fidelity_doc,
                               ideal_truth_table, logical_fidelity,
                               process_fidelity_bounds, render_fidelity_text,
                               similarity, table_bars_csv, table_doc,
                               table_from_doc, table_from_text, table_to_text)

from conftest import random_row_stochastic


def test_ideal_tables_are_the_frozen_permutations():
    zz = ideal_truth_table("ZZ")
    assert np.array_equal(zz.probabilities, np.eye(4)[[0, 1, 3, 2]])
    xx = ideal_truth_table("XX")
    assert np.array_equal(xx.probabilities, np.eye(4)[[0, 3, 2, 1]])
    for table in (zz, xx):
        assert np.allclose(table.success, 1.0 / 9.0)


def test_truth_table_requires_row_stochastic_rows():
    bad = np.full((4, 4), 0.3)
    with pytest.raises(DomainError):
        TruthTable("ZZ", bad)


def test_truth_table_rejects_negative_entries():
    rows = np.eye(4)[[0, 1, 3, 2]].copy()
    rows[0, 0] = 1.001
    rows[0, 1] = -0.001
    with pytest.raises(DomainError):
        TruthTable("ZZ", rows)


def test_truth_table_success_must_be_physical():
    rows = np.eye(4)[[0, 1, 3, 2]]
    with pytest.raises(DomainError):
        TruthTable("ZZ", rows, success=np.array([0.1, 0.1, 0.1, 1.5]))


def test_truth_table_arrays_are_read_only():
    table = ideal_truth_table("ZZ")
    with pytest.raises(ValueError):
        table.probabilities[0, 0] = 0.5


def test_logical_fidelity_of_ideal_is_one():
    for basis in ("ZZ", "XX"):
        ideal = ideal_truth_table(basis)
        assert logical_fidelity(ideal, ideal) == pytest.approx(1.0, abs=1e-12)


def test_logical_fidelity_rejects_mismatched_bases():
    with pytest.raises(DomainError):
        logical_fidelity(ideal_truth_table("ZZ"), ideal_truth_table("XX"))


def test_process_fidelity_bounds_reference_values():
    bounds = process_fidelity_bounds(0.90, 0.89)
    assert bounds == (0.79, 0.89)


def test_process_fidelity_lower_bound_unclamped():
    lower, upper = process_fidelity_bounds(0.4, 0.5)
    assert lower == pytest.approx(-0.1, abs=1e-12)
    assert upper == 0.4


def test_average_fidelity_bounds_reference_values():
    lower, upper = average_fidelity_bounds(0.90, 0.89)
    assert round(lower, 2) == 0.83
    assert round(upper, 2) == 0.91


def test_similarity_self_is_one_and_symmetric():
    rng = np.random.default_rng(808)
    for _ in range(200):
        m = random_row_stochastic(rng)
        e = random_row_stochastic(rng)
        assert abs(similarity(m, m) - 1.0) < 1e-12
        s = similarity(m, e)
        assert 0.0 <= s <= 1.0
        assert abs(s - similarity(e, m)) < 1e-15


def test_similarity_detects_disjoint_support():
    m = np.eye(4)
    e = np.eye(4)[[1, 0, 3, 2]]
    assert similarity(m, e) == 0.0


def test_similarity_accepts_tables_and_arrays():
    table = ideal_truth_table("ZZ")
    assert similarity(table, table.probabilities) == pytest.approx(1.0, abs=1e-12)


def test_table_text_round_trip():
    table = ideal_truth_table("XX")
    text = table_to_text(table)
    back = table_from_text(text)
    assert back.basis == "XX"
    assert np.allclose(back.probabilities, table.probabilities, atol=1e-12)
    assert np.allclose(back.success, table.success, atol=1e-12)


def test_table_text_round_trip_without_success():
    table = TruthTable("ZZ", np.eye(4)[[0, 1, 3, 2]], success=None)
    back = table_from_text(table_to_text(table))
    assert back.success is None


def test_table_from_text_reports_line_numbers():
    text = "# basis: ZZ\n1 0 0 0\n1 0 0\n0 0 1 0\n0 0 0 1\n"
    with pytest.raises(ParseError) as err:
        table_from_text(text)
    assert "line 3" in str(err.value)


def test_table_from_text_requires_basis_header():
    with pytest.raises(ParseError):
        table_from_text("1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n")


def test_table_doc_round_trip():
    table = ideal_truth_table("ZZ")
    doc = table_doc(table)
    assert doc["kind"] == "truth_table"
    back = table_from_doc(doc)
    assert np.allclose(back.probabilities, table.probabilities)
    assert back.basis == "ZZ"


def test_table_doc_rejects_wrong_kind():
    with pytest.raises(ParseError):
        table_from_doc({"kind": "recipe"})


def test_bars_csv_layout():
    zz = ideal_truth_table("ZZ")
    xx = ideal_truth_table("XX")
    csv = table_bars_csv(zz, xx)
    lines = csv.strip().splitlines()
    assert lines[0] == "basis,input,output,probability"
    assert len(lines) == 1 + 16 * 2
    assert lines[1] == "ZZ,00,00,1"
    assert sum(1 for ln in lines if ln.startswith("XX,")) == 16


def test_fidelity_report_notes_negative_lower_bound():
    report = build_fidelity_report(f_zz=0.4, f_xx=0.5)
    assert any("negative" in note for note in report.notes)


def test_fidelity_report_notes_missing_basis():
    report = build_fidelity_report(f_zz=0.9)
    assert report.process_lower is None
    assert any("XX" in note for note in report.notes)


def test_fidelity_doc_and_text_cover_all_fields():
    report = build_fidelity_report(f_zz=0.90, f_xx=0.89, f_zz_err=0.02,
                                   f_xx_err=0.02, resamples=200)
    doc = fidelity_doc(report)
    assert doc["kind"] == "analysis_report"
    assert doc["process_fidelity"] == [report.process_lower, report.process_upper]
    text = render_fidelity_text(report)
    assert "F_ZZ = 0.9000 +- 0.0200" in text
    assert "0.7900 <= F_P <= 0.8900" in text
    assert "200 Poisson bootstrap" in text
