"""Command line interface: workflows, exit codes, file outputs."""

import subprocess
import sys

import pytest
from click.testing import CliRunner

from fibrecnot.cli import main

QUICK_FITSPEC = "free_eta = false\ngrid_points = 9\nmax_sweeps = 4\n"


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, args, **kwargs):
    return runner.invoke(main, args, catch_exceptions=False, **kwargs)


def test_simulate_ideal_prints_tables(runner):
    result = invoke(runner, ["simulate", "--ideal"])
    assert result.exit_code == 0
    assert "# basis: ZZ" in result.stdout
    assert "# basis: XX" in result.stdout
    assert result.stderr == ""


def test_simulate_single_basis(runner):
    result = invoke(runner, ["simulate", "--ideal", "--basis", "XX"])
    assert result.exit_code == 0
    assert "# basis: XX" in result.stdout
    assert "# basis: ZZ" not in result.stdout


def test_simulate_writes_doc_format(runner, tmp_path):
    out = tmp_path / "tables.json"
    result = invoke(runner, ["--out", str(out), "--format", "doc",
                             "simulate", "--ideal"])
    assert result.exit_code == 0
    assert f"wrote {out}" in result.stdout
    assert out.read_text().startswith("{")


def test_simulate_bars_file(runner, tmp_path):
    bars = tmp_path / "bars.csv"
    result = invoke(runner, ["simulate", "--ideal", "--bars", str(bars)])
    assert result.exit_code == 0
    lines = bars.read_text().strip().splitlines()
    assert lines[0] == "basis,input,output,probability"
    assert len(lines) == 33


def test_simulate_requires_a_source(runner):
    result = runner.invoke(main, ["simulate"])
    assert result.exit_code == 2
    assert "--ideal or --config" in result.stderr


def test_simulate_missing_config_file(runner, tmp_path):
    result = runner.invoke(main, ["simulate", "--config",
                                  str(tmp_path / "absent.cfg")])
    assert result.exit_code == 2


def test_unknown_basis_is_a_usage_error(runner):
    result = runner.invoke(main, ["simulate", "--ideal", "--basis", "QQ"])
    assert result.exit_code == 2


def test_synth_requires_positive_trials(runner):
    result = runner.invoke(main, ["synth", "--ideal", "--trials", "0"])
    assert result.exit_code == 2


def test_synth_to_stdout(runner):
    result = invoke(runner, ["--seed", "9", "synth", "--ideal",
                             "--trials", "1000"])
    assert result.exit_code == 0
    assert "basis ZZ" in result.stdout
    assert result.stdout.count("input") == 8


def test_synth_file_is_seed_deterministic(runner, tmp_path):
    a, b, c = (tmp_path / name for name in ("a.txt", "b.txt", "c.txt"))
    invoke(runner, ["--seed", "5", "--out", str(a), "synth", "--ideal",
                    "--trials", "2000", "--accidental-mean", "1.5"])
    invoke(runner, ["--seed", "5", "--out", str(b), "synth", "--ideal",
                    "--trials", "2000", "--accidental-mean", "1.5"])
    invoke(runner, ["--seed", "6", "--out", str(c), "synth", "--ideal",
                    "--trials", "2000", "--accidental-mean", "1.5"])
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes() != c.read_bytes()


def test_full_workflow(runner, tmp_path):
    counts = tmp_path / "counts.txt"
    synth = invoke(runner, ["--seed", "3", "--out", str(counts), "synth",
                            "--ideal", "--trials", "50000",
                            "--accidental-mean", "2"])
    assert synth.exit_code == 0
    assert f"wrote {counts}" in synth.stdout

    report = tmp_path / "analysis.json"
    analyze = invoke(runner, ["--seed", "1", "--out", str(report),
                              "--format", "doc", "analyze", str(counts),
                              "--resamples", "120"])
    assert analyze.exit_code == 0
    assert "F_ZZ" in analyze.stdout

    rendered = invoke(runner, ["report", str(report)])
    assert rendered.exit_code == 0
    # the report command reproduces the analyze text exactly
    analyze_text = analyze.stdout[:analyze.stdout.index("wrote ")]
    assert rendered.stdout == analyze_text


def test_fit_with_quick_spec(runner, tmp_path):
    counts = tmp_path / "counts.txt"
    spec = tmp_path / "quick.cfg"
    spec.write_text(QUICK_FITSPEC)
    invoke(runner, ["--seed", "3", "--out", str(counts), "synth", "--ideal",
                    "--trials", "50000"])
    params_out = tmp_path / "fitted.cfg"
    result = invoke(runner, ["fit", str(counts), "--fitspec", str(spec),
                             "--params-out", str(params_out)])
    assert result.exit_code == 0
    assert "IDEAL" in result.stdout
    assert "FULL MODEL" in result.stdout
    assert f"wrote {params_out}" in result.stdout
    assert "overlap" in params_out.read_text()


def test_fit_rejects_single_basis(runner, tmp_path):
    counts = tmp_path / "zz.txt"
    invoke(runner, ["--out", str(counts), "synth", "--ideal", "--basis", "ZZ",
                    "--trials", "1000"])
    result = runner.invoke(main, ["fit", str(counts)])
    assert result.exit_code == 1
    assert "both bases" in result.stderr


def test_malformed_counts_reports_line(runner, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("basis ZZ\nnot a count line\n")
    result = runner.invoke(main, ["analyze", str(bad)])
    assert result.exit_code == 1
    assert "line 2" in result.stderr


def test_report_rejects_unknown_kind(runner, tmp_path):
    doc = tmp_path / "doc.json"
    doc.write_text('{"kind": "mystery"}\n')
    result = runner.invoke(main, ["report", str(doc)])
    assert result.exit_code == 1


def test_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "fibrecnot.cli", "simulate", "--ideal",
         "--basis", "ZZ"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "# basis: ZZ" in proc.stdout
