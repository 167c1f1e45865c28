"""Acceptance gate: nine criteria, one pass/fail verdict line each.

Each test computes its checks, registers a verdict with the shared
recorder (printed in the terminal summary), and then asserts.
"""

import json
import time
import warnings

import numpy as np
import pytest
from click.testing import CliRunner

from conftest import random_row_stochastic, random_unitary
from fibrecnot.cli import main as cli_main
from fibrecnot.gate import (GateParams, max_visibility, model_truth_table,
                            overlap_to_visibility, params_to_config,
                            visibility_to_overlap)
from fibrecnot.metrics import (average_fidelity_bounds, ideal_truth_table,
                               logical_fidelity, process_fidelity_bounds,
                               similarity)
from fibrecnot.modes import ModeLayout, beamsplitter_block, embed
from fibrecnot.fitting import report_errors_breakdown
from fibrecnot.twophoton import brute_force_oracle, evolve_pair, pair_state

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from fibrecnot.service import create_app

ZZ_PERMUTATION = (0, 1, 3, 2)
XX_PERMUTATION = (0, 3, 2, 1)
INTERFERING_ROWS = {"ZZ": (2, 3), "XX": (1, 3)}
EXACT_ROWS = {"ZZ": (0, 1), "XX": (0, 2)}


def test_acceptance_1_ideal_truth_tables_via_cli(acceptance_verdict, tmp_path):
    out = tmp_path / "tables.json"
    started = time.monotonic()
    result = CliRunner().invoke(
        cli_main, ["--out", str(out), "--format", "doc", "simulate", "--ideal"],
        catch_exceptions=False)
    elapsed = time.monotonic() - started

    doc = json.loads(out.read_text())
    checks = [result.exit_code == 0, doc["kind"] == "truth_table_set",
              elapsed < 1.0]
    worst = 0.0
    for table, perm in zip(doc["tables"], (ZZ_PERMUTATION, XX_PERMUTATION)):
        probs = np.array(table["probabilities"])
        expected = np.zeros((4, 4))
        expected[np.arange(4), perm] = 1.0
        worst = max(worst, float(np.max(np.abs(probs - expected))))
        worst = max(worst, float(np.max(np.abs(np.array(table["success"])
                                               - 1.0 / 9.0))))
    checks.append(worst < 1e-9)

    passed = all(checks)
    acceptance_verdict(
        "1 ideal truth tables: CLI permutations + success 1/9",
        passed, f"max error {worst:.2e}, {elapsed:.2f} s")
    assert passed


def test_acceptance_2_process_fidelity_bounds(acceptance_verdict):
    bounds = process_fidelity_bounds(0.90, 0.89)
    average = average_fidelity_bounds(0.90, 0.89)
    passed = (bounds == (0.79, 0.89)
              and round(average[0], 2) == 0.83
              and round(average[1], 2) == 0.91)
    acceptance_verdict(
        "2 fidelity bounds: (0.90,0.89) -> (0.79,0.89), avg (0.83,0.91)",
        passed, f"bounds={bounds}, avg=({average[0]:.4f},{average[1]:.4f})")
    assert passed


def test_acceptance_3_similarity_properties_and_breakdown(acceptance_verdict):
    started = time.monotonic()
    rng = np.random.default_rng(3)
    self_err = 0.0
    symmetric = True
    in_range = True
    for _ in range(1000):
        m = random_row_stochastic(rng)
        e = random_row_stochastic(rng)
        self_err = max(self_err, abs(similarity(m, m) - 1.0))
        s_me, s_em = similarity(m, e), similarity(e, m)
        symmetric = symmetric and s_me == s_em
        in_range = in_range and 0.0 <= s_me <= 1.0

    gains = report_errors_breakdown((0.895, 0.974, 0.997),
                                    (0.883, 0.960, 0.998))
    table_check = (max(abs(gains.zz[0] - 7.9), abs(gains.zz[1] - 2.3),
                       abs(gains.xx[0] - 7.7), abs(gains.xx[1] - 3.8)) < 1e-9)
    elapsed = time.monotonic() - started

    passed = (self_err < 1e-12 and symmetric and in_range and table_check
              and elapsed < 1.0)
    acceptance_verdict(
        "3 similarity: S(M,M)=1, symmetric, [0,1], gains (7.9,2.3)/(7.7,3.8)",
        passed, f"|S(M,M)-1| max {self_err:.1e}, {elapsed:.2f} s")
    assert passed


def test_acceptance_4_equal_diagonal_errors_both_bases(acceptance_verdict):
    started = time.monotonic()
    worst_split = 0.0
    worst_exact = 0.0
    for x in np.linspace(0.0, 1.0, 11):
        for basis in ("ZZ", "XX"):
            probs = model_truth_table(GateParams(overlap=float(x)),
                                      basis).probabilities
            ideal = ideal_truth_table(basis).probabilities
            r1, r2 = INTERFERING_ROWS[basis]
            worst_split = max(worst_split, abs(probs[r1, r1] - probs[r2, r2]))
            for row in EXACT_ROWS[basis]:
                worst_exact = max(worst_exact,
                                  float(np.max(np.abs(probs[row] - ideal[row]))))
    elapsed = time.monotonic() - started
    passed = worst_split < 1e-9 and worst_exact < 1e-9 and elapsed < 5.0
    acceptance_verdict(
        "4 overlap sweep: equal diagonal errors, unaffected rows exact",
        passed, f"split {worst_split:.1e}, exact {worst_exact:.1e}, "
        f"{elapsed:.2f} s")
    assert passed


def test_acceptance_5_oracle_equivalence(acceptance_verdict):
    started = time.monotonic()
    rng = np.random.default_rng(5)
    worst_amp = 0.0
    worst_norm = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 9))
        layout = ModeLayout(tuple(f"M{k}" for k in range(n)))
        circuit = embed(layout, random_unitary(rng, n), layout.labels)
        for i in range(n):
            for j in range(i, n):
                pair = (f"M{i}", f"M{j}")
                fast = evolve_pair(circuit, pair)
                slow = brute_force_oracle(circuit, pair)
                keys = set(fast.amplitudes) | set(slow.amplitudes)
                worst_amp = max(worst_amp,
                                max(abs(fast.amplitudes.get(k, 0.0)
                                        - slow.amplitudes.get(k, 0.0))
                                    for k in keys))
                total = sum(abs(a) ** 2 for a in fast.amplitudes.values())
                worst_norm = max(worst_norm, abs(total - 1.0))
    elapsed = time.monotonic() - started
    passed = worst_amp < 1e-9 and worst_norm < 1e-9 and elapsed < 30.0
    acceptance_verdict(
        "5 oracle equivalence: 200 random unitaries, all input pairs",
        passed, f"amp {worst_amp:.1e}, norm {worst_norm:.1e}, {elapsed:.1f} s")
    assert passed


def test_acceptance_6_hom_coincidence(acceptance_verdict):
    layout = ModeLayout(("A", "B"))

    def coincidence(reflectivity, engine):
        circuit = embed(layout, beamsplitter_block(reflectivity), ("A", "B"))
        out = engine(circuit, ("A", "B"))
        return abs(out.amplitude("A", "B")) ** 2

    null = coincidence(0.5, evolve_pair)
    third = coincidence(1.0 / 3.0, evolve_pair)
    oracle_third = coincidence(1.0 / 3.0, brute_force_oracle)
    passed = (null < 1e-12
              and abs(third - 1.0 / 9.0) < 1e-12
              and abs(third - oracle_third) < 1e-12)
    acceptance_verdict(
        "6 HOM: null at R=1/2, (T-R)^2 = 1/9 at R=1/3",
        passed, f"null {null:.1e}, R=1/3 -> {third:.12f}")
    assert passed


def test_acceptance_7_visibility_round_trip(acceptance_verdict):
    started = time.monotonic()
    worst = 0.0
    for x in np.linspace(0.0, 1.0, 101):
        v = overlap_to_visibility(float(x))
        worst = max(worst, abs(visibility_to_overlap(v) - float(x)))
    zero = overlap_to_visibility(0.0)
    elapsed = time.monotonic() - started
    passed = worst < 1e-9 and zero == 0.0 and elapsed < 5.0
    acceptance_verdict(
        "7 visibility round trip: 101 points, V(0)=0",
        passed, f"max error {worst:.1e}, {elapsed:.2f} s")
    assert passed


def test_acceptance_8_synthetic_round_trip(acceptance_verdict):
    started = time.monotonic()
    overlap_true = visibility_to_overlap(0.94 * max_visibility())
    params_true = GateParams(overlap=overlap_true,
                             eta_3a=1.0 - 0.02, eta_3b=0.5 - 0.04,
                             eta_4a=1.0 - 0.03, eta_4b=0.5 - 0.05)
    trials = 100_000
    client = TestClient(create_app())

    synth = client.post("/synth", json={
        "config": params_to_config(params_true), "trials": trials,
        "accidental_mean": 0.01 * trials / 4.0, "seed": 2026})
    counts_text = synth.json()["counts"]

    analyze = client.post("/analyze", json={"counts": counts_text,
                                            "resamples": 200, "seed": 11})
    report = analyze.json()["doc"]
    fid_ok = True
    fid_detail = []
    for basis, f_key, e_key in (("ZZ", "f_zz", "f_zz_err"),
                                ("XX", "f_xx", "f_xx_err")):
        f_true = logical_fidelity(model_truth_table(params_true, basis),
                                  ideal_truth_table(basis))
        pull = abs(report[f_key] - f_true) / report[e_key]
        fid_ok = fid_ok and pull <= 3.0
        fid_detail.append(f"{basis} {pull:.2f} sigma")

    fit = client.post("/fit", json={"counts": counts_text}).json()
    fitted_overlap = fit["doc"]["params"]["overlap"]
    overlap_ok = abs(fitted_overlap - overlap_true) < 0.01
    rows = fit["doc"]["rows"]
    monotone = all(
        rows[0][key] <= rows[1][key] + 1e-12
        and rows[1][key] <= rows[2][key] + 1e-12
        for key in ("s_zz", "s_xx"))
    labels_ok = [r["label"] for r in rows] == ["IDEAL", "INTERFERENCE",
                                               "FULL MODEL"]
    elapsed = time.monotonic() - started

    passed = (synth.status_code == 200 and fid_ok and overlap_ok
              and monotone and labels_ok and elapsed < 120.0)
    acceptance_verdict(
        "8 synthetic round trip: F within 3 sigma, overlap within 0.01,"
        " monotone stages",
        passed, f"{', '.join(fid_detail)}, overlap err "
        f"{abs(fitted_overlap - overlap_true):.1e}, {elapsed:.1f} s")
    assert passed


def test_acceptance_9_seeded_determinism(acceptance_verdict, tmp_path):
    runner = CliRunner()

    def run(args):
        result = runner.invoke(cli_main, args, catch_exceptions=False)
        assert result.exit_code == 0

    paths = {name: tmp_path / name for name in
             ("s1", "s2", "a1", "a2", "t1", "t2")}
    for rerun in ("1", "2"):
        run(["--seed", "42", "--out", str(paths["s" + rerun]), "synth",
             "--ideal", "--trials", "30000", "--accidental-mean", "3"])
        run(["--seed", "7", "--format", "doc",
             "--out", str(paths["a" + rerun]),
             "analyze", str(paths["s" + rerun]), "--resamples", "150"])
        run(["--format", "doc", "--out", str(paths["t" + rerun]),
             "simulate", "--ideal"])

    identical = all(paths[k + "1"].read_bytes() == paths[k + "2"].read_bytes()
                    for k in ("s", "a", "t"))
    acceptance_verdict(
        "9 determinism: seeded commands write byte-identical files",
        identical, "synth, analyze, simulate outputs compared")
    assert identical
