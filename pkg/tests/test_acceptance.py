"""Acceptance criteria, one test per criterion.

Runs every criterion at its frozen configuration (seeds, sample sizes,
tolerances are pinned in unanimity.verify) and prints one pass/fail line
per criterion. Run with `pytest tests/test_acceptance.py -v -s` to see the
lines; the whole module takes a few minutes.
"""

import json
import sys

import pytest

from unanimity import verify
from unanimity.cli import main


def _run(criterion: str, suite_name: str):
    result = verify.run_suite(suite_name)
    status = "PASS" if result.passed else "FAIL"
    print(f"[{status}] {criterion} ({suite_name}, {result.seconds:.1f}s)")
    for check in result.checks:
        print("    " + check.line())
    sys.stdout.flush()
    failed = [c for c in result.checks if not c.passed]
    assert not failed, f"{suite_name}: {[c.name for c in failed]}"


def test_criterion_01_predicate_equivalence():
    """10^6 random (hull, pair) instances per domain; 0 disagreements."""
    _run("criterion 1: predicate equivalence", "predicates")


def test_criterion_02_monotonicity():
    """10^5 accepted instances; shrinking the hull never flips the winner."""
    _run("criterion 2: acceptance monotone under hull shrinking", "monotonicity")


def test_criterion_03_dual_estimator_agreement():
    """Event vs chord-ball integral within 3 combined stderr on 10 caps/domain."""
    _run("criterion 3: dual-estimator agreement", "lemma33")


def test_criterion_04_interval_growth():
    """Interval T=1e4, 500 trials: log fit r^2 >= 0.95, decay gamma near 1."""
    _run("criterion 4: interval growth", "growth-interval")


def test_criterion_05_disk_growth():
    """Disk T=1e5: power exponent in [0.08, 0.18], decay gamma near 7/8."""
    _run("criterion 5: disk growth", "growth-disk")


def test_criterion_06_square_growth():
    """Square T=1e5: log family beats power; power exponent < 0.05."""
    _run("criterion 6: square growth", "growth-square")


def test_criterion_07_segment_ratio():
    """Disk segment ratios Pr/delta^4 above the frozen constant, two seeds."""
    _run("criterion 7: segment lower-bound ratio", "lemma41")


def test_criterion_08_triangle_ratio():
    """Triangular-cap probability >= a^4 (1 + ln(b/a)) / 2^11, 6 grid points."""
    _run("criterion 8: triangle explicit bound", "lemma43")


def test_criterion_09_phi_scaling():
    """Phi(lambda)/lambda^(7/8) bounded (spread < 3) on [1e-5, 1e-4]."""
    _run("criterion 9: phi scaling", "lemma51")


def test_criterion_10_upper_bound_consistency():
    """Empirical Pr[X_t] <= frozen C times the exp(-t f) integral."""
    _run("criterion 10: acceptance upper bound", "theorem31")


def test_criterion_11_determinism():
    """Bit-identical outputs across workers and reruns."""
    _run("criterion 11: determinism", "determinism")


def test_criterion_11_cli_byte_identical(tmp_path):
    """CLI-level determinism: byte-for-byte equal CSV across 1 vs 8 workers
    and across consecutive runs."""
    base = ["simulate", "--domain", "disk", "--rounds", "2000", "--trials", "16",
            "--seed", "1111"]
    paths = [tmp_path / n for n in ("w1.csv", "w8.csv", "again.csv")]
    assert main(base + ["--workers", "1", "--out", str(paths[0])]) == 0
    assert main(base + ["--workers", "8", "--out", str(paths[1])]) == 0
    assert main(base + ["--workers", "8", "--out", str(paths[2])]) == 0
    blobs = [p.read_bytes() for p in paths]
    ok = blobs[0] == blobs[1] == blobs[2]
    print(f"[{'PASS' if ok else 'FAIL'}] criterion 11 (CLI byte-identical outputs)")
    assert ok


def test_verify_cli_reports_machine_readable(tmp_path):
    """The verify command emits a JSON report with observed values and
    thresholds and exits 0 only when every check passes."""
    out = tmp_path / "report.json"
    rc = main(["verify", "--suite", "lemma43", "--out", str(out)])
    doc = json.loads(out.read_text())
    assert rc == 0 and doc["passed"]
    check = doc["suites"][0]["checks"][0]
    assert {"name", "observed", "threshold", "passed", "comparison"} <= set(check)
