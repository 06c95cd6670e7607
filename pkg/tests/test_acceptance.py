"""Acceptance criteria 1-12, each at its stated tolerance and time budget.

Every test prints one ``criterion N: PASS|FAIL`` line straight to the
terminal, whatever pytest's capture setting.
"""
import json
import time

import pytest

from polyfock import checks
from polyfock.cli import main

RESULTS = {}


def _report(capsys, number, ok, elapsed, budget, detail):
    ok = bool(ok) and elapsed < budget
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({elapsed:.1f}s / {budget:.0f}s) {detail}"
    with capsys.disabled():
        print("\n" + line)
    RESULTS[number] = ok
    assert ok, line


def _run(capsys, number, budget, fn):
    t0 = time.perf_counter()
    res = fn()
    elapsed = time.perf_counter() - t0
    _report(capsys, number, res.passed, elapsed, budget,
            f"{res.name} value={res.value:.3g} threshold={res.threshold:g}")
    return res


def test_criterion_01_hermite_orthonormality(capsys):
    _run(capsys, 1, 5, lambda: checks.hermite_orthonormality(8))


def test_criterion_02_stft_isometry(capsys):
    _run(capsys, 2, 30, lambda: checks.stft_isometry(64, seed=0))


def test_criterion_03_bargmann(capsys):
    t0 = time.perf_counter()
    a = checks.bargmann_hermite(6)
    b = checks.bargmann_basis(3, 3)
    _report(capsys, 3, a.passed and b.passed, time.perf_counter() - t0, 60,
            f"B(h_n) err={a.value:.3g} (<1e-6), B^k(h_m) err={b.value:.3g} (<1e-5)")


def test_criterion_04_basis_gram(capsys):
    _run(capsys, 4, 60, lambda: checks.basis_gram(3, 5))


def test_criterion_05_polyanalytic_ladder(capsys):
    res = _run(capsys, 5, 60, lambda: checks.polyanalytic_ladder(3, 16, seed=0))
    assert res.details["example_residual"] < 1e-6


def test_criterion_06_isometries(capsys):
    _run(capsys, 6, 60, lambda: checks.isometries(4, seed=0))


def test_criterion_07_s0_norms(capsys):
    res = _run(capsys, 7, 60, lambda: checks.s0_norms(4))
    assert res.details["n0_formula"] == 2.0


def test_criterion_08_lattice_algebra(capsys):
    res = _run(capsys, 8, 10, lambda: checks.lattice_algebra(32, 3, seed=0))
    assert res.details["adjoint_point_sets"]


def test_criterion_09_nyquist_bracketing(capsys):
    res = _run(capsys, 9, 30 * 60, lambda: checks.nyquist_bracketing(seed=0))
    assert len(res.details["verdicts"]) == 3 * 2 * 4


def test_criterion_10_duality(capsys):
    res = _run(capsys, 10, 20 * 60, lambda: checks.duality(seed=0))
    assert len(res.details["pairs"]) == 3 * 2 * 2


def test_criterion_11_multiplex(capsys):
    _run(capsys, 11, 5 * 60, lambda: checks.multiplex_round_trip(10.0, seed=0))


def test_criterion_12_determinism(capsys, tmp_path):
    t0 = time.perf_counter()
    codes = [main(["verify", "--suite", "fast", "--seed", "7", "--out", str(tmp_path / d)])
             for d in ("a", "b")]
    a = (tmp_path / "a" / "verify_fast.json").read_bytes()
    b = (tmp_path / "b" / "verify_fast.json").read_bytes()
    ok = codes == [0, 0] and a == b and json.loads(a)["passed"]
    _report(capsys, 12, ok, time.perf_counter() - t0, 10 * 60,
            f"exit codes {codes}, identical={a == b}")
