"""Acceptance criteria, one test per criterion.

Every test prints a single PASS/FAIL line straight to the terminal so the
run log doubles as an acceptance report.
"""

import time

import pytest

from regfall import cli, verify


@pytest.fixture
def report(capsys):
    def emit(res):
        with capsys.disabled():
            print("\n" + res.line())
        return res
    return emit


def _timed(check, **kw):
    t0 = time.perf_counter()
    res = check(**kw)
    res.seconds = time.perf_counter() - t0
    return res


def test_c01_index_theorem(report):
    res = report(_timed(verify.check_index_theorem, kmax=10))
    assert res.passed, res.detail
    assert res.seconds < 10.0, f"took {res.seconds:.1f}s"


def test_c02_critical_values(report):
    res = report(_timed(verify.check_critical_values, kmax=10))
    assert res.passed, res.detail


def test_c03_lagrangian_spectrum(report):
    res = report(_timed(verify.check_lag_spectrum, kmax=10))
    assert res.passed, res.detail


def test_c04_hamiltonian_spectrum(report):
    res = report(_timed(verify.check_ham_spectrum, kmax=10))
    assert res.passed, res.detail


def test_c05_norm_identities(report):
    res = report(_timed(verify.check_norms, kmax=10))
    assert res.passed, res.detail


def test_c06_gradient_checks(report):
    res = report(_timed(verify.check_gradients, seed=0, count=50, h=1e-5))
    assert res.passed, res.detail


def test_c07_domination_identity(report):
    res = report(_timed(verify.check_domination, seed=0, count=100))
    assert res.passed, res.detail


def test_c08_regularization(report):
    res = report(_timed(verify.check_regularization, seed=0, kmax=5))
    assert res.passed, res.detail


def test_c09_local_cz(report):
    res = report(_timed(verify.check_cz_local, seed=0, paths=5))
    assert res.passed, res.detail


def test_c10_disjointness(report):
    res = report(_timed(verify.check_disjointness, kmax=5))
    assert res.passed, res.detail


def test_c11_monotone_branches_and_odd_index(report):
    res = report(_timed(verify.check_monotone_branches, kmax=10))
    assert res.passed, res.detail


def test_c12_full_verify_runtime(report, capsys):
    t0 = time.perf_counter()
    code = cli.main(["verify", "--suite", "all", "--kmax", "5"])
    elapsed = time.perf_counter() - t0
    capsys.readouterr()
    res = verify.CheckResult("12", "verify --suite all --kmax 5", code == 0 and elapsed < 60.0,
                             f"exit {code} in {elapsed:.1f}s (limit 60s)", elapsed)
    report(res)
    assert res.passed, res.detail
