import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from regfall import fourier_core as fc
from regfall import hamiltonian as ham
from regfall import lagrangian as lag
from regfall.cz_local import winding_of_loop
from regfall.errors import BadMode, BadRange, TruncationTooSmall, ZeroLoop
from regfall.fourier_core import TrigPoly

from conftest import loops, trigpolys

PI = np.pi
# mpmath oracles (30 digits)
HALF_C1 = 1.3512838450317451       # 1/(2 c_1^2)
FOUR_C1 = 29.215488477500437       # 4/c_1^4
HAT_1 = (-91.474142528323458, 5.1789609408538935)
HAT_2 = (-227.0560235838676, 8.3457994863951042)
LAM_K1_N3 = (-8.1560940673831642, 38.722866389915346)
LAM_K2_N1 = (1.5968819972114115, 74.166565231427453)

ONE = ham.PhaseLoop(TrigPoly.const(1.0), TrigPoly.zero())


def test_H_examples():
    assert ham.hamiltonian_H(ONE) == -1.0
    for k in (1, 3):
        cp = ham.critical_point_ham(k)
        assert ham.hamiltonian_H(cp) == pytest.approx(-1 / cp.c_k ** 2, rel=1e-13)
    with pytest.raises(ZeroLoop):
        ham.hamiltonian_H(ham.PhaseLoop(TrigPoly.zero(1), TrigPoly.const(1.0)))


@given(loops(), trigpolys())
def test_H_even_in_y(x, y):
    assert ham.hamiltonian_H(ham.PhaseLoop(x, y)) == ham.hamiltonian_H(ham.PhaseLoop(x, -y))


def test_action_examples():
    assert ham.action_AH(ONE) == 1.0
    for k in range(1, 6):
        assert ham.action_AH(ham.critical_point_ham(k)) == pytest.approx(lag.critical_value(k),
                                                                         rel=1e-13)


@given(loops(), trigpolys(max_N=4))
def test_domination(x, y):
    p = ham.PhaseLoop(x, y)
    gap = ham.domination_gap(p)
    assert gap >= 0.0
    assert ham.action_AH(p) <= lag.action_B(x) * (1 + 1e-12)
    assert ham.action_AH(p) + gap == pytest.approx(lag.action_B(x), rel=1e-10)


@given(loops())
def test_domination_equality_on_fiber(x):
    assert ham.domination_gap(ham.PhaseLoop(x, ham.legendre_fiber(x))) <= 1e-12 * lag.action_B(x)


def test_diff_AH_examples():
    assert ham.diff_AH(ONE, TrigPoly.const(1.0), TrigPoly.zero()) == -2.0
    for k in (1, 2):
        cp = ham.critical_point_ham(k)
        N = 4 * k
        basis = [TrigPoly.const(1.0)] + [f(n, 1.0, N) for n in range(1, N + 1)
                                          for f in (TrigPoly.cos_mode, TrigPoly.sin_mode)]
        for b in basis:
            assert abs(ham.diff_AH(cp, b, TrigPoly.zero())) <= 1e-10
            assert abs(ham.diff_AH(cp, TrigPoly.zero(), b)) <= 1e-10


@given(loops(), trigpolys(max_N=4), trigpolys(max_N=4), trigpolys(max_N=4))
def test_diff_AH_finite_difference(x, y, xi, eta):
    h = 1e-5
    p = ham.PhaseLoop(x, y)
    fd = (ham.action_AH(ham.PhaseLoop(x + h * xi, y + h * eta))
          - ham.action_AH(ham.PhaseLoop(x - h * xi, y - h * eta))) / (2 * h)
    exact = ham.diff_AH(p, xi, eta)
    scale = 1.0 + abs(ham.action_AH(p)) + fc.norm_sq(y)
    assert abs(fd - exact) <= 1e-6 * max(abs(exact), 1e-3 * scale)


def test_hamilton_residual_examples():
    for k in (1, 2, 5):
        cp = ham.critical_point_ham(k)
        r1, r2 = ham.hamilton_residual(cp)
        assert r1 <= 1e-12 and r2 <= 1e-12
        flipped = ham.PhaseLoop(cp.x, -cp.y)
        r1, r2 = ham.hamilton_residual(flipped)
        assert r1 == pytest.approx(2 * np.sqrt(fc.norm_sq(fc.derivative(cp.x))), rel=1e-12)
        # y' flips sign but the right-hand side is even in y
        assert r2 == pytest.approx(2 * np.sqrt(fc.norm_sq(fc.derivative(cp.y))), rel=1e-12)
        assert r2 == pytest.approx(8 * PI * k, rel=1e-12)
    assert ham.hamilton_residual(ONE) == (0.0, 2.0)


def test_legendre_fiber_examples():
    for k in (1, 4):
        cp = ham.critical_point_ham(k)
        y = ham.legendre_fiber(cp.x)
        assert (y - cp.y).max_abs_coeff() <= 1e-14
        x_back, _ = ham.L_inverse(ham.PhaseLoop(cp.x, y))
        assert x_back is cp.x
        assert max(ham.hamilton_residual(ham.PhaseLoop(lag.critical_point(k).x, y))) <= 1e-12
    assert ham.legendre_fiber(TrigPoly.const(1.0)).max_abs_coeff() == 0.0


@given(loops(), trigpolys(max_N=4))
def test_L_map_round_trip_and_action(x, xi):
    p = ham.L_map(x, xi)
    _, xi_back = ham.L_inverse(p)
    assert (xi_back - xi).max_abs_coeff() <= 1e-12 * (1 + xi.max_abs_coeff() + x.max_abs_coeff() * 40)
    lhs = ham.action_AH(p)
    rhs = lag.action_B(x) - ham.U_map(x, xi)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10 * (abs(lag.action_B(x)) + ham.U_map(x, xi)))
    assert ham.domination_gap(p) == pytest.approx(ham.U_map(x, xi), rel=1e-9, abs=1e-12)


def test_L_map_zero_fiber():
    x = 1.0 + 0.2 * TrigPoly.cos_mode(2)
    y = ham.L_map(x, TrigPoly.zero()).y
    assert (y - ham.legendre_fiber(x)).max_abs_coeff() == 0.0


@pytest.mark.parametrize("k", range(1, 11))
def test_critical_point_invariants(k):
    cp = ham.critical_point_ham(k)
    assert fc.norm_sq(cp.x) == pytest.approx((4 * PI * k) ** (-2 / 3), rel=1e-12)
    assert fc.norm_sq(cp.y) == pytest.approx(4.0, rel=1e-12)
    assert cp.a > 0 and cp.b > 0
    assert np.sqrt(cp.a * cp.b) == pytest.approx(2 * PI * k, rel=1e-12)


def test_critical_point_k1_values():
    cp = ham.critical_point_ham(1)
    assert cp.a == pytest.approx(HALF_C1, rel=1e-14)
    with pytest.raises(BadMode):
        ham.critical_point_ham(0)


def test_closed_spectrum_k1():
    sp = ham.ham_spectrum_closed(1, 10)
    by = {(e.family, e.n): e for e in sp}
    assert by[("lambda_minus", 0)].value == pytest.approx(HALF_C1, rel=1e-14)
    assert by[("lambda_plus", 0)].value == pytest.approx(FOUR_C1, rel=1e-14)
    assert by[("lambda_minus", 1)].value == 0.0 and by[("lambda_minus", 1)].winding == -1
    assert by[("lambda_plus", 1)].value == pytest.approx(FOUR_C1 + HALF_C1, rel=1e-14)
    hm, hp = by[("lambda_hat_minus", 1)], by[("lambda_hat_plus", 1)]
    assert (hm.value, hp.value) == (pytest.approx(HAT_1[0], rel=1e-14), pytest.approx(HAT_1[1], rel=1e-14))
    assert hm.value < -12 / lag.c_k(1) ** 4 < 0 < HALF_C1 < hp.value
    assert by[("lambda_minus", 3)].value == pytest.approx(LAM_K1_N3[0], rel=1e-14)
    assert by[("lambda_plus", 3)].value == pytest.approx(LAM_K1_N3[1], rel=1e-14)
    with pytest.raises(BadRange):
        ham.ham_spectrum_closed(3, 2)


def test_closed_spectrum_k2_values():
    assert ham.lambda_hat(2) == (pytest.approx(HAT_2[0], rel=1e-14), pytest.approx(HAT_2[1], rel=1e-14))
    lm, lp = ham.lambda_branches(2, 1)
    assert (float(lm), float(lp)) == (pytest.approx(LAM_K2_N1[0], rel=1e-13),
                                      pytest.approx(LAM_K2_N1[1], rel=1e-14))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_quadratics_are_satisfied(k):
    c = lag.c_k(k)
    for e in ham.ham_spectrum_closed(k, 5 * k):
        lam = e.value
        if e.family.startswith("lambda_hat"):
            lhs, rhs = (lam - 0.5 / c ** 2) * (lam + 12 / c ** 4), 36 * PI ** 2 * k ** 2
        else:
            lhs, rhs = (lam - 0.5 / c ** 2) * (lam - 4 / c ** 4), 4 * PI ** 2 * e.n ** 2
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-9)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_closed_eigenvectors_and_windings(k):
    cp = ham.critical_point_ham(k)
    for e in ham.ham_spectrum_closed(k, 4 * k):
        assert len(e.eigenvectors) == e.multiplicity
        for xi, eta in e.eigenvectors:
            a, b = ham.hessian_apply(cp, xi, eta)
            err = np.sqrt(fc.norm_sq(a - e.value * xi) + fc.norm_sq(b - e.value * eta))
            assert err <= 1e-10 * max(1.0, abs(e.value))
            assert winding_of_loop((xi, eta)) == e.winding
            if e.n and e.family in ("lambda_minus", "lambda_plus") and e.n != k:
                # sign of the sin coefficient of xi
                s = xi.sin_coeffs[e.n - 1]
                if s != 0.0:
                    assert (s < 0) == (e.family == "lambda_plus")


@pytest.mark.parametrize("k", [1, 2, 4])
def test_numeric_spectrum_matches_closed_form(k):
    N = 4 * k
    M = ham.ham_hessian_matrix(k, N)
    assert M.asymmetry <= 1e-12
    num = ham.ham_spectrum_numeric(k, N)
    closed = ham.ham_spectrum_closed(k, N)
    assert len(num) == len(closed)
    for a, b in zip(num, closed):
        assert a.value == pytest.approx(b.value, rel=1e-9, abs=1e-9)
        assert (a.multiplicity, a.winding) == (b.multiplicity, b.winding)
    kernel = [e for e in num if abs(e.value) <= ham.ham_zero_tol(k)]
    assert len(kernel) == 1 and kernel[0].multiplicity == 1 and kernel[0].winding == -k


def test_truncation_too_small():
    with pytest.raises(TruncationTooSmall):
        ham.ham_hessian_matrix(3, 2)


@pytest.mark.parametrize("k", [1, 2])
def test_second_difference_along_eigenvectors(k):
    # the assembled operator is minus the Hessian of A_H in L^2
    cp = ham.critical_point_ham(k)
    h = 1e-3
    for e in ham.ham_spectrum_closed(k, 3 * k):
        if abs(e.value) < 1e-9:
            continue
        xi, eta = e.eigenvectors[0]
        f = [ham.action_AH(ham.PhaseLoop(cp.x + s * xi, cp.y + s * eta)) for s in (-h, 0.0, h)]
        d2 = (f[0] - 2 * f[1] + f[2]) / h ** 2
        assert -d2 == pytest.approx(e.value, rel=1e-4)


@pytest.mark.parametrize("k", range(1, 8))
def test_branch_monotonicity(k):
    lm, lp = ham.lambda_branches(k, np.arange(10 * k + 1))
    assert np.all(np.diff(lm) < 0) and np.all(np.diff(lp) > 0)


def test_infinite_index_and_coindex():
    for k in (1, 2):
        counts = []
        for N in (4 * k, 8 * k):
            w = np.linalg.eigvalsh(ham.ham_hessian_matrix(k, N).entries)
            counts.append((np.sum(w < -ham.ham_zero_tol(k)), np.sum(w > ham.ham_zero_tol(k))))
        assert counts[1][0] > counts[0][0] and counts[1][1] > counts[0][1]


@pytest.mark.parametrize("k", range(1, 11))
def test_cz_index_closed_form(k):
    rep = ham.cz_index(k)
    assert (rep.alpha_S, rep.parity) == (-k, 1)
    assert rep.cz == -2 * k + 1 and rep.cz_can == 2 * k - 1 == rep.morse
    assert rep.consistent


@pytest.mark.parametrize("k", [1, 4])
def test_cz_index_numeric(k):
    rep = ham.cz_index(k, "numeric")
    assert rep.to_json() == {"k": k, "alpha": -k, "parity": 1, "cz": 1 - 2 * k,
                             "cz_can": 2 * k - 1, "morse": 2 * k - 1}


def test_parity_rests_on_kernel_partner():
    sp = ham.ham_spectrum_closed(2, 20)
    partners = [e for e in sp if e.winding == -2]
    assert sorted(e.family for e in partners) == ["lambda_hat_minus", "lambda_minus"]
    assert {e.value for e in partners if e.family == "lambda_minus"} == {0.0}


@pytest.mark.parametrize("k", range(1, 6))
def test_disjointness(k):
    assert ham.disjointness_gap(k, 10 * k) > 1e-6
    assert ham.ordering_at_3k(k)
    hm = ham.lambda_hat(k)[0]
    assert hm < 0
    assert all(e.value != hm for e in ham.ham_spectrum_closed(k, 10 * k) if e.value > 0)
    with pytest.raises(BadRange):
        ham.disjointness_gap(k, k - 1)


def test_spectrum_csv():
    text = ham.spectrum_csv(ham.ham_spectrum_closed(1, 2))
    lines = text.splitlines()
    assert lines[0] == "family,n,lambda,mult,winding"
    assert "lambda_minus,1,0,1,-1" in lines
