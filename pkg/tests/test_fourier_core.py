import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from regfall import fourier_core as fc
from regfall.errors import InsufficientSamples, ZeroLoop
from regfall.fourier_core import TrigPoly

from conftest import trigpolys


def _grid_mean(values):
    return float(np.mean(values))


def test_constant_and_modes_evaluate():
    assert fc.eval(TrigPoly.const(2.5), 0.3) == 2.5
    c = TrigPoly.cos_mode(3, 2.0)
    np.testing.assert_allclose(c(np.array([0.0, 1 / 6, 1 / 12])), [2.0, -2.0, 0.0], atol=1e-14)
    s = TrigPoly.sin_mode(1)
    assert s(0.25) == pytest.approx(1.0)


def test_json_round_trip_and_padding():
    f = TrigPoly(1.0, [0.5, 0.0, 2.0], [0.0, -1.0, 0.25])
    g = TrigPoly.from_json(f.to_json())
    assert np.array_equal(g.coeff_vector(), f.coeff_vector())
    h = TrigPoly.from_json({"constant": 1.0, "cos": [1.0, 2.0], "sin": [3.0]})
    assert h.N == 2 and h.sin_coeffs.tolist() == [3.0, 0.0]


def test_coefficients_are_read_only():
    f = TrigPoly(0.0, [1.0], [2.0])
    with pytest.raises(ValueError):
        f.cos_coeffs[0] = 5.0


def test_mismatched_lengths_rejected():
    with pytest.raises(ValueError):
        TrigPoly(0.0, [1.0, 2.0], [1.0])


def test_derivatives_of_modes():
    f = TrigPoly.cos_mode(2, 1.0)
    d = fc.derivative(f)
    # d/dtau cos 4 pi tau = -4 pi sin 4 pi tau
    assert d.sin_coeffs[1] == pytest.approx(-4 * np.pi)
    dd = fc.second_derivative(f)
    assert dd.cos_coeffs[1] == pytest.approx(-16 * np.pi ** 2)


def test_inner_known_values():
    assert fc.inner(TrigPoly.cos_mode(1), TrigPoly.cos_mode(1)) == pytest.approx(0.5)
    assert fc.inner(TrigPoly.cos_mode(1), TrigPoly.sin_mode(1)) == 0.0
    assert fc.norm_sq(TrigPoly.const(3.0)) == 9.0


def test_zero_loop_metric_raises():
    with pytest.raises(ZeroLoop):
        fc.weighted_inner(TrigPoly.zero(3), TrigPoly.const(1.0), TrigPoly.const(1.0))


def test_weighted_and_dual_metrics():
    x = TrigPoly.const(2.0)
    f = TrigPoly.cos_mode(1)
    assert fc.weighted_inner(x, f, f) == pytest.approx(4 * 4 * 0.5)
    assert fc.dual_inner(x, f, f) == pytest.approx(0.5 / 16)


def test_from_samples_requires_enough_points():
    with pytest.raises(InsufficientSamples):
        fc.from_samples(np.ones(4), 2)
    g = fc.from_samples(np.ones(4), 2, strict=False)
    assert g.N == 1


@given(trigpolys())
def test_parseval_matches_grid_mean(f):
    M = 4 * f.N + 4
    assert fc.norm_sq(f) == pytest.approx(_grid_mean(fc.sample(f, M) ** 2), rel=1e-10, abs=1e-10)


@given(trigpolys(), trigpolys())
def test_product_is_pointwise(f, g):
    t = np.linspace(0.0, 1.0, 37)
    np.testing.assert_allclose(f.product(g)(t), f(t) * g(t), rtol=1e-10, atol=1e-10)


@given(trigpolys(), trigpolys())
def test_integration_by_parts(f, g):
    lhs = fc.inner(fc.derivative(f), g)
    rhs = -fc.inner(f, fc.derivative(g))
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-9)


@given(trigpolys(min_N=1))
def test_sample_round_trip(f):
    g = fc.from_samples(fc.sample(f, 2 * f.N + 1), f.N)
    np.testing.assert_allclose(g.coeff_vector(), f.coeff_vector(), atol=1e-12)


@given(trigpolys(), st.floats(0.0, 1.0))
def test_shift_and_integral(f, sigma):
    t = np.linspace(0.0, 1.0, 11)
    np.testing.assert_allclose(f.shifted(sigma)(t), f(t + sigma), atol=1e-10)
    assert f.integral_from_zero(1.0) == pytest.approx(f.mean(), abs=1e-12)


@given(trigpolys(), trigpolys(), st.floats(-2.0, 2.0))
def test_linearity(f, g, a):
    t = np.linspace(0.0, 1.0, 13)
    np.testing.assert_allclose((a * f + g - 1.0)(t), a * f(t) + g(t) - 1.0, atol=1e-10)
