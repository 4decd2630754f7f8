import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from lkernel.errors import DomainError, PrecisionError
from lkernel.lfunc import LStarSeriesParams, PeterssonQuadParams, lstar, mellin_quadrature, period, petersson_norm
from lkernel.modforms import Eigenform, delta_eta_product, eigenbasis


@pytest.fixture(scope="module")
def delta_form():
    return eigenbasis(12)[0]


@pytest.fixture(scope="module")
def delta_long():
    return Eigenform(12, delta_eta_product(400).coeffs)


def test_centre_value_of_delta_is_not_forced_to_vanish(delta_form, delta_long):
    # for k = 12 the sign (-1)^(k/2) is +1, so the functional equation leaves L*(Delta, 6) free
    v = lstar(delta_form, 6)
    assert abs(v.imag) < 1e-18
    assert v.real > 1e-3
    assert abs(v - mellin_quadrature(delta_long, 6)) < 1e-9 * abs(v)


def test_central_zero_when_sign_is_minus():
    (f,) = eigenbasis(18)
    assert abs(lstar(f, 9)) < 1e-15 * abs(lstar(f, 8))
    assert abs(period(f, 8)) < 1e-15 * abs(period(f, 7))


def test_functional_equation_point(delta_form):
    s = 4.3 + 1.1j
    assert abs(lstar(delta_form, 12 - s) - lstar(delta_form, s)) < 1e-12 * abs(lstar(delta_form, s))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([12, 16, 18, 22]), st.floats(0.01, 0.99), st.floats(-5, 5))
def test_functional_equation_random(k, frac, im):
    f = eigenbasis(k)[0]
    s = complex(1 + frac * (k - 2), im)
    a, b = lstar(f, k - s), (-1) ** (k // 2) * lstar(f, s)
    assert abs(a - b) <= 1e-11 * max(abs(a), 1e-300)


def test_lstar_against_mellin_quadrature(delta_form, delta_long):
    s = 5.5 + 2j
    assert abs(lstar(delta_form, s) - mellin_quadrature(delta_long, s)) < 1e-9 * abs(lstar(delta_form, s))


def test_lstar_stable_in_term_count(delta_form):
    f = eigenbasis(12, 100)[0]
    for s in (3.1 + 0.5j, 6.0, 9.7 - 2j):
        a = lstar(f, s, LStarSeriesParams(n_terms=40))
        b = lstar(f, s, LStarSeriesParams(n_terms=80))
        assert abs(a - b) < 1e-14 * abs(a)


def test_lstar_needs_coefficients(delta_form):
    with pytest.raises(PrecisionError):
        lstar(delta_form, 3, LStarSeriesParams(n_terms=200))


def test_period_symmetry_and_range(delta_form):
    for n in range(11):
        assert abs(period(delta_form, n) - period(delta_form, 10 - n)) < 1e-12 * abs(period(delta_form, n))
    with pytest.raises(DomainError):
        period(delta_form, 11)


@pytest.mark.parametrize("n", [0, 3, 7, 10])
def test_period_by_quadrature(delta_form, delta_long, n):
    # int_0^inf Delta(it) t^n dt split at 1, with t -> 1/t on (0, 1) using Delta(i/t) = t^12 Delta(it)
    a = delta_long.coeffs
    m = np.arange(len(a))

    def f(t):
        return float(np.dot(a, np.exp(-2 * math.pi * m * t)))

    upper = integrate.quad(lambda t: f(t) * t**n, 1, np.inf, epsabs=1e-17, epsrel=1e-13, limit=200)[0]
    lower = integrate.quad(lambda t: f(t) * t ** (10 - n), 1, np.inf, epsabs=1e-17, epsrel=1e-13, limit=200)[0]
    assert period(delta_form, n).real == pytest.approx(upper + lower, rel=1e-10)


def test_petersson_norm_delta(delta_form):
    val, err = petersson_norm(delta_form, return_error=True)
    # literature value 1.035362056804320922e-6
    assert val == pytest.approx(1.035362056804320922e-6, rel=1e-12)
    assert err < 1e-12 * val


def test_petersson_refinement_is_cauchy(delta_form):
    vals = [petersson_norm(delta_form, PeterssonQuadParams(12, n, n)) for n in (12, 16, 24, 32)]
    diffs = np.abs(np.diff(vals))
    assert np.all(np.array(vals) > 0)
    assert diffs[-1] <= diffs[0]
    assert diffs[-1] < 1e-13 * vals[-1]


def test_petersson_workers_do_not_change_result(delta_form):
    assert petersson_norm(delta_form) == petersson_norm(delta_form, workers=4)


def test_petersson_k24_positive():
    for f in eigenbasis(24):
        assert petersson_norm(f) > 0


def test_petersson_rejects_non_cusp():
    f = Eigenform(12, [1.0] + [0.0] * 40)
    with pytest.raises(DomainError):
        petersson_norm(f)


def test_quad_params_validation():
    with pytest.raises(ValueError):
        PeterssonQuadParams(y_max=1)
