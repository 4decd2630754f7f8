import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lkernel.errors import DomainError, PrecisionError
from lkernel.modforms import (
    QExpansion,
    delta,
    delta_eta_product,
    dim_cusp,
    eigenbasis,
    eisenstein,
    hecke_matrix,
    hecke_operator,
    victor_miller_basis,
)

PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]


def test_eisenstein_coefficients():
    assert eisenstein(4, 5)[1] == 240
    assert eisenstein(6, 5)[2] == -504 * 33 == -16632
    e4, e6 = eisenstein(4, 6), eisenstein(6, 6)
    assert (e4**3 - e6**2)[1] == 1728
    with pytest.raises(DomainError):
        eisenstein(8, 5)


def test_delta_first_coefficients():
    d = delta(10)
    assert d[0] == 0 and d[1] == 1
    assert d[2] == -24 and d[3] == 252
    assert d.coeffs == delta_eta_product(10).coeffs


def test_delta_two_constructions_agree_far_out():
    assert delta(120).coeffs == delta_eta_product(120).coeffs


def test_dimensions():
    assert [dim_cusp(k) for k in (4, 6, 8, 10, 12, 14, 16, 24, 26, 36)] == [0, 0, 0, 0, 1, 0, 1, 2, 1, 3]


def test_basis_shapes():
    assert victor_miller_basis(8) == []
    (g,) = victor_miller_basis(12, 30)
    assert g.coeffs == delta(30).coeffs
    g1, g2 = victor_miller_basis(24, 30)
    assert (g1[1], g1[2], g2[1], g2[2]) == (1, 0, 0, 1)
    with pytest.raises(PrecisionError):
        victor_miller_basis(24, 1)


def test_basis_dimension_agrees():
    for k in range(12, 40, 2):
        assert len(victor_miller_basis(k, 12)) == dim_cusp(k)


def test_hecke_identity_and_delta_eigenvalue():
    d = delta(40)
    assert hecke_operator(d, 1).coeffs == d.coeffs
    t2 = hecke_operator(d, 2)
    assert t2.coeffs == d.truncate(20).scale(-24).coeffs
    with pytest.raises(PrecisionError):
        hecke_operator(d, 2, prec=21)


def test_hecke_matrix_k24():
    m = hecke_matrix(24, 2, prec=40)
    assert m[0][0] + m[1][1] == 1080
    assert all(isinstance(x, Fraction) for row in m for x in row)


@pytest.mark.parametrize("k", [24, 36])
@pytest.mark.parametrize("pair", [(2, 3), (2, 5), (3, 5)])
def test_hecke_matrices_commute(k, pair):
    basis = victor_miller_basis(k, 60)
    a, b = (hecke_matrix(k, n, basis=basis) for n in pair)
    d = len(a)
    ab = [[sum(a[i][l] * b[l][j] for l in range(d)) for j in range(d)] for i in range(d)]
    ba = [[sum(b[i][l] * a[l][j] for l in range(d)) for j in range(d)] for i in range(d)]
    assert ab == ba


def test_eigenbases():
    assert eigenbasis(8) == []
    (f12,) = eigenbasis(12)
    assert f12[2] == -24
    (f16,) = eigenbasis(16)
    assert f16[2] == 216
    f, g = eigenbasis(24)
    root = 12 * math.sqrt(144169)
    assert f[2] == pytest.approx(540 - root, rel=1e-13)
    assert g[2] == pytest.approx(540 + root, rel=1e-13)


def _coprime_pairs(n):
    return [(m, j) for m in range(2, n) for j in range(m + 1, n) if math.gcd(m, j) == 1 and m * j <= n]


@pytest.mark.parametrize("k", [12, 16, 18, 20, 22, 24, 26, 28, 36])
def test_eigenform_multiplicativity_and_bounds(k):
    for f in eigenbasis(k, 64):
        a = f.coeffs
        assert a[1] == 1
        for m, j in _coprime_pairs(f.prec):
            assert a[m * j] == pytest.approx(a[m] * a[j], rel=1e-8, abs=1e-6)
        for p in PRIMES:
            if p * p <= f.prec:
                assert a[p * p] == pytest.approx(a[p] ** 2 - p ** (k - 1), rel=1e-8, abs=1e-6)
            if p <= f.prec:
                assert abs(a[p]) <= 2 * p ** ((k - 1) / 2)


def test_dim_one_coefficients_are_integers():
    (f,) = eigenbasis(16)
    assert np.all(f.coeffs == np.round(f.coeffs))


def test_json_round_trip():
    d = delta(64)
    back = QExpansion.from_json(d.to_json())
    assert back == d
    assert [str(c) for c in back.coeffs] == [str(c) for c in d.coeffs]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.fractions(max_denominator=50), min_size=6, max_size=6), st.lists(st.fractions(max_denominator=50), min_size=6, max_size=6))
def test_series_product_commutes_and_distributes(a, b):
    f, g = QExpansion(4, 5, a), QExpansion(4, 5, b)
    h = eisenstein(4, 5)
    assert (f * g).coeffs == (g * f).coeffs
    assert ((f + g) * h).coeffs == (f * h + g * h).coeffs


def test_mismatched_weights():
    with pytest.raises(DomainError):
        eisenstein(4, 5) + eisenstein(6, 5)
