from __future__ import annotations

import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from fraciter.bell import INDEX_BASE, bell_inverse, bell_matrix, bell_power_int, bell_product, series_from_bell
from fraciter.errors import NonInvertible, NonzeroConstantTerm, OrderMismatch
from fraciter.series import TruncatedSeries, compose, named_series
from fraciter.tetration import stirling2

from conftest import set_partitions


def test_identity():
    assert np.array_equal(bell_matrix(named_series("identity", 5)).entries, np.eye(5))
    assert INDEX_BASE == 1


def test_row_four_entries():
    g = TruncatedSeries.from_taylor([0, 1, 2, 3, 4])
    B = bell_matrix(g)
    assert B.entry(4, 2) == pytest.approx(4 * 1 * 3 + 3 * 2**2)
    assert B.entry(4, 3) == pytest.approx(6 * 1 * 2)
    assert B.entry(4, 2) == pytest.approx(24) and B.entry(4, 3) == pytest.approx(12)


def test_symbolic_entries_against_sympy():
    # B_nm = n! [x^n] g^m / m! for a generic g, compared entry by entry
    x = sp.symbols("x")
    taylor = [0, 1.5, -0.5, 2.0, 0.25, -1.0]
    g = sum(sp.Rational(c).limit_denominator() * x**k / sp.factorial(k) for k, c in enumerate(taylor))
    N = 5
    B = bell_matrix(TruncatedSeries.from_taylor(taylor))
    for m in range(1, N + 1):
        poly = sp.expand(g**m / sp.factorial(m))
        for n in range(1, N + 1):
            want = float(sp.factorial(n) * poly.coeff(x, n))
            assert B.entry(n, m) == pytest.approx(want, rel=1e-13, abs=1e-13)


def test_expm1_gives_stirling_numbers():
    N = 7
    B = bell_matrix(named_series("expm1", N))
    assert np.allclose(B.entries[:3, :3], [[1, 0, 0], [1, 1, 0], [1, 3, 1]])
    for n in range(1, N + 1):
        for m in range(1, n + 1):
            blocks = sum(1 for p in set_partitions(range(n)) if len(p) == m)
            assert B.entry(n, m) == pytest.approx(blocks)
            assert stirling2(n, m) == blocks


@pytest.mark.parametrize("name", ["logistic", "expm1", "smoluchowski", "xe^x"])
def test_roundtrip(name):
    g = named_series(name, 6)
    assert np.allclose(series_from_bell(bell_matrix(g)).taylor, g.taylor)


def test_identity_matrix_to_identity_series():
    s = series_from_bell(bell_matrix(named_series("identity", 4)))
    assert np.allclose(s.taylor, [0, 1, 0, 0, 0])


def test_requires_zero_constant_term():
    with pytest.raises(NonzeroConstantTerm):
        bell_matrix(named_series("exp", 3))


def test_product_of_linear_maps():
    B2 = bell_matrix(named_series("affine", 4, (0, 2)))
    P = bell_product(B2, B2)
    assert np.allclose(P.diagonal, [4, 16, 64, 256])
    assert np.allclose(P.entries, bell_matrix(named_series("affine", 4, (0, 4))).entries)


def test_product_with_inverse():
    B = bell_matrix(named_series("xe^x", 6))
    assert np.allclose(bell_product(B, bell_inverse(B)).entries, np.eye(6), atol=1e-12)


def test_logistic_squared_first_column():
    q = named_series("logistic", 6)
    B = bell_matrix(q)
    P = bell_product(B, B)
    ref = np.polynomial.Polynomial([0, 4, -4])
    want = ref(ref).coef  # independent composition
    want_taylor = np.array([want[k] * math.factorial(k) if k < want.size else 0.0 for k in range(7)])
    assert np.allclose(series_from_bell(P).taylor, want_taylor)
    assert np.allclose(P.source.monomial, compose(q, q).monomial)


def test_order_mismatch():
    with pytest.raises(OrderMismatch):
        bell_product(bell_matrix(named_series("logistic", 3)), bell_matrix(named_series("logistic", 4)))


small = st.floats(-1.5, 1.5, allow_nan=False)


@settings(max_examples=30, deadline=None)
@given(st.lists(small, min_size=8, max_size=8), st.lists(small, min_size=8, max_size=8))
def test_composition_homomorphism(a, b):
    f = TruncatedSeries.from_monomial([0.0] + a)
    g = TruncatedSeries.from_monomial([0.0] + b)
    lhs = bell_matrix(compose(f, g)).entries
    rhs = bell_matrix(g).entries @ bell_matrix(f).entries
    assert np.allclose(lhs, rhs, rtol=1e-10, atol=1e-10 * max(1.0, np.abs(rhs).max()))


@pytest.mark.parametrize("k", [2, 3])
def test_integer_power_matches_composition(k):
    g = named_series("smoluchowski", 7)
    gk = g
    for _ in range(k - 1):
        gk = compose(gk, g)
    assert np.allclose(series_from_bell(bell_power_int(bell_matrix(g), k)).taylor, gk.taylor)


def test_power_zero_is_identity():
    assert np.allclose(bell_power_int(bell_matrix(named_series("logistic", 5)), 0).entries, np.eye(5))


def test_power_of_scaling():
    P = bell_power_int(bell_matrix(named_series("affine", 4, (0, 3))), 2)
    assert np.allclose(P.diagonal, [9, 81, 729, 6561])
    assert np.allclose(P.first_column(), [9, 0, 0, 0])


def test_determinant():
    g1 = 1.3
    g = TruncatedSeries.from_taylor([0, g1, 0.7, -0.2, 0.1, 0.05])
    N = g.order
    assert np.linalg.det(bell_matrix(g).entries) == pytest.approx(g1 ** (N * (N + 1) / 2), rel=1e-12)


def _lambert_reference(n):
    # independent oracle: Lagrange inversion through sympy's series reversion
    x = sp.symbols("x")
    w = sp.series(sp.LambertW(x), x, 0, n + 1).removeO()
    return [sp.factorial(k) * w.coeff(x, k) for k in range(1, n + 1)]


def test_lambert_w_by_inversion():
    n = 6
    inv = series_from_bell(bell_power_int(bell_matrix(named_series("xe^x", n)), -1))
    want = [(-k) ** (k - 1) for k in range(1, n + 1)]
    assert [int(v) for v in _lambert_reference(n)] == want
    assert np.allclose(inv.taylor[1:], want, rtol=1e-12)
    assert np.allclose(inv.taylor[1:5], [1, -2, 9, -64])


def test_singular():
    with pytest.raises(NonInvertible):
        bell_inverse(bell_matrix(TruncatedSeries.from_taylor([0, 0, 1, 1])))
