from __future__ import annotations

import math

import mpmath
import pytest

from fraciter.errors import BaseOutOfRange
from fraciter.iterate import iterate_series
from fraciter.series import evaluate, named_series
from fraciter.tetration import (
    CLOSED_FORMS,
    NO_REFERENCE,
    TetrationQuery,
    bell_number,
    closed_form_N2,
    convergence_sweep,
    dobinski_check,
    exp_iterate,
    stirling2,
    tetrate,
    tower,
)

from conftest import set_partitions

E = math.e


class TestExpIterate:
    def test_quoted_values(self):
        assert exp_iterate(1, E, 2) == pytest.approx(7.41281, rel=1e-4)
        assert exp_iterate(E, E, 2) == pytest.approx(37.5795, rel=1e-3)

    @pytest.mark.parametrize("x", [0.0, 0.3, -2.0, E])
    def test_zero_height(self, x):
        assert exp_iterate(0, x, 2) == pytest.approx(x, abs=1e-15)
        assert exp_iterate(0, x, 9) == pytest.approx(x, abs=1e-15)

    def test_twice_at_one(self):
        assert exp_iterate(2, 1.0, 2) == pytest.approx(6.0)

    @staticmethod
    def _mp_half_iterate(N, x, dps=60):
        # independent high-precision oracle: eigen-decomposition in mpmath
        with mpmath.workdps(dps):
            C = mpmath.matrix(N + 1, N + 1)
            for n in range(N + 1):
                for r in range(N + 1):
                    C[n, r] = mpmath.mpf(r) ** n / mpmath.factorial(r) if (r or n) else 1
            lam, V = mpmath.eig(C)
            D = mpmath.diag([mpmath.sqrt(l) for l in lam])
            H = V * D * mpmath.inverse(V)
            return float(mpmath.re(sum(H[k, 1] * mpmath.mpf(x) ** k / mpmath.factorial(k) for k in range(N + 1))))

    @pytest.mark.parametrize("N", [4, 8, 10])
    def test_half_iterate_against_mpmath(self, N):
        want = self._mp_half_iterate(N, E)
        assert exp_iterate(0.5, E, N, tol=0.0) == pytest.approx(want, rel=1e-9)


class TestClosedForms:
    @pytest.mark.parametrize("t", [-1.0, 0.0, 0.5, 1.0, 2.2, E])
    @pytest.mark.parametrize("x", [-1.0, 0.5, 2.0])
    def test_forms_agree_with_spectral(self, t, x):
        ref = float(evaluate(iterate_series(named_series("exp", 2), t).series, x))
        for form in CLOSED_FORMS:
            assert closed_form_N2(t, x, form) == pytest.approx(ref, rel=1e-10, abs=1e-12)

    def test_known_points(self):
        assert closed_form_N2(1, E, "golden") == pytest.approx(1 + E + E * E / 2)
        assert closed_form_N2(0, 0.3, "eigen") == pytest.approx(0.3)
        assert closed_form_N2(2, 1, "columns") == pytest.approx(6)

    def test_unknown_form(self):
        with pytest.raises(ValueError):
            closed_form_N2(1, 1, "silver")


class TestTetrate:
    def test_base_range(self):
        for a in (1.0, 0.0, -2.0):
            with pytest.raises(BaseOutOfRange):
                TetrationQuery(a, 1.0)

    def test_sqrt2_tower(self):
        a = math.sqrt(2)
        ref = a ** (a ** a)
        assert tower(a, 3, 1.0) == pytest.approx(ref)
        assert ref == pytest.approx(1.7608, abs=5e-5)
        # integer heights: approach the direct tower as N grows
        errs = [abs(tetrate(TetrationQuery(a, 3, 1.0, N)) - ref) for N in (6, 8, 12)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] / ref < 1e-8

    def test_e_height_one(self):
        assert tetrate(TetrationQuery(E, 1, 1.0, 12)) == pytest.approx(E, rel=1e-6)

    def test_e_height_two_from_zero(self):
        assert tetrate(TetrationQuery(E, 2, 0.0, 10)) == pytest.approx(E, rel=1e-5)

    def test_base_conversion(self):
        a = 1.7
        q = TetrationQuery(a, 1, 0.8, 14)
        assert tetrate(q) == pytest.approx(a**0.8, rel=1e-12)

    def test_towers_in_exponent_of_base(self):
        a = 1.3
        for h in (2, 3):
            assert tetrate(TetrationQuery(a, h, 1.0, 16)) == pytest.approx(tower(a, h, 1.0), rel=1e-9)


class TestCombinatorics:
    def test_stirling(self):
        assert stirling2(3, 2) == 3
        assert all(stirling2(n, n) == 1 for n in range(8))
        assert all(stirling2(n, 0) == 0 for n in range(1, 8))
        for n in range(1, 8):
            parts = list(set_partitions(range(n)))
            for k in range(1, n + 1):
                assert stirling2(n, k) == sum(1 for p in parts if len(p) == k)
        with pytest.raises(ValueError):
            stirling2(2, 3)

    def test_bell_numbers(self):
        assert bell_number(0) == 1 and bell_number(1) == 1 and bell_number(4) == 15
        for n in range(1, 9):
            assert bell_number(n) == sum(1 for _ in set_partitions(range(n)))

    def test_dobinski(self):
        lhs, rhs, rel = dobinski_check(0, 30)
        assert lhs == pytest.approx(E, rel=1e-15)
        assert dobinski_check(1, 30)[0] == pytest.approx(E, rel=1e-15)
        lhs, rhs, rel = dobinski_check(4, 30)
        assert rhs == pytest.approx(15 * E) and rel <= 1e-10
        for n in range(9):
            assert dobinski_check(n, 30)[2] <= 1e-9

    def test_dobinski_against_mpmath(self):
        with mpmath.workdps(50):
            for n in (3, 6):
                ref = mpmath.nsum(lambda j: mpmath.mpf(j) ** n / mpmath.factorial(j), [0, mpmath.inf])
                assert float(ref) == pytest.approx(dobinski_check(n, 30)[1], rel=1e-14)


class TestConvergence:
    def test_one_percent_at_seven(self):
        rep = convergence_sweep(1, E, range(2, 9))
        assert rep.reference == pytest.approx(15.15426, rel=1e-6)
        rel = {r.N: r.rel_error for r in rep.rows}
        assert rel[6] > 0.01 >= rel[7]
        assert rel[6] == pytest.approx(0.021, abs=1e-3)
        assert rel[7] == pytest.approx(0.007, abs=1e-3)
        assert rep.rows[0].value == pytest.approx(7.41281, rel=1e-5)
        assert rel[2] == pytest.approx(0.51, abs=0.01)

    def test_matches_partial_sums(self):
        rep = convergence_sweep(1, E, range(2, 9))
        for r in rep.rows:
            want = math.fsum(E**k / math.factorial(k) for k in range(r.N + 1))
            assert r.value == pytest.approx(want, rel=1e-13)

    def test_height_zero(self):
        rep = convergence_sweep(0, 0.7, [3, 5])
        assert all(r.rel_error == 0 for r in rep.rows)

    def test_single_row(self):
        assert len(convergence_sweep(1, 1.0, [5]).rows) == 1

    def test_non_integer(self):
        rep = convergence_sweep(0.5, E, range(3, 7))
        assert not rep.has_reference and rep.provenance == NO_REFERENCE
        assert all(r.rel_error is None for r in rep.rows)
        assert rep.rows[0].successive_diff is None
        assert all(r.successive_diff is not None for r in rep.rows[1:])

    def test_failures_are_recorded(self):
        rep = convergence_sweep(0.5, 0.5, [3, 4], series=lambda N: named_series("smoluchowski", N),
                                scalar=lambda v: v / (1 + v), spec="smoluchowski")
        assert all(r.value is None and "DegenerateSpectrum" in r.error for r in rep.rows)
