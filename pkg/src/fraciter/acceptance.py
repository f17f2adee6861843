"""Acceptance checks: the worked N = 2 numbers, identities and property suites.

Each check returns ``(passed, detail)``.  ``run_all`` is what ``fraciter
verify`` prints; the pytest acceptance module runs the same list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .bell import bell_matrix
from .carleman import carleman_direct, carleman_exp, carleman_factored, carleman_product
from .errors import DegenerateSpectrum
from .iterate import invert_series, iterate_series, schroder_solve_bell
from .series import compose, named_series
from .spectral import decompose, eigenvalues, matrix_power
from .tetration import (
    CLOSED_FORMS,
    bell_number,
    closed_form_N2,
    convergence_sweep,
    dobinski_check,
    exp_iterate,
)

@dataclass(frozen=True)
class Check:
    key: str
    title: str
    run: Callable[[], tuple[bool, str]]


def _rel(a, b):
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def _rel_norm(a, b):
    """Normwise relative difference, ``max|a - b| / max|b|``."""
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    return float(np.abs(a - b).max() / max(np.abs(b).max(), 1e-300))


# -- oracles that do not touch the matrix machinery --------------------------

def lambert_w_by_reversion(n: int) -> list[Fraction]:
    """Monomial coefficients of W(x) (solution of w e^w = x) by fixed-point iteration.

    Iterates ``w <- x exp(-w)`` in exact rational series arithmetic; each pass
    fixes one more coefficient.
    """

    def mul(a, b):
        out = [Fraction(0)] * (n + 1)
        for i, ai in enumerate(a):
            if ai:
                for j in range(n + 1 - i):
                    out[i + j] += ai * b[j]
        return out

    def exp0(s):  # s has zero constant term
        out = [Fraction(0)] * (n + 1)
        term = [Fraction(1)] + [Fraction(0)] * n
        for m in range(n + 1):
            out = [o + t for o, t in zip(out, term)]
            term = [c / (m + 1) for c in mul(term, s)]
        return out

    w = [Fraction(0)] * (n + 1)
    x = [Fraction(0), Fraction(1)] + [Fraction(0)] * (n - 1)
    for _ in range(n + 1):
        w = mul(x, exp0([-c for c in w]))
    return w


def exp_partial_sum(x: float, N: int) -> float:
    return math.fsum(x**k / math.factorial(k) for k in range(N + 1))


def _random_matrix(rng, n, complex_pair=True):
    """Real matrix with a well-separated spectrum and a well-conditioned eigenbasis."""
    lam = np.sort(rng.uniform(0.5, 4.0, n)) + np.arange(n) * 0.5
    D = np.diag(lam)
    if complex_pair and n >= 3:
        a, b = rng.uniform(0.5, 2.0), rng.uniform(0.7, 1.5)
        D[0, 0], D[1, 1] = -a - 2.0, -a - 2.0
        D[0, 1], D[1, 0] = b, -b
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    V = Q + 0.2 * rng.standard_normal((n, n))
    return V @ D @ np.linalg.inv(V)


# -- criteria ----------------------------------------------------------------

def c01_exp_matrix():
    C = carleman_exp(2).entries
    want = np.array([[1, 1, 0.5], [0, 1, 1], [0, 1, 2]])
    err_m = float(np.abs(C - want).max())
    lam = np.sort(eigenvalues(C).real)
    s5 = math.sqrt(5)
    err_l = float(np.abs(lam - np.sort([1, (3 - s5) / 2, (3 + s5) / 2])).max())
    return err_m <= 1e-14 and err_l <= 1e-12, f"matrix err {err_m:.1e}, eigenvalue err {err_l:.1e}"


def c02_quoted_values():
    v1 = exp_iterate(1, math.e, 2)
    ve = exp_iterate(math.e, math.e, 2)
    r1, re_ = abs(v1 / 7.41281 - 1), abs(ve / 37.5795 - 1)
    return r1 <= 1e-4 and re_ <= 1e-3, f"G<1>(e)={v1:.6f} (rel {r1:.1e}), G<e>(e)={ve:.5f} (rel {re_:.1e})"


def c03_convergence():
    rep = convergence_sweep(1, math.e, [6, 7])
    e6, e7 = (r.rel_error for r in rep.rows)
    ref_ok = abs(rep.reference - 15.15426) < 1e-5
    return e6 > 0.01 and e7 <= 0.01 and ref_ok, f"N=6 err {e6:.4f}, N=7 err {e7:.4f}, ref {rep.reference:.5f}"


def c04_golden_grid():
    worst = 0.0
    # G<-1>(3) = 0 exactly at N = 2, so the x grid stops short of 3
    for t in np.linspace(-1, 3, 5):
        for x in (0.5, 1.25, 2.0, 2.75):
            spectral = exp_iterate(t, x, 2)
            vals = [closed_form_N2(t, x, f) for f in CLOSED_FORMS]
            worst = max(worst, *(abs(v - spectral) / abs(spectral) for v in vals))
    return worst <= 1e-10, f"20 points, worst rel {worst:.1e}"


def c05_affine():
    rng = np.random.default_rng(5)
    worst = 0.0
    for i in range(100):
        g0 = rng.uniform(-3, 3)
        g1 = rng.choice([rng.uniform(0.2, 0.8), rng.uniform(1.25, 3.0)])
        a = rng.uniform(-2, 2)
        N = 1 if i % 2 else 3
        got = iterate_series(named_series("affine", N, [g0, g1]), a).series.taylor
        want = np.zeros(N + 1)
        want[0] = g0 * (1 - g1**a) / (1 - g1)
        want[1] = g1**a
        worst = max(worst, _rel(got[:2], want[:2]), float(np.abs(got[2:]).max(initial=0.0)))
    return worst <= 1e-10, f"100 random (g0, g1, alpha), worst rel {worst:.1e}"


def c06_logistic_half():
    N = 8
    got = iterate_series(named_series("logistic", N), 0.5).series.taylor
    q, h = named_series("arcsin_sq", N), named_series("sin_sq_sqrt", N)
    want = compose(h, 2.0 * q).taylor  # sin^2(sqrt(2) arcsin sqrt x) = h(4**0.5 q(x))
    err = _rel(got[1:5], want[1:5])
    return err <= 1e-6, f"first 4 coefficients, worst rel {err:.1e}"


def c07_lambert():
    n = 6
    got = invert_series(named_series("xe^x", n)).taylor[1:]
    oracle = lambert_w_by_reversion(n)
    want = np.array([float(oracle[k] * math.factorial(k)) for k in range(1, n + 1)])
    closed = np.array([(-k) ** (k - 1) for k in range(1, n + 1)], dtype=float)
    err = max(_rel(got, want), _rel(got, closed))
    return err <= 1e-9, f"n<=6 worst rel {err:.1e}"


def c08a_dobinski():
    worst = max(dobinski_check(n, 30)[2] for n in range(9))
    return worst <= 1e-9, f"n<=8, J=30, worst rel {worst:.1e}"


def c08b_exp_squared():
    C = carleman_exp(10)
    col = carleman_product(C, C).column(1)
    errs = [abs(col[n] / (math.e * bell_number(n)) - 1) for n in range(7)]
    worst_n = int(np.argmax(errs))
    return max(errs) <= 1e-6, f"n<=6 at N=10, worst rel {max(errs):.1e} at n={worst_n}"


def c09a_projectors():
    rng = np.random.default_rng(9)
    mats = [_random_matrix(rng, n) for n in range(2, 13)]
    mats += [carleman_exp(N).entries for N in range(2, 7)]
    mats.append(bell_matrix(named_series("logistic", 8)).entries)
    worst = 0.0
    for M in mats:
        dec = decompose(M)
        Z, lam = dec.projectors, dec.eigenvalues
        n = M.shape[0]
        nrm = np.linalg.norm(M, 2)
        for j in range(n):
            worst = max(worst, np.abs(M @ Z[j] - lam[j] * Z[j]).max() / nrm)
            worst = max(worst, np.abs(Z[j] @ Z[j] - Z[j]).max(), abs(np.trace(Z[j]) - 1))
            for i in range(n):
                if i != j:
                    worst = max(worst, np.abs(Z[i] @ Z[j]).max())
        worst = max(worst, np.abs(Z.sum(axis=0) - np.eye(n)).max())
    return worst <= 1e-9, f"{len(mats)} matrices, worst violation {worst:.1e}"


def _prefix(N):
    return -(-N // 2)


def c09b_semigroup():
    worst = 0.0
    cases = [named_series("logistic", 8), named_series("poly", 8, [0, 1.5, 0.5, -0.2]),
             named_series("affine", 6, [0.7, 1.8])]
    for G in cases:
        N = G.order
        k = _prefix(N) + 1  # coefficients 0.._prefix
        for s, t in [(0.5, 0.5), (1, -1), (0.3, 0.7)]:
            lhs = iterate_series(G, s + t).series
            rhs = compose(iterate_series(G, t).series, iterate_series(G, s).series)
            worst = max(worst, _rel_norm(rhs.taylor[:k], lhs.taylor[:k]))
        back = compose(G, iterate_series(G, -1).series).taylor[:k]
        ident = np.zeros(k)
        ident[1] = 1.0
        worst = max(worst, float(np.abs(back - ident).max()))
    rng = np.random.default_rng(19)
    worst_m = 0.0
    for n in (3, 6, 9, 12):
        M = _random_matrix(rng, n)
        for s in (0.3, 0.5, 1.7):
            for t in (0.3, 0.5, 1.7):
                L = matrix_power(M, s) @ matrix_power(M, t)
                R = matrix_power(M, s + t)
                worst_m = max(worst_m, np.abs(L - R).max() / np.abs(R).max())
    ok = worst <= 1e-7 and worst_m <= 1e-8
    return ok, f"series worst rel {worst:.1e} (tol 1e-7), matrix worst rel {worst_m:.1e} (tol 1e-8)"


def c09c_dual_path():
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(50):
        deg = int(rng.integers(1, 5))
        N = int(rng.integers(max(deg, 1), 11))
        G = named_series("poly", N, list(rng.uniform(-1, 1, deg + 1)))
        D = carleman_direct(G).entries
        fact = np.array([math.factorial(k) for k in range(N + 1)], dtype=float)
        norm = fact[None, :] / fact[:, None]  # C_nr * r!/n! = [x^n] G^r
        for via in ("pascal", "shift"):
            F = carleman_factored(G, via=via).entries
            worst = max(worst, float(np.max(np.abs(F - D) * norm / np.maximum(1.0, np.abs(D) * norm))))
    return worst <= 1e-11, f"50 random polynomials, worst {worst:.1e}"


def c09d_bell_vs_carleman():
    worst = 0.0
    for G in [named_series("logistic", 8), named_series("poly", 7, [0, 2.0, -0.5, 0.3]),
              named_series("poly", 6, [0, 0.6, 0.2])]:
        for a in (0.5, -0.5, 1.5, 0.25):
            b = iterate_series(G, a).series.taylor
            c = iterate_series(G, a, path="carleman").series.taylor
            worst = max(worst, _rel_norm(c, b))
    return worst <= 1e-9, f"worst rel {worst:.1e}"


def c09e_inverse():
    rng = np.random.default_rng(21)
    mats = [carleman_exp(N).entries for N in range(2, 9)]
    mats += [bell_matrix(named_series("logistic", 8)).entries, carleman_direct(named_series("affine", 3, [1, 2])).entries]
    mats += [_random_matrix(rng, n) for n in (4, 8, 12)]
    worst = max(float(np.abs(matrix_power(M, -1) @ M - np.eye(M.shape[0])).max()) for M in mats)
    return worst <= 1e-9, f"{len(mats)} matrices, worst |M^-1 M - I| {worst:.1e}"


def c10_degenerate():
    s = named_series("smoluchowski", 6)
    raised = 0
    for fn in (lambda: iterate_series(s, 0.5), lambda: schroder_solve_bell(s)):
        try:
            fn()
        except DegenerateSpectrum:
            raised += 1
    worst = 0.0
    for k in (2, 3):
        got = iterate_series(s, k).series.taylor
        want = [0.0] + [math.factorial(n) * (-k) ** (n - 1) for n in range(1, 7)]
        worst = max(worst, _rel(got[1:], want[1:]))
    return raised == 2 and worst <= 1e-9, f"DegenerateSpectrum raised {raised}/2, integer iterates rel {worst:.1e}"


CHECKS: list[Check] = [
    Check("1", "N=2 Carleman matrix of exp and its eigenvalues", c01_exp_matrix),
    Check("2", "quoted N=2 values G<1>(e), G<e>(e)", c02_quoted_values),
    Check("3", "e^e needs N=7 for 1% error", c03_convergence),
    Check("4", "golden-ratio, grouped and spectral N=2 forms agree", c04_golden_grid),
    Check("5", "affine continuous iterate closed form", c05_affine),
    Check("6", "logistic half-iterate vs sin^2(sqrt2 arcsin sqrt x)", c06_logistic_half),
    Check("7", "series inversion of x e^x gives Lambert W", c07_lambert),
    Check("8a", "Dobinski partial sums", c08a_dobinski),
    Check("8b", "column 1 of C[exp]^2 at N=10 is e*omega(n)", c08b_exp_squared),
    Check("9a", "projector identities", c09a_projectors),
    Check("9b", "semigroup law on truncation-exact prefix", c09b_semigroup),
    Check("9c", "direct vs factored Carleman construction", c09c_dual_path),
    Check("9d", "Bell and Carleman paths agree at g0=0", c09d_bell_vs_carleman),
    Check("9e", "matrix_power(M, -1) M = I", c09e_inverse),
    Check("10", "degenerate spectrum handling (Smoluchowski)", c10_degenerate),
]


def run_check(check: Check) -> tuple[bool, str]:
    try:
        return check.run()
    except Exception as exc:  # a crash is a failure, reported not raised
        return False, f"raised {type(exc).__name__}: {exc}"


def run_all(echo: Callable[[str], None] = print) -> int:
    """Run every check, print one line each, return the number of failures."""
    failures = 0
    for check in CHECKS:
        ok, detail = run_check(check)
        failures += not ok
        echo(f"[{'PASS' if ok else 'FAIL'}] {check.key:>3}  {check.title}: {detail}")
    echo(f"{len(CHECKS) - failures}/{len(CHECKS)} checks passed")
    return failures
