"""Bell matrices of series without constant term.

``B[g]`` is the N x N lower-triangular matrix with

    B_nm = n! [x^n] g(x)^m / m!,      n, m = 1..N,

so that composition turns into a right product, ``B[f o g] = B[g] B[f]``.
Logical indices start at 1; storage is 0-based and the shift lives only in
:meth:`BellMatrix.entry` / :data:`INDEX_BASE`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import NonInvertible, NonzeroConstantTerm, OrderMismatch
from .series import TruncatedSeries, compose, factorials

INDEX_BASE = 1
G0_TOL = 1e-15


@dataclass(frozen=True, eq=False)
class BellMatrix:
    order: int
    entries: np.ndarray
    source: TruncatedSeries | None = None

    def entry(self, n: int, m: int) -> float:
        """``B_nm`` with the 1-based indices used in the formulas."""
        return self.entries[n - INDEX_BASE, m - INDEX_BASE]

    def first_column(self) -> np.ndarray:
        return self.entries[:, 0]

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.entries)


def _powers_over_factorial(a: np.ndarray, N: int):
    """Yield monomial coefficients of ``g**m / m!`` for m = 1..N."""
    p = np.zeros(N + 1, dtype=a.dtype)
    p[0] = 1.0
    for m in range(1, N + 1):
        p = np.convolve(p, a)[: N + 1] / m
        yield m, p


def bell_matrix(g: TruncatedSeries, N: int | None = None) -> BellMatrix:
    N = g.order if N is None else N
    if N < 1:
        raise ValueError("N must be >= 1")
    if abs(g.g0) > G0_TOL:
        raise NonzeroConstantTerm(f"Bell matrix needs g0 = 0, got g0 = {float(g.g0)!r}")
    g = g.truncate(N)
    a = g.monomial.copy()
    a[0] = 0.0
    fact = factorials(N)
    B = np.zeros((N, N), dtype=a.dtype)
    for m, p in _powers_over_factorial(a, N):
        B[m - INDEX_BASE :, m - INDEX_BASE] = fact[m:] * p[m:]
    return BellMatrix(N, B, g)


def series_from_bell(B: BellMatrix) -> TruncatedSeries:
    return TruncatedSeries.from_taylor(np.concatenate([[0.0], B.first_column()]))


def bell_product(Bg: BellMatrix, Bf: BellMatrix) -> BellMatrix:
    """``B[g] B[f]``, the Bell matrix of ``f o g``."""
    if Bg.order != Bf.order:
        raise OrderMismatch(f"orders differ: {Bg.order} vs {Bf.order}")
    src = None
    if Bg.source is not None and Bf.source is not None:
        src = compose(Bf.source, Bg.source)
    return BellMatrix(Bg.order, Bg.entries @ Bf.entries, src)


def bell_inverse(B: BellMatrix) -> BellMatrix:
    d = B.diagonal
    if np.any(d == 0):
        raise NonInvertible("g1 = 0: the series has no compositional inverse")
    inv = solve_triangular(B.entries, np.eye(B.order, dtype=B.entries.dtype), lower=True)
    return BellMatrix(B.order, inv)


def bell_power_int(B: BellMatrix, k: int) -> BellMatrix:
    """``B**k`` by repeated products; negative ``k`` inverts by substitution first.

    No eigen-decomposition is involved, so ``g1 = 1`` is fine.
    """
    k = int(k)
    base = bell_inverse(B) if k < 0 else B
    out = np.linalg.matrix_power(base.entries, abs(k))
    return BellMatrix(B.order, out)
