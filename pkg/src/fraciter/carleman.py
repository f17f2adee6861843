"""Carleman matrices of series with an arbitrary constant term.

``C[G]`` is (N+1) x (N+1), indices 0..N, with

    C_nr = n! [x^n] G(x)^r / r!.

Column 1 holds the Taylor coefficients of ``G``.  The canonical composition
rule used throughout this package is

    C[G o F] = C[F] C[G]

i.e. the matrix of the inner function stands on the left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bell import BellMatrix, _powers_over_factorial, bell_matrix
from .errors import OrderMismatch
from .series import TruncatedSeries, compose, factorials


@dataclass(frozen=True, eq=False)
class CarlemanMatrix:
    order: int
    entries: np.ndarray
    source: TruncatedSeries | None = None

    def column(self, r: int) -> np.ndarray:
        return self.entries[:, r]

    def series(self) -> TruncatedSeries:
        """Read the series back from column 1."""
        return TruncatedSeries.from_taylor(self.entries[:, 1])


def carleman_direct(G: TruncatedSeries, N: int | None = None) -> CarlemanMatrix:
    N = G.order if N is None else N
    G = G.truncate(N)
    a = G.monomial
    fact = factorials(N)
    C = np.zeros((N + 1, N + 1), dtype=a.dtype)
    C[0, 0] = 1.0
    for r, p in _powers_over_factorial(a, N):
        C[:, r] = fact * p
    return CarlemanMatrix(N, C, G)


def embed_bell(B: BellMatrix) -> np.ndarray:
    """Border ``B`` with a trivial zero-th row and column."""
    N = B.order
    out = np.zeros((N + 1, N + 1), dtype=B.entries.dtype)
    out[0, 0] = 1.0
    out[1:, 1:] = B.entries
    return out


def shift_matrix(N: int) -> np.ndarray:
    """(N+1) x (N+1) matrix with ones on the first superdiagonal."""
    return np.eye(N + 1, k=1)


def pascal_matrix(g0: float, N: int) -> np.ndarray:
    """Upper-triangular ``M_rm = g0**(m-r) / (m-r)!``."""
    M = np.zeros((N + 1, N + 1), dtype=np.result_type(g0, float))
    for d in range(N + 1):
        M += np.eye(N + 1, k=d) * (g0**d / math.factorial(d))
    return M


def pascal_via_shift(g0: float, N: int) -> np.ndarray:
    """``exp_N(W g0)``: the exponential series of the shift matrix, truncated at N."""
    W = shift_matrix(N) * g0
    term = np.eye(N + 1, dtype=W.dtype)
    M = term.copy()
    for j in range(1, N + 1):
        term = term @ W / j
        M = M + term
    return M


def carleman_factored(G: TruncatedSeries, N: int | None = None, via: str = "pascal") -> CarlemanMatrix:
    """``C[G] = B^[g] M[g0]`` with ``g = G - g0``.

    ``via="shift"`` builds ``M[g0]`` from the shift matrix instead of the
    closed-form entries.
    """
    N = G.order if N is None else N
    G = G.truncate(N)
    g0 = G.g0
    B = bell_matrix(G - g0, N)
    if via == "pascal":
        M = pascal_matrix(g0, N)
    elif via == "shift":
        M = pascal_via_shift(g0, N)
    else:
        raise ValueError(f"unknown construction {via!r}")
    return CarlemanMatrix(N, embed_bell(B) @ M, G)


def carleman_exp(N: int) -> CarlemanMatrix:
    """``C_nj[e^x] = j**n / j!`` with ``0**0 = 1``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    n = np.arange(N + 1, dtype=float)[:, None]
    j = np.arange(N + 1, dtype=float)[None, :]
    C = j**n / factorials(N)[None, :]  # numpy gives 0.0**0.0 == 1.0
    return CarlemanMatrix(N, C, TruncatedSeries(1.0 / factorials(N)))


def carleman_product(CF: CarlemanMatrix, CG: CarlemanMatrix) -> CarlemanMatrix:
    """``C[F] C[G]``, which represents ``G o F``."""
    if CF.order != CG.order:
        raise OrderMismatch(f"orders differ: {CF.order} vs {CG.order}")
    src = None
    if CF.source is not None and CG.source is not None:
        src = compose(CG.source, CF.source)
    return CarlemanMatrix(CF.order, CF.entries @ CG.entries, src)
