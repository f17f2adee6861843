"""Continuous iteration of truncated series.

``G^<alpha>`` is read from the alpha-th power of the series' matrix: the
first column of ``B[g]**alpha`` when ``g(0) = 0`` (Bell path), column 1 of
``C[G]**alpha`` otherwise (Carleman path).  Integer orders never go through
the spectral decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bell import G0_TOL, bell_matrix, bell_power_int, series_from_bell
from .carleman import carleman_direct
from .errors import DegenerateSpectrum, NonInvertible, NonzeroConstantTerm, ZeroEigenvalue
from .series import TruncatedSeries, compose
from .spectral import SpectralDecomposition, decompose

@dataclass(frozen=True)
class Diagnostics:
    gap: float | None = None
    max_imag: float = 0.0
    eigenvalues: tuple[complex, ...] = ()


@dataclass(frozen=True)
class IterateResult:
    series: TruncatedSeries
    alpha: float
    path: str  # "bell", "carleman", "integer-power"
    diagnostics: Diagnostics = field(default_factory=Diagnostics)


def _is_integer(alpha: float) -> bool:
    return float(alpha).is_integer()


def _uses_bell(G: TruncatedSeries) -> bool:
    return abs(G.g0) <= G0_TOL


def _carleman_int_power(C: np.ndarray, k: int) -> np.ndarray:
    if k < 0:
        try:
            C = np.linalg.solve(C, np.eye(C.shape[0]))
        except np.linalg.LinAlgError as exc:
            raise NonInvertible("Carleman matrix is singular (g1 = 0)") from exc
    return np.linalg.matrix_power(C, abs(k))


def iterate_series(
    G: TruncatedSeries,
    alpha: float,
    N: int | None = None,
    tol: float | None = None,
    path: str | None = None,
) -> IterateResult:
    """Iterate of order ``alpha`` of ``G``, truncated at ``N``.

    ``tol`` overrides the degeneracy threshold of the spectral path.  ``path``
    forces ``"carleman"`` for a series with ``g0 = 0`` (the Bell path is the
    default there); it cannot force ``"bell"`` when ``g0 != 0``.
    """
    N = G.order if N is None else N
    G = G.truncate(N)
    alpha = float(alpha)
    bell = _uses_bell(G)
    if path == "carleman":
        bell = False
    elif path == "bell" and not bell:
        raise NonzeroConstantTerm(f"Bell path needs g0 = 0, got g0 = {float(G.g0)!r}")
    elif path not in (None, "bell"):
        raise ValueError(f"unknown path {path!r}")

    if _is_integer(alpha):
        k = int(alpha)
        if k < 0 and G.g1 == 0:
            raise NonInvertible("g1 = 0: the series has no compositional inverse")
        if bell:
            series = series_from_bell(bell_power_int(bell_matrix(G, N), k))
        else:
            Ck = _carleman_int_power(carleman_direct(G, N).entries, k)
            series = TruncatedSeries.from_taylor(Ck[:, 1])
        return IterateResult(series, alpha, "integer-power")

    if G.g1 == 0:
        raise ZeroEigenvalue("g1 = 0: fractional iterates are undefined")
    if bell:
        dec = decompose(bell_matrix(G, N).entries, tol)
        P, max_imag = dec.power(alpha)
        series = TruncatedSeries.from_taylor(np.concatenate([[0.0], P[:, 0]]))
        path = "bell"
    else:
        dec = decompose(carleman_direct(G, N).entries, tol)
        P, max_imag = dec.power(alpha)
        series = TruncatedSeries.from_taylor(P[:, 1])
        path = "carleman"
    return IterateResult(series, alpha, path, Diagnostics(dec.gap, max_imag, tuple(dec.eigenvalues)))


def invert_series(g: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse of ``g`` (``g0 = 0``, ``g1 != 0``) by triangular substitution."""
    return series_from_bell(bell_power_int(bell_matrix(g), -1))


def carleman_decomposition(G: TruncatedSeries, N: int | None = None, tol: float | None = None) -> SpectralDecomposition:
    return decompose(carleman_direct(G, N).entries, tol)


def projector_functions(G: TruncatedSeries, N: int | None = None, tol: float | None = None):
    """Pairs ``(lam_j, R_j)`` with ``R_j(x) = sum_k Z_j[k, 1] x**k / k!``.

    Any iterate factorizes as ``G^<alpha> = sum_j lam_j**alpha R_j``.  Complex
    eigenvalues give complex-coefficient ``R_j``.
    """
    dec = carleman_decomposition(G, N, tol)
    out = []
    for lam, Z in zip(dec.eigenvalues, dec.projectors):
        col = Z[:, 1]
        if dec.is_real and lam.imag == 0:
            col = col.real
            lam = complex(lam.real, 0.0)
        out.append((lam, TruncatedSeries.from_taylor(col)))
    return out


def apply_functional(G: TruncatedSeries, f: Callable[[complex], complex], N: int | None = None, tol: float | None = None) -> TruncatedSeries:
    """Series read from column 1 of ``f(C[G])``."""
    F, _ = carleman_decomposition(G, N, tol).function(f)
    return TruncatedSeries.from_taylor(F[:, 1])


@dataclass(frozen=True)
class SchroderSolution:
    multiplier: float
    series: TruncatedSeries
    residual: float


def schroder_solve_bell(g: TruncatedSeries, N: int | None = None, rtol: float = 1e-8) -> SchroderSolution:
    """Solve ``F(g(x)) = g1 F(x)`` with ``F'(0) = 1`` by forward substitution.

    Row ``k`` of ``B[g] f = K f`` gives
    ``f_k = -(sum_{r<k} B_kr f_r) / (g1**k - g1)``.
    """
    N = g.order if N is None else N
    B = bell_matrix(g, N)
    K = B.entry(1, 1)
    f = np.zeros(N)
    f[0] = 1.0
    for k in range(2, N + 1):
        denom = B.entry(k, k) - K
        if abs(denom) <= rtol * max(1.0, abs(K)):
            raise DegenerateSpectrum(
                f"resonance: g1**{k} = {B.entry(k, k):.6g} equals g1 = {K:.6g}",
                pair=(complex(B.entry(k, k)), complex(K)),
            )
        f[k - 1] = -(B.entries[k - 1, : k - 1] @ f[: k - 1]) / denom
    F = TruncatedSeries.from_taylor(np.concatenate([[0.0], f]))
    lhs = compose(F, g.truncate(N)).taylor
    rhs = K * F.taylor
    residual = float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs))))
    return SchroderSolution(float(K), F, residual)


def schroder_eigenvectors_carleman(G: TruncatedSeries, N: int | None = None, tol: float | None = None):
    """Right eigenvectors ``(K, v)`` of ``C[G]``, scaled so the largest-magnitude entry is 1.

    Each eigenvector is the dominant column of the matching projector.
    """
    dec = carleman_decomposition(G, N, tol)
    out = []
    for lam, Z in zip(dec.eigenvalues, dec.projectors):
        col = Z[:, np.argmax(np.linalg.norm(Z, axis=0))]
        v = col / col[np.argmax(np.abs(col))]
        if dec.is_real and lam.imag == 0:
            v, lam = v.real, complex(lam.real, 0.0)
        out.append((lam, v))
    return out
