"""Spectral projectors and functions of nondegenerate matrices.

A matrix with distinct eigenvalues ``lam_j`` splits into projectors ``Z_j``
that are idempotent, mutually annihilating and sum to the identity; every
matrix function is then ``f(M) = sum_j f(lam_j) Z_j``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg as sl

from .errors import BranchViolation, DegenerateSpectrum, IterationFailure, ZeroEigenvalue

RESIDUAL_TOL = 1e-10
DEGENERACY_RTOL = 1e-8
REALITY_RTOL = 1e-9
ZERO_RTOL = 1e-14


def _norm(M: np.ndarray) -> float:
    return float(np.linalg.norm(M, 2)) if M.size else 0.0


def _is_triangular(M: np.ndarray) -> bool:
    return bool(np.all(np.tril(M, -1) == 0) or np.all(np.triu(M, 1) == 0))


def eigenvalues(M: np.ndarray) -> np.ndarray:
    """Full spectrum of a dense square matrix, as complex numbers.

    Triangular input returns its diagonal unchanged.  Otherwise LAPACK's
    balanced Hessenberg-QR is used and every eigenpair is checked against
    ``||M v - lam v|| <= 1e-10 ||M|| ||v||``.
    """
    M = np.asarray(M)
    if _is_triangular(M):
        return np.diag(M).astype(complex)
    w, V = np.linalg.eig(M)
    scale = max(_norm(M), np.finfo(float).tiny)
    res = np.linalg.norm(M @ V - V * w, axis=0) / np.linalg.norm(V, axis=0)
    worst = float(res.max()) / scale
    if not np.isfinite(worst) or worst > RESIDUAL_TOL:
        raise IterationFailure(f"eigenpair residual {worst:.3e} exceeds {RESIDUAL_TOL:g}")
    return w.astype(complex)


def _closest_pair(lam: np.ndarray) -> tuple[int, int, float]:
    d = np.abs(lam[:, None] - lam[None, :])
    np.fill_diagonal(d, np.inf)
    i, j = np.unravel_index(np.argmin(d), d.shape)
    return int(i), int(j), float(d[i, j])


def min_gap(eigs: Sequence[complex]) -> float:
    lam = np.asarray(eigs, dtype=complex)
    return _closest_pair(lam)[2] if lam.size > 1 else float("inf")


def check_nondegenerate(eigs: Sequence[complex], tol: float) -> float:
    """Minimum pairwise distance of ``eigs``; raise if it falls below ``tol``."""
    lam = np.asarray(eigs, dtype=complex)
    if lam.size < 2:
        return float("inf")
    i, j, gap = _closest_pair(lam)
    if gap < tol:
        raise DegenerateSpectrum(
            f"eigenvalues {lam[i]:.6g} and {lam[j]:.6g} coincide within {tol:.3g} (gap {gap:.3g})",
            pair=(complex(lam[i]), complex(lam[j])),
        )
    return gap


def default_tol(M: np.ndarray) -> float:
    return DEGENERACY_RTOL * max(_norm(M), 1.0)


def _eig_left_right(M: np.ndarray):
    w, vl, vr = sl.eig(M, left=True, right=True)
    return w.astype(complex), vl, vr


def _match(target: np.ndarray, found: np.ndarray) -> np.ndarray:
    """Index into ``found`` of the nearest entry to each ``target`` (one-to-one)."""
    free = list(range(found.size))
    idx = []
    for lam in target:
        k = min(free, key=lambda i: abs(found[i] - lam))
        free.remove(k)
        idx.append(k)
    return np.array(idx, dtype=int)


def projectors(M: np.ndarray, eigs: Sequence[complex], tol: float | None = None) -> np.ndarray:
    """Spectral projectors, shape ``(n, n, n)`` with ``Z[j]`` belonging to ``eigs[j]``.

    ``Z_j = v_j w_j^H / (w_j^H v_j)`` from matched right/left eigenvectors.
    Scale-free, and stable where the Lagrange product is not (see
    :func:`lagrange_projectors`).
    """
    M = np.asarray(M)
    lam = np.asarray(eigs, dtype=complex)
    check_nondegenerate(lam, default_tol(M) if tol is None else tol)
    w, vl, vr = _eig_left_right(M)
    idx = _match(lam, w)
    n = lam.size
    Z = np.empty((n, n, n), dtype=complex)
    for j, k in enumerate(idx):
        v, u = vr[:, k], vl[:, k].conj()
        Z[j] = np.outer(v, u) / (u @ v)
    return Z


def lagrange_projectors(M: np.ndarray, eigs: Sequence[complex], tol: float | None = None) -> np.ndarray:
    """Frobenius covariants ``prod_{i != j} (M - lam_i I) / (lam_j - lam_i)``.

    Factors are multiplied in order of decreasing ``|lam_j - lam_i|``.  Exact
    in exact arithmetic, but rounding grows like ``||M||**(n-1) / prod(gaps)``;
    for Carleman matrices of ``e^x`` it is unusable beyond ``N ~ 7``.  Kept as
    an independent check on :func:`projectors`.
    """
    M = np.asarray(M)
    lam = np.asarray(eigs, dtype=complex)
    n = lam.size
    check_nondegenerate(lam, default_tol(M) if tol is None else tol)
    I = np.eye(n, dtype=complex)
    Z = np.empty((n, n, n), dtype=complex)
    for j in range(n):
        others = [i for i in range(n) if i != j]
        others.sort(key=lambda i: -abs(lam[j] - lam[i]))
        P = I.copy()
        for i in others:
            P = P @ ((M - lam[i] * I) / (lam[j] - lam[i]))
        Z[j] = P
    return Z


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    matrix: np.ndarray
    eigenvalues: np.ndarray
    projectors: np.ndarray
    gap: float
    norm: float = field(default=0.0)

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.matrix)

    def combine(self, values: Sequence[complex]) -> tuple[np.ndarray, float]:
        """``sum_j values[j] Z_j``; returns ``(matrix, max discarded imaginary part)``.

        The result is truncated to real when the input matrix is real and the
        imaginary residue is at most ``1e-9`` of the result norm.
        """
        v = np.asarray(values, dtype=complex)
        out = np.tensordot(v, self.projectors, axes=1)
        max_imag = float(np.abs(out.imag).max()) if out.size else 0.0
        if self.is_real and max_imag <= REALITY_RTOL * max(_norm(out.real), 1e-300):
            return out.real.copy(), max_imag
        return out, max_imag

    def function(self, f: Callable[[complex], complex]) -> tuple[np.ndarray, float]:
        vals = []
        for lam in self.eigenvalues:
            try:
                v = complex(f(_canonical(lam)))
            except (ValueError, ZeroDivisionError, OverflowError) as exc:
                raise BranchViolation(f"function undefined at eigenvalue {lam:.6g}: {exc}") from exc
            if not cmath.isfinite(v):
                raise BranchViolation(f"function is not finite at eigenvalue {lam:.6g}")
            vals.append(v)
        return self.combine(vals)

    def power(self, t: float) -> tuple[np.ndarray, float]:
        """``M**t`` on the principal branch of the logarithm."""
        zero = ZERO_RTOL * max(self.norm, 1.0)
        if t != 0 and np.any(np.abs(self.eigenvalues) <= zero):
            raise ZeroEigenvalue("matrix has a zero eigenvalue; non-integer and negative powers are undefined")
        return self.combine([principal_power(lam, t) for lam in self.eigenvalues])


def _canonical(lam: complex) -> complex:
    # -0.0 imaginary parts would select the lower branch of log
    lam = complex(lam)
    return complex(lam.real, 0.0) if lam.imag == 0 else lam


def principal_power(lam: complex, t: float) -> complex:
    lam = _canonical(lam)
    if t == 0:
        return 1.0 + 0j
    if lam.imag == 0 and lam.real > 0:
        return complex(lam.real**t)
    return cmath.exp(t * cmath.log(lam))


def decompose(M: np.ndarray, tol: float | None = None) -> SpectralDecomposition:
    M = np.asarray(M)
    lam = eigenvalues(M)
    tol = default_tol(M) if tol is None else tol
    gap = check_nondegenerate(lam, tol)
    Z = projectors(M, lam, tol)
    return SpectralDecomposition(M, lam, Z, gap, _norm(M))


def matrix_function(M: np.ndarray, f: Callable[[complex], complex], tol: float | None = None) -> np.ndarray:
    """``f(M) = sum_j f(lam_j) Z_j``."""
    return decompose(M, tol).function(f)[0]


def matrix_power(M: np.ndarray, t: float, tol: float | None = None) -> np.ndarray:
    return decompose(M, tol).power(t)[0]
