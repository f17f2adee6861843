"""Truncated formal power series.

A :class:`TruncatedSeries` keeps the coefficients of ``x**0 .. x**N``.  The
public convention is the *Taylor* (derivative) one,

    G(x) = sum_k g_k x**k / k!,

but storage is monomial, ``a_k = g_k / k!``, which keeps magnitudes sane at
large ``N`` and makes the Cauchy product a plain convolution.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import UnknownSeries

log = logging.getLogger(__name__)

_FACTORIALS: list[float] = [1.0]


def factorials(n: int) -> np.ndarray:
    """``[0!, 1!, ..., n!]`` as floats."""
    while len(_FACTORIALS) <= n:
        _FACTORIALS.append(_FACTORIALS[-1] * len(_FACTORIALS))
    return np.array(_FACTORIALS[: n + 1])


def _frozen(a) -> np.ndarray:
    arr = np.array(a)
    if not np.iscomplexobj(arr):
        arr = arr.astype(float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Formal power series truncated at order ``N`` (``N + 1`` coefficients).

    Construct with :meth:`from_taylor` or :meth:`from_monomial`.  Coefficients
    are real except for projector functions of complex eigenvalues.
    """

    monomial: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.monomial)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("a truncated series needs order N >= 1")
        object.__setattr__(self, "monomial", arr)

    @classmethod
    def from_taylor(cls, taylor: Sequence[float]) -> TruncatedSeries:
        t = np.asarray(taylor)
        return cls(t / factorials(t.size - 1))

    @classmethod
    def from_monomial(cls, coeffs: Sequence[float]) -> TruncatedSeries:
        return cls(np.asarray(coeffs))

    @classmethod
    def zero(cls, order: int) -> TruncatedSeries:
        return cls(np.zeros(order + 1))

    @property
    def order(self) -> int:
        return self.monomial.size - 1

    @property
    def taylor(self) -> np.ndarray:
        return self.monomial * factorials(self.order)

    @property
    def g0(self):
        return self.monomial[0]

    @property
    def g1(self):
        return self.monomial[1]

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.monomial)

    def truncate(self, order: int) -> TruncatedSeries:
        """Re-truncate (or zero-pad) to ``order``."""
        a = np.zeros(order + 1, dtype=self.monomial.dtype)
        m = min(order, self.order) + 1
        a[:m] = self.monomial[:m]
        return TruncatedSeries(a)

    def degree(self) -> int:
        """Index of the highest nonzero coefficient (0 for the zero series)."""
        nz = np.flatnonzero(self.monomial)
        return int(nz[-1]) if nz.size else 0

    def __call__(self, x):
        return evaluate(self, x)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return multiply(self, other)
        return TruncatedSeries(self.monomial * other)

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            n = min(self.order, other.order)
            return TruncatedSeries(self.monomial[: n + 1] + other.monomial[: n + 1])
        a = self.monomial.copy()
        a[0] += other
        return TruncatedSeries(a)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.monomial)

    def __sub__(self, other):
        return self + (-other)

    def __repr__(self):
        return f"TruncatedSeries(order={self.order}, taylor={np.array2string(self.taylor, precision=6)})"


def evaluate(s: TruncatedSeries, x):
    """Horner evaluation of ``sum_k a_k x**k``."""
    acc = 0.0
    for a in s.monomial[::-1]:
        acc = acc * x + a
    return acc


def multiply(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated to the smaller of the two orders."""
    n = min(f.order, g.order)
    return TruncatedSeries(np.convolve(f.monomial[: n + 1], g.monomial[: n + 1])[: n + 1])


def composition_path(g: TruncatedSeries) -> str:
    """``"series"`` when ``g(0) == 0`` (truncation-exact), else ``"polynomial"``."""
    return "series" if g.g0 == 0 else "polynomial"


def compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Coefficients of ``f(g(x))`` to the smaller order.

    Horner's scheme over series.  When ``g(0) == 0`` the result is the exact
    truncated composition; otherwise ``f`` is read as a degree-``N`` polynomial
    and the composition is exact for that polynomial only.
    """
    n = min(f.order, g.order)
    log.debug("compose: %s path", composition_path(g))
    gm = g.monomial[: n + 1]
    acc = np.zeros(n + 1, dtype=np.result_type(f.monomial, gm))
    for a in f.monomial[: n + 1][::-1]:
        acc = np.convolve(acc, gm)[: n + 1]
        acc[0] += a
    return TruncatedSeries(acc)


# -- catalog ---------------------------------------------------------------

def _exp(N, lam=1.0):
    return np.array([lam**k for k in range(N + 1)]) / factorials(N)


def _affine(N, g0, g1):
    a = np.zeros(N + 1)
    a[0], a[1] = g0, g1
    return a


def _poly(N, *coeffs):
    a = np.zeros(N + 1)
    c = np.asarray(coeffs, dtype=float)[: N + 1]
    a[: c.size] = c
    return a


def _exp_base(N, a):
    if a <= 0:
        raise ValueError(f"exp_base needs a > 0, got {a}")
    return _exp(N, math.log(a))


def _smoluchowski(N):
    a = np.array([(-1.0) ** (k - 1) for k in range(N + 1)])
    a[0] = 0.0
    return a


def _xexp(N):
    a = np.zeros(N + 1)
    a[1:] = 1.0 / factorials(N - 1)
    return a


def _arcsin_sq(N):
    # (arcsin y)^2 = 1/2 sum_{n>=1} (2y)^{2n} / (n^2 C(2n, n)), with y^2 = x
    a = np.zeros(N + 1)
    for n in range(1, N + 1):
        a[n] = 2.0 ** (2 * n - 1) / (n * n * math.comb(2 * n, n))
    return a


def _sin_sq_sqrt(N):
    # sin^2(sqrt z) = (1 - cos(2 sqrt z)) / 2
    a = np.zeros(N + 1)
    for n in range(1, N + 1):
        a[n] = (-1.0) ** (n + 1) * 4.0**n / (2.0 * math.factorial(2 * n))
    return a


_CATALOG = {
    "exp": (_exp, 0),
    "exp_base": (_exp_base, 1),
    "expm1": (lambda N: _exp(N) - _affine(N, 1.0, 0.0), 0),
    "affine": (_affine, 2),
    "logistic": (lambda N: _poly(N, 0.0, 4.0, -4.0), 0),
    "smoluchowski": (_smoluchowski, 0),
    "identity": (lambda N: _affine(N, 0.0, 1.0), 0),
    "xe^x": (_xexp, 0),
    "arcsin_sq": (_arcsin_sq, 0),
    "sin_sq_sqrt": (_sin_sq_sqrt, 0),
    "poly": (_poly, None),
}

SERIES_NAMES = tuple(_CATALOG)


def named_series(name: str, order: int, params: Sequence[float] = ()) -> TruncatedSeries:
    """Catalog series by name.

    ``exp_base`` takes the base ``a`` and has ``g_k = (ln a)**k``;
    ``affine`` takes ``(g0, g1)``; ``poly`` takes monomial coefficients.
    ``arcsin_sq`` is ``(arcsin sqrt x)**2`` and ``sin_sq_sqrt`` is
    ``sin(sqrt z)**2``; together they conjugate the logistic map ``4x(1-x)``
    to a doubling.
    """
    try:
        build, nparams = _CATALOG[name]
    except KeyError:
        raise UnknownSeries(f"unknown series {name!r}; known: {', '.join(SERIES_NAMES)}") from None
    if nparams is not None and len(params) != nparams:
        raise ValueError(f"{name} takes {nparams} parameter(s), got {len(params)}")
    return TruncatedSeries(build(order, *params))
