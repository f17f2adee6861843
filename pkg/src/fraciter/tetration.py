"""Tetration as continuous iteration of the exponential.

``exp^<t>(x)`` comes from column 1 of ``C[e^x]**t``.  A general base uses
``a**x = exp(x ln a)``, i.e. the series with ``g_k = (ln a)**k``.  Towers in
the usual sense start at ``x = 1``; the N = 2 worked example starts at
``x = e`` ("e exponentiated by itself t times").
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import BaseOutOfRange, FracIterError
from .iterate import iterate_series
from .series import TruncatedSeries, evaluate, named_series

log = logging.getLogger(__name__)

SQRT5 = math.sqrt(5.0)
GOLDEN = (1.0 + SQRT5) / 2.0
LAM_PLUS = (3.0 + SQRT5) / 2.0
LAM_MINUS = (3.0 - SQRT5) / 2.0


def exp_iterate(t: float, x: float, N: int, tol: float | None = None) -> float:
    """``exp^<t>(x)`` from the order-``N`` Carleman matrix."""
    return float(evaluate(iterate_series(named_series("exp", N), t, N, tol).series, x))


def closed_form_N2(t: float, x: float, form: str = "columns") -> float:
    """Exact N = 2 iterate of ``e^x`` in one of three equivalent forms.

    ``columns`` groups by powers of ``x``, ``eigen`` groups by the two
    nontrivial eigenvalues, and ``golden`` writes those eigenvalues as
    ``1 + phi`` and ``2 - phi``.
    """
    if form == "columns":
        p, m = LAM_PLUS**t, LAM_MINUS**t
        c0 = 0.5 - (1 - SQRT5) / 4 * p - (1 + SQRT5) / 4 * m
        c1 = (5 - SQRT5) / 10 * p + (5 + SQRT5) / 10 * m
        c2 = (p - m) / SQRT5
        return c0 + c1 * x + c2 * x * x / 2
    if form == "eigen":
        return (
            0.5
            + LAM_PLUS**t * ((5 - SQRT5) / 10 * x - (1 - SQRT5) / 4 + x * x / (2 * SQRT5))
            + LAM_MINUS**t * ((5 + SQRT5) / 10 * x - (1 + SQRT5) / 4 - x * x / (2 * SQRT5))
        )
    if form == "golden":
        phi = GOLDEN
        q = x * x / (4 * phi - 2)
        return (
            0.5
            + (1 + phi) ** t * ((3 - phi) / 5 * x - (1 - phi) / 2 + q)
            + (2 - phi) ** t * ((2 + phi) / 5 * x - phi / 2 - q)
        )
    raise ValueError(f"unknown form {form!r}")


CLOSED_FORMS = ("columns", "eigen", "golden")


@dataclass(frozen=True)
class TetrationQuery:
    base: float
    height: float
    x: float = 1.0
    order: int = 12

    def __post_init__(self):
        if not (self.base > 0) or self.base == 1:
            raise BaseOutOfRange(f"base must satisfy a > 0 and a != 1, got {self.base}")

    def series(self) -> TruncatedSeries:
        if self.base == math.e:
            return named_series("exp", self.order)
        return named_series("exp_base", self.order, [self.base])


def tower(a: float, n: int, x: float = 1.0) -> float:
    """``a**a**...**x`` with ``n`` exponentiations, evaluated directly."""
    v = x
    for _ in range(n):
        v = a**v
    return v


def tetrate(q: TetrationQuery, tol: float | None = None) -> float:
    value = float(evaluate(iterate_series(q.series(), q.height, q.order, tol).series, q.x))
    if float(q.height).is_integer() and q.height >= 0:
        try:
            ref = tower(q.base, int(q.height), q.x)
        except OverflowError:
            ref = math.inf
        log.debug("tetrate: order %d gives %r, direct tower %r", q.order, value, ref)
    return value


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind S(n, k), exact."""
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    row = [1]  # S(0, 0)
    for m in range(1, n + 1):
        new = [0] * (m + 1)
        for j in range(1, m + 1):
            new[j] = j * (row[j] if j < m else 0) + row[j - 1]
        row = new
    return row[k]


def bell_number(n: int) -> int:
    """Number of set partitions of ``n`` elements (``omega(0) = 1``)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return sum(stirling2(n, k) for k in range(n + 1))


def dobinski_check(n: int, J: int) -> tuple[float, float, float]:
    """Partial sum ``sum_{j<=J} j**n / j!`` against ``e * omega(n)``."""
    if n < 0 or J < n:
        raise ValueError("need n >= 0 and J >= n")
    lhs = math.fsum(j**n / math.factorial(j) for j in range(J + 1))
    rhs = math.e * bell_number(n)
    return lhs, rhs, abs(lhs - rhs) / rhs


@dataclass(frozen=True)
class SweepRow:
    N: int
    value: float | None
    rel_error: float | None = None
    successive_diff: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class ConvergenceReport:
    t: float
    x: float
    rows: list[SweepRow]
    reference: float | None
    provenance: str
    spec: str = "exp"
    notes: list[str] = field(default_factory=list)

    @property
    def has_reference(self) -> bool:
        return self.reference is not None


NO_REFERENCE = "no external reference; successive-difference column only"


def convergence_sweep(
    t: float,
    x: float,
    orders: Sequence[int],
    series: Callable[[int], TruncatedSeries] | None = None,
    scalar: Callable[[float], float] | None = None,
    spec: str = "exp",
    tol: float | None = None,
) -> ConvergenceReport:
    """Iterate value for each truncation order.

    For integer ``t >= 0`` the reference is the ``t``-fold application of
    ``scalar`` (``math.exp`` by default); otherwise there is none and only
    successive differences are reported.  Failing orders are recorded and
    the sweep goes on.
    """
    series = series or (lambda N: named_series("exp", N))
    scalar = scalar or math.exp
    orders = sorted(orders)

    reference = None
    provenance = NO_REFERENCE
    if float(t).is_integer() and t >= 0:
        try:
            reference = x
            for _ in range(int(t)):
                reference = scalar(reference)
            provenance = f"direct {int(t)}-fold evaluation of the exact function at x"
        except (OverflowError, ValueError, ZeroDivisionError) as exc:
            reference = None
            provenance = f"{NO_REFERENCE} (direct evaluation failed: {exc})"

    rows: list[SweepRow] = []
    prev = None
    for N in orders:
        try:
            value = float(evaluate(iterate_series(series(N), t, N, tol).series, x))
        except (FracIterError, ArithmeticError) as exc:
            rows.append(SweepRow(N, None, error=f"{type(exc).__name__}: {exc}"))
            prev = None
            continue
        rel = None
        if reference is not None:
            rel = abs(value - reference) / abs(reference) if reference != 0 else abs(value)
        diff = abs(value - prev) if prev is not None else None
        rows.append(SweepRow(N, value, rel, diff))
        prev = value
    return ConvergenceReport(t, x, rows, reference, provenance, spec)
