"""Textual function specs used on the command line.

Grammar::

    exp | exp_base:<a> | affine:<g0>,<g1> | logistic | smoluchowski | xe^x
        | poly:<a0>,<a1>,...

``poly`` takes monomial coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import FracIterError
from .series import TruncatedSeries, named_series

# head -> (number of params or None for "one or more")
HEADS: dict[str, int | None] = {
    "exp": 0,
    "exp_base": 1,
    "affine": 2,
    "logistic": 0,
    "smoluchowski": 0,
    "xe^x": 0,
    "poly": None,
}


class SpecParseError(FracIterError, ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() and abs(v) < 1e16 else repr(float(v))


@dataclass(frozen=True)
class FunctionSpec:
    head: str
    params: tuple[float, ...] = ()

    def render(self) -> str:
        if not self.params:
            return self.head
        return f"{self.head}:" + ",".join(_fmt(p) for p in self.params)

    __str__ = render

    def series(self, order: int) -> TruncatedSeries:
        return named_series(self.head, order, self.params)

    def scalar(self) -> Callable[[float], float]:
        """The exact function, for reference values."""
        h, p = self.head, self.params
        if h == "exp":
            return math.exp
        if h == "exp_base":
            return lambda x: p[0] ** x
        if h == "affine":
            return lambda x: p[0] + p[1] * x
        if h == "logistic":
            return lambda x: 4 * x * (1 - x)
        if h == "smoluchowski":
            return lambda x: x / (1 + x)
        if h == "xe^x":
            return lambda x: x * math.exp(x)
        return lambda x: math.fsum(a * x**k for k, a in enumerate(p))


def parse(text: str) -> FunctionSpec:
    s = text.strip()
    offset = len(text) - len(text.lstrip())
    head, sep, rest = s.partition(":")
    if head not in HEADS:
        raise SpecParseError(f"unknown function {head!r} (expected one of {', '.join(HEADS)})", text, offset)
    want = HEADS[head]
    if not sep:
        if want:
            raise SpecParseError(f"{head} needs {want} parameter(s)", text, offset + len(head))
        if want is None:
            raise SpecParseError("poly needs at least one coefficient", text, offset + len(head))
        return FunctionSpec(head)
    if want == 0:
        raise SpecParseError(f"{head} takes no parameters", text, offset + len(head))

    params = []
    pos = offset + len(head) + 1
    for tok in rest.split(","):
        try:
            v = float(tok)
        except ValueError:
            raise SpecParseError(f"malformed number {tok!r}", text, pos) from None
        if not math.isfinite(v):
            raise SpecParseError(f"non-finite number {tok!r}", text, pos)
        params.append(v)
        pos += len(tok) + 1
    if want is not None and len(params) != want:
        raise SpecParseError(f"{head} needs {want} parameter(s), got {len(params)}", text, offset + len(head) + 1)
    if head == "exp_base" and params[0] <= 0:
        raise SpecParseError("exp_base needs a > 0", text, offset + len(head) + 1)
    return FunctionSpec(head, tuple(params))
