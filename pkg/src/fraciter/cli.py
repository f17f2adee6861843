"""Command-line interface.

Exit codes: 0 ok, 1 other engine failure, 2 parse/usage error (including a
tetration base out of range), 3 degenerate spectrum, 4 non-invertible series,
5 nonzero constant term where a Bell matrix was requested.  ``verify`` exits
with the number of failed checks.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import re
import sys
from pathlib import Path

from . import __version__
from .bell import G0_TOL, bell_matrix
from .carleman import carleman_factored
from .errors import BaseOutOfRange, DegenerateSpectrum, FracIterError, NonInvertible, NonzeroConstantTerm
from .fspec import SpecParseError, parse
from .iterate import iterate_series
from .series import evaluate
from .spectral import eigenvalues, min_gap
from .tetration import NO_REFERENCE, TetrationQuery, convergence_sweep, tetrate

log = logging.getLogger("fraciter")

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE = 2
EXIT_DEGENERATE = 3
EXIT_NONINVERTIBLE = 4
EXIT_CONSTANT_TERM = 5


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (SpecParseError, BaseOutOfRange)):
        return EXIT_PARSE
    if isinstance(exc, DegenerateSpectrum):
        return EXIT_DEGENERATE
    if isinstance(exc, NonInvertible):
        return EXIT_NONINVERTIBLE
    if isinstance(exc, NonzeroConstantTerm):
        return EXIT_CONSTANT_TERM
    return EXIT_FAILURE


class _Fmt:
    def __init__(self, digits: int):
        self.digits = digits

    def num(self, v):
        if v is None:
            return None
        v = float(v)
        if not math.isfinite(v):
            return None
        return float(f"{v:.{self.digits}g}")

    def text(self, v) -> str:
        if v is None:
            return ""
        return f"{float(v):.{self.digits}g}"

    def pairs(self, zs):
        return [[self.num(z.real), self.num(z.imag)] for z in zs]


def _float_arg(text: str) -> float:
    if text.strip().lower() == "e":
        return math.e
    return float(text)


def _orders(text: str) -> list[int]:
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected N1..N2, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad order range {text!r}")
    return list(range(lo, hi + 1))


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--digits", type=int, default=17, help="significant digits (default 17, lossless)")
    p.add_argument("--out", type=Path, default=None, help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fraciter", description="Continuous iteration of power series via Carleman/Bell matrices.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="diagnostics on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("iterate", help="Taylor coefficients of the alpha-th iterate")
    p.add_argument("spec")
    p.add_argument("--alpha", type=_float_arg, required=True)
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--at", type=_float_arg, nargs="+", default=[], metavar="X")
    p.add_argument("--tol", type=float, default=None, help="degeneracy threshold (default 1e-8 ||C||)")
    _add_output(p)

    p = sub.add_parser("matrix", help="Bell or Carleman matrix of a series")
    p.add_argument("spec")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--kind", choices=("bell", "carleman"), default="carleman")
    _add_output(p)

    p = sub.add_parser("tetrate", help="a tetrated to height t, starting at x")
    p.add_argument("--base", type=_float_arg, required=True)
    p.add_argument("--height", type=_float_arg, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--x", type=_float_arg, default=None, help="starting value (default 1)")
    g.add_argument("--tower", action="store_true", help="start at x = base")
    p.add_argument("--order", type=int, default=12)
    p.add_argument("--tol", type=float, default=None)
    _add_output(p)

    p = sub.add_parser("convergence", help="iterate value across truncation orders")
    p.add_argument("spec")
    p.add_argument("--alpha", type=_float_arg, required=True)
    p.add_argument("--at", type=_float_arg, required=True, metavar="X")
    p.add_argument("--orders", type=_orders, default=_orders("2..8"), metavar="N1..N2")
    p.add_argument("--tol", type=float, default=None)
    _add_output(p)

    sub.add_parser("verify", help="run the acceptance checks and print a pass/fail table")
    return ap


# -- record builders -----------------------------------------------------------

def _header(command: str, **extra) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, **extra}


def run_iterate(args, fmt: _Fmt):
    spec = parse(args.spec)
    G = spec.series(args.order)
    res = iterate_series(G, args.alpha, args.order, args.tol)
    lam = res.diagnostics.eigenvalues
    gap = res.diagnostics.gap
    if not lam:
        M = bell_matrix(G).entries if abs(G.g0) <= G0_TOL else carleman_factored(G).entries
        try:
            lam = tuple(eigenvalues(M))
            gap = min_gap(lam)
        except FracIterError as exc:
            log.warning("eigenvalues unavailable: %s", exc)
            lam, gap = (), None
    values = [[fmt.num(x), fmt.num(evaluate(res.series, x))] for x in args.at]
    rec = _header(
        "iterate",
        spec=spec.render(),
        N=args.order,
        alpha=fmt.num(args.alpha),
        path=res.path,
        convention="taylor",
        coefficients=[fmt.num(c) for c in res.series.taylor],
        eigenvalues=fmt.pairs(lam),
        diagnostics={"gap": fmt.num(gap) if gap is not None and math.isfinite(gap) else None,
                     "max_imag": fmt.num(res.diagnostics.max_imag)},
        values=values,
    )
    rows = [("coefficient", k, c) for k, c in enumerate(rec["coefficients"])]
    rows += [("eigenvalue_re", j, p[0]) for j, p in enumerate(rec["eigenvalues"])]
    rows += [("eigenvalue_im", j, p[1]) for j, p in enumerate(rec["eigenvalues"])]
    rows += [("gap", "", rec["diagnostics"]["gap"]), ("max_imag", "", rec["diagnostics"]["max_imag"])]
    for i, (x, v) in enumerate(values):
        rows += [("x", i, x), ("value", i, v)]
    return rec, ["field", "index", "value"], rows


def run_matrix(args, fmt: _Fmt):
    spec = parse(args.spec)
    G = spec.series(args.order)
    M = bell_matrix(G).entries if args.kind == "bell" else carleman_factored(G).entries
    rec = _header(
        "matrix",
        spec=spec.render(),
        N=args.order,
        kind=args.kind,
        index_base=1 if args.kind == "bell" else 0,
        entries=[[fmt.num(v) for v in row] for row in M],
    )
    rows = [(i, j, v) for i, row in enumerate(rec["entries"]) for j, v in enumerate(row)]
    return rec, ["row", "col", "value"], rows


def run_tetrate(args, fmt: _Fmt):
    x = args.base if args.tower else (1.0 if args.x is None else args.x)
    q = TetrationQuery(args.base, args.height, x, args.order)
    value = tetrate(q, args.tol)
    rec = _header(
        "tetrate",
        base=fmt.num(q.base),
        height=fmt.num(q.height),
        x=fmt.num(x),
        N=q.order,
        value=fmt.num(value),
    )
    rows = [(k, rec[k]) for k in ("base", "height", "x", "N", "value")]
    return rec, ["field", "value"], rows


def run_convergence(args, fmt: _Fmt):
    spec = parse(args.spec)
    rep = convergence_sweep(args.alpha, args.at, args.orders, series=spec.series,
                            scalar=spec.scalar(), spec=spec.render(), tol=args.tol)
    with_err = rep.has_reference
    out_rows = []
    for r in rep.rows:
        row = {"N": r.N, "value": fmt.num(r.value), "successive_diff": fmt.num(r.successive_diff), "error": r.error}
        if with_err:
            row["rel_error"] = fmt.num(r.rel_error)
        out_rows.append(row)
    rec = _header(
        "convergence",
        spec=rep.spec,
        alpha=fmt.num(rep.t),
        x=fmt.num(rep.x),
        reference=fmt.num(rep.reference),
        provenance=rep.provenance,
        rows=out_rows,
    )
    cols = ["N", "value"] + (["rel_error"] if with_err else []) + ["successive_diff", "error"]
    rows = [tuple(r[c] for c in cols) for r in out_rows]
    return rec, cols, rows


RUNNERS = {
    "iterate": run_iterate,
    "matrix": run_matrix,
    "tetrate": run_tetrate,
    "convergence": run_convergence,
}


def _render(rec, cols, rows, args, fmt: _Fmt) -> str:
    if args.format == "json":
        return json.dumps(rec, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow([fmt.text(v) if isinstance(v, float) else ("" if v is None else v) for v in row])
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)

    if args.command == "verify":
        from .acceptance import run_all

        return run_all()

    fmt = _Fmt(args.digits)
    try:
        rec, cols, rows = RUNNERS[args.command](args, fmt)
    except FracIterError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    text = _render(rec, cols, rows, args, fmt)
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
        log.info("wrote %s", args.out)
    else:
        sys.stdout.write(text)
    if args.command == "convergence" and rec["provenance"].startswith(NO_REFERENCE):
        log.info(NO_REFERENCE)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
