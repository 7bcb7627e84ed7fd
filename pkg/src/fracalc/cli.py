"""Command-line front end: ``eval``, ``table``, ``constants``, ``verify``, ``plotdata``.

Numbers are written with 17 significant digits and a ``.`` decimal point so
that every double round-trips.  Module errors exit with status 2, failed
verification with status 1.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from . import fracop
from .closedform import monomial_coefficient
from .errors import FracCalcError, ParseError
from .funcspace import parse
from .oracle import FAMILIES, run_property_suite, summarize
from .quadrature import DEFAULT_NODES

COLUMNS = ("x", "value_re", "value_im", "method", "est_error")
PLOT_COLUMNS = ("order", "x", "value_re", "value_im")

# 32-digit reference values of the two e/pi constants.
REFERENCE_RATIO = "0.59276174704850288028535455243732"
REFERENCE_PRODUCT = "22.364994517058857454906921720114"

# Flags whose values may start with "-" ("-inf", "-e", "-0.5+1i").
_VALUE_FLAGS = {"--a", "--order", "--x", "--grid"}


@dataclass(frozen=True)
class GridSpec:
    start: float
    end: float
    count: int

    @classmethod
    def parse(cls, text: str) -> GridSpec:
        try:
            span, count = text.rsplit(":", 1)
            start, end = span.split("..")
            grid = cls(_real(start), _real(end), int(count))
        except (ValueError, ParseError) as exc:
            raise argparse.ArgumentTypeError(f"grid must look like START..END:N, got {text!r}") from exc
        if not grid.start < grid.end or grid.count < 2:
            raise argparse.ArgumentTypeError(f"grid needs START < END and N >= 2, got {text!r}")
        return grid

    def points(self) -> np.ndarray:
        return np.linspace(self.start, self.end, self.count)


@dataclass(frozen=True)
class OutputRecord:
    x: float
    value_re: float
    value_im: float
    method: str
    est_error: float


def _real(text: str) -> float:
    t = text.strip().lower()
    sign = -1.0 if t.startswith("-") else 1.0
    body = t.lstrip("+-")
    named = {"pi": math.pi, "e": math.e, "inf": math.inf}
    if body in named:
        return sign * named[body]
    return float(t)


def _base_point(text: str) -> float:
    try:
        a = _real(text)
    except ValueError:
        raise ParseError(f"base point must be a real literal or -inf, got {text!r}", 0, text) from None
    if a == math.inf or math.isnan(a):
        raise ParseError(f"base point must be a real literal or -inf, got {text!r}", 0, text)
    return a


def fmt(v: float) -> str:
    return format(float(v), ".17g")


def _record(x: float, res: fracop.OperatorResult) -> OutputRecord:
    v = complex(res.value)
    return OutputRecord(float(x), v.real, v.imag, res.method, float(res.est_error))


def _row(rec: OutputRecord) -> list[str]:
    return [fmt(rec.x), fmt(rec.value_re), fmt(rec.value_im), rec.method, fmt(rec.est_error)]


def write_records(records: Sequence[OutputRecord], form: str, out) -> None:
    if form == "json":
        json.dump([asdict(r) for r in records], out, indent=2)
        out.write("\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(COLUMNS)
    w.writerows(_row(r) for r in records)


def _env(name: str, cast, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except ValueError:
        raise FracCalcError(f"{name}={raw!r} is not a valid value") from None


def resolve_nodes(flag: int | None) -> int:
    nodes = flag if flag is not None else _env("FRACALC_NODES", int, DEFAULT_NODES)
    if nodes < 1:
        raise FracCalcError(f"node count must be positive, got {nodes}")
    return nodes


def resolve_tolerance_scale(flag: float | None) -> float:
    scale = flag if flag is not None else _env("FRACALC_TOLERANCE_SCALE", float, 1.0)
    if not scale > 0:
        raise FracCalcError(f"tolerance scale must be positive, got {scale}")
    return scale


def _evaluate(args, order: str, xs) -> list[OutputRecord]:
    f = parse(args.expr, _base_point(args.a))
    s = fracop.as_order(order)
    nodes = resolve_nodes(args.nodes)
    records = []
    for x in xs:
        res = fracop.apply(f, s, float(x), convention=args.convention, method=args.method, nodes=nodes)
        records.append(_record(x, res))
        if res.extension:
            print("note: pure-imaginary order evaluated as R^(1+s) D^1", file=sys.stderr)
    return records


def cmd_eval(args, out) -> int:
    write_records(_evaluate(args, args.order, [_real(args.x)]), args.format, out)
    return 0


def cmd_table(args, out) -> int:
    write_records(_evaluate(args, args.order, args.grid.points()), args.format, out)
    return 0


def cmd_plotdata(args, out) -> int:
    orders = [o.strip() for chunk in args.order for o in chunk.split(",") if o.strip()]
    w = csv.writer(out, lineterminator="\n")
    w.writerow(PLOT_COLUMNS)
    for order in orders:
        for rec in _evaluate(args, order, args.grid.points()):
            w.writerow([order, fmt(rec.x), fmt(rec.value_re), fmt(rec.value_im)])
    return 0


def constant_values() -> dict[str, float]:
    """The ratio and product of the e/pi monomial constants in double precision."""
    e, pi = math.e, math.pi
    ratio = monomial_coefficient(e, pi) / monomial_coefficient(pi, e)
    product = monomial_coefficient(pi, -e) * monomial_coefficient(e, -pi)
    return {"ratio": ratio, "product": product}


def constant_values_mp(digits: int = 30) -> dict[str, str]:
    import mpmath

    with mpmath.workdps(digits + 15):
        e, pi = mpmath.e, mpmath.pi
        ratio = mpmath.gamma(e + 1) / mpmath.gamma(pi + 1)
        product = mpmath.gamma(pi + 1) * mpmath.gamma(e + 1) * mpmath.rgamma(pi - e + 1) * mpmath.rgamma(e - pi + 1)
        return {"ratio": mpmath.nstr(ratio, digits), "product": mpmath.nstr(product, digits)}


def independence_probe(points=(0.5, 1.0, 3.0)) -> dict[str, list[float]]:
    """Full evaluations of the ratio and product at several ``x``; all entries should agree."""
    xe, xpi = parse("x^e"), parse("x^pi")
    ratios, products = [], []
    for x in points:
        ratios.append(fracop.apply(xe, math.pi, x).value / fracop.apply(xpi, math.e, x).value)
        products.append(fracop.apply(xpi, -math.e, x).value * fracop.apply(xe, -math.pi, x).value)
    return {"ratio": ratios, "product": products}


def cmd_constants(args, out) -> int:
    computed = constant_values()
    precise = constant_values_mp()
    reference = {"ratio": REFERENCE_RATIO, "product": REFERENCE_PRODUCT}
    probe = independence_probe()
    titles = {
        "ratio": "ratio   R^pi(x^e) / R^e(x^pi)",
        "product": "product D_R^e(x^pi) * D_R^pi(x^e)",
    }
    for key in ("ratio", "product"):
        ref = float(reference[key])
        print(titles[key], file=out)
        print(f"  double precision (17 digits):  {fmt(computed[key])}", file=out)
        print(f"  extended precision (30 digits, mpmath): {precise[key]}", file=out)
        print(f"  reference value:               {reference[key]}", file=out)
        print(f"  relative error of double:      {abs(computed[key] - ref) / ref:.3e}", file=out)
        spread = max(probe[key]) - min(probe[key])
        vals = ", ".join(fmt(v) for v in probe[key])
        print(f"  x in (0.5, 1, 3):              {vals}  (spread {spread:.3e})", file=out)
    return 0


def cmd_verify(args, out) -> int:
    scale = resolve_tolerance_scale(args.tolerance_scale)
    reports = run_property_suite(tolerance_scale=scale, only=args.only, nodes=resolve_nodes(args.nodes))
    for r in reports:
        print(r.line(), file=out)
    passed, total = summarize(reports)
    print(f"{passed}/{total} properties passed", file=out)
    return 0 if passed == total else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracalc", description="Fractional integrals and derivatives R^s.")
    sub = parser.add_subparsers(dest="command", required=True)

    def operator_flags(p, grid: bool, many_orders: bool = False):
        p.add_argument("--expr", required=True, help='expression such as "x^2 + 3*sin(x)"')
        if many_orders:
            p.add_argument("--order", required=True, action="append", help="comma-separated orders; repeatable")
        else:
            p.add_argument("--order", required=True, help='real or complex order: 0.5, pi, -e, 1+0.5i')
        p.add_argument("--a", default="0", help="base point, a real literal or -inf (default 0)")
        if grid:
            p.add_argument("--grid", required=True, type=GridSpec.parse, help="START..END:N")
        else:
            p.add_argument("--x", required=True, help="evaluation point")
        p.add_argument("--convention", choices=fracop.CONVENTIONS, default="right")
        p.add_argument("--method", choices=fracop.METHODS, default="auto")
        p.add_argument("--nodes", type=int, default=None, help=f"quadrature nodes (env FRACALC_NODES, default {DEFAULT_NODES})")

    p = sub.add_parser("eval", help="evaluate R^s f at one point")
    operator_flags(p, grid=False)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("table", help="tabulate R^s f over a grid")
    operator_flags(p, grid=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("plotdata", help="long-format CSV of several orders over a grid")
    operator_flags(p, grid=True, many_orders=True)
    p.set_defaults(handler=cmd_plotdata)

    p = sub.add_parser("constants", help="print the e/pi ratio and product constants")
    p.set_defaults(handler=cmd_constants)

    p = sub.add_parser("verify", help="run the property suite")
    p.add_argument("--only", choices=FAMILIES, default=None, help="run a single property family")
    p.add_argument("--tolerance-scale", type=float, default=None, help="multiply every tolerance (env FRACALC_TOLERANCE_SCALE)")
    p.add_argument("--nodes", type=int, default=None)
    p.set_defaults(handler=cmd_verify)
    return parser


def _join_values(argv: Sequence[str]) -> list[str]:
    # argparse treats "-inf" or "-e" after a flag as another flag; glue them on.
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_values(argv))
    try:
        return args.handler(args, out)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.source:
            print(f"  {exc.source}\n  {' ' * exc.offset}^", file=sys.stderr)
        return 2
    except (FracCalcError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
