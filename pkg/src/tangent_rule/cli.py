"""Command-line interface: ``python3 -m tangent_rule <command> EXPR [options]``.

Exit codes: 0 success, 1 parse error, 2 negative or domain outcome,
3 internal invariant violation, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import TextIO

from . import analysis as an
from . import expr as ex
from .corpus import corpus_exprs
from .errors import DomainError, NotPolynomial, ParseError, TangentRuleError
from .expr import TangentLine, fmt_number
from .parser import parse
from .poly import is_tangent, poly_from_expr, tangent_slope
from .rules import derivative, differentiate
from . import verify as vf

EXIT_OK, EXIT_PARSE, EXIT_NEGATIVE, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2, 3, 64

COMMANDS = ("diff", "trace", "tangent-at", "check-tangent", "diagnose", "verify", "plot-data")


class UsageError(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def decimal(text: str) -> Fraction:
    """Parse '0.5', '-2', '1/3' or '1e-3' exactly."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a decimal or rational number: {text!r}")


@dataclass(frozen=True)
class CliConfig:
    command: str
    expr: str | None = None
    point: Fraction | None = None
    slope: Fraction | None = None
    range: tuple[Fraction, Fraction, int] | None = None
    format: str = "plain"
    tolerances: an.Tolerances = an.DEFAULT_TOL
    rel_tol: float = 1e-6
    samples: int = 20


def build_parser() -> argparse.ArgumentParser:
    ap = _ArgParser(prog="tangent-rule", description="Limit-free symbolic differentiation.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    def add(name, help_, expr=True, point=False, slope=False, rng=False, formats=("plain", "json")):
        p = sub.add_parser(name, help=help_)
        if expr:
            p.add_argument("expr", help="expression in x, e.g. 'x^3 - 2*x + 1'")
        if point:
            p.add_argument("--at", dest="point", type=decimal, required=point == "required")
        if slope:
            p.add_argument("--slope", type=decimal, required=True)
        if rng:
            p.add_argument("--range", nargs=3, metavar=("LO", "HI", "N"), required=True)
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("--corner-tol", type=float, default=an.DEFAULT_TOL.corner_tol)
        p.add_argument("--divergence", type=float, default=an.DEFAULT_TOL.divergence)
        p.add_argument("--fd-step", type=float, default=an.DEFAULT_TOL.fd_step)
        p.add_argument("--rel-tol", type=float, default=1e-6)
        p.add_argument("--samples", type=int, default=20)
        return p

    add("diff", "print the derivative")
    add("trace", "print the derivation trace")
    add("tangent-at", "print the tangent line at a point", point="required")
    add("check-tangent", "decide whether a line with the given slope is tangent", point="required", slope=True)
    add("diagnose", "classify differentiability at a point", point="required")
    add("verify", "run the corpus verification sweep", expr=False, formats=("plain", "json", "csv"))
    add("plot-data", "CSV of x, f(x) and the tangent line", point="optional", rng=True, formats=("csv",))
    return ap


def config_from_args(argv: list[str]) -> CliConfig:
    ns = build_parser().parse_args(argv)
    rng = None
    if getattr(ns, "range", None) is not None:
        lo, hi, n = ns.range
        try:
            rng = (decimal(lo), decimal(hi), int(n))
        except (argparse.ArgumentTypeError, ValueError) as err:
            raise UsageError(f"bad --range: {err}")
        if rng[2] < 2 or rng[0] >= rng[1]:
            raise UsageError("--range needs LO < HI and N >= 2")
    if ns.samples < 1:
        raise UsageError("--samples must be positive")
    tol = replace(an.DEFAULT_TOL, corner_tol=ns.corner_tol, divergence=ns.divergence, fd_step=ns.fd_step)
    return CliConfig(
        command=ns.command,
        expr=getattr(ns, "expr", None),
        point=getattr(ns, "point", None),
        slope=getattr(ns, "slope", None),
        range=rng,
        format=ns.format,
        tolerances=tol,
        rel_tol=ns.rel_tol,
        samples=ns.samples,
    )


# ---------------------------------------------------------------------------
# subcommands; each returns (exit code, text)


def _emit_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _num(v):
    """JSON-friendly number: exact rationals become strings."""
    if isinstance(v, Fraction):
        return fmt_number(v)
    if isinstance(v, float) and not math.isfinite(v):
        return fmt_number(v)
    return v


def cmd_diff(cfg: CliConfig):
    e = parse(cfg.expr)
    d = derivative(e)
    if cfg.format == "json":
        return EXIT_OK, _emit_json({"input": str(e), "derivative": str(d)})
    return EXIT_OK, str(d)


def cmd_trace(cfg: CliConfig):
    _, trace = differentiate(parse(cfg.expr))
    return EXIT_OK, trace.to_json() if cfg.format == "json" else trace.to_text()


def _exact_tangent(e, a: Fraction) -> TangentLine | None:
    try:
        p = poly_from_expr(e)
    except NotPolynomial:
        return None
    return TangentLine(a, p(a), tangent_slope(p, a))


def _line_json(line: TangentLine, exact: bool) -> dict:
    return {
        "point": _num(line.point),
        "value": _num(line.value),
        "slope": _num(line.slope),
        "exact": exact,
        "line": str(line),
    }


def cmd_tangent_at(cfg: CliConfig):
    e = parse(cfg.expr)
    line = _exact_tangent(e, cfg.point)
    exact = line is not None
    if line is None:
        a = float(cfg.point)
        try:
            line = TangentLine(a, ex.eval_float(e, a), ex.eval_float(derivative(e), a))
        except DomainError:
            verdict = an.diagnose(e, a, cfg.tolerances)
            return EXIT_NEGATIVE, _verdict_text(verdict, cfg.format)
    if cfg.format == "json":
        return EXIT_OK, _emit_json(_line_json(line, exact))
    return EXIT_OK, str(line)


def cmd_check_tangent(cfg: CliConfig):
    e = parse(cfg.expr)
    try:
        ok, mode = is_tangent(poly_from_expr(e), cfg.point, cfg.slope), "exact"
    except NotPolynomial:
        a, k = float(cfg.point), float(cfg.slope)
        if ex.try_eval(e, a) is None:
            return EXIT_NEGATIVE, _verdict_text(an.OutsideDomain(), cfg.format)
        try:
            ok, mode = an.judge_tangent(e, a, k), "numeric"
        except DomainError:
            # the remainder table leaves the domain to the right of a
            return EXIT_NEGATIVE, _verdict_text(an.diagnose(e, a, cfg.tolerances), cfg.format)
    if cfg.format == "json":
        text = _emit_json({"tangent": ok, "mode": mode})
    else:
        text = f"tangent: {'yes' if ok else 'no'} ({mode})"
    return (EXIT_OK if ok else EXIT_NEGATIVE), text


def verdict_dict(v) -> dict:
    if isinstance(v, an.Differentiable):
        return {"verdict": "differentiable", "slope": _num(v.slope), "tangent": str(v.tangent)}
    if isinstance(v, an.Corner):
        return {"verdict": "corner", "left_slope": _num(v.left_slope), "right_slope": _num(v.right_slope)}
    if isinstance(v, an.VerticalTangent):
        return {"verdict": "vertical tangent", "sign": v.sign}
    if isinstance(v, an.DomainBoundary):
        return {"verdict": "domain boundary", "side": v.side}
    return {"verdict": "outside domain"}


def _verdict_text(v, fmt: str) -> str:
    return _emit_json(verdict_dict(v)) if fmt == "json" else v.describe()


def cmd_diagnose(cfg: CliConfig):
    v = an.diagnose(parse(cfg.expr), float(cfg.point), cfg.tolerances)
    code = EXIT_OK if isinstance(v, an.Differentiable) else EXIT_NEGATIVE
    return code, _verdict_text(v, cfg.format)


def cmd_verify(cfg: CliConfig):
    exprs = corpus_exprs()
    report = vf.oracle_sweep(exprs, cfg.samples, cfg.rel_tol)
    rows = []
    for e, sweep in zip(exprs, report.rows):
        decay = vf.remainder_decay(e)
        used = [c for c in decay if not c.skipped]
        rows.append(
            {
                "expr": sweep.text,
                "oracle_passed": sweep.passed,
                "oracle_points": len(sweep.checks),
                "unexplained": sum(not c.explained for c in sweep.checks),
                "decay_passed": sum(c.passed for c in used),
                "decay_points": len(used),
            }
        )
    decay_ok = all(r["decay_passed"] == r["decay_points"] for r in rows)
    ok = report.pass_rate >= 0.99 and report.all_explained() and decay_ok
    summary = {
        "oracle_pass_rate": report.pass_rate,
        "failures_explained": report.all_explained(),
        "decay_ok": decay_ok,
        "status": "PASS" if ok else "FAIL",
    }
    code = EXIT_OK if ok else EXIT_INTERNAL
    if cfg.format == "json":
        return code, _emit_json({"rows": rows, "summary": summary})
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return code, buf.getvalue().rstrip("\n")
    width = max(len(r["expr"]) for r in rows)
    lines = [f"{'expression':<{width}}  oracle   decay  result"]
    for r in rows:
        good = r["oracle_passed"] == r["oracle_points"] and r["decay_passed"] == r["decay_points"]
        oracle = f"{r['oracle_passed']}/{r['oracle_points']}"
        decay = f"{r['decay_passed']}/{r['decay_points']}"
        lines.append(f"{r['expr']:<{width}}  {oracle:>6}  {decay:>6}  {'pass' if good else 'FAIL'}")
    lines.append(
        f"oracle agreement {report.passed}/{report.total} ({100 * report.pass_rate:.2f}%), "
        f"failures explained: {'yes' if report.all_explained() else 'no'}, "
        f"remainder decay: {'ok' if decay_ok else 'violated'} -> {summary['status']}"
    )
    return code, "\n".join(lines)


def plot_rows(e, lo: float, hi: float, n: int, at: float | None = None):
    """Rows (x, f(x) or None, tangent(x) or None) over an evenly spaced grid."""
    e = ex.canonicalize(e)
    a = (lo + hi) / 2 if at is None else at
    fa, k = ex.try_eval(e, a), ex.try_eval(derivative(e), a)
    line = TangentLine(a, fa, k) if fa is not None and k is not None else None
    rows = []
    for i in range(n):
        x = lo + (hi - lo) * i / (n - 1)
        rows.append((x, ex.try_eval(e, x), line(x) if line else None))
    return rows


def plot_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "f", "tangent"])
    for row in rows:
        w.writerow(["" if v is None else repr(v) for v in row])
    return buf.getvalue().rstrip("\n")


def cmd_plot_data(cfg: CliConfig):
    lo, hi, n = cfg.range
    at = None if cfg.point is None else float(cfg.point)
    return EXIT_OK, plot_csv(plot_rows(parse(cfg.expr), float(lo), float(hi), n, at))


HANDLERS = {
    "diff": cmd_diff,
    "trace": cmd_trace,
    "tangent-at": cmd_tangent_at,
    "check-tangent": cmd_check_tangent,
    "diagnose": cmd_diagnose,
    "verify": cmd_verify,
    "plot-data": cmd_plot_data,
}


def run(argv: list[str], out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        cfg = config_from_args(list(argv))
    except UsageError as e:
        err.write(f"usage error: {e} (try 'tangent-rule --help')\n")
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return EXIT_OK if not e.code else EXIT_USAGE
    try:
        code, text = HANDLERS[cfg.command](cfg)
    except ParseError as e:
        err.write(f"parse error: {e}\n")
        return EXIT_PARSE
    except DomainError as e:
        err.write(f"domain error: {e}\n")
        return EXIT_NEGATIVE
    except TangentRuleError as e:
        err.write(f"error: {e}\n")
        return EXIT_NEGATIVE
    except Exception as e:  # anything else means an invariant of the engine broke
        err.write(f"internal error: {type(e).__name__}: {e}\n")
        return EXIT_INTERNAL
    out.write(text + "\n")
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))
