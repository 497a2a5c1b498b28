"""Acceptance criteria, one check per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python3 tests/test_acceptance.py``; each criterion prints one PASS/FAIL line.
"""

import math
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from tangent_rule import analysis as an
from tangent_rule import expr as ex
from tangent_rule import verify as vf
from tangent_rule.corpus import corpus_exprs, random_corpus
from tangent_rule.expr import X, equiv
from tangent_rule.parser import parse, unparse
from tangent_rule.poly import Polynomial, derivative_poly, tangent_slope
from tangent_rule.rules import derivative

SEED = 20260416


def criterion_1():
    """Criterion/power-rule equivalence on 1000 random polynomials, exact, under 10 s."""
    rng = random.Random(SEED)

    def rat():
        return Fraction(rng.randint(-100, 100), rng.randint(1, 100))

    start = time.perf_counter()
    failures = 0
    for _ in range(1000):
        p = Polynomial(tuple(rat() for _ in range(rng.randint(0, 12) + 1)))
        a = rat()
        failures += derivative_poly(p)(a) != tangent_slope(p, a)
    elapsed = time.perf_counter() - start
    return failures == 0 and elapsed < 10, f"{failures} mismatches in {elapsed:.2f}s"


def _formula_table():
    rows = []
    for p in range(1, 7):
        for q in range(1, 7):
            rows.append((f"x^({p}/{q})", f"({p}/{q})*x^({p}/{q} - 1)"))
    rows.append(("exp(x)", "exp(x)"))
    for a in ("2", "10", "1/3"):
        rows.append((f"({a})^x", f"({a})^x*ln({a})"))
    rows.append(("ln(x)", "1/x"))
    for a in ("2", "10"):
        rows.append((f"log({a}, x)", f"1/(x*ln({a}))"))
    rows += [
        ("sin(x)", "cos(x)"),
        ("cos(x)", "-sin(x)"),
        ("tan(x)", "1/cos(x)^2"),
        ("cot(x)", "-1/sin(x)^2"),
        ("asin(x)", "1/(1 - x^2)^(1/2)"),
        ("acos(x)", "-1/(1 - x^2)^(1/2)"),
        ("atan(x)", "1/(1 + x^2)"),
        ("acot(x)", "-1/(1 + x^2)"),
    ]
    return rows


def criterion_2():
    """Every stated derivative formula is reproduced up to equiv (20 points, rel_tol 1e-9)."""
    bad = [f for f, df in _formula_table() if not equiv(derivative(parse(f)), parse(df), 20, 1e-9)]
    return not bad, f"{len(_formula_table()) - len(bad)}/{len(_formula_table())} formulas" + (f"; failing {bad}" if bad else "")


def criterion_3():
    """Symbolic vs Richardson difference on the 40-expression corpus."""
    exprs = corpus_exprs()
    report = vf.oracle_sweep(exprs, 20, 1e-6)
    ok = len(exprs) == 40 and report.total == 800 and report.pass_rate >= 0.99 and report.all_explained()
    detail = f"{report.passed}/{report.total} ({100 * report.pass_rate:.2f}%), unexplained failures: " + str(
        sum(not c.explained for _, c in report.failures())
    )
    return ok, detail


def criterion_4():
    """diagnose(|x|, 0) = Corner(-1, +1) to 1e-12."""
    v = an.diagnose(parse("abs(x)"), 0.0)
    ok = isinstance(v, an.Corner) and abs(v.left_slope + 1) <= 1e-12 and abs(v.right_slope - 1) <= 1e-12
    return ok, v.describe()


def criterion_5():
    """exp stays above its tangent at x0 in {-2, 0, 0.5, 3} with 10^4 samples."""
    results = {x0: an.check_exp_tangency(x0, 10_000) for x0 in (-2, 0, 0.5, 3)}
    return all(results.values()), ", ".join(f"x0={k}: {v}" for k, v in results.items())


def criterion_6():
    """Remainder ratios for exp at 0.3: second-order decay with the right slope, constant limit with k = 1."""
    e, a = parse("exp(x)"), 0.3
    hs = an.halving_steps(1e-1, 1e-5)
    good = an.remainder_profile(e, a, math.exp(a), hs)
    wrong = an.remainder_profile(e, a, 1.0, hs)
    decay_ok = all(0.35 <= q <= 0.65 for q in good.ratios())
    gap = abs(wrong.rows[-1].R_over_h - (math.exp(a) - 1))
    return decay_ok and gap <= 1e-3, f"ratios in [{min(good.ratios()):.4f}, {max(good.ratios()):.4f}], wrong-slope gap {gap:.2e}"


def criterion_7():
    """Radius and direction vector are orthogonal at 1000 angles in [0, 2pi)."""
    rng = random.Random(SEED)
    worst = max(abs(an.check_circle_orthogonality(rng.uniform(0, 2 * math.pi))) for _ in range(1000))
    return worst <= 1e-12, f"max |dot| = {worst:.2e}"


CLI_MATRIX = [
    ["diff", "x^(3/5)"],
    ["diff", "x*ln(x)", "--format", "json"],
    ["trace", "sin(x)/cos(x)"],
    ["trace", "asin(x^2)", "--format", "json"],
    ["tangent-at", "x^3 - 2*x + 1", "--at", "2"],
    ["tangent-at", "exp(x)", "--at", "0.5", "--format", "json"],
    ["check-tangent", "x^3 - 2*x + 1", "--at", "2", "--slope", "10"],
    ["check-tangent", "sin(x)", "--at", "1", "--slope", "0.5"],
    ["diagnose", "abs(x)", "--at", "0"],
    ["diagnose", "x^(1/3)", "--at", "0", "--format", "json"],
    ["verify"],
    ["plot-data", "exp(x)", "--range", "-1", "1", "11", "--at", "0"],
]


def _cli(argv):
    proc = subprocess.run([sys.executable, "-m", "tangent_rule", *argv], capture_output=True)
    return proc.returncode, proc.stdout, proc.stderr


def criterion_8():
    """parse(print(e)) = e on 1000 random expressions; CLI output byte-identical across runs."""
    exprs = random_corpus(1000, SEED, max_depth=8)
    trips = sum(parse(unparse(e)) == e for e in exprs)
    unstable = [" ".join(argv) for argv in CLI_MATRIX if _cli(argv) != _cli(argv)]
    ok = trips == 1000 and not unstable
    return ok, f"round trip {trips}/1000, {len(CLI_MATRIX) - len(unstable)}/{len(CLI_MATRIX)} CLI commands deterministic"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


def report(n, check):
    ok, detail = check()
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {check.__doc__.strip()} [{detail}]"
    return ok, line


@pytest.mark.parametrize("n", range(1, len(CRITERIA) + 1))
def test_criterion(n, capsys):
    ok, line = report(n, CRITERIA[n - 1])
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [report(n, c) for n, c in enumerate(CRITERIA, 1)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
