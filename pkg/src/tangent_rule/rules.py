"""Rule-based differentiation with a step-by-step derivation record.

Every rule carries a fixed citation string naming the fact that justifies it.
:func:`differentiate` walks a canonical expression top-down and records one
:class:`DerivationStep` per rule application, outer rules before inner ones.
:func:`derive_base_table` rebuilds the elementary derivative table from its
justifications (tangent lines of polynomials, the supporting line of ``exp``,
the rotated unit-circle radius, inverse-function symmetry) instead of
asserting it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from . import expr as ex
from . import poly
from .errors import DomainError, NotPolynomial, NotRegisteredInvertible, ZeroDerivativeOnBranch
from .expr import X, Expr
from .parser import unparse


class RuleId(Enum):
    POLY_CRITERION = "PolyCriterion"
    ROOT_INVERSE = "RootInverse"
    RATIONAL_POWER = "RationalPower"
    COMPOSITE_POWER = "CompositePower"
    EXP_TANGENCY = "ExpTangency"
    GENERAL_EXPONENTIAL = "GeneralExponential"
    NATURAL_LOG = "NaturalLog"
    LOG_BASE = "LogBaseRule"
    INVERSE_FUNCTION = "InverseFunction"
    UNIT_CIRCLE_SIN = "UnitCircleSin"
    UNIT_CIRCLE_COS = "UnitCircleCos"
    QUOTIENT = "QuotientRule"
    PRODUCT = "ProductRule"
    LINEARITY = "Linearity"
    CHAIN = "ChainRule"
    ARCSIN = "InverseTrig(arcsin)"
    ARCCOS = "InverseTrig(arccos)"
    ARCTAN = "InverseTrig(arctan)"
    ARCCOT = "InverseTrig(arccot)"
    ABS = "AbsRule"
    PYTHAGOREAN = "PythagoreanFold"

    @property
    def citation(self) -> str:
        return CITATIONS[self]


CITATIONS = {
    RuleId.POLY_CRITERION: "double-root tangency: k is the slope at a iff (x - a)^2 divides p(x) - p(a) - k(x - a)",
    RuleId.ROOT_INVERSE: "root as inverse of y^q: reciprocal tangent slopes give (x^(1/q))' = (1/q)x^(1/q - 1)",
    RuleId.RATIONAL_POWER: "rational power: (x^(p/q))' = (p/q)x^(p/q - 1)",
    RuleId.COMPOSITE_POWER: "x^(p/q) = (x^(1/q))^p, an integer power of a root",
    RuleId.EXP_TANGENCY: "supporting line: e^t >= 1 + t with equality only at t = 0, so exp has slope e^a at a",
    RuleId.GENERAL_EXPONENTIAL: "a^x = e^(x ln a), hence (a^x)' = a^x ln a",
    RuleId.NATURAL_LOG: "ln inverts the strictly increasing exp, hence (ln x)' = 1/x",
    RuleId.LOG_BASE: "log_a x = ln x / ln a with ln a constant, hence (log_a x)' = 1/(x ln a)",
    RuleId.INVERSE_FUNCTION: "mirror symmetry in y = x: inverse slopes are reciprocal, g'(y) = 1/f'(x)",
    RuleId.UNIT_CIRCLE_SIN: "sin t is the vertical coordinate on the unit circle; tangent direction (-sin t, cos t)",
    RuleId.UNIT_CIRCLE_COS: "cos t is the horizontal coordinate on the unit circle; tangent direction (-sin t, cos t)",
    RuleId.QUOTIENT: "quotient rule: (u/v)' = (u'v - uv')/v^2",
    RuleId.PRODUCT: "product rule: closure of tangent slopes under products (polynomial construction)",
    RuleId.LINEARITY: "linearity: slopes add and scale with sums and constant multiples",
    RuleId.CHAIN: "composite function: (f(u))' = f'(u) u'",
    RuleId.ARCSIN: "arcsin inverts sin on [-pi/2, pi/2]; on the unit circle cos y = sqrt(1 - x^2)",
    RuleId.ARCCOS: "arccos inverts cos on [0, pi]; on the unit circle sin y = sqrt(1 - x^2)",
    RuleId.ARCTAN: "arctan inverts tan on (-pi/2, pi/2); cos^2 y = 1/(1 + x^2)",
    RuleId.ARCCOT: "arccot inverts cot on (0, pi); sin^2 y = 1/(1 + x^2)",
    RuleId.ABS: "|u| has slope sign(u) u' away from u = 0; the corner at u = 0 is left to pointwise diagnosis",
    RuleId.PYTHAGOREAN: "unit circle: sin^2 + cos^2 = 1",
}


@dataclass(frozen=True)
class DerivationStep:
    rule: RuleId
    before: Expr
    after: Expr

    @property
    def citation(self) -> str:
        return self.rule.citation

    def to_dict(self) -> dict:
        return {
            "rule": self.rule.value,
            "citation": self.citation,
            "before": unparse(self.before),
            "after": unparse(self.after),
        }


@dataclass
class DerivationTrace:
    input: Expr
    steps: list[DerivationStep] = field(default_factory=list)
    output: Expr | None = None

    def rules(self) -> list[RuleId]:
        return [s.rule for s in self.steps]

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "input": unparse(self.input),
            "steps": [s.to_dict() for s in self.steps],
            "output": unparse(self.output) if self.output is not None else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [f"d/dx {unparse(self.input)}"]
        for i, s in enumerate(self.steps, 1):
            lines.append(f"{i:>3}. {s.rule.value}: d/dx {unparse(s.before)} -> {unparse(s.after)}")
            lines.append(f"     [{s.citation}]")
        lines.append(f"  = {unparse(self.output)}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# pythagorean fold


def _coeff_and_core(term: Expr) -> tuple[Fraction, Expr]:
    sign, body = ex._split_sign(term)
    if isinstance(body, ex.Mul) and isinstance(body.factors[0], ex.ConstRat):
        return sign * body.factors[0].value, ex.mul(*body.factors[1:])
    return Fraction(sign), body


def _square_of(core: Expr, kind: type) -> Expr | None:
    if isinstance(core, ex.PowRat) and core.exponent == 2 and isinstance(core.base, kind):
        return core.base.arg
    return None


def fold_pythagorean(e: Expr) -> Expr:
    """Replace ``c*sin(u)^2 + c*cos(u)^2`` by ``c`` inside every sum."""

    def fold(node: Expr) -> Expr:
        if not isinstance(node, ex.Add):
            return node
        terms = list(node.terms)
        changed = True
        while changed:
            changed = False
            for i, t in enumerate(terms):
                c, core = _coeff_and_core(t)
                u = _square_of(core, ex.Sin)
                if u is None:
                    continue
                for j, s in enumerate(terms):
                    c2, core2 = _coeff_and_core(s)
                    if c2 == c and _square_of(core2, ex.Cos) == u:
                        terms = [w for k, w in enumerate(terms) if k not in (i, j)]
                        terms.append(ex.ConstRat(c))
                        changed = True
                        break
                if changed:
                    break
        return ex.add(*terms)

    return ex.transform(e, fold)


# ---------------------------------------------------------------------------
# differentiation


def _a_power_form(u: Expr):
    """Split ``ln(a) * rest`` into (a, rest) when exactly one constant log factor is present."""
    if not isinstance(u, ex.Mul):
        return None
    logs = [f for f in u.factors if isinstance(f, ex.Ln) and isinstance(f.arg, ex.ConstRat)]
    if len(logs) != 1 or logs[0].arg.value <= 0:
        return None
    rest = list(u.factors)
    rest.remove(logs[0])
    rest_expr = ex.mul(*rest)
    if not ex.has_var(rest_expr):
        return None
    return logs[0].arg.value, rest_expr


_TRIG_INVERSE_RULES = {
    ex.Arcsin: RuleId.ARCSIN,
    ex.Arccos: RuleId.ARCCOS,
    ex.Arctan: RuleId.ARCTAN,
    ex.Arccot: RuleId.ARCCOT,
}

# largest expanded degree for which a polynomial subtree is handled in one criterion step
POLY_DEGREE_LIMIT = 12


def _one_minus_square(u: Expr) -> Expr:
    return ex.add(ex.ONE, ex.neg(ex.power(u, 2)))


def _one_plus_square(u: Expr) -> Expr:
    return ex.add(ex.ONE, ex.power(u, 2))


class _Deriver:
    def __init__(self):
        self.steps: list[DerivationStep] = []

    def record(self, rule, before, after) -> int:
        self.steps.append(DerivationStep(rule, before, after))
        return len(self.steps) - 1

    def reserve(self, rule, before) -> int:
        return self.record(rule, before, before)

    def fill(self, slot, after) -> Expr:
        s = self.steps[slot]
        self.steps[slot] = DerivationStep(s.rule, s.before, after)
        return after

    def d(self, e: Expr) -> Expr:
        if not ex.has_var(e):
            return ex.ZERO
        if not isinstance(e, ex.Var):
            try:
                p = poly.poly_from_expr(e)
            except NotPolynomial:
                p = None
            if p is not None and (p.degree or 0) <= POLY_DEGREE_LIMIT:
                return self.fill(self.reserve(RuleId.POLY_CRITERION, e), poly.derivative_poly(p).to_expr())
        if isinstance(e, ex.Var):
            return self.fill(self.reserve(RuleId.POLY_CRITERION, e), ex.ONE)
        if isinstance(e, ex.Add):
            slot = self.reserve(RuleId.LINEARITY, e)
            return self.fill(slot, ex.add(*(self.d(t) for t in e.terms)))
        if isinstance(e, ex.Neg):
            slot = self.reserve(RuleId.LINEARITY, e)
            return self.fill(slot, ex.neg(self.d(e.arg)))
        if isinstance(e, ex.Mul):
            return self.product(e)
        if isinstance(e, ex.Div):
            return self.quotient(e)
        return self.composite(e)

    def product(self, e: ex.Mul) -> Expr:
        consts = [f for f in e.factors if not ex.has_var(f)]
        varying = [f for f in e.factors if ex.has_var(f)]
        if len(varying) == 1:
            slot = self.reserve(RuleId.LINEARITY, e)
            return self.fill(slot, ex.mul(*consts, self.d(varying[0])))
        slot = self.reserve(RuleId.PRODUCT, e)
        terms = []
        for i, f in enumerate(varying):
            others = varying[:i] + varying[i + 1:]
            terms.append(ex.mul(*consts, *others, self.d(f)))
        return self.fill(slot, ex.add(*terms))

    def quotient(self, e: ex.Div, before: Expr | None = None) -> Expr:
        num, den = e.num, e.den
        if not ex.has_var(den):
            slot = self.reserve(RuleId.LINEARITY, before or e)
            return self.fill(slot, ex.div(self.d(num), den))
        slot = self.reserve(RuleId.QUOTIENT, before or e)
        dn, dd = self.d(num), self.d(den)
        top = ex.add(ex.mul(dn, den), ex.neg(ex.mul(num, dd)))
        folded = fold_pythagorean(top)
        if folded != top:
            self.record(RuleId.PYTHAGOREAN, top, folded)
        return self.fill(slot, ex.div(folded, ex.power(den, 2)))

    def composite(self, e: Expr) -> Expr:
        """Unary function or rational power of an inner expression ``u``."""
        u = e.base if isinstance(e, ex.PowRat) else e.arg
        if isinstance(e, ex.Exp):
            split = _a_power_form(u)
            if split is not None:
                a, rest = split
                outer = ex.mul(e, ex.ln(ex.const(a)))
                if isinstance(rest, ex.Var):
                    return self.fill(self.reserve(RuleId.GENERAL_EXPONENTIAL, e), outer)
                chain = self.reserve(RuleId.CHAIN, e)
                self.record(RuleId.GENERAL_EXPONENTIAL, e, outer)
                return self.fill(chain, ex.mul(outer, self.d(rest)))
        if isinstance(u, ex.Var):
            return self.outer(e, u)
        chain = self.reserve(RuleId.CHAIN, e)
        outer = self.outer(e, u)
        return self.fill(chain, ex.mul(outer, self.d(u)))

    def outer(self, e: Expr, u: Expr) -> Expr:
        """Derivative of the outermost function of ``e`` evaluated at its argument ``u``."""
        if isinstance(e, ex.PowRat):
            r = e.exponent
            return self.fill(self.reserve(RuleId.RATIONAL_POWER, e), ex.mul(ex.ConstRat(r), ex.power(u, r - 1)))
        if isinstance(e, ex.Exp):
            return self.fill(self.reserve(RuleId.EXP_TANGENCY, e), e)
        if isinstance(e, ex.Ln):
            return self.fill(self.reserve(RuleId.NATURAL_LOG, e), ex.div(ex.ONE, u))
        if isinstance(e, ex.LogBase):
            after = ex.div(ex.ONE, ex.mul(u, ex.ln(ex.const(e.base))))
            return self.fill(self.reserve(RuleId.LOG_BASE, e), after)
        if isinstance(e, ex.Sin):
            return self.fill(self.reserve(RuleId.UNIT_CIRCLE_SIN, e), ex.cos(u))
        if isinstance(e, ex.Cos):
            return self.fill(self.reserve(RuleId.UNIT_CIRCLE_COS, e), ex.neg(ex.sin(u)))
        if isinstance(e, ex.Tan):
            return self.trig_quotient(e, ex.sin(u), ex.cos(u))
        if isinstance(e, ex.Cot):
            return self.trig_quotient(e, ex.cos(u), ex.sin(u))
        if type(e) in _TRIG_INVERSE_RULES:
            if isinstance(e, (ex.Arcsin, ex.Arccos)):
                after = ex.div(ex.ONE, ex.power(_one_minus_square(u), Fraction(1, 2)))
            else:
                after = ex.div(ex.ONE, _one_plus_square(u))
            if isinstance(e, (ex.Arccos, ex.Arccot)):
                after = ex.neg(after)
            return self.fill(self.reserve(_TRIG_INVERSE_RULES[type(e)], e), after)
        if isinstance(e, ex.Abs):
            return self.fill(self.reserve(RuleId.ABS, e), ex.div(u, e))
        raise TypeError(f"no rule for {type(e).__name__}")

    def trig_quotient(self, e: Expr, num: Expr, den: Expr) -> Expr:
        # tan/cot are differentiated as sin/cos and cos/sin at the same argument;
        # the unit-circle rules are applied to that argument directly
        inner = _Deriver()
        u = e.arg
        slot = self.reserve(RuleId.QUOTIENT, e)
        dn = inner.outer(num, u)
        dd = inner.outer(den, u)
        self.steps.extend(inner.steps)
        top = ex.add(ex.mul(dn, den), ex.neg(ex.mul(num, dd)))
        folded = fold_pythagorean(top)
        if folded != top:
            self.record(RuleId.PYTHAGOREAN, top, folded)
        return self.fill(slot, ex.div(folded, ex.power(den, 2)))


def differentiate(e: Expr) -> tuple[Expr, DerivationTrace]:
    e = ex.canonicalize(e)
    deriver = _Deriver()
    out = ex.canonicalize(deriver.d(e))
    return out, DerivationTrace(e, deriver.steps, out)


def derivative(e: Expr) -> Expr:
    return differentiate(e)[0]


# ---------------------------------------------------------------------------
# inverse functions


@dataclass(frozen=True)
class _Invertible:
    inverse: Expr
    branch: tuple[float, float]  # open interval in the original variable
    rule: RuleId


def _registered(f: Expr) -> _Invertible:
    half_pi = math.pi / 2
    if f == ex.Exp(X):
        return _Invertible(ex.Ln(X), (-30.0, 30.0), RuleId.NATURAL_LOG)
    if f == ex.Sin(X):
        return _Invertible(ex.Arcsin(X), (-half_pi, half_pi), RuleId.ARCSIN)
    if f == ex.Cos(X):
        return _Invertible(ex.Arccos(X), (0.0, math.pi), RuleId.ARCCOS)
    if f == ex.Tan(X):
        return _Invertible(ex.Arctan(X), (-half_pi, half_pi), RuleId.ARCTAN)
    if f == ex.Cot(X):
        return _Invertible(ex.Arccot(X), (0.0, math.pi), RuleId.ARCCOT)
    if isinstance(f, ex.PowRat) and f.base == X and f.exponent.denominator == 1 and f.exponent >= 2:
        return _Invertible(ex.PowRat(X, 1 / f.exponent), (0.0, 50.0), RuleId.ROOT_INVERSE)
    raise NotRegisteredInvertible(f"{unparse(f)} is not a registered invertible function")


def _collapse_inverse(n: Expr) -> Expr:
    """Simplify f(g(u)) for the registered pairs, using the unit circle for mixed trig pairs."""
    if isinstance(n, ex.Unary) and isinstance(n.arg, ex.Unary):
        inner, u = n.arg, n.arg.arg
        pairs = {(ex.Exp, ex.Ln), (ex.Sin, ex.Arcsin), (ex.Cos, ex.Arccos), (ex.Tan, ex.Arctan), (ex.Cot, ex.Arccot)}
        if (type(n), type(inner)) in pairs:
            return u
        if (type(n), type(inner)) in {(ex.Cos, ex.Arcsin), (ex.Sin, ex.Arccos)}:
            return ex.power(_one_minus_square(u), Fraction(1, 2))
        if (type(n), type(inner)) in {(ex.Cos, ex.Arctan), (ex.Sin, ex.Arccot)}:
            return ex.power(_one_plus_square(u), Fraction(-1, 2))
    if isinstance(n, ex.PowRat) and isinstance(n.base, ex.PowRat) and n.exponent.denominator == 1:
        return ex.power(n.base.base, n.base.exponent * n.exponent)
    return n


def _reciprocal(e: Expr) -> Expr:
    if isinstance(e, ex.Neg):
        return ex.neg(_reciprocal(e.arg))
    if isinstance(e, ex.Div):
        return e.den if e.num == ex.ONE else ex.div(e.den, e.num)
    if isinstance(e, ex.PowRat) and e.exponent < 0:
        return ex.power(e.base, -e.exponent)
    if isinstance(e, ex.Mul) and all(isinstance(f, (ex.ConstRat, ex.PowRat)) for f in e.factors):
        return ex.mul(*(ex.ConstRat(1 / f.value) if isinstance(f, ex.ConstRat) else ex.power(f.base, -f.exponent)
                        for f in e.factors))
    return ex.div(ex.ONE, e)


def _tidy(e: Expr) -> Expr:
    if isinstance(e, ex.Neg):
        return ex.neg(_tidy(e.arg))
    if isinstance(e, ex.PowRat) and e.exponent < 0 and e.exponent.denominator == 1:
        return ex.div(ex.ONE, ex.power(e.base, -e.exponent))
    return e


def inverse_rule(f: Expr, f_prime: Expr) -> Expr:
    """Derivative of the inverse of ``f`` as ``1/f'(g(x))`` written in the inverse's variable."""
    entry = _registered(ex.canonicalize(f))
    lo, hi = entry.branch
    signs = set()
    for i in range(1, 200):
        t = lo + (hi - lo) * i / 200
        try:
            v = ex.eval_float(f_prime, t)
        except DomainError as err:
            raise ZeroDerivativeOnBranch(f"f' undefined inside the branch at {t}") from err
        if v == 0:
            raise ZeroDerivativeOnBranch(f"f' vanishes at {t}")
        signs.add(v > 0)
    if len(signs) > 1:
        raise ZeroDerivativeOnBranch("f' changes sign on the branch")
    slope_at_inverse = ex.transform(ex.substitute(ex.canonicalize(f_prime), entry.inverse), _collapse_inverse)
    return ex.canonicalize(_tidy(_reciprocal(slope_at_inverse)))


# ---------------------------------------------------------------------------
# base table


def _x_exponent(e: Expr) -> Fraction | None:
    if e == X:
        return Fraction(1)
    if isinstance(e, ex.PowRat):
        inner = _x_exponent(e.base)
        return None if inner is None else inner * e.exponent
    return None


def _merge_x_powers(e: Expr) -> Expr:
    """Collect c * x^r1 * (x^a)^n * ... into c * x^(r1 + a n + ...); valid for x > 0."""
    factors = e.factors if isinstance(e, ex.Mul) else (e,)
    coeff, total = Fraction(1), Fraction(0)
    for f in factors:
        if isinstance(f, ex.ConstRat):
            coeff *= f.value
            continue
        r = _x_exponent(f)
        if r is None:
            return e
        total += r
    return ex.mul(ex.ConstRat(coeff), ex.power(X, total))


def _root_entry(q: int) -> tuple[Expr, Expr, list[DerivationStep]]:
    y_q = ex.power(X, q)
    slope_poly = poly.derivative_poly(poly.poly_from_expr(y_q)).to_expr()
    root = ex.power(X, Fraction(1, q))
    d_root = inverse_rule(y_q, slope_poly)
    steps = [
        DerivationStep(RuleId.POLY_CRITERION, y_q, slope_poly),
        DerivationStep(RuleId.INVERSE_FUNCTION, root, ex.div(ex.ONE, ex.substitute(slope_poly, root))),
        DerivationStep(RuleId.ROOT_INVERSE, root, d_root),
    ]
    return root, d_root, steps


def _rational_power_entry(p: int, q: int):
    root, d_root, steps = _root_entry(q)
    outer_poly = ex.power(X, p)
    d_outer = poly.derivative_poly(poly.poly_from_expr(outer_poly)).to_expr()
    steps.append(DerivationStep(RuleId.POLY_CRITERION, outer_poly, d_outer))
    f = ex.power(X, Fraction(p, q))
    composed = ex.mul(ex.substitute(d_outer, root), d_root)
    steps.append(DerivationStep(RuleId.COMPOSITE_POWER, f, composed))
    result = _merge_x_powers(composed)
    steps.append(DerivationStep(RuleId.RATIONAL_POWER, f, result))
    return f, result, steps


ROOT_DEGREES = (2, 3, 4, 5, 6)
RATIONAL_POWERS = ((3, 5), (2, 3), (5, 2), (7, 4))
EXPONENTIAL_BASES = (Fraction(2), Fraction(10), Fraction(1, 3))
LOG_BASES = (Fraction(2), Fraction(10))


def derive_base_table() -> list[tuple[Expr, Expr, DerivationTrace]]:
    """Re-derive every elementary entry of the derivative table from its justification."""
    table: list[tuple[Expr, Expr, DerivationTrace]] = []

    def emit(f, df, steps):
        table.append((f, df, DerivationTrace(f, list(steps), df)))

    for q in ROOT_DEGREES:
        emit(*_root_entry(q))
    for p, q in RATIONAL_POWERS:
        emit(*_rational_power_entry(p, q))

    # exp: the line e^a (1 + (x - a)) lies below the graph and touches it only at a,
    # so the slope at an arbitrary a is e^a
    exp_x = ex.exp(X)
    emit(exp_x, exp_x, [DerivationStep(RuleId.EXP_TANGENCY, exp_x, exp_x)])

    for a in EXPONENTIAL_BASES:
        ln_a = ex.ln(ex.const(a))
        f = ex.exp(ex.mul(ln_a, X))
        df = ex.mul(f, ln_a)  # exp slope at x ln a, times the constant inner slope ln a
        emit(f, df, [DerivationStep(RuleId.EXP_TANGENCY, f, f), DerivationStep(RuleId.GENERAL_EXPONENTIAL, f, df)])

    d_ln = inverse_rule(exp_x, exp_x)
    ln_steps = [DerivationStep(RuleId.INVERSE_FUNCTION, ex.ln(X), ex.div(ex.ONE, ex.exp(ex.ln(X)))),
                DerivationStep(RuleId.NATURAL_LOG, ex.ln(X), d_ln)]
    emit(ex.ln(X), d_ln, ln_steps)
    for a in LOG_BASES:
        f = ex.logbase(a, X)
        df = ex.div(d_ln, ex.ln(ex.const(a)))
        emit(f, df, ln_steps[1:] + [DerivationStep(RuleId.LOG_BASE, f, df)])

    # unit circle: rotating the radius (cos t, sin t) by a right angle gives the direction of motion
    radius = (ex.cos(X), ex.sin(X))
    direction = (ex.neg(radius[1]), radius[0])
    d_sin, d_cos = direction[1], direction[0]
    emit(ex.sin(X), d_sin, [DerivationStep(RuleId.UNIT_CIRCLE_SIN, ex.sin(X), d_sin)])
    emit(ex.cos(X), d_cos, [DerivationStep(RuleId.UNIT_CIRCLE_COS, ex.cos(X), d_cos)])

    trig = {}
    for f, num, den, d_num, d_den in (
        (ex.tan(X), ex.sin(X), ex.cos(X), d_sin, d_cos),
        (ex.cot(X), ex.cos(X), ex.sin(X), d_cos, d_sin),
    ):
        top = ex.add(ex.mul(d_num, den), ex.neg(ex.mul(num, d_den)))
        folded = fold_pythagorean(top)
        df = ex.div(folded, ex.power(den, 2))
        steps = [
            DerivationStep(RuleId.QUOTIENT, f, ex.div(top, ex.power(den, 2))),
            DerivationStep(RuleId.PYTHAGOREAN, top, folded),
        ]
        trig[type(f)] = df
        emit(f, df, steps)

    for f, df_base, g in (
        (ex.sin(X), d_sin, ex.Arcsin(X)),
        (ex.cos(X), d_cos, ex.Arccos(X)),
        (ex.tan(X), trig[ex.Tan], ex.Arctan(X)),
        (ex.cot(X), trig[ex.Cot], ex.Arccot(X)),
    ):
        dg = inverse_rule(f, df_base)
        steps = [
            DerivationStep(RuleId.INVERSE_FUNCTION, g, ex.div(ex.ONE, ex.substitute(df_base, g))),
            DerivationStep(_TRIG_INVERSE_RULES[type(g)], g, dg),
        ]
        emit(g, dg, steps)
    return table
