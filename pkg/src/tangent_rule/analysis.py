"""Pointwise differentiability diagnosis and numeric cross-checks.

Nothing here trusts the rule engine blindly: slopes are recomputed from
function values (Richardson-extrapolated difference quotients), and the
remainder ``R(h) = f(a+h) - f(a) - k h`` is tabulated so that a claimed slope
``k`` can be judged by how fast ``R(h)/h`` vanishes.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from . import expr as ex
from .errors import DomainError, NotExactlyEvaluable, OutsideDomainError
from .expr import Expr, TangentLine
from .rules import derivative


@dataclass(frozen=True)
class Tolerances:
    corner_tol: float = 1e-5
    divergence: float = 1e8
    fd_step: float = 1e-4
    one_sided_steps: tuple[float, ...] = (1e-3, 5e-4, 2.5e-4)
    # divergence probe: exponent of |D(h)| ~ h^-alpha must stay above this over the probe decades
    min_blowup_exponent: float = 0.1


DEFAULT_TOL = Tolerances()


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Differentiable:
    slope: float
    tangent: TangentLine

    def describe(self) -> str:
        return f"differentiable: slope={ex.fmt_number(self.slope)} tangent: {self.tangent}"


@dataclass(frozen=True)
class Corner:
    left_slope: float
    right_slope: float

    def describe(self) -> str:
        return f"corner: left={ex.fmt_number(self.left_slope)} right={ex.fmt_number(self.right_slope)}"


@dataclass(frozen=True)
class VerticalTangent:
    sign: Union[int, str]  # +1, -1 or "both"

    def describe(self) -> str:
        s = {1: "+1", -1: "-1"}.get(self.sign, self.sign)
        return f"vertical tangent: sign={s}"


@dataclass(frozen=True)
class DomainBoundary:
    side: str  # "left", "right" or "isolated": the side from which the point is reachable

    def describe(self) -> str:
        return f"domain boundary: side={self.side}"


@dataclass(frozen=True)
class OutsideDomain:
    def describe(self) -> str:
        return "outside domain"


DiffVerdict = Union[Differentiable, Corner, VerticalTangent, DomainBoundary, OutsideDomain]


# ---------------------------------------------------------------------------
# finite differences


def fd_oracle(e: Expr, a: float, h: float = DEFAULT_TOL.fd_step) -> float:
    """Central difference at h and h/2 combined by one Richardson step."""

    def central(step):
        return (ex.eval_float(e, a + step) - ex.eval_float(e, a - step)) / (2 * step)

    return (4 * central(h / 2) - central(h)) / 3


def _richardson_one_sided(d: Sequence[float]) -> float:
    # steps halve, so each level of one-sided quotients has a leading error linear in h
    r1 = [2 * d[i + 1] - d[i] for i in range(len(d) - 1)]
    if len(r1) == 1:
        return r1[0]
    return (4 * r1[1] - r1[0]) / 3


def _side_quotients(e: Expr, a: float, fa: float, side: int, hs) -> list[float] | None:
    out = []
    for h in hs:
        try:
            out.append((ex.eval_float(e, a + side * h) - fa) / (side * h))
        except DomainError:
            return None
    return out


def _blows_up(e: Expr, a: float, fa: float, side: int, tol: Tolerances) -> float | None:
    """Follow the one-sided quotient to tiny steps; return +-inf if it diverges."""
    probe = [tol.one_sided_steps[-1] * 10.0**-k for k in range(0, 9)]
    d = _side_quotients(e, a, fa, side, probe)
    if d is None or any(v == 0 for v in d):
        return None
    for v in d:
        if abs(v) > tol.divergence:
            return math.copysign(math.inf, v)
    signs = {v > 0 for v in d}
    if len(signs) > 1:
        return None
    # steady power-law growth over all probe decades counts as divergence
    alphas = [math.log10(abs(d[i + 1]) / abs(d[i])) for i in range(len(d) - 1)]
    if all(al >= tol.min_blowup_exponent for al in alphas):
        return math.copysign(math.inf, d[-1])
    return None


def _kinks_at(e: Expr, a: float) -> list[ex.Abs]:
    out = []
    for n in ex.walk(e):
        if isinstance(n, ex.Abs):
            try:
                if ex.is_exactly_evaluable(n.arg):
                    vanish = ex.eval_exact(n.arg, Fraction(a)) == 0
                else:
                    vanish = ex.eval_float(n.arg, a) == 0.0
            except (DomainError, ZeroDivisionError):
                continue
            if vanish and n not in out:
                out.append(n)
    return out


def _exact_side_slope(e: Expr, a: float, kinks: list[ex.Abs], side: int) -> float | None:
    """Slope of ``e`` on one side of ``a`` with every vanishing ``|u|`` opened as ``+-u``."""
    signs = {}
    for k in kinks:
        try:
            du = ex.eval_float(derivative(k.arg), a)
        except DomainError:
            return None
        if du == 0:
            return None
        signs[k] = 1 if du * side > 0 else -1

    def open_abs(n: Expr) -> Expr:
        if isinstance(n, ex.Abs) and n in signs:
            return n.arg if signs[n] > 0 else ex.neg(n.arg)
        return n

    opened = ex.transform(e, open_abs)
    d = derivative(opened)
    try:
        if ex.is_exactly_evaluable(d):
            return float(ex.eval_exact(d, Fraction(a)))
        return ex.eval_float(d, a)
    except (DomainError, ZeroDivisionError, NotExactlyEvaluable):
        return None


def one_sided_slopes(e: Expr, a: float, tol: Tolerances = DEFAULT_TOL) -> tuple[float | None, float | None]:
    """Left and right slopes at ``a``.

    A side that cannot be approached inside the domain is reported as ``None``;
    a diverging side as ``+-inf``.
    """
    e = ex.canonicalize(e)
    try:
        fa = ex.eval_float(e, a)
    except DomainError as err:
        raise OutsideDomainError(f"{e} is undefined at {a!r}") from err
    kinks = _kinks_at(e, a)
    result = []
    for side in (-1, 1):
        d = _side_quotients(e, a, fa, side, tol.one_sided_steps)
        if d is None:
            result.append(None)
            continue
        if kinks:
            exact = _exact_side_slope(e, a, kinks, side)
            if exact is not None:
                result.append(exact)
                continue
        slope = None
        if abs(d[-1]) > abs(d[0]):
            slope = _blows_up(e, a, fa, side, tol)
        result.append(_richardson_one_sided(d) if slope is None else slope)
    return result[0], result[1]


def _approachable(e: Expr, a: float, side: int, tol: Tolerances) -> bool:
    return all(ex.try_eval(e, a + side * h) is not None for h in tol.one_sided_steps)


def diagnose(e: Expr, a: float, tol: Tolerances = DEFAULT_TOL) -> DiffVerdict:
    e = ex.canonicalize(e)
    fa = ex.try_eval(e, a)
    left, right = _approachable(e, a, -1, tol), _approachable(e, a, 1, tol)
    if fa is None:
        if left != right:
            return DomainBoundary("left" if left else "right")
        return OutsideDomain()
    if not left and not right:
        return DomainBoundary("isolated")
    if left != right:
        return DomainBoundary("left" if left else "right")
    kl, kr = one_sided_slopes(e, a, tol)
    infinite = [k for k in (kl, kr) if math.isinf(k)]
    if infinite:
        signs = {int(math.copysign(1, k)) for k in infinite}
        return VerticalTangent(signs.pop() if len(signs) == 1 else "both")
    if abs(kl - kr) > tol.corner_tol:
        return Corner(kl, kr)
    slope = (kl + kr) / 2
    # prefer the symbolic value when it is defined here and confirmed by both sides
    exact = ex.try_eval(derivative(e), a)
    if exact is not None and max(abs(exact - kl), abs(exact - kr)) <= tol.corner_tol:
        slope = exact
    return Differentiable(slope, TangentLine(a, fa, slope))


# ---------------------------------------------------------------------------
# remainder of the local linear decomposition


@dataclass(frozen=True)
class RemainderRow:
    h: float
    R: float
    R_over_h: float


@dataclass
class RemainderProfile:
    point: float
    slope: float
    rows: list[RemainderRow] = field(default_factory=list)

    def ratios(self) -> list[float]:
        """Successive (R/h)(h_next) / (R/h)(h) values."""
        r = [row.R_over_h for row in self.rows]
        return [r[i + 1] / r[i] if r[i] != 0 else math.nan for i in range(len(r) - 1)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["h", "R", "R_over_h"])
        for row in self.rows:
            w.writerow([repr(row.h), repr(row.R), repr(row.R_over_h)])
        return buf.getvalue()


def halving_steps(start: float = 1e-1, stop: float = 1e-5) -> list[float]:
    hs, h = [], start
    while h >= stop:
        hs.append(h)
        h /= 2
    return hs


def remainder_profile(e: Expr, a: float, k: float, hs: Sequence[float]) -> RemainderProfile:
    if not hs:
        raise ValueError("need at least one step")
    if any(b >= a_ for a_, b in zip(hs, hs[1:])):
        raise ValueError("steps must be strictly decreasing")
    fa = ex.eval_float(e, a)
    rows = []
    for h in hs:
        r = ex.eval_float(e, a + h) - fa - k * h
        rows.append(RemainderRow(h, r, r / h))
    return RemainderProfile(a, k, rows)


def second_order_decay(profile: RemainderProfile, lo=0.35, hi=0.65) -> bool:
    """Whether every successive R/h ratio lies in [lo, hi]."""
    return all(lo <= q <= hi for q in profile.ratios())


def judge_tangent(e: Expr, a: float, k: float) -> bool:
    """Numeric tangency judgement from the remainder table (for non-polynomial input)."""
    prof = remainder_profile(e, a, k, halving_steps(1e-2, 1e-5))
    tail = prof.rows[-1].R_over_h
    scale = max(1.0, abs(k), abs(ex.eval_float(e, a)))
    if abs(tail) <= 1e-9 * scale:
        return True
    return prof.ratios()[-1] <= 0.65


# ---------------------------------------------------------------------------
# identity checks


def check_exp_tangency(x0: float, samples: int, slope_scale: float = 1.0) -> bool:
    """exp lies above its line at x0 on [x0 - 5, x0 + 5], touching it only at x0."""
    if samples < 2:
        raise ValueError("samples must be at least 2")
    k = math.exp(x0) * slope_scale
    xs = [x0 - 5 + 10 * i / (samples - 1) for i in range(samples)] + [x0]
    for x in xs:
        gap = math.exp(x) - (math.exp(x0) + k * (x - x0))
        if gap < -1e-12:
            return False
        if abs(gap) <= 1e-12 and x != x0:
            return False
    return True


def check_circle_orthogonality(t: float) -> float:
    """Dot product of the radius (cos t, sin t) with the direction (-sin t, cos t)."""
    return math.cos(t) * -math.sin(t) + math.sin(t) * math.cos(t)
