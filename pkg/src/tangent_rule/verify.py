"""Corpus-wide sweeps comparing symbolic derivatives with numeric oracles."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import expr as ex
from .analysis import DEFAULT_TOL, fd_oracle, halving_steps, remainder_profile
from .errors import DomainError
from .expr import Expr
from .rules import derivative

# A failing point counts as explained when f or f' breaks down (undefined value,
# sign change of an abs() argument, or a pole) within this distance of it.
EDGE_RADIUS = 0.05
_EDGE_PROBES = 200


@dataclass(frozen=True)
class PointCheck:
    point: float
    symbolic: float
    numeric: float
    passed: bool
    edge_distance: float | None = None

    @property
    def explained(self) -> bool:
        return self.passed or (self.edge_distance is not None and self.edge_distance <= EDGE_RADIUS)

    def explanation(self) -> str:
        if self.passed:
            return ""
        if self.edge_distance is None:
            return "unexplained"
        return f"domain edge or singularity within {self.edge_distance:.3g} of the point"


@dataclass
class ExprSweep:
    text: str
    checks: list[PointCheck] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(c.passed for c in self.checks)


@dataclass
class SweepReport:
    rows: list[ExprSweep]
    rel_tol: float

    @property
    def total(self) -> int:
        return sum(len(r.checks) for r in self.rows)

    @property
    def passed(self) -> int:
        return sum(r.passed for r in self.rows)

    @property
    def pass_rate(self) -> float:
        return self.passed / self.total if self.total else 0.0

    def failures(self) -> list[tuple[str, PointCheck]]:
        return [(r.text, c) for r in self.rows for c in r.checks if not c.passed]

    def all_explained(self) -> bool:
        return all(c.explained for _, c in self.failures())


def _stencil_ok(e: Expr, a: float, h: float, gs: list[Expr]) -> bool:
    """f is defined on the whole difference stencil and no guard of f changes sign across it."""
    xs = (a - h, a - h / 2, a, a + h / 2, a + h)
    if any(ex.try_eval(e, x) is None for x in xs):
        return False
    for g in gs:
        vals = [ex.try_eval(g, x) for x in xs]
        if any(v is None or v == 0 for v in vals) or len({v > 0 for v in vals}) > 1:
            return False
    return True


def in_domain_points(e: Expr, d: Expr, count: int = 20, seed: int | None = None) -> list[float]:
    """Deterministic points where f and f' are defined and the difference stencil
    stays inside one smooth piece of f's domain."""
    gs = guards(e)
    out: list[float] = []
    stream = ex.sample_points(count, seed=seed)
    for _ in range(500 * count):
        a = next(stream)
        if ex.try_eval(d, a) is None or not _stencil_ok(e, a, DEFAULT_TOL.fd_step, gs):
            continue
        out.append(a)
        if len(out) == count:
            break
    return sorted(out)


def guards(e: Expr) -> list[Expr]:
    """Expressions whose zeros contain every edge, pole and kink of ``e``."""
    out = []
    for n in ex.walk(e):
        g = None
        if isinstance(n, ex.Div):
            g = n.den
        elif isinstance(n, ex.PowRat) and (n.exponent < 0 or n.exponent.denominator > 1):
            g = n.base
        elif isinstance(n, (ex.Ln, ex.LogBase, ex.Abs)):
            g = n.arg
        elif isinstance(n, ex.Tan):
            g = ex.Cos(n.arg)
        elif isinstance(n, ex.Cot):
            g = ex.Sin(n.arg)
        elif isinstance(n, (ex.Arcsin, ex.Arccos)):
            g = ex.add(ex.ONE, ex.neg(ex.power(n.arg, 2)))
        if g is not None and ex.has_var(g) and g not in out:
            out.append(g)
    return out


def edge_distance(e: Expr, d: Expr, a: float, radius: float = EDGE_RADIUS) -> float | None:
    """Distance from ``a`` to the nearest breakdown of f or f' within ``radius``.

    Scans outwards on a fine grid; a breakdown is a point where f or f' is
    undefined, or a sign change of a guard (see :func:`guards`) between ``a``
    and the probe, which brackets an edge, pole or kink.
    """
    gs = guards(e) + [g for g in guards(d) if g not in guards(e)]
    at_a = [ex.try_eval(g, a) for g in gs]
    for j in range(1, _EDGE_PROBES + 1):
        r = radius * j / _EDGE_PROBES
        for x in (a - r, a + r):
            if ex.try_eval(e, x) is None or ex.try_eval(d, x) is None:
                return r
            for g, g0 in zip(gs, at_a):
                v = ex.try_eval(g, x)
                if g0 is None or v is None or v == 0 or (v > 0) != (g0 > 0):
                    return r
    return None


def oracle_self_consistent(e: Expr, a: float, rel_tol: float = 1e-7) -> bool:
    """Whether the difference oracle agrees with itself at step h and h/2.

    Uses no symbolic information, so it can screen corpus candidates whose local
    oscillation is too fast for the fixed difference step.
    """
    h = DEFAULT_TOL.fd_step
    try:
        u, v = fd_oracle(e, a, h), fd_oracle(e, a, h / 2)
    except DomainError:
        return False
    return abs(u - v) <= rel_tol * max(1.0, abs(u))


def check_expression(e: Expr, count: int = 20, rel_tol: float = 1e-6, seed: int | None = None) -> ExprSweep:
    e = ex.canonicalize(e)
    d = derivative(e)
    sweep = ExprSweep(str(e))
    for a in in_domain_points(e, d, count, seed):
        sym = ex.eval_float(d, a)
        num = fd_oracle(e, a)
        ok = abs(sym - num) <= rel_tol * max(1.0, abs(num))
        sweep.checks.append(PointCheck(a, sym, num, ok, None if ok else edge_distance(e, d, a)))
    return sweep


def oracle_sweep(exprs, count: int = 20, rel_tol: float = 1e-6, seed: int | None = None) -> SweepReport:
    return SweepReport([check_expression(e, count, rel_tol, seed) for e in exprs], rel_tol)


# ---------------------------------------------------------------------------
# remainder order over a corpus


@dataclass(frozen=True)
class DecayCheck:
    text: str
    point: float
    ratios: tuple[float, ...]
    passed: bool
    skipped: bool = False


def interior_points(e: Expr, d: Expr, count: int = 5, seed: int | None = None) -> list[float]:
    """In-domain points whose remainder table (h up to 1e-2) stays inside the domain."""
    pts = []
    for a in in_domain_points(e, d, 4 * count, seed):
        if all(ex.try_eval(e, a + h) is not None for h in halving_steps(1e-2, 1e-5)):
            if edge_distance(e, d, a, 2e-2) is None:
                pts.append(a)
    step = max(1, len(pts) // count)
    return pts[::step][:count]


def remainder_decay(e: Expr, count: int = 5, seed: int | None = None, flat_tol: float = 1e-8) -> list[DecayCheck]:
    """Check that R(h)/h halves with h at interior points (second-order remainder)."""
    e = ex.canonicalize(e)
    d = derivative(e)
    d2 = derivative(d)
    d3 = derivative(d2)
    out = []
    for a in interior_points(e, d, count, seed):
        f2 = ex.try_eval(d2, a)
        if f2 is None or abs(f2) < flat_tol:
            out.append(DecayCheck(str(e), a, (), True, skipped=True))
            continue
        f3 = ex.try_eval(d3, a)
        fa, k = ex.eval_float(e, a), ex.eval_float(d, a)
        prof = remainder_profile(e, a, k, halving_steps(1e-2, 1e-5))
        ratios = tuple(_usable_ratios(prof, fa, f2, f3))
        out.append(DecayCheck(str(e), a, ratios, second_order_decay_values(ratios), skipped=not ratios))
    return out


def _usable_ratios(prof, fa: float, f2: float, f3: float | None, noise_share: float = 0.01):
    """Successive R/h ratios over the steps where the h^2 term of R dominates.

    A step is used when the cubic term is at most a tenth of the quadratic one
    (near an inflection point that needs small h) and rounding noise stays
    under 1% of R (which rules out the smallest h).
    """
    rows = prof.rows
    for r0, r1 in zip(rows, rows[1:]):
        if f3 is not None and abs(f3) / 6 * r0.h > 0.1 * abs(f2) / 2:
            continue
        noise = 4 * 2.2e-16 * max(1.0, abs(fa), abs(prof.slope * r1.h))
        if noise > noise_share * abs(f2) / 2 * r1.h**2:
            break
        yield r1.R_over_h / r0.R_over_h


def second_order_decay_values(ratios, lo: float = 0.35, hi: float = 0.65) -> bool:
    return bool(ratios) and all(lo <= q <= hi for q in ratios)
