"""Expression trees in one real variable ``x``.

Nodes are frozen dataclasses.  The module-level smart constructors
(:func:`add`, :func:`mul`, :func:`neg`, :func:`div`, :func:`power` and the
unary helpers) assume canonical children and always return a canonical node,
so :func:`canonicalize` is just a bottom-up rebuild through them.

Canonical form, briefly:

* rational constants are folded exactly;
* ``Add``/``Mul`` are flat, sorted by :attr:`Expr.sort_key`, never of length 1;
* a ``Mul`` holds at most one rational coefficient (first), never ``1`` or ``-1``,
  no ``Neg`` and no ``Div`` factors; repeated factors are collected into integer powers;
* ``Neg`` never wraps a constant, a ``Neg``, an ``Add`` or a ``Mul`` with a coefficient;
* a ``Div`` has a non-constant denominator and neither operand carries a sign.
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterator

from .errors import (
    DivisionByZero,
    DivisionByZeroConst,
    DomainError,
    EmptyCommonDomain,
    NotExactlyEvaluable,
)

DEFAULT_SEED = 20260416


def sampling_seed() -> int:
    """Seed for deterministic sampling; ``TANGENT_RULE_SEED`` overrides it."""
    return int(os.environ.get("TANGENT_RULE_SEED", DEFAULT_SEED))


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("refusing to build a Rational from a float; pass a string")
    return Fraction(value)


class Expr:
    TAG: int = -1

    def children(self) -> tuple[Expr, ...]:
        return ()

    def rebuild(self, children: tuple[Expr, ...]) -> Expr:
        return self

    @cached_property
    def sort_key(self) -> tuple:
        return (self.TAG,)

    def __lt__(self, other: Expr) -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        from .parser import unparse

        return unparse(self)

    # Arithmetic sugar; every operator goes through the canonical constructors.
    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __sub__(self, other):
        return add(self, neg(_coerce(other)))

    def __rsub__(self, other):
        return add(_coerce(other), neg(self))

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __truediv__(self, other):
        return div(self, _coerce(other))

    def __rtruediv__(self, other):
        return div(_coerce(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, exponent):
        return power(self, as_fraction(exponent))


def _coerce(value) -> Expr:
    if isinstance(value, Expr):
        return value
    return ConstRat(as_fraction(value))


@dataclass(frozen=True, eq=True)
class ConstRat(Expr):
    value: Fraction
    TAG = 0

    def __post_init__(self):
        object.__setattr__(self, "value", as_fraction(self.value))

    @cached_property
    def sort_key(self):
        return (0, self.value)


@dataclass(frozen=True)
class ConstE(Expr):
    TAG = 1


@dataclass(frozen=True)
class ConstPi(Expr):
    TAG = 2


@dataclass(frozen=True)
class Var(Expr):
    TAG = 3


@dataclass(frozen=True)
class Add(Expr):
    terms: tuple[Expr, ...]
    TAG = 4

    def children(self):
        return self.terms

    def rebuild(self, children):
        return add(*children)

    @cached_property
    def sort_key(self):
        return (4, tuple(t.sort_key for t in self.terms))


@dataclass(frozen=True)
class Mul(Expr):
    factors: tuple[Expr, ...]
    TAG = 5

    def children(self):
        return self.factors

    def rebuild(self, children):
        return mul(*children)

    @cached_property
    def sort_key(self):
        return (5, tuple(f.sort_key for f in self.factors))


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr
    TAG = 6

    def children(self):
        return (self.arg,)

    def rebuild(self, children):
        return neg(children[0])

    @cached_property
    def sort_key(self):
        return (6, self.arg.sort_key)


@dataclass(frozen=True)
class Div(Expr):
    num: Expr
    den: Expr
    TAG = 7

    def children(self):
        return (self.num, self.den)

    def rebuild(self, children):
        return div(*children)

    @cached_property
    def sort_key(self):
        return (7, self.num.sort_key, self.den.sort_key)


@dataclass(frozen=True)
class PowRat(Expr):
    base: Expr
    exponent: Fraction
    TAG = 8

    def __post_init__(self):
        object.__setattr__(self, "exponent", as_fraction(self.exponent))

    def children(self):
        return (self.base,)

    def rebuild(self, children):
        return power(children[0], self.exponent)

    @cached_property
    def sort_key(self):
        return (8, self.base.sort_key, self.exponent)


@dataclass(frozen=True)
class Unary(Expr):
    """Base for the one-argument elementary functions."""

    arg: Expr
    NAME = ""

    def children(self):
        return (self.arg,)

    def rebuild(self, children):
        return apply(type(self), children[0])

    @cached_property
    def sort_key(self):
        return (self.TAG, self.arg.sort_key)


@dataclass(frozen=True)
class Exp(Unary):
    TAG = 9
    NAME = "exp"


@dataclass(frozen=True)
class Ln(Unary):
    TAG = 10
    NAME = "ln"


@dataclass(frozen=True)
class LogBase(Expr):
    base: Fraction
    arg: Expr
    TAG = 11

    def __post_init__(self):
        b = as_fraction(self.base)
        if b <= 0 or b == 1:
            raise ValueError(f"logarithm base must be positive and not 1, got {b}")
        object.__setattr__(self, "base", b)

    def children(self):
        return (self.arg,)

    def rebuild(self, children):
        return logbase(self.base, children[0])

    @cached_property
    def sort_key(self):
        return (11, self.arg.sort_key, self.base)


@dataclass(frozen=True)
class Sin(Unary):
    TAG = 12
    NAME = "sin"


@dataclass(frozen=True)
class Cos(Unary):
    TAG = 13
    NAME = "cos"


@dataclass(frozen=True)
class Tan(Unary):
    TAG = 14
    NAME = "tan"


@dataclass(frozen=True)
class Cot(Unary):
    TAG = 15
    NAME = "cot"


@dataclass(frozen=True)
class Arcsin(Unary):
    TAG = 16
    NAME = "asin"


@dataclass(frozen=True)
class Arccos(Unary):
    TAG = 17
    NAME = "acos"


@dataclass(frozen=True)
class Arctan(Unary):
    TAG = 18
    NAME = "atan"


@dataclass(frozen=True)
class Arccot(Unary):
    TAG = 19
    NAME = "acot"


@dataclass(frozen=True)
class Abs(Unary):
    TAG = 20
    NAME = "abs"


UNARY_TYPES = (Exp, Ln, Sin, Cos, Tan, Cot, Arcsin, Arccos, Arctan, Arccot, Abs)
FUNCTION_NAMES = {cls.NAME: cls for cls in UNARY_TYPES}

X = Var()
E = ConstE()
PI = ConstPi()
ZERO = ConstRat(Fraction(0))
ONE = ConstRat(Fraction(1))


def const(value) -> ConstRat:
    return ConstRat(as_fraction(value))


# ---------------------------------------------------------------------------
# canonical constructors


def _is_const(e: Expr, value=None) -> bool:
    return isinstance(e, ConstRat) and (value is None or e.value == value)


def _split_sign(e: Expr) -> tuple[int, Expr]:
    """Pull an outer sign off ``e``: returns (sign, e_without_sign)."""
    if isinstance(e, Neg):
        return -1, e.arg
    if isinstance(e, ConstRat) and e.value < 0:
        return -1, ConstRat(-e.value)
    if isinstance(e, Mul) and _is_const(e.factors[0]) and e.factors[0].value < 0:
        return -1, mul(ConstRat(-e.factors[0].value), *e.factors[1:])
    return 1, e


def add(*terms: Expr) -> Expr:
    flat: list[Expr] = []
    constant = Fraction(0)
    for t in terms:
        parts = t.terms if isinstance(t, Add) else (t,)
        for p in parts:
            if isinstance(p, ConstRat):
                constant += p.value
            else:
                flat.append(p)
    if constant != 0:
        flat.append(ConstRat(constant))
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Add(tuple(sorted(flat, key=lambda t: t.sort_key)))


def mul(*factors: Expr) -> Expr:
    coeff = Fraction(1)
    plain: list[Expr] = []
    nums: list[Expr] = []
    dens: list[Expr] = []
    stack = list(factors)
    while stack:
        f = stack.pop(0)
        if isinstance(f, Neg):
            coeff = -coeff
            f = f.arg
        if isinstance(f, Mul):
            stack[:0] = f.factors
        elif isinstance(f, ConstRat):
            coeff *= f.value
        elif isinstance(f, Div):
            nums.append(f.num)
            dens.append(f.den)
        else:
            plain.append(f)
    if coeff == 0:
        return ZERO
    if dens:
        return div(mul(ConstRat(coeff), *plain, *nums), mul(*dens))

    # collect repeated bases carrying positive integer exponents
    counts: dict[Expr, Fraction] = {}
    order: list[Expr] = []
    for f in plain:
        base, n = f, Fraction(1)
        if isinstance(f, PowRat) and f.exponent.denominator == 1 and f.exponent > 0:
            base, n = f.base, f.exponent
        if base not in counts:
            counts[base] = Fraction(0)
            order.append(base)
        counts[base] += n
    merged = [power(b, counts[b]) if counts[b] != 1 else b for b in order]
    merged.sort(key=lambda f: f.sort_key)

    sign = 1
    if coeff == -1:
        sign, coeff = -1, Fraction(1)
    if coeff != 1:
        merged.insert(0, ConstRat(coeff))
    if not merged:
        out: Expr = ONE
    elif len(merged) == 1:
        out = merged[0]
    else:
        out = Mul(tuple(merged))
    return neg(out) if sign < 0 else out


def neg(a: Expr) -> Expr:
    if isinstance(a, ConstRat):
        return ConstRat(-a.value)
    if isinstance(a, Neg):
        return a.arg
    if isinstance(a, Add):
        return add(*(neg(t) for t in a.terms))
    if isinstance(a, Mul) and _is_const(a.factors[0]):
        return mul(ConstRat(-a.factors[0].value), *a.factors[1:])
    return Neg(a)


def div(num: Expr, den: Expr) -> Expr:
    if _is_const(den, 0):
        raise DivisionByZeroConst("constant denominator folds to zero")
    if isinstance(num, ConstRat) and isinstance(den, ConstRat):
        return ConstRat(num.value / den.value)
    if isinstance(den, ConstRat):
        return mul(ConstRat(1 / den.value), num)
    if _is_const(num, 0):
        return ZERO
    s_num, num = _split_sign(num)
    s_den, den = _split_sign(den)
    if isinstance(num, Div):
        out = div(num.num, mul(num.den, den))
    else:
        out = Div(num, den)
    return neg(out) if s_num * s_den < 0 else out


def _exact_root(value: Fraction, q: int) -> Fraction | None:
    """Exact q-th root of a nonnegative rational, or None if irrational."""

    def iroot(n: int) -> int | None:
        if n < 2:
            return n
        r = round(n ** (1.0 / q))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand**q == n:
                return cand
        # float guess can be off for huge n; fall back to integer Newton
        lo, hi = 0, 1 << (n.bit_length() // q + 1)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid**q < n:
                lo = mid + 1
            else:
                hi = mid
        return lo if lo**q == n else None

    a, b = iroot(value.numerator), iroot(value.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def power(base: Expr, exponent) -> Expr:
    r = as_fraction(exponent)
    if r == 0:
        return ONE
    if r == 1:
        return base
    p, q = r.numerator, r.denominator
    if isinstance(base, ConstRat):
        c = base.value
        if c == 0 and r < 0:
            raise DivisionByZeroConst("zero raised to a negative power")
        if q == 1:
            return ConstRat(c**p)
        if c < 0 and q % 2 == 0:
            return PowRat(base, r)
        root = _exact_root(abs(c), q)
        if root is None:
            return PowRat(base, r)
        if c < 0:
            root = -root
        return ConstRat(root**p)
    if isinstance(base, Neg) and q % 2 == 1:
        inner = power(base.arg, r)
        return neg(inner) if p % 2 else inner
    return PowRat(base, r)


def apply(cls: type, arg: Expr) -> Expr:
    """Canonical constructor for the one-argument function nodes."""
    if isinstance(arg, ConstRat):
        v = arg.value
        if v == 0 and cls in (Sin, Tan, Arcsin, Arctan):
            return ZERO
        if v == 0 and cls in (Exp, Cos):
            return ONE
        if v == 1 and cls is Ln:
            return ZERO
        if cls is Abs:
            return ConstRat(abs(v))
    if cls is Ln and isinstance(arg, ConstE):
        return ONE
    if cls is Abs:
        _, arg = _split_sign(arg)
        if isinstance(arg, Abs):
            return arg
        if isinstance(arg, ConstRat):
            return arg
    return cls(arg)


def logbase(base, arg: Expr) -> Expr:
    b = as_fraction(base)
    if _is_const(arg, 1):
        return ZERO
    if _is_const(arg, b):
        return ONE
    return LogBase(b, arg)


def exp(a):
    return apply(Exp, _coerce(a))


def ln(a):
    return apply(Ln, _coerce(a))


def sin(a):
    return apply(Sin, _coerce(a))


def cos(a):
    return apply(Cos, _coerce(a))


def tan(a):
    return apply(Tan, _coerce(a))


def cot(a):
    return apply(Cot, _coerce(a))


def asin(a):
    return apply(Arcsin, _coerce(a))


def acos(a):
    return apply(Arccos, _coerce(a))


def atan(a):
    return apply(Arctan, _coerce(a))


def acot(a):
    return apply(Arccot, _coerce(a))


def absolute(a):
    return apply(Abs, _coerce(a))


def canonicalize(e: Expr) -> Expr:
    """Rebuild ``e`` bottom-up through the canonical constructors."""
    kids = e.children()
    if not kids:
        return e
    return e.rebuild(tuple(canonicalize(k) for k in kids))


# ---------------------------------------------------------------------------
# traversal helpers


def walk(e: Expr) -> Iterator[Expr]:
    """Pre-order traversal."""
    yield e
    for k in e.children():
        yield from walk(k)


def has_var(e: Expr) -> bool:
    return any(isinstance(n, Var) for n in walk(e))


def substitute(e: Expr, replacement: Expr) -> Expr:
    """Replace every occurrence of ``x`` by ``replacement``."""
    if isinstance(e, Var):
        return replacement
    kids = e.children()
    if not kids:
        return e
    return e.rebuild(tuple(substitute(k, replacement) for k in kids))


def transform(e: Expr, fn: Callable[[Expr], Expr]) -> Expr:
    """Bottom-up rewrite: ``fn`` sees each node after its children were rewritten."""
    kids = e.children()
    if kids:
        e = e.rebuild(tuple(transform(k, fn) for k in kids))
    return fn(e)


def depth(e: Expr) -> int:
    kids = e.children()
    return 1 + max((depth(k) for k in kids), default=0)


# ---------------------------------------------------------------------------
# evaluation


def eval_exact(e: Expr, a) -> Fraction:
    """Exact value at ``x = a`` on the rational fragment of the language."""
    a = as_fraction(a)

    def ev(n: Expr) -> Fraction:
        if isinstance(n, ConstRat):
            return n.value
        if isinstance(n, Var):
            return a
        if isinstance(n, Add):
            return sum((ev(t) for t in n.terms), Fraction(0))
        if isinstance(n, Mul):
            out = Fraction(1)
            for f in n.factors:
                out *= ev(f)
            return out
        if isinstance(n, Neg):
            return -ev(n.arg)
        if isinstance(n, Div):
            d = ev(n.den)
            if d == 0:
                raise DivisionByZero(f"denominator {n.den} vanishes at x = {a}")
            return ev(n.num) / d
        if isinstance(n, PowRat) and n.exponent.denominator == 1:
            b = ev(n.base)
            if b == 0 and n.exponent < 0:
                raise DivisionByZero(f"{n} has a zero base at x = {a}")
            return b ** int(n.exponent)
        if isinstance(n, Abs):
            return abs(ev(n.arg))
        raise NotExactlyEvaluable(n)

    return ev(e)


def is_exactly_evaluable(e: Expr) -> bool:
    for n in walk(e):
        if isinstance(n, (ConstRat, Var, Add, Mul, Neg, Div, Abs)):
            continue
        if isinstance(n, PowRat) and n.exponent.denominator == 1:
            continue
        return False
    return True


def real_power(b: float, r: Fraction) -> float:
    """Real power with odd roots of negative numbers taken as real."""
    p, q = r.numerator, r.denominator
    if b == 0 and r < 0:
        raise ZeroDivisionError
    if q == 1:
        return b**p
    if b < 0:
        if q % 2 == 0:
            raise ValueError("even root of a negative number")
        mag = (-b) ** (p / q)
        return -mag if p % 2 else mag
    return b ** (p / q)


def _arccot(u: float) -> float:
    # continuous branch with values in (0, pi)
    return math.pi / 2 - math.atan(u)


def eval_float(e: Expr, a: float) -> float:
    """Value at ``x = a`` in binary64 arithmetic, with real-domain checks."""

    def fail(n, v, why):
        raise DomainError(n, v, why)

    def ev(n: Expr) -> float:
        if isinstance(n, ConstRat):
            return float(n.value)
        if isinstance(n, Var):
            return a
        if isinstance(n, ConstE):
            return math.e
        if isinstance(n, ConstPi):
            return math.pi
        if isinstance(n, Add):
            out = math.fsum(ev(t) for t in n.terms)
        elif isinstance(n, Mul):
            out = 1.0
            for f in n.factors:
                out *= ev(f)
        elif isinstance(n, Neg):
            out = -ev(n.arg)
        elif isinstance(n, Div):
            d = ev(n.den)
            if d == 0:
                fail(n, a, "zero denominator")
            out = ev(n.num) / d
        elif isinstance(n, PowRat):
            b = ev(n.base)
            try:
                out = real_power(b, n.exponent)
            except ZeroDivisionError:
                fail(n, a, "zero base with negative exponent")
            except ValueError:
                fail(n, a, "negative base under an even root")
            except OverflowError:
                fail(n, a, "overflow")
        elif isinstance(n, LogBase):
            u = ev(n.arg)
            if u <= 0:
                fail(n, a, "logarithm of a non-positive number")
            out = math.log(u) / math.log(n.base)
        else:
            u = ev(n.arg)
            if isinstance(n, Exp):
                try:
                    out = math.exp(u)
                except OverflowError:
                    fail(n, a, "overflow")
            elif isinstance(n, Ln):
                if u <= 0:
                    fail(n, a, "logarithm of a non-positive number")
                out = math.log(u)
            elif isinstance(n, Sin):
                out = math.sin(u)
            elif isinstance(n, Cos):
                out = math.cos(u)
            elif isinstance(n, Tan):
                c = math.cos(u)
                if c == 0:
                    fail(n, a, "pole")
                out = math.tan(u)
            elif isinstance(n, Cot):
                s = math.sin(u)
                if s == 0:
                    fail(n, a, "pole")
                out = math.cos(u) / s
            elif isinstance(n, Arcsin):
                if not -1 <= u <= 1:
                    fail(n, a, "argument outside [-1, 1]")
                out = math.asin(u)
            elif isinstance(n, Arccos):
                if not -1 <= u <= 1:
                    fail(n, a, "argument outside [-1, 1]")
                out = math.acos(u)
            elif isinstance(n, Arctan):
                out = math.atan(u)
            elif isinstance(n, Arccot):
                out = _arccot(u)
            elif isinstance(n, Abs):
                out = abs(u)
            else:  # pragma: no cover - every node type is handled above
                raise TypeError(f"unknown node {n!r}")
        if not math.isfinite(out):
            fail(n, a, "non-finite value")
        return out

    return ev(e)


def try_eval(e: Expr, a: float) -> float | None:
    try:
        return eval_float(e, a)
    except DomainError:
        return None


# ---------------------------------------------------------------------------
# equivalence


def sample_points(count: int, lo=-4.0, hi=4.0, seed: int | None = None) -> Iterator[float]:
    """Endless stream of jittered-grid points: each round is ``count`` cells over [lo, hi]."""
    rng = random.Random(sampling_seed() if seed is None else seed)
    width = (hi - lo) / count
    while True:
        for i in range(count):
            yield lo + width * (i + rng.random())


def close(u: float, v: float, rel_tol: float) -> bool:
    return abs(u - v) <= rel_tol * max(1.0, abs(u), abs(v))


def equiv(e1: Expr, e2: Expr, samples: int = 20, rel_tol: float = 1e-9, seed=None) -> bool:
    """Structural equality of canonical forms, else agreement at sampled points."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    c1, c2 = canonicalize(e1), canonicalize(e2)
    if c1 == c2:
        return True
    agreed = 0
    for i, point in enumerate(sample_points(samples, seed=seed)):
        if agreed == samples or i >= 50 * samples:
            break
        v1, v2 = try_eval(c1, point), try_eval(c2, point)
        if v1 is None and v2 is None:
            continue
        if v1 is None or v2 is None:
            return False
        if not close(v1, v2, rel_tol):
            return False
        agreed += 1
    if agreed == 0:
        raise EmptyCommonDomain(f"no sample point lies in the domain of both {c1} and {c2}")
    return True


@dataclass(frozen=True)
class TangentLine:
    """The line ``y = value + slope * (x - point)``; exact when all three are Fractions."""

    point: Fraction | float
    value: Fraction | float
    slope: Fraction | float

    def __call__(self, x):
        return self.value + self.slope * (x - self.point)

    def __str__(self) -> str:
        return f"y = {fmt_number(self.value)} + {fmt_number(self.slope)}*(x - {fmt_number(self.point)})"


def fmt_number(v) -> str:
    """Shortest faithful text: exact rationals as p/q, integral floats without '.0'."""
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if v.is_integer() and abs(v) < 1e16:
            return str(int(v))
        return repr(v)
    return str(v)
