"""Built-in expression corpus and deterministic random expression generation."""

from __future__ import annotations

import random
from fractions import Fraction

from . import expr as ex
from .errors import DivisionByZeroConst
from .parser import parse

# one entry per elementary function of the derivative table
BASE_FUNCTIONS = (
    "x^(1/2)",
    "x^(3/5)",
    "exp(x)",
    "2^x",
    "ln(x)",
    "log(2, x)",
    "sin(x)",
    "cos(x)",
    "tan(x)",
    "cot(x)",
    "asin(x)",
    "acos(x)",
    "atan(x)",
    "acot(x)",
    "abs(x)",
)

# Frozen output of scripts/make_corpus.py (seed 20260416): random compositions of
# depth <= 4 with 20 in-domain points in [-4, 4] at which the difference oracle
# is self-consistent.
COMPOSITIONS: tuple[str, ...] = (
    'cos(-x)',
    'cot(atan(log(1/2, x)))',
    'asin(acot((-4/3)*x))',
    'asin(tan(tan(x)))',
    'cos(sin(-1/2 + x))',
    'atan(4/3 + x)^(2/3)',
    'atan(abs(x))',
    'x + x + 2/x + e/x + acot(x)',
    '-32*acos(x)',
    '2 + cos(1 + x) + atan(x^2)',
    'cos(tan(acot(x)))',
    'acos(ln(x))/exp(x)',
    '-x - x + abs(x)',
    '-2*cos(x)',
    'log(1/2, acot(ln(x)))',
    '((-4/3)*tan(x))^(3/5)',
    'sin(ln(x^(2/3)))',
    'ln((-4/3)*e*x)',
    'log(1/2, -e/x)',
    '-2 + pi + (e^(3/5))^(-1) + asin(x)',
    'acot(asin(-x))',
    'x*cos(ln(x))*abs(atan(x))',
    '(acos(-1)*atan(pi)*atan(x))^(-1)',
    'atan(e^(-1))/x',
    'cot(asin(cot(x)))',
)

CORPUS = BASE_FUNCTIONS + COMPOSITIONS


def corpus_exprs() -> list[ex.Expr]:
    return [parse(s) for s in CORPUS]


_SMALL_RATIONALS = [Fraction(n, d) for n in range(-4, 5) for d in (1, 2, 3) if n != 0]
_EXPONENTS = [Fraction(n, d) for n in range(-3, 4) for d in (1, 2, 3, 5) if n != 0]
_LOG_BASES = [Fraction(2), Fraction(10), Fraction(1, 2), Fraction(3)]


def _leaf(rng: random.Random) -> ex.Expr:
    r = rng.random()
    if r < 0.55:
        return ex.X
    if r < 0.85:
        return ex.ConstRat(rng.choice(_SMALL_RATIONALS))
    return ex.E if r < 0.93 else ex.PI


def random_raw(rng: random.Random, max_depth: int, unary_weight: float = 1.0) -> ex.Expr:
    """A random, not yet canonical tree of depth at most ``max_depth``."""
    if max_depth <= 1 or rng.random() < 0.2:
        return _leaf(rng)
    sub = max_depth - 1
    kinds = ["add", "mul", "neg", "div", "pow", "log", "unary"]
    weights = [2, 2, 1, 1, 1.5, 0.3, 3 * unary_weight]
    kind = rng.choices(kinds, weights)[0]
    if kind in ("add", "mul"):
        kids = tuple(random_raw(rng, sub, unary_weight) for _ in range(rng.choice((2, 2, 3))))
        return ex.Add(kids) if kind == "add" else ex.Mul(kids)
    if kind == "neg":
        return ex.Neg(random_raw(rng, sub, unary_weight))
    if kind == "div":
        return ex.Div(random_raw(rng, sub, unary_weight), random_raw(rng, sub, unary_weight))
    if kind == "pow":
        return ex.PowRat(random_raw(rng, sub, unary_weight), rng.choice(_EXPONENTS))
    if kind == "log":
        return ex.LogBase(rng.choice(_LOG_BASES), random_raw(rng, sub, unary_weight))
    cls = rng.choice(ex.UNARY_TYPES)
    return cls(random_raw(rng, sub, unary_weight))


def random_expr(rng: random.Random, max_depth: int = 8, unary_weight: float = 1.0) -> ex.Expr:
    """A random canonical expression; retries when constant folding divides by zero."""
    while True:
        try:
            return ex.canonicalize(random_raw(rng, max_depth, unary_weight))
        except DivisionByZeroConst:
            continue


def random_corpus(count: int, seed: int, max_depth: int = 8) -> list[ex.Expr]:
    rng = random.Random(seed)
    return [random_expr(rng, max_depth) for _ in range(count)]
