"""Exact dense polynomials over the rationals and the double-root tangency test.

A line ``y = p(a) + k (x - a)`` is tangent to ``p`` at ``a`` exactly when
``(x - a)^2`` divides ``p(x) - p(a) - k (x - a)``.  Dividing ``p(x) - p(a)``
once by ``(x - a)`` (:func:`deflate`) leaves a quotient ``q``; the divisibility
condition is then ``q(a) = k``, which is what :func:`tangent_slope` returns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import expr as ex
from .errors import NotPolynomial


def _trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    out = list(coeffs)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out) if out else (Fraction(0),)


@dataclass(frozen=True)
class Polynomial:
    """Coefficients in ascending degree order; the zero polynomial is ``(0,)``."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim([ex.as_fraction(c) for c in self.coeffs]))

    @classmethod
    def of(cls, *coeffs) -> Polynomial:
        return cls(tuple(coeffs))

    @classmethod
    def monomial(cls, n: int, c=1) -> Polynomial:
        return cls((0,) * n + (c,))

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    @property
    def degree(self) -> int | None:
        """Degree, or ``None`` for the zero polynomial."""
        return None if self.is_zero else len(self.coeffs) - 1

    def __call__(self, a) -> Fraction:
        a = ex.as_fraction(a)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * a + c
        return acc

    def __add__(self, other: Polynomial) -> Polynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Polynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> Polynomial:
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            c = ex.as_fraction(other)
            return Polynomial(tuple(c * a for a in self.coeffs))
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        out = Polynomial.of(1)
        for _ in range(n):
            out = out * self
        return out

    def divmod(self, divisor: Polynomial) -> tuple[Polynomial, Polynomial]:
        """Long division: returns (quotient, remainder) with deg remainder < deg divisor."""
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dn = len(divisor.coeffs) - 1
        lead = divisor.coeffs[-1]
        if len(rem) - 1 < dn:
            return Polynomial.of(0), self
        quot = [Fraction(0)] * (len(rem) - dn)
        for i in range(len(rem) - 1 - dn, -1, -1):
            c = rem[i + dn] / lead
            quot[i] = c
            for j, d in enumerate(divisor.coeffs):
                rem[i + j] -= c * d
        return Polynomial(tuple(quot)), Polynomial(tuple(rem[:dn]) or (0,))

    def to_expr(self) -> ex.Expr:
        terms = [ex.mul(ex.ConstRat(c), ex.power(ex.X, n)) for n, c in enumerate(self.coeffs) if c != 0]
        return ex.add(*terms)

    def __str__(self) -> str:
        return str(self.to_expr())


def poly_from_expr(e: ex.Expr) -> Polynomial:
    """Expand ``e`` exactly; raises :class:`NotPolynomial` on the first foreign node."""
    if isinstance(e, ex.ConstRat):
        return Polynomial.of(e.value)
    if isinstance(e, ex.Var):
        return Polynomial.of(0, 1)
    if isinstance(e, ex.Add):
        out = Polynomial.of(0)
        for t in e.terms:
            out = out + poly_from_expr(t)
        return out
    if isinstance(e, ex.Mul):
        out = Polynomial.of(1)
        for f in e.factors:
            out = out * poly_from_expr(f)
        return out
    if isinstance(e, ex.Neg):
        return -poly_from_expr(e.arg)
    if isinstance(e, ex.PowRat) and e.exponent.denominator == 1 and e.exponent >= 0:
        return poly_from_expr(e.base) ** int(e.exponent)
    raise NotPolynomial(e)


def is_polynomial(e: ex.Expr) -> bool:
    try:
        poly_from_expr(e)
    except NotPolynomial:
        return False
    return True


def deflate(p: Polynomial, a) -> Polynomial:
    """Synthetic division: the q with p(x) - p(a) = (x - a) q(x)."""
    a = ex.as_fraction(a)
    if len(p.coeffs) == 1:
        return Polynomial.of(0)
    # Horner pass from the top coefficient; the final carry would be p(a)
    q = [Fraction(0)] * (len(p.coeffs) - 1)
    carry = Fraction(0)
    for i in range(len(p.coeffs) - 1, 0, -1):
        carry = carry * a + p.coeffs[i]
        q[i - 1] = carry
    return Polynomial(tuple(q))


def tangent_slope(p: Polynomial, a) -> Fraction:
    return deflate(p, a)(a)


def is_tangent(p: Polynomial, a, k) -> bool:
    a, k = ex.as_fraction(a), ex.as_fraction(k)
    line_gap = p - Polynomial.of(p(a) - k * a, k)
    _, rem = line_gap.divmod(Polynomial.of(-a, 1) ** 2)
    return rem.is_zero


def derivative_poly(p: Polynomial) -> Polynomial:
    return Polynomial(tuple(n * c for n, c in enumerate(p.coeffs))[1:] or (0,))
