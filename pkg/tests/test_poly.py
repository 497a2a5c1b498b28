import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from tangent_rule.errors import NotPolynomial
from tangent_rule.parser import parse
from tangent_rule.poly import (
    Polynomial,
    deflate,
    derivative_poly,
    is_polynomial,
    is_tangent,
    poly_from_expr,
    tangent_slope,
)

P = Polynomial.of


# --- independent oracle: schoolbook division on plain lists, highest degree first


def _naive_divides_by_square(coeffs_low_first, a, k):
    """Does (x - a)^2 divide p(x) - p(a) - k(x - a)?  Computed without the package."""
    c = list(coeffs_low_first)
    pa = sum(ci * a**i for i, ci in enumerate(c))
    c[0] -= pa - k * a
    if len(c) < 2:
        c.append(F(0))
    c[1] -= k
    num = c[::-1]
    div = [F(1), -2 * a, a * a]
    while len(num) >= 3:
        lead = num[0]
        for j in range(3):
            num[j] -= lead * div[j]
        num.pop(0)
    return all(v == 0 for v in num)


def _random_poly(rng, max_deg=12, bound=100):
    deg = rng.randint(0, max_deg)
    return Polynomial(tuple(F(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(deg + 1)))


def _random_point(rng, bound=100):
    return F(rng.randint(-bound, bound), rng.randint(1, bound))


@pytest.fixture(scope="module")
def poly_cases():
    rng = random.Random(20260416)
    return [(_random_poly(rng), _random_point(rng)) for _ in range(1000)]


rationals = st.fractions(min_value=-100, max_value=100, max_denominator=100)
polys = st.lists(rationals, min_size=1, max_size=13).map(lambda cs: Polynomial(tuple(cs)))


class TestPolynomial:
    def test_trim_and_zero(self):
        assert P(1, 2, 0, 0).coeffs == (1, 2)
        assert P(0, 0).coeffs == (0,)
        assert P(0).degree is None and P(3).degree == 0

    def test_from_expr(self):
        assert poly_from_expr(parse("x^3 - 2*x + 1")).coeffs == (1, -2, 0, 1)
        assert poly_from_expr(parse("(x+1)^2")).coeffs == (1, 2, 1)

    def test_not_polynomial(self):
        with pytest.raises(NotPolynomial) as info:
            poly_from_expr(parse("sin(x)"))
        assert "Sin" in str(info.value)
        assert not is_polynomial(parse("x^(1/2)"))
        assert not is_polynomial(parse("1/x"))

    def test_divmod(self):
        q, r = P(-4, 0, 1).divmod(P(-2, 1))
        assert q == P(2, 1) and r.is_zero
        q, r = P(1, 0, 1).divmod(P(0, 1))
        assert q == P(0, 1) and r == P(1)

    def test_to_expr_round_trip(self, poly_cases):
        for p, _ in poly_cases[:100]:
            assert poly_from_expr(p.to_expr()) == p


class TestDeflate:
    def test_cubic(self):
        assert deflate(P(1, -2, 0, 1), 2) == P(2, 2, 1)

    def test_constant(self):
        assert deflate(P(7), F(3, 4)) == P(0)

    def test_identity(self):
        assert deflate(P(0, 1), 7) == P(1)

    def test_degree_drops_by_one(self, poly_cases):
        for p, a in poly_cases:
            q = deflate(p, a)
            if p.degree and p.degree >= 1:
                assert q.degree == p.degree - 1

    def test_deflation_identity(self, poly_cases):
        for p, a in poly_cases:
            rebuilt = P(-a, 1) * deflate(p, a) + P(p(a))
            assert rebuilt == p


class TestTangentSlope:
    def test_examples(self):
        assert tangent_slope(P(1, -2, 0, 1), 2) == 10
        assert tangent_slope(P(0, 0, 0, 1), 2) == 12
        assert tangent_slope(P(5), 9) == 0

    def test_cubic_long_division_oracle(self):
        # p(x) - 5 - 10(x - 2) = x^3 - 12x + 16 = (x - 2)^2 (x + 4)
        gap = P(1, -2, 0, 1) - P(5 - 10 * 2, 10)
        q, r = gap.divmod(P(-2, 1) ** 2)
        assert q == P(4, 1) and r.is_zero
        assert _naive_divides_by_square([F(1), F(-2), F(0), F(1)], F(2), F(10))

    def test_matches_naive_oracle(self, poly_cases):
        for p, a in poly_cases[:300]:
            k = tangent_slope(p, a)
            assert _naive_divides_by_square(p.coeffs, a, k)
            assert not _naive_divides_by_square(p.coeffs, a, k + 1)


class TestIsTangent:
    def test_examples(self):
        assert is_tangent(P(0, 0, 1), 1, 2)
        assert not is_tangent(P(0, 0, 1), 1, 3)
        assert is_tangent(P(1, -2, 0, 1), 2, 10)

    def test_uniqueness(self, poly_cases):
        for p, a in poly_cases:
            k = tangent_slope(p, a)
            assert is_tangent(p, a, k)
            assert not is_tangent(p, a, k + 1)
            assert not is_tangent(p, a, k - F(1, 3))

    @given(polys, rationals, rationals)
    def test_agrees_with_naive_oracle(self, p, a, k):
        assert is_tangent(p, a, k) == _naive_divides_by_square(p.coeffs, a, k)


class TestDerivativePoly:
    def test_examples(self):
        assert derivative_poly(P(0, 0, 1)) == P(0, 2)
        assert derivative_poly(P(9)).is_zero
        d = derivative_poly(P(1, -2, 0, 1))
        assert d == P(-2, 0, 3) and d(2) == 10 == tangent_slope(P(1, -2, 0, 1), 2)

    def test_agreement_with_criterion(self, poly_cases):
        for p, a in poly_cases:
            assert derivative_poly(p)(a) == tangent_slope(p, a)

    @given(polys, polys, rationals, rationals, rationals)
    def test_linearity(self, p, r, alpha, beta, a):
        lhs = tangent_slope(p * alpha + r * beta, a)
        assert lhs == alpha * tangent_slope(p, a) + beta * tangent_slope(r, a)
