from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcnindex.algnum import AlgReal, approx, arith, four_cos_sq, minimal_polynomial, parse_value, sqrt_small

CONDUCTORS = [3, 4, 5, 7, 8, 10, 12, 15, 20, 24, 30]


def _real(a: AlgReal) -> mpmath.mpf:
    beta = 2 * mpmath.cos(mpmath.pi / a.conductor)
    return sum(mpmath.mpf(c.numerator) / c.denominator * beta**i for i, c in enumerate(a.coeffs))


@st.composite
def algreals(draw, conductor=None):
    n = conductor or draw(st.sampled_from(CONDUCTORS))
    coeffs = draw(st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=5), min_size=1, max_size=4))
    return AlgReal(n, coeffs)


def test_four_cos_sq_small_values():
    assert four_cos_sq(3) == 1
    assert four_cos_sq(6) == 3
    assert four_cos_sq(4) == 2
    with pytest.raises(ValueError):
        four_cos_sq(2)


def test_four_cos_sq_10_is_golden_root():
    # root of x^2 - 5x + 5 near 3.618
    x = four_cos_sq(10)
    assert x * x - 5 * x + 5 == 0
    assert (5 + sqrt_small(5)) / 2 == x
    lo, hi = approx(x, Fraction(1, 10**6))
    assert lo <= Fraction(3618034, 10**6) + Fraction(1, 10**6) and hi >= Fraction(3618033, 10**6)
    assert hi - lo <= Fraction(1, 10**6)


def test_golden_ratio_relation():
    phi = (1 + sqrt_small(5)) / 2
    assert phi * phi == phi + 1
    # 4cos^2(pi/10) - 2 = 2cos(pi/5) is the golden ratio in conductor 10
    assert four_cos_sq(10) - 2 == phi


def test_sqrt3_from_conductor_12():
    assert arith(four_cos_sq(12), AlgReal.rational(2), "sub") == sqrt_small(3)


def test_approx_contains_oracles():
    mpmath.mp.dps = 40
    for n in (5, 7, 10, 11, 12, 30):
        v = four_cos_sq(n)
        lo, hi = approx(v, Fraction(1, 10**9))
        truth = 4 * mpmath.cos(mpmath.pi / n) ** 2
        assert mpmath.mpf(lo.numerator) / lo.denominator <= truth <= mpmath.mpf(hi.numerator) / hi.denominator
    val = parse_value("3+sqrt3")
    lo, hi = approx(val, Fraction(1, 10**6))
    assert lo <= Fraction(4732051, 10**6) <= hi + Fraction(1, 10**6)
    assert approx(AlgReal.rational(3), Fraction(1, 10**9)) == (3, 3)


def test_decimal_is_correctly_rounded():
    assert four_cos_sq(10).decimal(12) == "3.618033988750"
    assert parse_value("3+sqrt(3)").decimal(12) == "4.732050807569"


def test_minimal_polynomial_degree():
    # degree of 2cos(pi/N) is phi(2N)/2
    from math import gcd

    for n in range(3, 40):
        totient = sum(1 for k in range(1, 2 * n + 1) if gcd(k, 2 * n) == 1)
        assert len(minimal_polynomial(n)) - 1 == totient // 2


@settings(max_examples=60, deadline=None)
@given(algreals(), algreals(), algreals())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == 0
    if not b.is_zero():
        assert (a / b) * b == a


@settings(max_examples=60, deadline=None)
@given(algreals(), algreals())
def test_trichotomy_matches_50_digits(a, b):
    with mpmath.workdps(50):
        diff = _real(a) - _real(b)
    rel = [a < b, a == b, a > b]
    assert sum(rel) == 1
    if abs(diff) > mpmath.mpf(10) ** -40:
        assert rel[2] == (diff > 0)
    else:
        assert rel[1]


def test_four_cos_sq_increasing_below_4():
    prev = four_cos_sq(3)
    for n in range(4, 101):
        cur = four_cos_sq(n)
        assert prev < cur < 4
        prev = cur


def test_json_round_trip():
    v = four_cos_sq(30)
    assert AlgReal.from_json(v.to_json()) == v


def test_parse_value_rejects_garbage():
    with pytest.raises(ValueError):
        parse_value("3+x")
