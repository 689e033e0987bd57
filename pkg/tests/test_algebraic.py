import random
from fractions import Fraction

import pytest
import sympy

from coxlab.algebraic import (DEFAULT_N_CAP, SIGN_STATS, AlgebraicReal,
                              FieldSpec, field_for, minpoly_two_cos)
from coxlab.errors import BudgetError, FieldError
from coxlab.matrices import INFINITY, CoxeterMatrix


def test_field_for_examples():
    assert field_for(CoxeterMatrix.triangle(2, 3, INFINITY)).N == 6
    assert field_for(CoxeterMatrix([[1, 2, 2], [2, 1, 2], [2, 2, 1]])).N == 2
    assert field_for(CoxeterMatrix.triangle(2, 5, 5)).N == 10
    assert field_for(CoxeterMatrix([[1]])).N == 2


def test_field_cap():
    with pytest.raises(BudgetError):
        field_for(CoxeterMatrix.triangle(7, 11, 13), n_cap=100)


def test_minpoly_matches_sympy():
    x = sympy.Symbol("x")
    for m in range(2, 13):
        ours = minpoly_two_cos(m)
        theirs = sympy.minimal_polynomial(2 * sympy.cos(sympy.pi / m), x)
        coeffs = list(reversed(theirs.as_poly(x).all_coeffs()))
        assert ours == [int(c) for c in coeffs], f"m={m}"


def test_degree_is_half_totient():
    for n in (2, 3, 4, 5, 6, 7, 10, 12, 30, 42):
        f = FieldSpec(n)
        assert f.degree == max(1, int(sympy.totient(2 * n)) // 2)


def test_isolating_interval_brackets_generator():
    for n in (4, 5, 6, 7, 12, 30):
        f = FieldSpec(n)
        lo, hi = f.isolating_interval
        assert lo < hi
        import math
        c = 2 * math.cos(math.pi / n)
        assert float(lo) < c < float(hi)


def test_cos_values():
    f = FieldSpec(6)
    assert f.cos_pi_over(2) == 0
    assert f.cos_pi_over(3) == Fraction(1, 2)
    assert f.cos_pi_over(6) * 2 == f.generator()
    with pytest.raises(FieldError):
        f.cos_pi_over(4)


def test_sign_golden_ratio():
    # 2cos(pi/5) is the golden ratio, just above 1
    f = FieldSpec(5)
    assert (f.generator() - 1).sign() == 1
    assert (f.generator() - 2).sign() == -1


def test_chebyshev_identity():
    # 2cos(m * pi/m) = -2, so applying the angle-multiplication
    # recurrence m times to the generator must land exactly on -2
    for m in range(2, 13):
        f = FieldSpec(m)
        assert f.two_cos_pi_over_raw(1) == f.raw_from_int(-2)


def test_exact_zero_and_ring_axioms():
    f = FieldSpec(10)
    rng = random.Random(7)

    def rand_elem():
        return f.element([Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                          for _ in range(f.degree)])

    for _ in range(50):
        x, y, z = rand_elem(), rand_elem(), rand_elem()
        assert (x - x).is_zero()
        assert (x + y) - y == x
        assert x * (y + z) == x * y + x * z
        assert x * y == y * x


def test_sign_respects_arithmetic():
    # multiplicativity is exact; sums are cross-checked against
    # high-precision evaluation on a subsample
    f = FieldSpec(12)
    rng = random.Random(11)
    c = 2 * sympy.cos(sympy.pi / 12)

    def rand_elem():
        return f.element([rng.randint(-6, 6) for _ in range(f.degree)])

    pairs = [(rand_elem(), rand_elem()) for _ in range(1000)]
    for x, y in pairs:
        assert (x * y).sign() == x.sign() * y.sign()
    for x, y in pairs[:150]:
        s = x + y
        expr = sum(sympy.Rational(q) * c ** i
                   for i, q in enumerate(s.coeffs))
        val = expr.evalf(60)
        if abs(val) > 1e-40:
            assert s.sign() == (1 if val > 0 else -1)
        else:
            assert s.sign() == 0


def test_comparisons():
    f = FieldSpec(5)
    g = f.generator()  # golden ratio, about 1.618
    assert f.rational(Fraction(3, 2)) < g < f.rational(Fraction(17, 10))
    assert g * g == g + 1  # defining identity of the golden ratio


def test_stats_counter_counts_and_never_falls_back():
    SIGN_STATS.reset()
    f = FieldSpec(7)
    (f.generator() - 1).sign()
    (f.generator() * f.generator() - 2).sign()
    assert SIGN_STATS.decisions == 2
    assert SIGN_STATS.float_fallbacks == 0


def test_degree_one_field_is_rational():
    f = FieldSpec(2)
    assert f.degree == 1
    assert f.generator() == 0
    assert (f.rational(Fraction(-3, 7))).sign() == -1
