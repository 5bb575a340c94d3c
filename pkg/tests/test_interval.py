from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twoprimes.errors import ConfigurationError, DomainError
from twoprimes.interval import RealInterval, check_precision, euler_gamma

fractions = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)
positive = st.fractions(min_value=Fraction(1, 10**6), max_value=10**6, max_denominator=10**6)


@given(fractions, fractions)
def test_arithmetic_encloses_exact_result(a, b):
    A, B = RealInterval.exact(a), RealInterval.exact(b)
    assert (A + B).contains(a + b)
    assert (A - B).contains(a - b)
    assert (A * B).contains(a * b)
    if b != 0:
        assert (A / B).contains(a / b)


@given(fractions, st.integers(min_value=0, max_value=7))
def test_integer_power(a, n):
    assert (RealInterval.exact(a) ** n).contains(a**n)


@given(positive)
def test_transcendental_functions_enclose_high_precision_values(x):
    mpmath.mp.dps = 60
    X = RealInterval.exact(x)
    q = mpmath.mpf(x.numerator) / x.denominator
    for iv, ref in ((X.sqrt(), mpmath.sqrt(q)), (X.log(), mpmath.log(q))):
        assert iv.lo <= ref <= iv.hi
    if x < 100:
        e = X.exp()
        assert e.lo <= mpmath.exp(q) <= e.hi


def test_constants_enclose_reference_digits():
    mpmath.mp.dps = 80
    for digits in (20, 30, 60):
        pi = RealInterval.pi(digits)
        assert pi.lo < mpmath.pi < pi.hi
        ln2 = RealInterval.ln2(digits)
        assert ln2.lo < mpmath.log(2) < ln2.hi
    g = euler_gamma(40)
    assert g.lo < mpmath.euler < g.hi


def test_exact_decimal_string_is_tight():
    iv = RealInterval.exact("0.1", 30)
    assert iv.contains("0.1")
    assert not iv.contains("0.1000000000000000000000000001")
    assert iv.relative_width() < 1e-30


def test_decimal_bounds_round_outward():
    iv = RealInterval.exact(Fraction(2, 3), 30)
    assert iv.decimal_bounds(5) == ("0.66666", "0.66667")


def test_abs_of_straddling_interval():
    iv = RealInterval.hull(-1, 2).abs()
    assert iv.lo == 0 and iv.hi == 2


def test_division_by_interval_containing_zero_fails():
    with pytest.raises(DomainError):
        RealInterval.exact(1) / RealInterval.hull(-1, 1)


def test_comparisons_are_certain_only_when_disjoint():
    a = RealInterval.hull(0, 1)
    b = RealInterval.hull(1, 2)
    assert not a.certainly_lt(b)
    assert a.certainly_lt(RealInterval.hull("1.5", 2))
    assert b.certainly_gt("0.5")


def test_precision_floor():
    assert check_precision(15) == 15
    with pytest.raises(ConfigurationError):
        check_precision(10)


def test_log_of_nonpositive_rejected():
    with pytest.raises(ValueError):
        RealInterval.hull(-1, 1).log()
