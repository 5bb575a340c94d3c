import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import is_prime_trial, phi_naive, segmented_prime_count, selberg_riemann, simple_sieve, trial_factor
from twoprimes.errors import DomainError, PreconditionError
from twoprimes.ntcore import (FactorBudget, FactorCache, Factorization, ScaleParams, chebyshev_theta,
                              default_cache, euler_phi, factorize, is_certified_prime, odd_part,
                              primes_between, selberg_integral, sieve_primes, twin_count_Z)


def test_prime_count_to_one_million_matches_segmented_sieve():
    expected = segmented_prime_count(10**6)
    assert expected == 78498
    assert len(sieve_primes(10**6)) == expected


def test_primes_between_is_inclusive():
    assert primes_between(2, 7).tolist() == [2, 3, 5, 7]
    assert primes_between(2.5, 10).tolist() == [3, 5, 7]
    assert primes_between(8, 10).tolist() == []


def test_sieve_matches_simple_sieve():
    assert sieve_primes(5000).tolist() == simple_sieve(5000)


@given(st.integers(min_value=0, max_value=10**6))
def test_primality_agrees_with_trial_division(n):
    assert is_certified_prime(n) == is_prime_trial(n)


@pytest.mark.parametrize("n, expected", [
    (561, False), (2**61 - 1, True), (2**89 - 1, True), (2**67 - 1, False),
    (3317044064679887385961981, False), ((2**64 + 13) * (2**64 + 51), False),
])
def test_primality_of_special_numbers(n, expected):
    assert is_certified_prime(n) is expected


def test_factor_mersenne_49():
    f = factorize(2**49 - 1)
    assert f.factors == ((127, 1), (4432676798593, 1))
    assert f.complete


@given(st.integers(min_value=1, max_value=10**12))
def test_factorization_multiplies_back(n):
    f = factorize(n)
    assert f.complete
    prod = 1
    for p, e in f.factors:
        assert is_certified_prime(p)
        prod *= p**e
    assert prod == n


@given(st.integers(min_value=1, max_value=20000))
def test_factorization_matches_trial_division(n):
    assert dict(factorize(n).factors) == trial_factor(n)


def test_partial_factorization_keeps_bounded_cofactor():
    p, q = 1000003, 1000033
    f = factorize(6 * p * q, FactorBudget(trial_bound=100, rho_iterations=1))
    assert not f.complete
    assert f.cofactor == p * q
    assert f.cofactor_lower_prime_bound == 100
    assert dict(f.factors) == {2: 1, 3: 1}
    with pytest.raises(PreconditionError):
        euler_phi(f)


def test_factorization_line_round_trip():
    f = Factorization(600, ((2, 3), (3, 1)), 25, 5)
    assert Factorization.from_line(f.to_line()) == f
    g = factorize(2**32 - 1)
    assert Factorization.from_line(g.to_line()) == g


def test_factorization_rejects_inconsistent_factors():
    with pytest.raises(ValueError):
        Factorization(12, ((2, 1), (3, 1)))


def test_cache_persists_by_appending(tmp_path):
    path = tmp_path / "cache.txt"
    cache = FactorCache(path)
    f = factorize(123456789, cache=cache)
    assert path.read_text().strip() == f.to_line()
    reloaded = FactorCache(path)
    assert reloaded.get(123456789) == f


def test_default_cache_covers_small_mersenne_numbers():
    cache = default_cache()
    for d in range(1, 65):
        f = cache.get(2**d - 1)
        assert f is not None and f.complete


@pytest.mark.parametrize("n", range(1, 200))
def test_euler_phi_against_gcd_count(n):
    assert euler_phi(factorize(n)) == phi_naive(n)


@given(st.integers(min_value=1, max_value=10**9))
def test_odd_part(n):
    m = odd_part(n)
    assert m % 2 == 1 and n % m == 0 and (n // m) & (n // m - 1) == 0


@given(st.floats(min_value=200, max_value=1e9), st.floats(min_value=0.01, max_value=0.9),
       st.floats(min_value=0.1, max_value=5))
def test_scale_L_is_floor_log2(X, eps, M):
    assume(eps * X >= 2)
    params = ScaleParams(X, eps, M)
    L = params.L
    ratio = eps * X / (2 * M)
    if ratio < 1:
        assert L == 0
    else:
        assert 2**L <= ratio < 2 ** (L + 1)


def test_scale_params_validation():
    with pytest.raises(DomainError):
        ScaleParams(100, 1.5)
    with pytest.raises(DomainError):
        ScaleParams(10, 0.1)
    assert ScaleParams(1e6, 0.1).prime_range == (1e5, 1e6)


def test_theta_matches_direct_sum():
    ps = simple_sieve(10000)
    assert chebyshev_theta(10000) == pytest.approx(sum(math.log(p) for p in ps), rel=1e-13)
    assert chebyshev_theta(10000, 1000) == pytest.approx(sum(math.log(p) for p in ps if p >= 1000), rel=1e-13)
    assert chebyshev_theta(1.5) == 0.0


def test_twin_count_matches_loop():
    X, eps, n = 5000, 0.1, 3
    ps = set(simple_sieve(X))
    pairs = [(p, p + 2 * n) for p in ps if p >= eps * X and p + 2 * n <= X and p + 2 * n in ps]
    params = ScaleParams(X, eps)
    assert twin_count_Z(params, n, weighted=False) == len(pairs)
    assert twin_count_Z(params, n) == pytest.approx(sum(math.log(a) * math.log(b) for a, b in pairs), rel=1e-12)
    with pytest.raises(DomainError):
        twin_count_Z(params, 10**4)


@pytest.mark.parametrize("X, h, eps", [(100, 1, 0.1), (100, 2.5, 0.5), (1000, 10, 0.25)])
def test_selberg_integral_matches_riemann_sum(X, h, eps):
    ref = selberg_riemann(X, h, eps, dx=1 / 200)
    assert selberg_integral(X, h, eps) == pytest.approx(ref, rel=1e-9)


def test_selberg_integral_is_nonnegative_and_validates():
    assert selberg_integral(50, 3, 0.2) >= 0
    with pytest.raises(DomainError):
        selberg_integral(50, -1, 0.2)
