import math

import numpy as np
import pytest
from scipy import integrate

from twoprimes.errors import DomainError, ResourceError
from twoprimes.majorarc import (Integrand, adaptive_oscillatory, integrate_i, j_lower_bound, j_side_conditions,
                                major_arc_j, major_arc_j_quad)
from twoprimes.ntcore import ScaleParams, chebyshev_theta


def draws(n, seed=20240101):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        X = float(rng.uniform(50, 2000))
        eps = float(rng.uniform(0.05, 0.3))
        l1 = float(rng.uniform(1.05, 3.0))
        l2 = -float(rng.uniform(1.05, 3.0))
        eta = float(rng.uniform(0.1, 2.0))
        u = float(rng.uniform(-eps * X, eps * X))
        yield u, X, eta, l1, l2, eps


@pytest.mark.parametrize("u, X, eta, l1, l2, eps", list(draws(20)))
def test_exact_j_matches_nested_quadrature(u, X, eta, l1, l2, eps):
    exact = major_arc_j(u, X, eta, l1, l2, eps)
    ref = major_arc_j_quad(u, X, eta, l1, l2, eps)
    assert exact == pytest.approx(ref, rel=1e-8, abs=1e-12)
    if j_side_conditions(u, X, eta, l1, l2, eps):
        assert exact >= j_lower_bound(X, eta, l1, l2, eps)


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_exact_j_matches_dblquad_on_small_box():
    u, X, eta, l1, l2, eps = 0.3, 20.0, 0.8, 1.5, -1.2, 0.2
    val, _ = integrate.dblquad(lambda y, x: max(0.0, eta - abs(l1 * x + l2 * y + u)),
                               eps * X, X, eps * X, X, epsabs=1e-10, epsrel=1e-10)
    assert major_arc_j(u, X, eta, l1, l2, eps) == pytest.approx(val, rel=1e-6)


def test_j_vanishes_when_strip_misses_box():
    # l1 u1 + l2 u2 ranges over [l1 eps X + l2 X, l1 X + l2 eps X]; shift u far beyond it
    assert major_arc_j(10**6, 100.0, 1.0, 2.0, -1.5, 0.1) == 0.0
    assert major_arc_j(0.0, 100.0, 0.0, 2.0, -1.5, 0.1) == 0.0
    with pytest.raises(DomainError):
        major_arc_j(0.0, 100.0, 1.0, 0.0, -1.5, 0.1)


def test_side_conditions():
    assert j_side_conditions(0.0, 1000, 1.0, 1.5, -1.2, 0.1)
    assert not j_side_conditions(0.0, 1000, 1.0, 0.9, -1.2, 0.1)
    assert not j_side_conditions(500.0, 1000, 1.0, 1.5, -1.2, 0.1)


REF = dict(lambda1=math.sqrt(3), lambda2=-math.sqrt(2), mus=[math.sqrt(3) / 3, -math.sqrt(2) / 2],
           eta=0.5, X=200, eps=0.2)


def test_integrand_at_zero():
    params = ScaleParams(200, 0.2, 1.2845)
    f = Integrand(REF["lambda1"], REF["lambda2"], tuple(REF["mus"]), 0.0, 0.5, params, 3)
    theta = chebyshev_theta(200, 40)
    assert f.value_at_zero() == pytest.approx(theta**2 * 9 * 0.25)
    assert f(np.array([0.0]))[0] == pytest.approx(f.value_at_zero())


@pytest.mark.parametrize("region", ["major", "minor"])
def test_conjugate_symmetry_without_shift(region):
    pos = integrate_i(region, gamma=0.0, side="pos", **REF)
    neg = integrate_i(region, gamma=0.0, side="neg", **REF)
    assert pos["value"][0] == pytest.approx(neg["value"][0], rel=1e-8)
    assert pos["value"][1] == pytest.approx(-neg["value"][1], rel=1e-8)
    both = integrate_i(region, gamma=0.0, **REF)
    assert abs(both["value"][1]) < 1e-8 * abs(both["value"][0])


def test_major_arc_integral_against_riemann_sum():
    r = integrate_i("major", gamma=0.0, **REF)
    a, b = r["pieces"][0][0], r["pieces"][-1][1]
    params = ScaleParams(200, 0.2, sum(abs(m) for m in REF["mus"]))
    f = Integrand(REF["lambda1"], REF["lambda2"], tuple(REF["mus"]), 0.0, 0.5, params, r["L"])
    x = np.linspace(a, b, 20001)
    y = f(x)
    trap = float(np.real(np.sum((y[1:] + y[:-1]) / 2) * (x[1] - x[0])))
    assert r["value"][0] == pytest.approx(trap, rel=1e-6)


def test_trivial_region_reports_truncation_bound():
    r = integrate_i("trivial", gamma=0.0, side="pos", truncation=12.0, **REF)
    theta = chebyshev_theta(200, 40)
    assert r["truncation_bound"] == pytest.approx(0.5 * 2 * theta**2 * r["L"] ** 2 / (math.pi**2 * 12))


def test_integrate_validation():
    with pytest.raises(ResourceError):
        integrate_i("major", REF["lambda1"], REF["lambda2"], REF["mus"], 0.0, 0.5, 2e4, 0.2)
    with pytest.raises(DomainError):
        integrate_i("elsewhere", gamma=0.0, **REF)
    with pytest.raises(DomainError):
        integrate_i("major", REF["lambda1"], REF["lambda2"], REF["mus"], 0.0, 0.5, 200, 0.2, s=5)


def test_adaptive_rule_on_known_integral():
    val, err = adaptive_oscillatory(lambda x: np.exp(2j * np.pi * 7.5 * x), 0.0, 1.0, 7.5, 1e-12)
    exact = (np.exp(2j * np.pi * 7.5) - 1) / (2j * np.pi * 7.5)
    assert abs(val - exact) < 1e-12
