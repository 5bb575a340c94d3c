"""The major-arc integral J(u) and quadrature of the full integrand I(X; region)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, NumericToleranceError, ResourceError
from .expsums import TWO_PI, dissect, fejer_k, g_sum, s_sum
from .ntcore import ScaleParams, chebyshev_theta


# ------------------------------------------------------------------ J(u)
def _overlap(z, a_lo, a_hi, b_lo, b_hi):
    """Length of {x in [a_lo, a_hi] : z - x in [b_lo, b_hi]}."""
    return np.maximum(0.0, np.minimum(a_hi, z - b_lo) - np.maximum(a_lo, z - b_hi))


def major_arc_j(u: float, X: float, eta: float, lambda1: float, lambda2: float, eps: float) -> float:
    """J(u) = double integral over [eps X, X]^2 of max(0, eta - |l1 u1 + l2 u2 + u|).

    With x = l1 u1 and y = l2 u2 the integral becomes
    (1/|l1 l2|) int k(w) h(w - u) dw, where k is the triangle of half-width
    eta and h the trapezoidal overlap length of the two image intervals.
    Both factors are piecewise linear, so Simpson's rule on the pieces
    between their joint breakpoints is exact.
    """
    if eta <= 0:
        return 0.0
    if lambda1 == 0 or lambda2 == 0:
        raise DomainError("lambda1 and lambda2 must be nonzero")
    lo, hi = eps * X, float(X)
    a = sorted((lambda1 * lo, lambda1 * hi))
    b = sorted((lambda2 * lo, lambda2 * hi))
    corners = [u + a[0] + b[0], u + a[0] + b[1], u + a[1] + b[0], u + a[1] + b[1]]
    knots = sorted({-eta, 0.0, eta, *[c for c in corners if -eta < c < eta]})
    knots = np.array(knots)
    left, right = knots[:-1], knots[1:]
    mid = 0.5 * (left + right)

    def f(w):
        return np.maximum(0.0, eta - np.abs(w)) * _overlap(w - u, a[0], a[1], b[0], b[1])

    simpson = (right - left) / 6.0 * (f(left) + 4.0 * f(mid) + f(right))
    return float(np.sum(simpson) / abs(lambda1 * lambda2))


def major_arc_j_quad(u: float, X: float, eta: float, lambda1: float, lambda2: float, eps: float,
                     epsrel: float = 1e-12) -> float:
    """Independent evaluation of J(u) by nested adaptive quadrature in (u1, u2)."""
    lo, hi = eps * X, float(X)

    def inner(u2):
        c = lambda2 * u2 + u
        # kinks where l1 u1 + c = -eta, 0, eta
        pts = [p for p in ((-eta - c) / lambda1, -c / lambda1, (eta - c) / lambda1) if lo < p < hi]
        span = sorted([(-eta - c) / lambda1, (eta - c) / lambda1])
        a, b = max(lo, span[0]), min(hi, span[1])
        if a >= b:
            return 0.0
        pts = [p for p in pts if a < p < b]
        val, _ = integrate.quad(lambda u1: max(0.0, eta - abs(lambda1 * u1 + c)), a, b,
                                points=pts or None, epsabs=0.0, epsrel=epsrel, limit=200)
        return val

    # outer kinks: where the strip edges meet the u1 = lo, hi sides
    outer = []
    for edge in (lo, hi):
        for shift in (-eta, 0.0, eta):
            p = (shift - lambda1 * edge - u) / lambda2
            if lo < p < hi:
                outer.append(p)
    val, _ = integrate.quad(inner, lo, hi, points=sorted(outer) or None,
                            epsabs=0.0, epsrel=epsrel, limit=400)
    return float(val)


def j_lower_bound(X: float, eta: float, lambda1: float, lambda2: float, eps: float) -> float:
    """(1 - 3 l1 eps) / (2 |l1 l2|) eta^2 X."""
    return (1 - 3 * lambda1 * eps) / (2 * abs(lambda1 * lambda2)) * eta**2 * X


def j_side_conditions(u: float, X: float, eta: float, lambda1: float, lambda2: float, eps: float) -> bool:
    """Hypotheses under which the lower bound for J(u) holds at this finite X."""
    return (lambda1 > 1 and lambda2 < -1 and abs(lambda1 / lambda2) >= 1
            and abs(u) <= eps * X and 0 < eta < 2 * eps * (lambda1 - 1) * X
            and 1 - 3 * lambda1 * eps > 0)


# ------------------------------------------------------------ I(X; region)
@dataclass(frozen=True)
class Integrand:
    lambda1: float
    lambda2: float
    mus: tuple
    gamma: float
    eta: float
    params: ScaleParams
    L: int

    def __call__(self, alpha: np.ndarray) -> np.ndarray:
        a = np.asarray(alpha, dtype=np.float64)
        val = s_sum(self.lambda1 * a, self.params) * s_sum(self.lambda2 * a, self.params)
        for mu in self.mus:
            val = val * g_sum(mu * a, self.L)
        return val * np.exp(1j * TWO_PI * self.gamma * a) * fejer_k(a, self.eta)

    def max_frequency(self) -> float:
        X = self.params.X
        return ((abs(self.lambda1) + abs(self.lambda2)) * X
                + sum(abs(m) for m in self.mus) * 2**self.L + abs(self.gamma) + self.eta)

    def value_at_zero(self) -> float:
        theta = chebyshev_theta(self.params.X, self.params.epsilon * self.params.X)
        return theta**2 * self.L ** len(self.mus) * self.eta**2


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _panel_rule(f, a: float, b: float, panels: int, chunk: int = 4096):
    edges = np.linspace(a, b, panels + 1)
    total = 0j
    for start in range(0, panels, chunk):
        stop = min(start + chunk, panels)
        lft = edges[start:stop]
        rgt = edges[start + 1 : stop + 1]
        half = 0.5 * (rgt - lft)
        centre = 0.5 * (rgt + lft)
        nodes = (centre[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
        vals = f(nodes).reshape(len(lft), -1)
        total += np.sum(half * (vals @ _GL_WEIGHTS))
    return total


def adaptive_oscillatory(f, a: float, b: float, max_freq: float, tol: float,
                         max_nodes: int = 4_000_000):
    """Composite 16-point Gauss-Legendre with panel doubling until two passes agree."""
    panels = max(4, int(math.ceil((b - a) * max(max_freq, 1.0))))
    prev = _panel_rule(f, a, b, panels)
    while True:
        panels *= 2
        if panels * 16 > max_nodes:
            raise NumericToleranceError(f"quadrature budget of {max_nodes} nodes reached",
                                        achieved=None, estimate=prev)
        cur = _panel_rule(f, a, b, panels)
        err = abs(cur - prev)
        if err <= tol * max(1.0, abs(cur)):
            return cur, err
        prev = cur


def integrate_i(region: str, lambda1: float, lambda2: float, mus, gamma: float, eta: float,
                X: float, eps: float, s: int | None = None, quad_tol: float = 1e-8,
                side: str = "both", truncation: float | None = None, L: int | None = None,
                max_nodes: int = 4_000_000) -> dict:
    """Integral of S(l1 a) S(l2 a) prod G(mu_i a) e(gamma a) K(a, eta) over a region.

    ``region`` is "major", "minor" or "trivial"; the trivial region is cut at
    ``truncation`` (default 4 L^2) and the rest bounded by
    2 theta^2 L^s / (pi^2 truncation).  ``side`` restricts to alpha > 0
    ("pos"), alpha < 0 ("neg") or both.
    """
    if X > 10**4:
        raise ResourceError(f"X = {X} exceeds the integrand budget X <= 10^4", limit=10**4)
    mus = tuple(float(m) for m in mus)
    s = len(mus) if s is None else s
    if s > 4 or s > len(mus):
        raise DomainError(f"s = {s} must be <= 4 and <= number of mus ({len(mus)})")
    mus = mus[:s]
    mu_norm = sum(abs(m) for m in mus) or 1.0
    params = ScaleParams(X, eps, mu_norm)
    L = params.L if L is None else L
    if L < 1:
        raise DomainError(f"L = {L} < 1; pass L explicitly or increase X")
    dis = dissect(X, eps, mu_norm) if L == params.L else None
    edge = (dis.P / X) if dis else X ** (-2.0 / 3.0)
    top = float(L * L)
    f = Integrand(lambda1, lambda2, mus, gamma, eta, params, L)
    if region == "major":
        pieces = [(-edge, 0.0), (0.0, edge)]
    elif region == "minor":
        pieces = [(-top, -edge), (edge, top)]
    elif region == "trivial":
        A = truncation if truncation is not None else 4 * top
        if A <= top:
            raise DomainError("truncation must exceed L^2")
        pieces = [(-A, -top), (top, A)]
    else:
        raise DomainError(f"unknown region {region!r}")
    if side == "pos":
        pieces = [p for p in pieces if p[0] >= 0]
    elif side == "neg":
        pieces = [p for p in pieces if p[1] <= 0]
    total = 0j
    err = 0.0
    for a, b in pieces:
        v, e_ = adaptive_oscillatory(f, a, b, f.max_frequency(), quad_tol, max_nodes)
        total += v
        err += e_
    trunc = 0.0
    if region == "trivial":
        theta = chebyshev_theta(X, eps * X)
        factor = 1 if side == "both" else 0.5
        trunc = factor * 2 * theta**2 * L**s / (math.pi**2 * A)
    return {"region": region, "side": side, "value": [total.real, total.imag], "quad_error": err,
            "truncation_bound": trunc, "L": L, "s": s, "pieces": pieces}
