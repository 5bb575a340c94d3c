"""Exponential sums S, G, U, the integral T, the Fejer kernel and the arc dissection."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, NumericToleranceError
from .ntcore import ScaleParams, primes_between

TWO_PI = 2.0 * math.pi


def e(x):
    """e(x) = exp(2 pi i x), vectorised."""
    return np.exp(1j * TWO_PI * np.asarray(x, dtype=np.float64))


def g_sum(alpha, L: int):
    """G(alpha) = sum_{m=1}^{L} e(2^m alpha)."""
    if L < 1:
        raise DomainError("G needs L >= 1")
    a = np.asarray(alpha, dtype=np.float64)
    frac = np.mod(a, 1.0)
    out = np.zeros(a.shape, dtype=np.complex128)
    # doubling mod 1 keeps the phase exact for dyadic alpha
    for _ in range(L):
        frac = np.mod(2.0 * frac, 1.0)
        out += np.exp(1j * TWO_PI * frac)
    return out if out.ndim else complex(out)


def s_sum(alpha, params: ScaleParams):
    """S(alpha) = sum over eps X <= p <= X of log p e(p alpha)."""
    primes = primes_between(params.epsilon * params.X, params.X)
    weights = np.log(primes.astype(np.float64))
    a = np.asarray(alpha, dtype=np.float64)
    phases = np.mod(np.multiply.outer(np.mod(a, 1.0), primes.astype(np.float64)), 1.0)
    out = np.exp(1j * TWO_PI * phases) @ weights
    return out if np.ndim(out) else complex(out)


def u_sum(alpha, params: ScaleParams):
    """U(alpha) = sum over integers eps X <= n <= X of e(alpha n), in closed form."""
    lo = math.ceil(params.epsilon * params.X)
    hi = math.floor(params.X)
    count = hi - lo + 1
    a = np.asarray(alpha, dtype=np.float64)
    # reduce to (-1/2, 1/2] so the Dirichlet kernel below has no cancellation near integers
    b = a - np.round(a)
    out = np.empty(a.shape, dtype=np.complex128)
    zero = b == 0
    out[zero] = count
    c = b[~zero]
    kernel = np.sin(np.pi * count * c) / np.sin(np.pi * c)
    out[~zero] = e((lo + (count - 1) / 2) * c) * kernel
    return out if out.ndim else complex(out)


def t_integral(alpha, params: ScaleParams):
    """T(alpha) = integral_{eps X}^{X} e(t alpha) dt."""
    X, eps = params.X, params.epsilon
    a = np.asarray(alpha, dtype=np.float64)
    out = np.empty(a.shape, dtype=np.complex128)
    zero = a == 0
    out[zero] = (1 - eps) * X
    b = a[~zero]
    out[~zero] = (e(X * b) - e(eps * X * b)) / (2j * math.pi * b)
    return out if out.ndim else complex(out)


# ------------------------------------------------------------- kernel
def fejer_k(alpha, eta: float):
    """K(alpha, eta) = (sin(pi eta alpha) / (pi alpha))^2, with K(0, eta) = eta^2."""
    if eta <= 0:
        raise DomainError("eta must be positive")
    a = np.asarray(alpha, dtype=np.float64)
    # np.sinc(x) = sin(pi x)/(pi x)
    out = (eta * np.sinc(eta * a)) ** 2
    return out if out.ndim else float(out)


def k_hat_exact(t, eta: float):
    return np.maximum(0.0, eta - np.abs(t))


def k_hat_check(t: float, eta: float, truncation_T: float = 1e5, tol: float = 1e-9) -> dict:
    """Quadrature of int_{-T}^{T} K(alpha, eta) e(t alpha) d alpha plus its tail bound.

    On [0, 1] the smooth integrand is integrated directly.  On [1, T] the
    identity sin^2(x) = (1 - cos 2x)/2 writes K cos(2 pi t alpha) as a sum of
    cosines against 1/(2 pi^2 alpha^2), each handled by QUADPACK's
    oscillatory (cosine-weight) rule.  The imaginary part vanishes by
    symmetry.  Beyond T, |K| <= 1/(pi^2 alpha^2) gives a tail of at most
    2/(pi^2 T).
    """
    if eta <= 0 or truncation_T <= 1:
        raise DomainError("need eta > 0 and truncation_T > 1")

    def near(a):
        return fejer_k(a, eta) * math.cos(TWO_PI * t * a)

    head, head_err = integrate.quad(near, 0.0, 1.0, epsabs=tol / 10, epsrel=1e-13, limit=400)
    weight = lambda a: 1.0 / (2 * math.pi**2 * a * a)  # noqa: E731
    body = 0.0
    body_err = 0.0
    for coeff, freq in ((1.0, t), (-0.5, t + eta), (-0.5, t - eta)):
        omega = TWO_PI * abs(freq)
        if omega == 0:
            val, err = integrate.quad(weight, 1.0, truncation_T, epsabs=tol / 10, epsrel=1e-13, limit=400)
        else:
            val, err = integrate.quad(weight, 1.0, truncation_T, weight="cos", wvar=omega,
                                      epsabs=tol / 10, epsrel=1e-13, limit=2000)
        body += coeff * val
        body_err += abs(coeff) * err
    value = 2.0 * (head + body)
    achieved = 2.0 * (head_err + body_err)
    if achieved > tol:
        raise NumericToleranceError(f"kernel quadrature reached only {achieved:.3g} > {tol:.3g}",
                                    achieved=achieved, estimate=value)
    tail = 2.0 / (math.pi**2 * truncation_T)
    return {"t": t, "eta": eta, "value": value, "exact": float(k_hat_exact(t, eta)),
            "quad_error": achieved, "tail_bound": tail}


# ---------------------------------------------------------- dissection
@dataclass(frozen=True)
class ArcDissection:
    X: float
    P: float
    L: int
    major: tuple
    minor: tuple
    trivial_tail_bound: float

    def region(self, name: str) -> list[tuple[float, float]]:
        """Pieces of the line covered by ``name`` (major, minor or trivial to +-inf)."""
        if name == "major":
            return [self.major]
        if name == "minor":
            return [(-self.minor[1], -self.minor[0]), self.minor]
        if name == "trivial":
            edge = self.minor[1]
            return [(-math.inf, -edge), (edge, math.inf)]
        raise ValueError(f"unknown region {name!r}")

    def to_json(self) -> dict:
        return {"X": self.X, "P": self.P, "L": self.L, "major": list(self.major),
                "minor": [list(p) for p in self.region("minor")],
                "trivial_tail_bound": self.trivial_tail_bound}


def dissect(X: float, epsilon: float = 0.1, mu_norm: float = 1.0) -> ArcDissection:
    """Major arc |alpha| <= P/X with P = X^(1/3); minor arc up to L^2."""
    params = ScaleParams(X, epsilon, mu_norm)
    L = params.L
    if L < 1:
        raise DomainError(f"L = floor(log2(eps X / 2M)) = {L} < 1 for X={X}")
    P = X ** (1.0 / 3.0)
    rounded = round(P)
    if abs(rounded**3 - X) <= 1e-9 * X:
        P = float(rounded)
    edge = P / X
    top = float(L * L)
    if edge >= top:
        raise DomainError("major arc swallows the minor arc; increase X")
    tail = 2.0 / (math.pi**2 * top)
    return ArcDissection(X, P, L, (-edge, edge), (edge, top), tail)
