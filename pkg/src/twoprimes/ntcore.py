"""Primes, factorization, Chebyshev theta and the prime-pair diagnostics.

Everything here is exact integer arithmetic except the logarithmic sums
(theta, the weighted twin count, the Selberg integral), which are ordinary
double precision.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from math import gcd, isqrt

import numpy as np

from .errors import DomainError, PreconditionError, ResourceError

SIEVE_BUDGET = 2 * 10**9
TRIAL_BOUND = 10**6

# Deterministic Miller-Rabin with the first 13 prime bases is proven
# correct below this bound (Sorenson & Webster 2015).
MR_DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@dataclass(frozen=True)
class ScaleParams:
    X: float
    epsilon: float
    mu_norm: float = 1.0

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise DomainError(f"epsilon must lie in (0,1), got {self.epsilon}")
        if self.mu_norm <= 0:
            raise DomainError("mu_norm must be positive")
        if self.epsilon * self.X < 2:
            raise DomainError(f"epsilon*X = {self.epsilon * self.X} < 2")

    @property
    def L(self) -> int:
        """floor(log2(eps*X/(2M))); may be < 1 for small X, callers check."""
        ratio = self.epsilon * self.X / (2 * self.mu_norm)
        if ratio < 1:
            return 0
        L = int(math.floor(math.log2(ratio)))
        # guard float rounding at exact powers of two
        while 2 ** (L + 1) <= ratio:
            L += 1
        while L > 0 and 2**L > ratio:
            L -= 1
        return L

    @property
    def prime_range(self) -> tuple[float, float]:
        return self.epsilon * self.X, self.X


# ---------------------------------------------------------------- primes
def _sieve(bound: int) -> np.ndarray:
    is_p = np.ones(bound + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for p in range(3, isqrt(bound) + 1, 2):
        if is_p[p]:
            is_p[p * p :: 2 * p] = False
    out = np.flatnonzero(is_p)
    out.setflags(write=False)
    return out


_largest_table = np.zeros(0, dtype=np.int64)
_largest_bound = 1
_table_lock = threading.Lock()


def sieve_primes(bound: int, budget: int = SIEVE_BUDGET) -> np.ndarray:
    """All primes in [2, bound] as a read-only int64 array."""
    global _largest_table, _largest_bound
    bound = int(bound)
    if bound < 2:
        raise DomainError(f"sieve bound must be >= 2, got {bound}")
    if bound > budget:
        raise ResourceError(f"sieve bound {bound} exceeds the memory budget {budget}", limit=budget)
    with _table_lock:
        if bound > _largest_bound:
            # grow geometrically for small bounds so repeated calls stay cheap
            new_bound = max(bound, min(2 * _largest_bound, 10**6))
            _largest_table = _sieve(new_bound)
            _largest_bound = new_bound
        table = _largest_table
    return table[: np.searchsorted(table, bound, side="right")]


def primes_between(lo: float, hi: float) -> np.ndarray:
    """Primes p with lo <= p <= hi (both ends inclusive)."""
    if hi < 2:
        return np.zeros(0, dtype=np.int64)
    table = sieve_primes(max(int(math.floor(hi)), 2))
    start = int(math.ceil(lo))
    return table[np.searchsorted(table, start, side="left") :]


def _miller_rabin(n: int, bases) -> bool:
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_certified_prime(n: int, budget: "FactorBudget | None" = None, _depth: int = 0) -> bool:
    """True only when ``n`` is proven prime.

    Below MR_DETERMINISTIC_LIMIT a fixed-base Miller-Rabin test is a proof.
    Above it a Pocklington certificate is attempted by factoring n-1; False
    means "not certified", which may still be a prime.
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < MR_DETERMINISTIC_LIMIT:
        return _miller_rabin(n, _MR_BASES)
    if not _miller_rabin(n, _MR_BASES) or _depth > 6:
        return False
    return _pocklington(n, budget or FactorBudget(), _depth)


def _pocklington(n: int, budget: "FactorBudget", depth: int) -> bool:
    f = factorize(n - 1, budget, _depth=depth + 1)
    # use the fully certified part F of n-1; need F > sqrt(n)
    F = 1
    for p, e in f.factors:
        F *= p**e
    if F * F <= n:
        return False
    for q, _ in f.factors:
        for a in range(2, 200):
            if pow(a, n - 1, n) != 1:
                return False
            if gcd(pow(a, (n - 1) // q, n) - 1, n) == 1:
                break
        else:
            return False
    return True


# --------------------------------------------------------- factorization
@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple = ()
    cofactor: int = 1
    cofactor_lower_prime_bound: int = 2

    def __post_init__(self):
        prod = self.cofactor
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"factors must be strictly increasing primes: {self.factors}")
            last = p
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"factors do not multiply to {self.n}")

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def to_line(self) -> str:
        parts = [str(self.n)] + [f"{p}^{e}" for p, e in self.factors]
        if not self.complete:
            parts.append(f"[cofactor={self.cofactor},bound={self.cofactor_lower_prime_bound}]")
        return " ".join(parts)

    @classmethod
    def from_line(cls, line: str) -> "Factorization":
        tokens = line.split()
        n = int(tokens[0])
        factors = []
        cofactor, bound = 1, 2
        for tok in tokens[1:]:
            if tok.startswith("["):
                fields = dict(kv.split("=") for kv in tok.strip("[]").split(","))
                cofactor, bound = int(fields["cofactor"]), int(fields["bound"])
            else:
                p, e = tok.split("^")
                factors.append((int(p), int(e)))
        return cls(n, tuple(factors), cofactor, bound)


@dataclass(frozen=True)
class FactorBudget:
    """Effort bound for :func:`factorize`."""

    trial_bound: int = TRIAL_BOUND
    rho_iterations: int = 2_000_000


class FactorCache:
    """Factorizations keyed by n; the text file is read-only except for appends."""

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = path
        self._entries: dict[int, Factorization] = {}
        self._lock = threading.Lock()
        if path is not None and os.path.exists(path):
            self.load(path)

    def load(self, path) -> None:
        with open(path, encoding="ascii") as fh:
            for line in fh:
                line = line.strip()
                if line and not line.startswith("#"):
                    f = Factorization.from_line(line)
                    self._entries[f.n] = f

    def load_text(self, text: str) -> None:
        for line in text.splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                f = Factorization.from_line(line)
                self._entries[f.n] = f

    def get(self, n: int) -> Factorization | None:
        return self._entries.get(n)

    def put(self, f: Factorization, persist: bool = True) -> None:
        with self._lock:
            known = self._entries.get(f.n)
            if known is not None and (known.complete or not f.complete):
                return
            self._entries[f.n] = f
            if persist and self.path is not None:
                with open(self.path, "a", encoding="ascii") as fh:
                    fh.write(f.to_line() + "\n")

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, n: int) -> bool:
        return n in self._entries


_default_cache: FactorCache | None = None


def default_cache() -> FactorCache:
    """Cache preloaded with the factorizations of 2^d - 1, d <= 64."""
    global _default_cache
    if _default_cache is None:
        cache = FactorCache()
        text = resources.files("twoprimes.data").joinpath("mersenne.txt").read_text("ascii")
        cache.load_text(text)
        _default_cache = cache
    return _default_cache


@lru_cache(maxsize=1)
def _prime_blocks(trial_bound: int):
    primes = [int(p) for p in sieve_primes(trial_bound)]
    blocks = []
    for i in range(0, len(primes), 512):
        chunk = primes[i : i + 512]
        prod = 1
        for p in chunk:
            prod *= p
        blocks.append((prod, chunk))
    return blocks


def _trial_divide(n: int, trial_bound: int):
    """Strip every prime factor <= trial_bound; returns (factors dict, remainder)."""
    found: dict[int, int] = {}
    for prod, chunk in _prime_blocks(trial_bound):
        if n == 1:
            break
        if chunk[0] * chunk[0] > n:
            # remainder has no factor below chunk[0], so it is 1 or prime
            break
        if gcd(prod, n) == 1:
            continue
        for p in chunk:
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                found[p] = e
    return found, n


def _brent_rho(n: int, max_iter: int, c: int = 1):
    """One Brent/Pollard rho run; returns (factor or None, iterations used)."""
    if n % 2 == 0:
        return 2, 1
    y, r, q, g = 2, 1, 1, 1
    m = 128
    used = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
        used += r
        r *= 2
        if used > max_iter:
            return None, used
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
            if g > 1:
                break
    if g == n:
        return None, used
    return g, used


def factorize(n: int, budget: FactorBudget | None = None, cache: FactorCache | None = None,
              _depth: int = 0) -> Factorization:
    """Prime factorization of ``n``, partial when the effort budget runs out.

    Partial results keep every unresolved piece in ``cofactor``; all of its
    prime factors exceed ``cofactor_lower_prime_bound``.
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"factorize needs n >= 1, got {n}")
    if cache is not None:
        hit = cache.get(n)
        if hit is not None:
            return hit
    budget = budget or FactorBudget()
    found, rest = _trial_divide(n, budget.trial_bound)
    if rest > 1 and rest <= budget.trial_bound**2:
        # nothing <= trial_bound divides rest, so rest is prime
        found[rest] = found.get(rest, 0) + 1
        rest = 1
    cofactor = 1
    remaining_iter = budget.rho_iterations
    stack = [rest] if rest > 1 else []
    while stack:
        m = stack.pop()
        if is_certified_prime(m, budget, _depth):
            found[m] = found.get(m, 0) + 1
            continue
        if _miller_rabin(m, _MR_BASES):
            # probable prime without a certificate: keep as cofactor
            cofactor *= m
            continue
        d = None
        c = 1
        while d is None and remaining_iter > 0 and c < 20:
            d, used = _brent_rho(m, remaining_iter, c)
            remaining_iter -= used
            c += 1
        if d is None:
            cofactor *= m
        else:
            stack.extend([d, m // d])
    factors = tuple(sorted(found.items()))
    f = Factorization(n, factors, cofactor, budget.trial_bound if cofactor > 1 else 2)
    if cache is not None:
        cache.put(f)
    return f


def euler_phi(f: Factorization) -> int:
    if not f.complete:
        raise PreconditionError(f"euler_phi needs a complete factorization of {f.n}")
    phi = 1
    for p, e in f.factors:
        phi *= (p - 1) * p ** (e - 1)
    return phi


def odd_part(n: int) -> int:
    n = abs(int(n))
    if n == 0:
        raise DomainError("odd part of 0 is undefined")
    return n >> ((n & -n).bit_length() - 1)


# ------------------------------------------------------- prime sums
def chebyshev_theta(x: float, lo: float = 2) -> float:
    """Sum of log p over primes lo <= p <= x."""
    if x < 0:
        raise DomainError("theta needs x >= 0")
    if x < 2 or x < lo:
        return 0.0
    primes = primes_between(max(lo, 2), x)
    return float(np.sum(np.log(primes.astype(np.float64))))


def twin_count_Z(params: ScaleParams, n: int, weighted: bool = True):
    """Prime pairs eps*X <= p, p' <= X with p' - p = 2n (weights log p log p')."""
    X, eps = params.X, params.epsilon
    if not 1 <= n <= (1 - eps) * X / 2:
        raise DomainError(f"n={n} outside [1, (1-eps)X/2] = [1, {(1 - eps) * X / 2}]")
    table = sieve_primes(max(int(math.floor(X)), 2))
    ps = primes_between(eps * X, X)
    partner = ps + 2 * n
    ok = partner <= X
    ps, partner = ps[ok], partner[ok]
    idx = np.searchsorted(table, partner)
    idx = np.minimum(idx, len(table) - 1)
    hit = table[idx] == partner
    if not weighted:
        return int(np.count_nonzero(hit))
    ps, partner = ps[hit].astype(np.float64), partner[hit].astype(np.float64)
    return float(np.sum(np.log(ps) * np.log(partner)))


def selberg_integral(X: float, h: float, eps: float) -> float:
    """Integral over [eps X, X] of (theta(x+h) - theta(x) - h)^2 dx.

    theta(x+h) - theta(x) is a step function of x, jumping where x or x+h
    passes a prime, so the integral is a finite sum over those pieces.
    """
    if X < 2 or h <= 0 or not 0 < eps < 1:
        raise DomainError("selberg_integral needs X >= 2, h > 0, eps in (0,1)")
    a, b = eps * X, float(X)
    if b <= a:
        return 0.0
    primes = sieve_primes(max(int(math.floor(b + h)) + 1, 2)).astype(np.float64)
    logs = np.log(primes)
    cum = np.concatenate([[0.0], np.cumsum(logs)])

    def theta(x):
        return cum[np.searchsorted(primes, x, side="right")]

    # theta is right-continuous; breakpoints are p and p - h
    cuts = np.concatenate([primes, primes - h])
    cuts = cuts[(cuts > a) & (cuts < b)]
    knots = np.unique(np.concatenate([[a, b], cuts]))
    left, right = knots[:-1], knots[1:]
    mid = 0.5 * (left + right)
    diff = theta(mid + h) - theta(mid) - h
    return float(np.sum(diff * diff * (right - left)))
