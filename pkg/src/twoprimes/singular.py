"""Twin-prime singular series, the twin prime constant, and upper bounds for S'(n)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from mpmath import libmp

from . import constants as K
from .errors import DomainError, PreconditionError
from .interval import DEFAULT_DIGITS, RealInterval, check_precision, digits_to_bits, euler_gamma
from .ntcore import FactorBudget, Factorization, default_cache, euler_phi, factorize, odd_part, sieve_primes


@dataclass(frozen=True)
class SingSeriesValue:
    n: int
    sprime_exact: Fraction | None
    sprime_interval: RealInterval
    complete: bool


# ------------------------------------------------------------------- c0
def _moebius(k: int) -> int:
    mu = 1
    d = 2
    while d * d <= k:
        if k % d == 0:
            k //= d
            if k % d == 0:
                return 0
            mu = -mu
        d += 1
    return -mu if k > 1 else mu


def prime_zeta_2(precision: int) -> RealInterval:
    """Enclosure of P(2) = sum_p p^-2 from P(2) = sum_k mu(k)/k log zeta(2k).

    Truncating after K terms leaves at most sum_{k>K} (zeta(2k)-1) <= 4^-K.
    """
    prec = digits_to_bits(precision)
    terms = prec // 2 + 12
    with mpmath.workprec(prec + 40):
        total = mpmath.mpf(0)
        for k in range(1, terms + 1):
            mu = _moebius(k)
            if mu:
                total += mu * mpmath.log(mpmath.zeta(2 * k)) / k
    err = Fraction(1, 4**terms) + Fraction(1, 2 ** (prec + 20))
    centre = RealInterval.exact(Fraction(int(libmp.to_rational(total._mpf_)[0]), int(libmp.to_rational(total._mpf_)[1])), precision + 10)
    return RealInterval.hull(centre - err, centre + err, precision + 10).at(precision)


def _fixed_point_partial(primes: np.ndarray, bits: int):
    """Directed fixed-point bounds (scaled by 2^bits) for prod p(p-2)/(p-1)^2 and sum 1/p^2."""
    one = 1 << bits
    lo = hi = one
    s_lo = s_hi = 0
    plist = primes.tolist()
    block = 24
    for i in range(0, len(plist), block):
        num = den = 1
        for p in plist[i : i + block]:
            num *= p * (p - 2)
            den *= (p - 1) * (p - 1)
        lo = lo * num // den
        hi = -((-hi * num) // den)
    for p in plist:
        sq = p * p
        s_lo += one // sq
        s_hi += -(-one // sq)
    return lo, hi, s_lo, s_hi


def compute_c0(prime_bound: int = 10**7, precision: int = DEFAULT_DIGITS,
               tail: str = "primezeta") -> RealInterval:
    """Certified enclosure of c0 = prod_{p>2} (1 - 1/(p-1)^2).

    The product over 2 < p <= prime_bound is carried in fixed point with
    directed rounding.  The remaining factor exp(-T) is enclosed either from
    T <= sum_{k >= prime_bound} 2/k^2 (``tail="elementary"``) or from
    T = P_N(2) + R with P_N(2) = sum_{p > N} p^-2 computed from the prime zeta
    value P(2), and 0 <= R <= 3/N^3 + 3/(2N^2) (``tail="primezeta"``).
    """
    precision = check_precision(precision)
    prime_bound = int(prime_bound)
    if prime_bound < 3:
        raise DomainError("compute_c0 needs prime_bound >= 3")
    if tail not in ("primezeta", "elementary"):
        raise ValueError(f"unknown tail method {tail!r}")
    primes = sieve_primes(prime_bound)
    bits = digits_to_bits(precision) + 2 * max(len(primes), 1).bit_length() + 16
    lo, hi, s_lo, s_hi = _fixed_point_partial(primes[1:], bits)
    work = precision + 5
    prod = RealInterval(libmp.from_man_exp(lo, -bits), libmp.from_man_exp(hi, -bits), work)
    N = prime_bound
    if tail == "elementary":
        T_hi = RealInterval.exact(Fraction(2, N * N) + Fraction(2, N), work)
        lower = prod * (-T_hi).exp()
        return RealInterval.hull(lower.lo_fraction, prod.hi_fraction, work).at(precision)
    # sum over all p <= N of p^-2, p = 2 included
    inv4 = Fraction(1, 4)
    sum_lo = RealInterval(libmp.from_man_exp(s_lo, -bits), libmp.from_man_exp(s_lo, -bits), work) + inv4
    sum_hi = RealInterval(libmp.from_man_exp(s_hi, -bits), libmp.from_man_exp(s_hi, -bits), work) + inv4
    P2 = prime_zeta_2(work)
    tail_lo = RealInterval.exact(P2.lo_fraction, work) - sum_hi
    tail_hi = RealInterval.exact(P2.hi_fraction, work) - sum_lo
    R_hi = Fraction(3, N**3) + Fraction(3, 2 * N * N)
    t_small = RealInterval.exact(tail_lo.lo_fraction, work)
    t_big = RealInterval.exact(tail_hi.hi_fraction + R_hi, work)
    if t_small.certainly_lt(0):
        t_small = RealInterval.exact(0, work)
    c_lo = (prod * (-t_big).exp()).lo_fraction
    c_hi = (prod * (-t_small).exp()).hi_fraction
    return RealInterval.hull(c_lo, c_hi, work).at(precision)


@lru_cache(maxsize=4)
def default_c0(precision: int = DEFAULT_DIGITS, prime_bound: int = 10**6) -> RealInterval:
    return compute_c0(prime_bound, precision)


# ------------------------------------------------------------- S'(n)
def _unknown_prime_count_bound(cofactor: int, b: int) -> int:
    """Largest k with b^k <= cofactor: at most this many primes >= b divide it."""
    k, power = 0, b
    while power <= cofactor:
        k += 1
        power *= b
    return k


def sprime(f: Factorization, precision: int = DEFAULT_DIGITS) -> SingSeriesValue:
    """S'(n) = prod over odd primes p | n of (p-1)/(p-2)."""
    exact = Fraction(1)
    for p, _ in f.factors:
        if p > 2:
            exact *= Fraction(p - 1, p - 2)
    if f.complete:
        return SingSeriesValue(f.n, exact, RealInterval.exact(exact, precision), True)
    b = max(f.cofactor_lower_prime_bound, 3)
    k = _unknown_prime_count_bound(f.cofactor, b)
    upper = exact * Fraction(b - 1, b - 2) ** k
    return SingSeriesValue(f.n, None, RealInterval.hull(exact, upper, precision), False)


@lru_cache(maxsize=200_000)
def _sprime_odd(m: int, precision: int, trial_bound: int, rho: int) -> SingSeriesValue:
    f = factorize(m, FactorBudget(trial_bound, rho), cache=default_cache())
    return sprime(f, precision)


def sprime_of(n: int, precision: int = DEFAULT_DIGITS, budget: FactorBudget | None = None) -> SingSeriesValue:
    """S'(|n|) with factorizations cached by odd part (powers of 2 do not contribute)."""
    budget = budget or FactorBudget()
    v = _sprime_odd(odd_part(n), precision, budget.trial_bound, budget.rho_iterations)
    return SingSeriesValue(abs(int(n)), v.sprime_exact, v.sprime_interval, v.complete)


def s_full(f: Factorization, c0: RealInterval) -> RealInterval:
    """S(n) = 2 c0 S'(n)."""
    return 2 * c0 * sprime(f, c0.precision).sprime_interval


def f_bound(f: Factorization, c0: RealInterval) -> RealInterval:
    """n / (c0 phi(n)), with the convention f(1) = f(2) = 1."""
    if not f.complete:
        raise PreconditionError(f"f_bound needs a complete factorization of {f.n}")
    if f.n in (1, 2):
        return RealInterval.exact(1, c0.precision)
    return RealInterval.exact(Fraction(f.n, euler_phi(f)), c0.precision) / c0


def rs_bound(n: int, c0: RealInterval) -> RealInterval:
    """e^gamma log log n / c0 + 2.50637 / (c0 log log n)."""
    if n < 3:
        raise DomainError(f"rs_bound needs n >= 3, got {n}")
    d = c0.precision
    llog = RealInterval.exact(n, d).log().log()
    eg = euler_gamma(d).exp()
    return eg * llog / c0 + RealInterval.exact(K.ROSSER_SCHOENFELD_COEFF, d) / (c0 * llog)


def parsell_sprime_bound(n: int, precision: int = DEFAULT_DIGITS) -> RealInterval:
    return 2 * RealInterval.exact(2 * n, precision).log()


def bound_comparison(n: int, c0: RealInterval | None = None, budget: FactorBudget | None = None) -> dict:
    if n < 3:
        raise DomainError("bound_comparison needs n >= 3")
    c0 = c0 or default_c0()
    f = factorize(n, budget, cache=default_cache())
    if not f.complete:
        raise PreconditionError(f"factorization of {n} incomplete within budget")
    values = {
        "sprime": sprime(f, c0.precision).sprime_interval,
        "f_bound": f_bound(f, c0),
        "rs_bound": rs_bound(n, c0),
        "parsell_2log2n": parsell_sprime_bound(n, c0.precision),
    }
    bounds = {k: v for k, v in values.items() if k != "sprime"}
    smallest = min(bounds, key=lambda k: float(bounds[k].hi))
    certain = all(bounds[smallest].certainly_lt(v) for k, v in bounds.items() if k != smallest)
    return {"n": n, **values, "minimum_label": smallest, "minimum_certified": certain}


# ----------------------------------------------------------- range scans
def _ratio_tables(n_max: int):
    """Exact-in-float tables of n/phi(n) and S'(n) for n <= n_max."""
    ratio = np.ones(n_max + 1)
    sp = np.ones(n_max + 1)
    for p in sieve_primes(max(n_max, 2)).tolist():
        ratio[p::p] *= p / (p - 1)
        if p > 2:
            sp[p::p] *= (p - 1) / (p - 2)
    return ratio, sp


# float products above carry relative error < 1e-13 for n <= 10^7
_FLOAT_MARGIN = 1e-10


def divisor_chain_scan(n_max: int, c0: RealInterval | None = None) -> dict:
    """Check S'(n) < n/(c0 phi(n)) < RS(n) for 3 <= n <= n_max.

    Float evaluation with a relative margin; any n inside the margin is
    re-decided with exact / interval arithmetic.
    """
    c0 = c0 or default_c0()
    c_hi = float(c0.hi) * (1 + 1e-15)
    ratio, sp = _ratio_tables(n_max)
    n = np.arange(3, n_max + 1)
    r = ratio[3:]
    s = sp[3:]
    ll = np.log(np.log(n.astype(np.float64)))
    rs_times_c0 = math.exp(0.5772156649015329) * ll + 2.50637 / ll
    first_gap = (r - s * c_hi) / r
    second_gap = (rs_times_c0 - r) / rs_times_c0
    doubtful = np.flatnonzero((first_gap < _FLOAT_MARGIN) | (second_gap < _FLOAT_MARGIN)) + 3
    failures = []
    for m in doubtful.tolist():
        f = factorize(m)
        sv = sprime(f, c0.precision).sprime_interval
        fb = f_bound(f, c0)
        if not (sv.certainly_lt(fb) and fb.certainly_lt(rs_bound(m, c0))):
            failures.append(m)
    return {"n_max": n_max, "checked": int(len(n)), "rechecked": int(len(doubtful)),
            "failures": failures, "min_first_gap": float(first_gap.min()),
            "min_second_gap": float(second_gap.min())}


def crossover_scan(n_lo: int, n_hi: int, c0: RealInterval | None = None) -> dict:
    """Return every n in [n_lo, n_hi] where RS(n) < 2 log(2n) fails or is undecided."""
    c0 = c0 or default_c0()
    c_lo = float(c0.lo) * (1 - 1e-15)
    n = np.arange(max(n_lo, 3), n_hi + 1).astype(np.float64)
    ll = np.log(np.log(n))
    rs = (math.exp(0.5772156649015329) * ll + 2.50637 / ll) / c_lo
    target = 2 * np.log(2 * n)
    gap = (target - rs) / target
    doubtful = np.flatnonzero(gap < _FLOAT_MARGIN) + max(n_lo, 3)
    failing = []
    for m in doubtful.tolist():
        if not rs_bound(m, c0).certainly_lt(parsell_sprime_bound(m, c0.precision)):
            failing.append(m)
    return {"range": [n_lo, n_hi], "failing": failing, "min_relative_gap": float(gap.min()) if len(gap) else None}


def constants_table(c0: RealInterval | None = None, precision: int = DEFAULT_DIGITS) -> list[dict]:
    """Name, enclosure and provenance for every constant the library uses."""
    from .s0calc import big_C  # local import: s0calc depends on this module

    c0 = c0 or default_c0(precision)
    rows = [
        ("c0", c0, K.PROVENANCE["c0"]),
        ("c0_published", RealInterval.hull(K.C0_LOWER, K.C0_UPPER, precision), K.PROVENANCE["c0_published"]),
        ("B_chen", RealInterval.exact(K.B_CHEN, precision), K.PROVENANCE["B_chen"]),
        ("B_conjectural", RealInterval.exact(K.B_CONJECTURAL, precision), K.PROVENANCE["B_conjectural"]),
        ("A1_upper", RealInterval.exact(K.A1_UPPER, precision), K.PROVENANCE["A1_upper"]),
        ("C", big_C("chen", precision=precision), K.PROVENANCE["C"]),
        ("C_conjectural", big_C("conjectural", precision=precision), K.PROVENANCE["C_conjectural"]),
        ("C1_parsell", RealInterval.exact(K.C1_PARSELL, precision), K.PROVENANCE["C1_parsell"]),
        ("nu_algebraic", RealInterval.exact(K.NU_ALGEBRAIC, precision), K.PROVENANCE["nu_algebraic"]),
        ("nu_transcendental", RealInterval.exact(K.NU_TRANSCENDENTAL, precision), K.PROVENANCE["nu_transcendental"]),
        ("nu_parsell", RealInterval.exact(K.NU_PARSELL, precision), K.PROVENANCE["nu_parsell"]),
        ("euler_gamma", euler_gamma(precision), K.PROVENANCE["euler_gamma"]),
        ("rosser_schoenfeld_coeff", RealInterval.exact(K.ROSSER_SCHOENFELD_COEFF, precision), K.PROVENANCE["rosser_schoenfeld"]),
    ]
    out = []
    for name, iv, prov in rows:
        lo, hi = iv.decimal_bounds(min(precision, 25))
        out.append({"name": name, "lo": lo, "hi": hi, "precision": iv.precision, "provenance": prov})
    return out
