"""Exhaustive search for solutions of |l1 p1 + l2 p2 + sum mu_i 2^m_i + gamma| < eta.

A float pass over (m-vector, p1) locates, by binary search in the sorted
prime list, the few p2 that can possibly work; its window is widened by a
margin far above float rounding.  Every candidate is then decided by
interval evaluation of the coefficient literals, raising the precision
until the comparison with eta is certain.  Candidates that stay ambiguous
at the precision cap go to a separate ``undecided`` list.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceError
from .interval import DEFAULT_DIGITS, RealInterval, check_precision
from .ntcore import primes_between
from .s0calc import CoefficientConfig

MAX_X = 2 * 10**4
# pi(X)^2 L^s work units accepted before refusing
EFFORT_BUDGET = 2 * 10**9
CANDIDATE_BUDGET = 5 * 10**6
MAX_PRECISION = 200
FLOAT_MARGIN = 1e-9


@dataclass(frozen=True, order=True)
class SolutionRecord:
    p1: int
    p2: int
    ms: tuple
    value: str = ""
    residual: str = ""
    residual_upper: str = ""

    @property
    def key(self) -> tuple:
        return (self.p1, self.p2, self.ms)

    def to_json(self) -> dict:
        return {"p1": self.p1, "p2": self.p2, "ms": list(self.ms), "value": self.value,
                "residual": self.residual, "residual_upper": self.residual_upper}


@dataclass(frozen=True)
class SearchResult:
    solutions: list
    undecided: list
    L: int
    s: int
    X: float
    candidates: int
    truncated: bool = False

    def to_json(self) -> dict:
        return {"X": self.X, "L": self.L, "s": self.s, "candidates": self.candidates,
                "truncated": self.truncated, "count": len(self.solutions),
                "undecided": [r.to_json() for r in self.undecided]}


def default_L(cfg: CoefficientConfig, X: float, s: int) -> int:
    """floor(log2(eps X / 2M)) over the first s mus, clamped to at least 1."""
    mu_norm = sum(abs(m.interval(20).mid) for m in cfg.mus[:s])
    ratio = float(cfg.epsilon) * X / (2 * mu_norm)
    if ratio < 2:
        return 1
    L = int(math.floor(math.log2(ratio)))
    while 2 ** (L + 1) <= ratio:
        L += 1
    while 2**L > ratio:
        L -= 1
    return max(L, 1)


class _Evaluator:
    """Interval evaluation of the linear form, with coefficient intervals cached per precision."""

    def __init__(self, cfg: CoefficientConfig, s: int):
        self.cfg = cfg
        self.s = s
        self._cache: dict[int, tuple] = {}

    def coeffs(self, d: int):
        if d not in self._cache:
            c = self.cfg
            self._cache[d] = (c.lambda1.interval(d), c.lambda2.interval(d),
                              tuple(m.interval(d) for m in c.mus[: self.s]),
                              c.gamma.interval(d), c.eta.interval(d))
        return self._cache[d]

    def value(self, p1: int, p2: int, ms, d: int) -> RealInterval:
        l1, l2, mus, gamma, _ = self.coeffs(d)
        v = l1 * p1 + l2 * p2 + gamma
        for mu, m in zip(mus, ms):
            v = v + mu * (2**m)
        return v

    def decide(self, p1: int, p2: int, ms, d: int, max_d: int = MAX_PRECISION):
        """(verdict, value interval) with verdict True, False or None (undecided)."""
        while True:
            v = self.value(p1, p2, ms, d)
            r = v.abs()
            eta = self.coeffs(d)[4]
            if r.certainly_lt(eta):
                return True, v
            if not r.lo < eta.hi:  # residual >= eta everywhere
                return False, v
            if d >= max_d:
                return None, v
            d = min(2 * d, max_d)


def _floats(cfg: CoefficientConfig, s: int):
    return (cfg.lambda1.interval(20).mid, cfg.lambda2.interval(20).mid,
            [m.interval(20).mid for m in cfg.mus[:s]], cfg.gamma.interval(20).mid,
            cfg.eta.interval(20).mid)


def _candidates(cfg, p1s: np.ndarray, primes: np.ndarray, L: int, s: int):
    """Yield (p1, p2, ms) whose float residual is within eta plus a safety margin."""
    l1, l2, mus, gamma, eta = _floats(cfg, s)
    fp = primes.astype(np.float64)
    f1 = p1s.astype(np.float64)
    scale = (abs(l1) + abs(l2)) * max(float(primes[-1]), 1.0) + sum(abs(m) for m in mus) * 2**L + abs(gamma)
    slack = eta + FLOAT_MARGIN * (1 + scale)
    for ms in itertools.product(range(1, L + 1), repeat=s):
        c = gamma + sum(mu * 2.0**m for mu, m in zip(mus, ms))
        base = l1 * f1 + c
        a = (-slack - base) / l2
        b = (slack - base) / l2
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        start = np.searchsorted(fp, lo, side="left")
        stop = np.searchsorted(fp, hi, side="right")
        for i in np.nonzero(stop > start)[0]:
            for j in range(start[i], stop[i]):
                yield int(p1s[i]), int(primes[j]), ms


def _format(v: RealInterval, digits: int) -> tuple[str, str, str]:
    r = v.abs()
    places = max(digits - 5, 10)
    mid = RealInterval.exact((v.lo_fraction + v.hi_fraction) / 2, digits)
    rmid = RealInterval.exact((r.lo_fraction + r.hi_fraction) / 2, digits)
    return mid.decimal_bounds(places)[0], rmid.decimal_bounds(places)[0], r.decimal_bounds(places)[1]


def _scan(args):
    cfg, p1s, primes, L, s, precision, materialize, cand_budget = args
    ev = _Evaluator(cfg, s)
    ev.coeffs(precision)
    sols, und = [], []
    seen = 0
    for p1, p2, ms in _candidates(cfg, p1s, primes, L, s):
        seen += 1
        if seen > cand_budget:
            return sols, und, seen, True
        verdict, v = ev.decide(p1, p2, ms, precision)
        if verdict is False:
            continue
        if materialize or verdict is None:
            val, res, up = _format(v, v.precision)
            rec = SolutionRecord(p1, p2, ms, val, res, up)
        else:
            rec = SolutionRecord(p1, p2, ms)
        (sols if verdict else und).append(rec)
    return sols, und, seen, False


def _prepare(cfg: CoefficientConfig, X: float, s: int | None, L: int | None, precision: int):
    check_precision(precision)
    s = cfg.s if s is None else int(s)
    if not 1 <= s <= cfg.s:
        raise DomainError(f"s = {s} must lie in [1, {cfg.s}] (number of mus)")
    if X > MAX_X:
        raise ResourceError(f"X = {X} exceeds the search cap X <= {MAX_X}", limit=MAX_X, partial=[])
    if cfg.lambda2.interval(30).contains(0):
        raise DomainError("lambda2 must be nonzero")
    L = default_L(cfg, X, s) if L is None else int(L)
    if L < 1:
        raise DomainError("L must be >= 1")
    primes = primes_between(float(cfg.epsilon) * X, X)
    effort = len(primes) ** 2 * L**s
    if effort > EFFORT_BUDGET:
        raise ResourceError(f"pi(X)^2 L^s = {effort} exceeds the budget {EFFORT_BUDGET}",
                            limit=EFFORT_BUDGET, partial=[])
    return s, L, primes


def _run(cfg, X, s, L, precision, materialize, jobs):
    s, L, primes = _prepare(cfg, X, s, L, precision)
    if len(primes) == 0:
        return SearchResult([], [], L, s, X, 0)
    jobs = max(1, int(jobs or 1))
    parts = [p for p in np.array_split(primes, min(jobs, len(primes))) if len(p)]
    tasks = [(cfg, p, primes, L, s, precision, materialize, CANDIDATE_BUDGET) for p in parts]
    if jobs == 1 or len(tasks) == 1:
        outs = [_scan(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outs = list(pool.map(_scan, tasks))
    sols = sorted(r for o in outs for r in o[0])
    und = sorted(r for o in outs for r in o[1])
    seen = sum(o[2] for o in outs)
    if any(o[3] for o in outs):
        raise ResourceError(f"candidate budget {CANDIDATE_BUDGET} per worker exhausted",
                            limit=CANDIDATE_BUDGET, partial=sols)
    return SearchResult(sols, und, L, s, X, seen)


def find_solutions(cfg: CoefficientConfig, X: float, s: int | None = None, limit: int | None = None,
                   L: int | None = None, precision: int = DEFAULT_DIGITS, jobs: int = 1) -> SearchResult:
    """All certified solutions with eps X <= p1, p2 <= X and 1 <= m_i <= L, in lexicographic order.

    ``limit`` keeps the first ``limit`` solutions of that order.  L defaults
    to :func:`default_L`.
    """
    res = _run(cfg, X, s, L, precision, True, jobs)
    if limit is not None:
        res = SearchResult(res.solutions[: int(limit)], res.undecided, res.L, res.s, res.X,
                           res.candidates, len(res.solutions) > int(limit))
    return res


def count_n(cfg: CoefficientConfig, X: float, s: int | None = None, L: int | None = None,
            precision: int = DEFAULT_DIGITS, jobs: int = 1) -> dict:
    res = _run(cfg, X, s, L, precision, False, jobs)
    return {"X": X, "L": res.L, "s": res.s, "count": len(res.solutions), "undecided": len(res.undecided)}


def verify(record: SolutionRecord, cfg: CoefficientConfig, precision: int = 2 * DEFAULT_DIGITS) -> bool:
    """Independent re-evaluation: residual < eta certified at ``precision``."""
    ev = _Evaluator(cfg, len(record.ms))
    verdict, _ = ev.decide(record.p1, record.p2, record.ms, precision, max_d=precision)
    return verdict is True


def density_report(cfg: CoefficientConfig, X_grid, s: int | None = None, L: int | None = None,
                   precision: int = DEFAULT_DIGITS, jobs: int = 1) -> list[dict]:
    """Rows {X, count, undecided, reference = eta X (log X)^(s-2), ratio} for trend inspection."""
    eta = cfg.eta.interval(20).mid
    rows = []
    for X in X_grid:
        c = count_n(cfg, X, s, L, precision, jobs)
        ref = eta * X * math.log(X) ** (c["s"] - 2)
        rows.append({"X": X, "L": c["L"], "count": c["count"], "undecided": c["undecided"],
                     "reference": ref, "ratio": c["count"] / ref if ref > 0 else None})
    return rows
