"""Representation counts for differences of sums of powers of two and the
Khalfalah-Pintz sums S(k, L) built from them."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError, ResourceError
from .interval import RealInterval
from .ntcore import FactorBudget
from .singular import default_c0, sprime_of

MAX_K = 3
MAX_L = 64
# convolution work (product of supports) allowed before refusing
CONVOLUTION_BUDGET = 5 * 10**7


@dataclass(frozen=True)
class RepTable:
    k: int
    L: int
    counts: dict = field(repr=False)

    def __getitem__(self, m: int) -> int:
        return self.counts.get(m, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def nonzero(self):
        return sorted((m, c) for m, c in self.counts.items() if m != 0)

    def to_json(self) -> str:
        body = {"k": self.k, "L": self.L,
                "counts": [[m, c] for m, c in sorted(self.counts.items()) if c]}
        return json.dumps(body, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "RepTable":
        body = json.loads(text)
        return cls(body["k"], body["L"], {int(m): int(c) for m, c in body["counts"]})


def _convolve(a: Counter, b: Counter) -> Counter:
    out: Counter = Counter()
    for x, cx in a.items():
        for y, cy in b.items():
            out[x + y] += cx * cy
    return out


def _check(k: int, L: int, max_k: int, max_L: int):
    if k < 1 or L < 1:
        raise DomainError(f"need k >= 1 and L >= 1, got k={k}, L={L}")
    if k > max_k or L > max_L:
        raise ResourceError(f"k={k}, L={L} exceeds the enumeration cutoff k<={max_k}, L<={max_L}",
                            limit=(max_k, max_L))


def rep_table(k: int, L: int, max_k: int = MAX_K, max_L: int = MAX_L,
              budget: int = CONVOLUTION_BUDGET) -> RepTable:
    """r_{k,k}(m): number of (u, v) in [1, L]^2k with sum 2^u_i - sum 2^v_i = m.

    Built by convolving the k-fold positive power-of-two distribution with
    its mirror image, keeping only attained values.
    """
    _check(k, L, max_k, max_L)
    single = Counter({2**u: 1 for u in range(1, L + 1)})
    pos = single
    for _ in range(k - 1):
        if len(pos) * len(single) > budget:
            raise ResourceError("convolution budget exceeded", limit=budget)
        pos = _convolve(pos, single)
    neg = Counter({-x: c for x, c in pos.items()})
    if len(pos) * len(neg) > budget:
        raise ResourceError(f"convolution of supports {len(pos)} x {len(neg)} exceeds budget {budget}",
                            limit=budget)
    return RepTable(k, L, dict(_convolve(pos, neg)))


def sprime_sum(table: RepTable, precision: int, factor_budget: FactorBudget | None = None):
    """sum_{m != 0} r(m) S'(|m|) as an interval; returns (interval, all_complete)."""
    exact = Fraction(0)
    loose = RealInterval.exact(0, precision)
    complete = True
    for m, c in table.counts.items():
        if m == 0 or c == 0:
            continue
        v = sprime_of(m, precision, factor_budget)
        if v.complete:
            exact += c * v.sprime_exact
        else:
            complete = False
            loose = loose + c * v.sprime_interval
    return RealInterval.exact(exact, precision) + loose, complete


def s_kl(k: int, L: int, c0: RealInterval | None = None,
         factor_budget: FactorBudget | None = None) -> RealInterval:
    """S(k, L) = sum_{m != 0} r_{k,k}(m) S(m), with S(m) = 2 c0 S'(m)."""
    c0 = c0 or default_c0()
    total, _ = sprime_sum(rep_table(k, L), c0.precision, factor_budget)
    return 2 * c0 * total


def s1_closed(L: int, c0: RealInterval | None = None,
              factor_budget: FactorBudget | None = None) -> RealInterval:
    """S(1, L) = 2 sum_{d=1}^{L-1} (L - d) S(2^d - 1).

    Each nonzero difference 2^u - 2^v equals +-2^min(u,v) (2^d - 1) with
    d = |u - v|, and S is blind to powers of two.
    """
    if L < 2:
        raise DomainError("s1_closed needs L >= 2")
    c0 = c0 or default_c0()
    d_prec = c0.precision
    exact = Fraction(0)
    loose = RealInterval.exact(0, d_prec)
    for d in range(1, L):
        v = sprime_of(2**d - 1, d_prec, factor_budget)
        if v.complete:
            exact += (L - d) * v.sprime_exact
        else:
            loose = loose + (L - d) * v.sprime_interval
    total = RealInterval.exact(exact, d_prec) + loose
    return 4 * c0 * total


def a_estimate(k: int, L: int, c0: RealInterval | None = None,
               factor_budget: FactorBudget | None = None) -> RealInterval:
    """S(k, L) / (2 L^{2k}) - 1, the finite-L proxy for A(k)."""
    c0 = c0 or default_c0()
    if k == 1 and L >= 2:
        s = s1_closed(L, c0, factor_budget)
    else:
        s = s_kl(k, L, c0, factor_budget)
    return s / (2 * L ** (2 * k)) - 1


def a1_curve(L_values, c0: RealInterval | None = None) -> list[dict]:
    """Rows (L, S(1,L), A-estimate) for the CSV emitter."""
    c0 = c0 or default_c0()
    rows = []
    for L in L_values:
        s = s1_closed(L, c0)
        a = s / (2 * L * L) - 1
        rows.append({"L": L, "S_lo": s.decimal_bounds(15)[0], "S_hi": s.decimal_bounds(15)[1],
                     "a_lo": a.decimal_bounds(15)[0], "a_hi": a.decimal_bounds(15)[1]})
    return rows
