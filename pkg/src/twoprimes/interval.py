"""Directed-rounding real intervals on top of mpmath's low-level float kernel.

Endpoints are raw ``mpmath.libmp`` tuples; every operation rounds the lower
endpoint toward -inf and the upper toward +inf at the working binary
precision.  Transcendental results receive one extra ulp of padding on each
side, so containment does not depend on the last-bit accuracy of the
underlying kernels.
"""

from __future__ import annotations

import math
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction
from typing import Union

from mpmath import libmp, mpf
from mpmath.libmp import (
    fzero,
    mpf_abs,
    mpf_add,
    mpf_div,
    mpf_exp,
    mpf_log,
    mpf_lt,
    mpf_le,
    mpf_mul,
    mpf_neg,
    mpf_sqrt,
    mpf_sub,
    round_ceiling,
    round_floor,
)

from .errors import ConfigurationError, DomainError

Number = Union[int, Fraction, "RealInterval"]

DEFAULT_DIGITS = 30


def digits_to_bits(digits: int) -> int:
    return int(math.ceil(digits * math.log2(10))) + 10


def _pad(x, prec, direction):
    """Move ``x`` one ulp (at ``prec`` bits) in ``direction`` (-1 or +1)."""
    if x == fzero:
        return x
    sign, man, exp, bc = x
    ulp = libmp.from_man_exp(1, exp + bc - prec)
    return mpf_add(x, ulp if direction > 0 else mpf_neg(ulp), prec + 8,
                   round_ceiling if direction > 0 else round_floor)


def _rational_bounds(q: Fraction, prec):
    lo = libmp.from_rational(q.numerator, q.denominator, prec, round_floor)
    hi = libmp.from_rational(q.numerator, q.denominator, prec, round_ceiling)
    return lo, hi


class RealInterval:
    """Closed interval [lo, hi] carried at ``precision`` significant decimal digits."""

    __slots__ = ("_lo", "_hi", "precision")

    def __init__(self, lo, hi, precision: int = DEFAULT_DIGITS):
        self._lo = lo
        self._hi = hi
        self.precision = precision
        if mpf_lt(hi, lo):
            raise ValueError(f"empty interval [{mpf(lo)}, {mpf(hi)}]")

    # -- construction -------------------------------------------------
    @classmethod
    def exact(cls, value, precision: int = DEFAULT_DIGITS) -> "RealInterval":
        """Tightest enclosure of an int, Fraction, decimal string or float."""
        if isinstance(value, RealInterval):
            return value.at(precision)
        if isinstance(value, float):
            value = Fraction(value)
        elif isinstance(value, str):
            value = Fraction(Decimal(value.strip()))
        q = Fraction(value)
        lo, hi = _rational_bounds(q, digits_to_bits(precision))
        return cls(lo, hi, precision)

    @classmethod
    def hull(cls, a, b, precision: int = DEFAULT_DIGITS) -> "RealInterval":
        a = cls.exact(a, precision)
        b = cls.exact(b, precision)
        lo = a._lo if mpf_le(a._lo, b._lo) else b._lo
        hi = b._hi if mpf_le(a._hi, b._hi) else a._hi
        return cls(lo, hi, precision)

    @classmethod
    def from_mpf_padded(cls, value, rel_error, precision: int = DEFAULT_DIGITS):
        """Enclose an mpmath value known only up to a relative error bound."""
        prec = digits_to_bits(precision)
        v = mpf(value)._mpf_
        err = mpf_mul(mpf_abs(v), libmp.from_float(float(rel_error)), prec, round_ceiling)
        return cls(mpf_sub(v, err, prec, round_floor), mpf_add(v, err, prec, round_ceiling), precision)

    @classmethod
    def pi(cls, precision: int = DEFAULT_DIGITS):
        prec = digits_to_bits(precision)
        return cls(_pad(libmp.mpf_pi(prec, round_floor), prec, -1),
                   _pad(libmp.mpf_pi(prec, round_ceiling), prec, 1), precision)

    @classmethod
    def ln2(cls, precision: int = DEFAULT_DIGITS):
        prec = digits_to_bits(precision)
        return cls(_pad(libmp.mpf_ln2(prec, round_floor), prec, -1),
                   _pad(libmp.mpf_ln2(prec, round_ceiling), prec, 1), precision)

    # -- accessors ----------------------------------------------------
    @property
    def prec(self) -> int:
        return digits_to_bits(self.precision)

    @property
    def lo(self) -> mpf:
        return mpf(self._lo)

    @property
    def hi(self) -> mpf:
        return mpf(self._hi)

    @property
    def lo_fraction(self) -> Fraction:
        return _to_fraction(self._lo)

    @property
    def hi_fraction(self) -> Fraction:
        return _to_fraction(self._hi)

    @property
    def width(self) -> mpf:
        return mpf(mpf_sub(self._hi, self._lo, self.prec, round_ceiling))

    @property
    def mid(self) -> float:
        return float((self.lo_fraction + self.hi_fraction) / 2)

    def relative_width(self) -> float:
        m = abs(self.mid)
        return float(self.width) / m if m else float("inf")

    def at(self, precision: int) -> "RealInterval":
        """Same interval relabelled (and if coarser, outward-rounded) to ``precision``."""
        prec = digits_to_bits(precision)
        return RealInterval(libmp.mpf_pos(self._lo, prec, round_floor),
                            libmp.mpf_pos(self._hi, prec, round_ceiling), precision)

    # -- predicates ---------------------------------------------------
    def contains(self, x) -> bool:
        if isinstance(x, RealInterval):
            return mpf_le(self._lo, x._lo) and mpf_le(x._hi, self._hi)
        x = Fraction(Decimal(x)) if isinstance(x, str) else Fraction(x)
        return self.lo_fraction <= x <= self.hi_fraction

    def subset_of_open(self, a, b) -> bool:
        """True when the interval lies strictly inside the open interval (a, b)."""
        a = Fraction(Decimal(a)) if isinstance(a, str) else Fraction(a)
        b = Fraction(Decimal(b)) if isinstance(b, str) else Fraction(b)
        return a < self.lo_fraction and self.hi_fraction < b

    def intersects(self, other: "RealInterval") -> bool:
        return mpf_le(self._lo, other._hi) and mpf_le(other._lo, self._hi)

    def certainly_lt(self, other) -> bool:
        other = _coerce(other, self.precision)
        return mpf_lt(self._hi, other._lo)

    def certainly_gt(self, other) -> bool:
        other = _coerce(other, self.precision)
        return mpf_lt(other._hi, self._lo)

    def __contains__(self, x) -> bool:
        return self.contains(x)

    # -- arithmetic ---------------------------------------------------
    def _p(self, other):
        return max(self.precision, other.precision)

    def __add__(self, other):
        other = _coerce(other, self.precision)
        d = self._p(other)
        prec = digits_to_bits(d)
        return RealInterval(mpf_add(self._lo, other._lo, prec, round_floor),
                            mpf_add(self._hi, other._hi, prec, round_ceiling), d)

    __radd__ = __add__

    def __neg__(self):
        return RealInterval(mpf_neg(self._hi), mpf_neg(self._lo), self.precision)

    def __sub__(self, other):
        other = _coerce(other, self.precision)
        d = self._p(other)
        prec = digits_to_bits(d)
        return RealInterval(mpf_sub(self._lo, other._hi, prec, round_floor),
                            mpf_sub(self._hi, other._lo, prec, round_ceiling), d)

    def __rsub__(self, other):
        return _coerce(other, self.precision) - self

    def __mul__(self, other):
        other = _coerce(other, self.precision)
        d = self._p(other)
        prec = digits_to_bits(d)
        pairs = [(self._lo, other._lo), (self._lo, other._hi),
                 (self._hi, other._lo), (self._hi, other._hi)]
        lows = [mpf_mul(a, b, prec, round_floor) for a, b in pairs]
        highs = [mpf_mul(a, b, prec, round_ceiling) for a, b in pairs]
        return RealInterval(_min(lows), _max(highs), d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other, self.precision)
        if not (mpf_lt(fzero, other._lo) or mpf_lt(other._hi, fzero)):
            raise DomainError("division by an interval containing zero")
        d = self._p(other)
        prec = digits_to_bits(d)
        pairs = [(self._lo, other._lo), (self._lo, other._hi),
                 (self._hi, other._lo), (self._hi, other._hi)]
        lows = [mpf_div(a, b, prec, round_floor) for a, b in pairs]
        highs = [mpf_div(a, b, prec, round_ceiling) for a, b in pairs]
        return RealInterval(_min(lows), _max(highs), d)

    def __rtruediv__(self, other):
        return _coerce(other, self.precision) / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise TypeError("only nonnegative integer powers are supported")
        result = RealInterval.exact(1, self.precision)
        base = self
        if n % 2 == 0 and mpf_lt(self._lo, fzero) and mpf_lt(fzero, self._hi):
            # even power of an interval straddling zero
            m = self.abs()
            hi = (RealInterval(m._hi, m._hi, self.precision) ** n)._hi
            return RealInterval(fzero, hi, self.precision)
        if n % 2 == 0 and mpf_le(self._hi, fzero):
            base = -self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def abs(self) -> "RealInterval":
        if mpf_le(fzero, self._lo):
            return self
        if mpf_le(self._hi, fzero):
            return -self
        hi = self._hi if mpf_le(mpf_neg(self._lo), self._hi) else mpf_neg(self._lo)
        return RealInterval(fzero, hi, self.precision)

    def log(self) -> "RealInterval":
        if not mpf_lt(fzero, self._lo):
            raise DomainError("log of an interval not strictly positive")
        prec = self.prec
        return RealInterval(_pad(mpf_log(self._lo, prec, round_floor), prec, -1),
                            _pad(mpf_log(self._hi, prec, round_ceiling), prec, 1), self.precision)

    def exp(self) -> "RealInterval":
        prec = self.prec
        lo = _pad(mpf_exp(self._lo, prec, round_floor), prec, -1)
        if mpf_lt(lo, fzero):
            lo = fzero
        return RealInterval(lo, _pad(mpf_exp(self._hi, prec, round_ceiling), prec, 1), self.precision)

    def sqrt(self) -> "RealInterval":
        if mpf_lt(self._lo, fzero):
            raise DomainError("sqrt of an interval with negative part")
        prec = self.prec
        return RealInterval(mpf_sqrt(self._lo, prec, round_floor),
                            mpf_sqrt(self._hi, prec, round_ceiling), self.precision)

    # -- output -------------------------------------------------------
    def decimal_bounds(self, places: int) -> tuple[str, str]:
        """Lower bound rounded down and upper bound rounded up to ``places`` decimals."""
        q = Decimal(1).scaleb(-places)
        with localcontext() as ctx:
            ctx.prec = self.precision + 60
            lo = self.lo_fraction
            hi = self.hi_fraction
            dlo = (Decimal(lo.numerator) / Decimal(lo.denominator)).quantize(q, rounding=ROUND_FLOOR)
            dhi = (Decimal(hi.numerator) / Decimal(hi.denominator)).quantize(q, rounding=ROUND_CEILING)
        return str(dlo), str(dhi)

    def to_json(self, places: int | None = None) -> dict:
        places = self.precision if places is None else places
        lo, hi = self.decimal_bounds(places)
        return {"lo": lo, "hi": hi, "precision": self.precision}

    def __repr__(self) -> str:
        lo = libmp.to_str(self._lo, 17)
        hi = libmp.to_str(self._hi, 17)
        return f"RealInterval([{lo}, {hi}], digits={self.precision})"

    def __float__(self) -> float:
        return self.mid


def _to_fraction(x) -> Fraction:
    p, q = libmp.to_rational(x)
    return Fraction(int(p), int(q))


def _coerce(x, precision) -> RealInterval:
    if isinstance(x, RealInterval):
        return x
    return RealInterval.exact(x, precision)


def _min(values):
    best = values[0]
    for v in values[1:]:
        if mpf_lt(v, best):
            best = v
    return best


def _max(values):
    best = values[0]
    for v in values[1:]:
        if mpf_lt(best, v):
            best = v
    return best


def check_precision(digits: int, minimum: int = 15) -> int:
    if int(digits) < minimum:
        raise ConfigurationError(f"precision {digits} digits is below the minimum of {minimum}")
    return int(digits)


def euler_gamma(precision: int = DEFAULT_DIGITS) -> RealInterval:
    """Euler's constant from a 50-digit literal, padded by one ulp at working precision."""
    g = RealInterval.exact(EULER_GAMMA_50, max(precision, 50))
    prec = digits_to_bits(precision)
    lo = _pad(libmp.mpf_pos(g._lo, prec, round_floor), prec, -1)
    hi = _pad(libmp.mpf_pos(g._hi, prec, round_ceiling), prec, 1)
    # literal truncation error is below 1e-50
    tail = libmp.from_rational(1, 10**50, prec, round_ceiling)
    return RealInterval(mpf_sub(lo, tail, prec, round_floor), mpf_add(hi, tail, prec, round_ceiling), precision)


EULER_GAMMA_50 = "0.57721566490153286060651209008240243104215933593992"
