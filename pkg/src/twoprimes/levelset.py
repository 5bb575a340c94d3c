"""Certified measure of the level set {alpha in (0,1) : |G(alpha)| > nu L}.

Cells are dyadic subintervals of (0, 1).  |G| is Lipschitz with constant
2 pi (2^(L+1) - 2), so one evaluation at the midpoint decides a cell whenever
the distance to the threshold exceeds half the cell width times that
constant.  Undecided cells are bisected until they are narrower than ``tol``.
Midpoints are dyadic, so the phases 2^m alpha mod 1 are exact in binary
floating point; only the final cos/sin carry rounding, covered by
``FLOAT_SLACK``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .expsums import TWO_PI

MAX_L = 24
FLOAT_SLACK = 1e-12
DEFAULT_CELL_BUDGET = 60_000_000


@dataclass(frozen=True)
class LevelSetEstimate:
    L: int
    nu: float
    measure_lo: float
    measure_hi: float
    cells_resolved: int
    lipschitz_bound: float
    tol: float = 0.0
    budget_exhausted: bool = False

    def to_json(self) -> dict:
        return {"L": self.L, "nu": self.nu, "measure_lo": self.measure_lo, "measure_hi": self.measure_hi,
                "cells_resolved": self.cells_resolved, "lipschitz_bound": self.lipschitz_bound,
                "tol": self.tol, "budget_exhausted": self.budget_exhausted}


def lipschitz_constant(L: int) -> float:
    return TWO_PI * (2 ** (L + 1) - 2)


def _abs_g(mid: np.ndarray, L: int) -> np.ndarray:
    frac = mid.copy()
    re = np.zeros_like(mid)
    im = np.zeros_like(mid)
    for _ in range(L):
        frac = np.mod(2.0 * frac, 1.0)
        ang = TWO_PI * frac
        re += np.cos(ang)
        im += np.sin(ang)
    return np.hypot(re, im)


def level_set_measure(L: int, nu: float, tol: float = 1e-7,
                      cell_budget: int = DEFAULT_CELL_BUDGET) -> LevelSetEstimate:
    """Lower and upper bounds on |{alpha in (0,1) : |G(alpha)| > nu L}|."""
    if not 1 <= L <= MAX_L:
        raise DomainError(f"L must lie in [1, {MAX_L}], got {L}")
    if not 0 < nu <= 1:
        raise DomainError(f"nu must lie in (0, 1], got {nu}")
    if not 2.0**-45 <= tol < 1:
        raise DomainError("tol must lie in [2^-45, 1)")
    lip = lipschitz_constant(L)
    threshold = nu * L
    # cells wider than 2L/lip can never be decided, so start at that scale
    depth = max(1, min(int(math.ceil(math.log2(lip / (2 * L)))), 22))
    width = 2.0**-depth
    left = np.arange(2**depth, dtype=np.float64) * width
    inside = 0.0
    resolved = 0
    evaluated = 0
    exhausted = False
    while True:
        g = _abs_g(left + width / 2, L)
        evaluated += len(left)
        margin = lip * width / 2 + FLOAT_SLACK * L
        is_in = g - margin > threshold
        is_out = g + margin < threshold
        inside += np.count_nonzero(is_in) * width
        resolved += int(np.count_nonzero(is_in) + np.count_nonzero(is_out))
        left = left[~(is_in | is_out)]
        if len(left) == 0 or width < tol:
            break
        if evaluated + 2 * len(left) > cell_budget:
            exhausted = True
            break
        width /= 2
        left = np.concatenate([left, left + width])
    undecided = len(left) * width
    return LevelSetEstimate(L, float(nu), float(inside), float(min(1.0, inside + undecided)),
                            resolved, lip, tol, exhausted)


def decay_report(nu: float, L_values, tol: float = 1e-7) -> dict:
    """Level-set bounds over a range of L and the fitted exponent of measure_hi in X ~ 2^L."""
    rows = [level_set_measure(L, nu, tol).to_json() for L in L_values]
    xs = np.array([r["L"] * math.log(2) for r in rows])
    ys = np.array([r["measure_hi"] for r in rows])
    positive = ys > 0
    report = {"nu": nu, "tol": tol, "rows": rows, "fitted_exponent": None, "note": ""}
    if np.count_nonzero(positive) >= 2:
        slope, _ = np.polyfit(xs[positive], np.log(ys[positive]), 1)
        report["fitted_exponent"] = float(slope)
    else:
        report["note"] = "degenerate fit: fewer than two positive measures"
    return report
