"""Norm-product profiles and the Rademacher-complexity bound formulas.

Three bounds share the shape  const * B * n^{-1/2} * P_F(D) * (sum term):

  main       15 * B * n^{-1/2} * P_F(D) * sqrt(sum_{d=0}^{D-1} R(d))
  composite   5 * B * n^{-1/2} * P_F(D) * sum_i R(d_{i-1}) sqrt(d_i - d_{i-1})
  baseline    composite at the one-step subsequence (0, D), i.e. 5B n^{-1/2} P_F(D) sqrt(D)

Products are accumulated in log-space so deep networks with large or tiny
per-layer caps cannot overflow intermediates; only a non-finite final value
raises. The 1/sqrt(n) factor is applied outside the exponential, which makes
"quadruple n, halve the bound" hold bit-exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericError, StructureError
from .norms import NormBudget
from .subseq import subsequence_cost

BOUND_METHODS = ("main", "composite", "baseline", "optimal")


@dataclass(frozen=True)
class NormProfile:
    """Cumulative cap products P_F(d), P_op(d) and their ratios R(d), d = 0..D.

    The log arrays are the source of truth for the products. R is a running
    product of the per-layer ratios M_op(m)/M_F(m), each <= 1, so it is exactly
    nonincreasing from R(0) = 1 and cannot overflow.
    """

    log_P_F: np.ndarray
    log_P_op: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        lf = np.asarray(self.log_P_F, dtype=float)
        lo = np.asarray(self.log_P_op, dtype=float)
        r = np.asarray(self.R, dtype=float)
        if not (lf.ndim == 1 and lf.shape == lo.shape == r.shape and lf.size >= 2):
            raise StructureError("profile arrays must share one length D+1 >= 2")
        if lf[0] != 0.0 or lo[0] != 0.0 or r[0] != 1.0:
            raise StructureError("profile must start at P_F(0) = P_op(0) = R(0) = 1")
        if not (np.all(np.isfinite(lf)) and np.all(np.isfinite(lo)) and np.all(np.isfinite(r))):
            raise NumericError("profile entries must be finite")
        for arr in (lf, lo, r):
            arr.setflags(write=False)
        object.__setattr__(self, "log_P_F", lf)
        object.__setattr__(self, "log_P_op", lo)
        object.__setattr__(self, "R", r)

    @property
    def depth(self) -> int:
        return self.log_P_F.shape[0] - 1

    @property
    def P_F(self) -> np.ndarray:
        with np.errstate(over="ignore"):  # saturating to inf here is fine by design
            return np.exp(self.log_P_F)

    @property
    def P_op(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_P_op)


def norm_profile(budget: NormBudget) -> NormProfile:
    """Products and ratios of the budget caps (empty product = 1)."""
    log_pf = np.concatenate(([0.0], np.cumsum(np.log(budget.M_F))))
    log_pop = np.concatenate(([0.0], np.cumsum(np.log(budget.M_op))))
    ratios = np.concatenate(([1.0], np.cumprod(budget.M_op / budget.M_F)))
    return NormProfile(log_pf, log_pop, ratios)


def _check_n(n) -> int:
    if n != int(n) or int(n) < 1:
        raise StructureError(f"n must be a positive integer, got {n}")
    return int(n)


def _check_B(B) -> float:
    B = float(B)
    if not (np.isfinite(B) and B > 0.0):
        raise NumericError(f"B must be positive and finite, got {B}")
    return B


def _bound_value(constant: float, sum_term: float, profile: NormProfile, n: int, B: float) -> float:
    log_val = math.log(constant) + math.log(B) + float(profile.log_P_F[-1]) + math.log(sum_term)
    try:
        value = math.exp(log_val) / math.sqrt(n)
    except OverflowError:
        raise NumericError("bound value overflows double precision") from None
    if not math.isfinite(value) or value <= 0.0:
        raise NumericError(f"bound value {value} left the positive double range")
    return value


def main_bound(profile: NormProfile, n: int, B: float) -> float:
    """15 B n^{-1/2} P_F(D) sqrt(R(0) + ... + R(D-1))."""
    n = _check_n(n)
    B = _check_B(B)
    sum_r = float(np.sum(profile.R[:-1]))
    return _bound_value(15.0, math.sqrt(sum_r), profile, n, B)


def composite_bound(profile: NormProfile, seq, n: int, B: float) -> float:
    """5 B n^{-1/2} P_F(D) sum_i R(d_{i-1}) sqrt(d_i - d_{i-1}) for breakpoints seq."""
    n = _check_n(n)
    B = _check_B(B)
    cost = subsequence_cost(profile, seq)
    return _bound_value(5.0, cost, profile, n, B)


def baseline_bound(profile: NormProfile, n: int, B: float) -> float:
    """The one-step case: composite at (0, D), i.e. 5 B n^{-1/2} P_F(D) sqrt(D)."""
    return composite_bound(profile, (0, profile.depth), n, B)


@dataclass(frozen=True)
class BoundReport:
    """One evaluated bound plus the context needed to reproduce it."""

    method: str
    value: float
    n: int
    B: float
    subsequence: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.method not in BOUND_METHODS:
            raise StructureError(f"method must be one of {BOUND_METHODS}, got {self.method!r}")
        if not (math.isfinite(self.value) and self.value > 0.0):
            raise NumericError(f"bound value must be positive and finite, got {self.value}")
        needs_seq = self.method in ("composite", "optimal")
        if needs_seq != (self.subsequence is not None):
            raise StructureError(
                f"subsequence must be present exactly for composite/optimal, method={self.method!r}"
            )
        if self.subsequence is not None:
            object.__setattr__(self, "subsequence", tuple(int(d) for d in self.subsequence))

    def as_dict(self) -> dict:
        out = {"method": self.method, "value": self.value, "n": self.n, "B": self.B}
        if self.subsequence is not None:
            out["subsequence"] = list(self.subsequence)
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict())
