"""Layer-breakpoint subsequences and their cost.

A subsequence 0 = d_0 < d_1 < ... < d_k = D selects where the layer-peeling
bound restarts; its cost is sum_i R(d_{i-1}) sqrt(d_i - d_{i-1}). Three
constructions live here: the dyadic rule (d_i = first d with R(d) <= 2^{-i}),
an exact O(D^2) dynamic program, and an exhaustive oracle for small D.
"""

from __future__ import annotations

from itertools import combinations
from math import sqrt
from typing import TYPE_CHECKING

import numpy as np

from .errors import StructureError

if TYPE_CHECKING:
    from .bounds import NormProfile

BRUTE_FORCE_DEPTH_CAP = 20

# Thresholds 2^{-i} underflow to zero around i = 1075; past that the dyadic
# construction must close with D no matter what R(D) is.
_DYADIC_INDEX_CAP = 1100


def check_subsequence(seq, depth: int) -> tuple[int, ...]:
    """Validate breakpoints 0 = d_0 < ... < d_k = depth and return them as ints."""
    out = []
    for d in seq:
        if float(d) != int(d):
            raise StructureError(f"breakpoints must be integers, got {d!r}")
        out.append(int(d))
    if len(out) < 2:
        raise StructureError("a subsequence needs at least the two endpoints 0 and D")
    if out[0] != 0 or out[-1] != depth:
        raise StructureError(f"breakpoints must run from 0 to {depth}, got {out[0]}..{out[-1]}")
    for a, b in zip(out[:-1], out[1:]):
        if b <= a:
            raise StructureError(f"breakpoints must be strictly increasing, got {a} then {b}")
    return tuple(out)


def subsequence_cost(profile: "NormProfile", seq) -> float:
    """sum_i R(d_{i-1}) * sqrt(d_i - d_{i-1})."""
    seq = check_subsequence(seq, profile.depth)
    R = profile.R
    return float(sum(R[a] * sqrt(b - a) for a, b in zip(seq[:-1], seq[1:])))


def dyadic_subsequence(profile: "NormProfile") -> tuple[int, ...]:
    """Breakpoints where R first crosses successive powers of 1/2.

    d_i is the minimal d with R(d) <= 2^{-i}. Once the threshold dips below
    R(D), or the candidate reaches D, the sequence is closed with D; duplicate
    candidates are collapsed so the breakpoints stay strictly increasing.
    """
    R = profile.R
    D = profile.depth
    neg_r = -R  # nondecreasing, so searchsorted can find the first crossing
    breaks = [0]
    i = 1
    while breaks[-1] < D:
        threshold = 2.0 ** -i
        if threshold == 0.0 or R[D] > threshold or i > _DYADIC_INDEX_CAP:
            breaks.append(D)
            break
        d = int(np.searchsorted(neg_r, -threshold, side="left"))
        if d >= D:
            breaks.append(D)
            break
        if d > breaks[-1]:
            breaks.append(d)
        i += 1
    return tuple(breaks)


def optimal_subsequence(profile: "NormProfile") -> tuple[int, ...]:
    """Exact minimizer of subsequence_cost via dynamic programming.

    C(0) = 0, C(d) = min_{d' < d} C(d') + R(d') sqrt(d - d'); O(D^2) time,
    O(D) space. Cost ties go to the smallest predecessor, so the output is
    deterministic and comparable against the brute-force oracle.
    """
    R = profile.R
    D = profile.depth
    cost = np.empty(D + 1)
    cost[0] = 0.0
    prev = np.zeros(D + 1, dtype=int)
    for d in range(1, D + 1):
        cand = cost[:d] + R[:d] * np.sqrt(np.arange(d, 0, -1, dtype=float))
        best = int(np.argmin(cand))  # argmin takes the first = smallest predecessor
        cost[d] = cand[best]
        prev[d] = best
    breaks = [D]
    while breaks[-1] != 0:
        breaks.append(int(prev[breaks[-1]]))
    return tuple(reversed(breaks))


def brute_force_subsequence(profile: "NormProfile") -> tuple[int, ...]:
    """Global minimizer by enumerating all 2^{D-1} breakpoint subsets.

    Oracle for the dynamic program; refuses D > 20. Ties are broken exactly
    like the DP: among equal-cost sequences the one whose reversed breakpoint
    list is lexicographically smallest wins (= smallest predecessor at every
    backtracking step).
    """
    D = profile.depth
    if D > BRUTE_FORCE_DEPTH_CAP:
        raise StructureError(
            f"brute force enumerates 2^(D-1) subsequences; D={D} exceeds the cap of {BRUTE_FORCE_DEPTH_CAP}"
        )
    R = profile.R
    best_seq = None
    best_key = None
    for k in range(D):
        for interior in combinations(range(1, D), k):
            seq = (0,) + interior + (D,)
            c = sum(R[a] * sqrt(b - a) for a, b in zip(seq[:-1], seq[1:]))
            key = (c, tuple(reversed(seq)))
            if best_key is None or key < best_key:
                best_key = key
                best_seq = seq
    return best_seq
