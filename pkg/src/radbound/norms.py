"""Matrix norms and tight per-layer budgets.

Frobenius norms are exact; operator norms (largest singular value) come from
power iteration on the Gram matrix, which is plenty for the small dense
matrices this package works with.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from .errors import (
    ConvergenceError,
    DegenerateBudgetError,
    NumericError,
    ShapeError,
    StructureError,
)

if TYPE_CHECKING:
    from .network import NetworkSpec

POWER_ITERATION_CAP = 10_000
DEFAULT_REL_TOL = 1e-10

# The start vector is all-ones plus a tiny fixed perturbation: still fully
# deterministic, but never exactly orthogonal to the top singular subspace
# (the pure all-ones vector can be, e.g. for [[1, -1], [0, 0]]).
_JITTER_SEED = 0xC0FFEE
_JITTER_SCALE = 1e-8


def _checked_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.size == 0:
        raise ShapeError(f"expected a non-empty 2-d matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NumericError("matrix contains non-finite entries")
    return M


def frobenius_norm(M) -> float:
    """Square root of the sum of squared entries."""
    return float(np.linalg.norm(_checked_matrix(M)))


def _start_vector(dim: int) -> np.ndarray:
    v = np.ones(dim)
    jitter = np.random.default_rng(_JITTER_SEED).standard_normal(dim)
    v += _JITTER_SCALE * jitter / np.linalg.norm(jitter)
    return v / np.linalg.norm(v)


def operator_norm(M, rel_tol: float = DEFAULT_REL_TOL, max_iter: int = POWER_ITERATION_CAP) -> float:
    """Largest singular value via power iteration on the Gram matrix.

    Deterministic for a fixed input. Stops once the Rayleigh-quotient estimate
    is stable to ``rel_tol`` (relative) on two consecutive iterations; raises
    ConvergenceError carrying the last estimate if the cap is hit first.
    """
    M = _checked_matrix(M)
    if not 0.0 < rel_tol <= 1e-3:
        raise ValueError(f"rel_tol must be in (0, 1e-3], got {rel_tol}")
    scale = float(np.linalg.norm(M))
    if scale == 0.0:
        return 0.0
    A = M / scale  # Gram entries stay well inside the double range
    G = A @ A.T if A.shape[0] <= A.shape[1] else A.T @ A

    v = _start_vector(G.shape[0])
    lam_prev = -np.inf
    stable = 0
    lam = 0.0
    for _ in range(max_iter):
        w = G @ v
        wn = float(np.linalg.norm(w))
        if wn == 0.0:
            # start landed in the null space; one deterministic random retry
            v = np.random.default_rng(_JITTER_SEED + 1).standard_normal(G.shape[0])
            v /= np.linalg.norm(v)
            w = G @ v
            wn = float(np.linalg.norm(w))
            if wn == 0.0:
                return 0.0  # G itself is zero to working precision
        v = w / wn
        lam = float(v @ (G @ v))
        if abs(lam - lam_prev) <= rel_tol * max(lam, np.finfo(float).tiny):
            stable += 1
            if stable >= 2:
                return scale * float(np.sqrt(lam))
        else:
            stable = 0
        lam_prev = lam
    raise ConvergenceError(
        f"power iteration did not reach rel_tol={rel_tol} within {max_iter} iterations",
        last_estimate=scale * float(np.sqrt(max(lam, 0.0))),
    )


@dataclass(frozen=True)
class NormBudget:
    """Per-layer Frobenius caps M_F, operator caps M_op, and input radius B.

    Requires M_op(m) <= M_F(m) for every m and strictly positive entries;
    together with B this pins down the network class the bounds refer to.
    """

    M_F: np.ndarray
    M_op: np.ndarray
    B: float

    def __post_init__(self):
        mf = np.asarray(self.M_F, dtype=float)
        mo = np.asarray(self.M_op, dtype=float)
        if mf.ndim != 1 or mf.size < 1 or mo.shape != mf.shape:
            raise StructureError(
                f"M_F and M_op must be equal-length 1-d arrays, got {mf.shape} and {mo.shape}"
            )
        if not (np.all(np.isfinite(mf)) and np.all(np.isfinite(mo))):
            raise NumericError("budget caps must be finite")
        if np.any(mf <= 0.0) or np.any(mo <= 0.0):
            raise DegenerateBudgetError("budget caps must be strictly positive")
        bad = np.nonzero(mo > mf)[0]
        if bad.size:
            raise StructureError(f"M_op must not exceed M_F (violated at layer {bad[0] + 1})")
        B = float(self.B)
        if not (np.isfinite(B) and B > 0.0):
            raise NumericError(f"radius B must be positive and finite, got {B}")
        mf.setflags(write=False)
        mo.setflags(write=False)
        object.__setattr__(self, "M_F", mf)
        object.__setattr__(self, "M_op", mo)
        object.__setattr__(self, "B", B)

    @property
    def depth(self) -> int:
        return self.M_F.shape[0]

    def scaled(self, c: float) -> "NormBudget":
        """Budget with every layer cap multiplied by c > 0 (B unchanged)."""
        if not (np.isfinite(c) and c > 0.0):
            raise NumericError(f"scale factor must be positive and finite, got {c}")
        return NormBudget(c * self.M_F, c * self.M_op, self.B)


def budget_from_network(net: "NetworkSpec", slack: float = 0.0, B: float = 1.0) -> NormBudget:
    """Tight budget read off a concrete network: caps = (1 + slack) * norms.

    M_op is clamped to M_F so the budget invariant holds even when the power
    iteration lands a hair above the Frobenius norm. Rejects all-zero layers,
    whose operator/Frobenius ratio would be 0/0.
    """
    if not (np.isfinite(slack) and slack >= 0.0):
        raise ValueError(f"slack must be nonnegative and finite, got {slack}")
    mf = []
    mo = []
    for m, W in enumerate(net.layers, start=1):
        f = frobenius_norm(W)
        if f == 0.0:
            raise DegenerateBudgetError(f"layer {m} is identically zero")
        o = operator_norm(W)
        cap_f = (1.0 + slack) * f
        cap_o = min((1.0 + slack) * o, cap_f)
        mf.append(cap_f)
        mo.append(cap_o)
    return NormBudget(np.array(mf), np.array(mo), B)


# --- JSON file format --------------------------------------------------------
#
# Budget: {"B": <real>, "M_F": [...], "M_op": [...]}


def save_budget(budget: NormBudget, path) -> None:
    payload = {"B": budget.B, "M_F": budget.M_F.tolist(), "M_op": budget.M_op.tolist()}
    Path(path).write_text(json.dumps(payload))


def load_budget(path) -> NormBudget:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict) or not {"B", "M_F", "M_op"} <= set(data):
        raise StructureError("budget file must be an object with 'B', 'M_F' and 'M_op' keys")
    return NormBudget(
        np.asarray(data["M_F"], dtype=float),
        np.asarray(data["M_op"], dtype=float),
        float(data["B"]),
    )
