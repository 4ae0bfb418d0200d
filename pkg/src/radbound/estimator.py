"""Empirical Rademacher-complexity estimation for fixed inputs.

The supremum over the norm-budgeted network class is approached from below
with projected gradient ascent (multiple seeded restarts over a few hidden
widths); sign vectors are either enumerated exactly (n <= 16) or sampled.
Every estimate is witnessed: the returned value is literally the correlation
of the returned network, which passes the membership check, so the estimate
can never overstate the true supremum.

Internally the ascent runs in normalized coordinates (per-layer caps scaled
to 1, inputs scaled to the unit ball) with unit-length gradient steps. This
makes the search behave identically across budget rescalings and keeps the
fixed step schedule meaningful for any cap magnitudes. Restarts are batched
into stacked arrays; each restart draws its own generator seeded by
(seed, sign-vector key, width index, restart), so results do not depend on
how branches are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, StructureError
from .network import MEMBERSHIP_RTOL, InputSet, NetworkSpec, forward_many
from .norms import NormBudget

MODES = ("exact", "monte_carlo")
EXACT_MODE_MAX_N = 16

_MC_STREAM_TAG = 0x5E0F  # keeps the sign-sampling stream away from ascent streams
_TINY = np.finfo(float).tiny


def _seed_word(seed: int) -> int:
    """Two's-complement view of a signed 64-bit seed; SeedSequence wants non-negatives."""
    return int(seed) & 0xFFFFFFFFFFFFFFFF


@dataclass(frozen=True)
class EstimatorConfig:
    """Knobs for the ascent and for the sign-vector averaging."""

    restarts: int = 20
    steps: int = 500
    step_size: float = 0.1
    widths: tuple[int, ...] = (1, 2, 4)
    seed: int = 0
    mode: str = "exact"
    mc_samples: int = 100

    def __post_init__(self):
        if self.restarts < 1 or self.steps < 1:
            raise StructureError("restarts and steps must be positive")
        if not (np.isfinite(self.step_size) and self.step_size > 0.0):
            raise StructureError(f"step_size must be positive, got {self.step_size}")
        widths = tuple(int(w) for w in self.widths)
        if not widths or any(w < 1 for w in widths):
            raise StructureError(f"widths must be a nonempty list of positive ints, got {self.widths}")
        object.__setattr__(self, "widths", widths)
        if self.mode not in MODES:
            raise StructureError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mc_samples < 1:
            raise StructureError("mc_samples must be positive")


@dataclass(frozen=True)
class SupEstimate:
    """A witnessed lower bound on the supremum for one sign vector."""

    value: float
    network: NetworkSpec


@dataclass(frozen=True)
class RademacherEstimate:
    """Average of witnessed per-sign-vector suprema; stderr is None in exact mode."""

    value: float
    stderr: float | None
    mode: str
    n: int
    seed: int
    witness: NetworkSpec

    def as_dict(self) -> dict:
        return {
            "estimate": self.value,
            "mode": self.mode,
            "n": self.n,
            "seed": self.seed,
            "stderr": self.stderr,
        }


def _check_signs(eps, n: int) -> np.ndarray:
    e = np.asarray(eps, dtype=float)
    if e.shape != (n,):
        raise ShapeError(f"sign vector must have shape ({n},), got {e.shape}")
    if not np.all(np.abs(e) == 1.0):
        raise StructureError("sign vector entries must be +1 or -1")
    return e


def _sign_key(e: np.ndarray) -> int:
    """Content-derived stream key: bit i is set when eps_i == -1."""
    return int(sum(1 << i for i, s in enumerate(e) if s < 0.0))


def correlation(net: NetworkSpec, inputs: InputSet, eps) -> float:
    """(1/n) * sum_i eps_i * f(x_i) for one fixed network."""
    if net.input_dim != inputs.dim:
        raise ShapeError(
            f"network expects dimension {net.input_dim}, inputs have dimension {inputs.dim}"
        )
    e = _check_signs(eps, inputs.n)
    return float(e @ forward_many(net, inputs.points)) / inputs.n


def project_to_budget(net: NetworkSpec, budget: NormBudget) -> NetworkSpec:
    """Nearest-in-spirit member of the budgeted class.

    Per layer: singular values are clipped to M_op(m); if the Frobenius norm
    still exceeds M_F(m) the whole matrix is rescaled to it (a factor <= 1,
    which preserves the operator cap). Layers already inside their caps pass
    through untouched, so projecting twice changes nothing.
    """
    if net.depth != budget.depth:
        raise StructureError(
            f"network depth {net.depth} does not match budget depth {budget.depth}"
        )
    out = []
    for m, W in enumerate(net.layers):
        mf = float(budget.M_F[m])
        mo = float(budget.M_op[m])
        f = float(np.linalg.norm(W))
        if f <= mf * (1.0 + MEMBERSHIP_RTOL) and f <= mo * (1.0 + MEMBERSHIP_RTOL):
            out.append(W)  # operator norm <= Frobenius norm, so both caps hold
            continue
        U, s, Vt = np.linalg.svd(W, full_matrices=False)
        if f <= mf * (1.0 + MEMBERSHIP_RTOL) and s[0] <= mo * (1.0 + MEMBERSHIP_RTOL):
            out.append(W)
            continue
        P = U @ (np.minimum(s, mo)[:, None] * Vt)
        pf = float(np.linalg.norm(P))
        if pf > mf:
            P = P * (mf / pf)
        out.append(P)
    return NetworkSpec(tuple(out))


# --- batched ascent in normalized coordinates --------------------------------


def _layer_shapes(input_dim: int, depth: int, width: int) -> list[tuple[int, int]]:
    dims = [input_dim] + [width] * (depth - 1) + [1]
    return [(dims[m + 1], dims[m]) for m in range(depth)]


def _project_stack(stacks: list[np.ndarray], ratios: np.ndarray) -> list[np.ndarray]:
    """Batched projection onto unit Frobenius balls with operator caps ratios[m]."""
    out = []
    for m, W in enumerate(stacks):
        U, s, Vt = np.linalg.svd(W, full_matrices=False)
        P = U @ (np.minimum(s, ratios[m])[..., None] * Vt)
        f = np.sqrt(np.einsum("bij,bij->b", P, P))
        scale = np.where(f > 1.0, 1.0 / np.maximum(f, _TINY), 1.0)
        out.append(P * scale[:, None, None])
    return out


def _forward_vals(stacks: list[np.ndarray], X: np.ndarray, e: np.ndarray) -> np.ndarray:
    A = np.broadcast_to(X[None, :, :], (stacks[0].shape[0],) + X.shape)
    for W in stacks[:-1]:
        A = np.maximum(A @ np.swapaxes(W, 1, 2), 0.0)
    out = (A @ np.swapaxes(stacks[-1], 1, 2))[:, :, 0]
    return (out @ e) / X.shape[0]


def _forward_vals_grads(stacks, X, e):
    """Objective values and gradients for a stack of networks on one sign vector.

    ReLU subgradient at exactly 0 is taken to be 0 (strict Z > 0 mask).
    """
    b = stacks[0].shape[0]
    n = X.shape[0]
    depth = len(stacks)
    acts = [np.broadcast_to(X[None, :, :], (b, n, X.shape[1]))]
    masks = []
    for m in range(depth - 1):
        Z = acts[m] @ np.swapaxes(stacks[m], 1, 2)
        mask = Z > 0.0
        masks.append(mask)
        acts.append(np.where(mask, Z, 0.0))
    out = (acts[-1] @ np.swapaxes(stacks[-1], 1, 2))[:, :, 0]
    vals = (out @ e) / n

    G = np.broadcast_to((e / n)[None, :, None], (b, n, 1))
    grads = [None] * depth
    for m in range(depth - 1, -1, -1):
        grads[m] = np.einsum("bni,bnj->bij", G, acts[m])
        if m > 0:
            G = (G @ stacks[m]) * masks[m - 1]
    return vals, grads


def _ascend_width(Xhat, e, ratios, cfg: EstimatorConfig, width: int, eps_key: int, width_index: int):
    """Best normalized-coordinate correlation over cfg.restarts ascent runs."""
    depth = ratios.shape[0]
    shapes = _layer_shapes(Xhat.shape[1], depth, width)
    b = cfg.restarts

    stacks = [np.empty((b,) + s) for s in shapes]
    for r in range(b):
        rng = np.random.default_rng([_seed_word(cfg.seed), eps_key, width_index, r])
        for m, s in enumerate(shapes):
            W = rng.standard_normal(s)
            fn = float(np.linalg.norm(W))
            stacks[m][r] = W / (fn if fn > 0.0 else 1.0)
    stacks = _project_stack(stacks, ratios)

    best_val = -np.inf
    best = None
    lr = cfg.step_size
    for _ in range(cfg.steps):
        vals, grads = _forward_vals_grads(stacks, Xhat, e)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
            best = [W[i].copy() for W in stacks]
        gn = np.sqrt(sum(np.einsum("bij,bij->b", g, g) for g in grads))
        step = np.where(gn > 0.0, lr / np.maximum(gn, _TINY), 0.0)
        stacks = [W + step[:, None, None] * g for W, g in zip(stacks, grads)]
        stacks = _project_stack(stacks, ratios)
        lr *= 0.99
    vals = _forward_vals(stacks, Xhat, e)
    i = int(np.argmax(vals))
    if vals[i] > best_val:
        best_val = float(vals[i])
        best = [W[i].copy() for W in stacks]
    return best_val, best


def estimate_sup(inputs: InputSet, eps, budget: NormBudget, cfg: EstimatorConfig) -> SupEstimate:
    """Witnessed lower bound on sup_f (1/n) sum_i eps_i f(x_i) over the class.

    The returned value is correlation(network, inputs, eps) recomputed in the
    original coordinates, so it is exactly what the witness achieves. More
    restarts with the same seed can only raise the result.
    """
    e = _check_signs(eps, inputs.n)
    eps_key = _sign_key(e)
    Xhat = inputs.points / inputs.radius
    ratios = budget.M_op / budget.M_F

    best_val = -np.inf
    best = None
    widths = cfg.widths if budget.depth > 1 else cfg.widths[:1]
    for wi, width in enumerate(widths):
        val, slices = _ascend_width(Xhat, e, ratios, cfg, width, eps_key, wi)
        if val > best_val:
            best_val = val
            best = slices

    witness = NetworkSpec(tuple(budget.M_F[m] * best[m] for m in range(budget.depth)))
    value = correlation(witness, inputs, e)
    if value < 0.0:
        # the zero network is always in the class and achieves 0
        witness = NetworkSpec(tuple(np.zeros_like(W) for W in witness.layers))
        value = correlation(witness, inputs, e)
    return SupEstimate(value, witness)


def _all_sign_vectors(n: int) -> np.ndarray:
    masks = np.arange(2**n, dtype=np.int64)[:, None]
    bits = (masks >> np.arange(n, dtype=np.int64)[None, :]) & 1
    return 1.0 - 2.0 * bits  # bit i set -> eps_i = -1, matching _sign_key


def empirical_rademacher(inputs: InputSet, budget: NormBudget, cfg: EstimatorConfig) -> RademacherEstimate:
    """Average the witnessed suprema over sign vectors.

    exact mode: all 2^n sign vectors (refuses n > 16); monte_carlo mode:
    cfg.mc_samples vectors drawn from the seeded generator, with the sample
    standard error reported alongside the mean. Deterministic given
    (seed, cfg, inputs, budget).
    """
    if cfg.mode == "exact":
        if inputs.n > EXACT_MODE_MAX_N:
            raise StructureError(
                f"exact mode enumerates 2^n sign vectors; n={inputs.n} exceeds "
                f"{EXACT_MODE_MAX_N} -- use monte_carlo"
            )
        rows = _all_sign_vectors(inputs.n)
    else:
        rng = np.random.default_rng([_seed_word(cfg.seed), _MC_STREAM_TAG])
        rows = 2.0 * rng.integers(0, 2, size=(cfg.mc_samples, inputs.n)) - 1.0

    values = np.empty(rows.shape[0])
    best = None
    for k in range(rows.shape[0]):
        est = estimate_sup(inputs, rows[k], budget, cfg)
        values[k] = est.value
        if best is None or est.value > best.value:
            best = est

    stderr = None
    if cfg.mode == "monte_carlo":
        stderr = float(np.std(values, ddof=1) / math.sqrt(len(values))) if len(values) > 1 else 0.0
    return RademacherEstimate(
        value=float(np.mean(values)),
        stderr=stderr,
        mode=cfg.mode,
        n=inputs.n,
        seed=cfg.seed,
        witness=best.network,
    )
