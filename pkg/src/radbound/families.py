"""Synthetic network families for depth sweeps.

Both families fix every layer's Frobenius norm to the requested value, so the
cumulative product P_F is fully controlled and only the operator/Frobenius
ratio varies with the family:

  rank1     outer products u v^T -- operator norm equals Frobenius norm, so
            R(d) = 1 at every depth (the worst case for the bounds);
  gaussian  iid normal entries -- the per-layer ratio is roughly 2/sqrt(width),
            so R(d) decays geometrically and sum_d R(d) stays bounded in depth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StructureError
from .network import NetworkSpec

FAMILIES = ("rank1", "gaussian")


@dataclass(frozen=True)
class SweepFamily:
    family: str
    depth: int
    width: int
    per_layer_frobenius: float
    seed: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise StructureError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.depth < 1 or self.width < 1:
            raise StructureError("depth and width must be >= 1")
        if not (np.isfinite(self.per_layer_frobenius) and self.per_layer_frobenius > 0.0):
            raise StructureError(
                f"per_layer_frobenius must be positive, got {self.per_layer_frobenius}"
            )


def _rank1(rng: np.random.Generator, rows: int, cols: int, fro: float) -> np.ndarray:
    u = rng.standard_normal(rows)
    v = rng.standard_normal(cols)
    W = np.outer(u, v)
    return W * (fro / np.linalg.norm(W))


def _gaussian(rng: np.random.Generator, rows: int, cols: int, fro: float) -> np.ndarray:
    W = rng.standard_normal((rows, cols))
    return W * (fro / np.linalg.norm(W))


def make_network(family: SweepFamily) -> NetworkSpec:
    """Deterministic per (seed, depth): changing the depth range of a sweep
    never changes the network generated at a given depth."""
    rng = np.random.default_rng([family.seed & 0xFFFFFFFFFFFFFFFF, family.depth])
    sample = _rank1 if family.family == "rank1" else _gaussian
    dims = [family.width] * family.depth + [1]  # input dim = width, scalar output
    layers = []
    for m in range(family.depth):
        layers.append(sample(rng, dims[m + 1], dims[m], family.per_layer_frobenius))
    return NetworkSpec(tuple(layers))
