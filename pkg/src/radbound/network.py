"""Concrete ReLU networks: representation, forward evaluation, norm-cap membership.

A network is an ordered stack of weight matrices ``W_1 .. W_D``; layer ``m``
maps width ``w_{m-1}`` to ``w_m``, the last layer has a single row so the
output is a scalar, and ReLU is applied after every layer except the last:

    x -> W_D relu(W_{D-1} relu(... W_1 x))

There are no biases and no other activations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from .errors import NumericError, ShapeError, StructureError

if TYPE_CHECKING:
    from .norms import NormBudget

# Relative slack when checking norm caps and the input radius; wide enough for
# floating-point norm computation, far too narrow to admit out-of-class nets.
MEMBERSHIP_RTOL = 1e-9
RADIUS_RTOL = 1e-9


def _as_matrix(layer, index: int) -> np.ndarray:
    W = np.asarray(layer, dtype=float)
    if W.ndim != 2 or W.size == 0:
        raise ShapeError(f"layer {index} must be a non-empty 2-d matrix, got shape {W.shape}")
    if not np.all(np.isfinite(W)):
        raise NumericError(f"layer {index} contains non-finite entries")
    return W


@dataclass(frozen=True)
class NetworkSpec:
    """Weight matrices of one concrete network. Immutable once constructed.

    Widths may differ per layer; nothing assumes constant width.
    """

    layers: tuple[np.ndarray, ...]

    def __post_init__(self):
        layers = tuple(self.layers)
        if len(layers) < 1:
            raise StructureError("a network needs at least one layer")
        mats = []
        for m, layer in enumerate(layers, start=1):
            W = _as_matrix(layer, m)
            W.setflags(write=False)
            mats.append(W)
        for m in range(1, len(mats)):
            if mats[m].shape[1] != mats[m - 1].shape[0]:
                raise ShapeError(
                    f"layer {m + 1} expects input width {mats[m].shape[1]} "
                    f"but layer {m} outputs width {mats[m - 1].shape[0]}"
                )
        if mats[-1].shape[0] != 1:
            raise ShapeError(f"final layer must have exactly 1 row, got {mats[-1].shape[0]}")
        object.__setattr__(self, "layers", tuple(mats))

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def input_dim(self) -> int:
        return self.layers[0].shape[1]

    @property
    def widths(self) -> tuple[int, ...]:
        """(w_0, w_1, ..., w_D)."""
        return (self.input_dim,) + tuple(W.shape[0] for W in self.layers)


@dataclass(frozen=True)
class InputSet:
    """n points of dimension w_0, all inside the Euclidean ball of radius B."""

    points: np.ndarray
    radius: float

    def __post_init__(self):
        P = np.asarray(self.points, dtype=float)
        if P.ndim != 2 or P.shape[0] < 1 or P.shape[1] < 1:
            raise ShapeError(f"points must be an n x w_0 array with n >= 1, got shape {P.shape}")
        if not np.all(np.isfinite(P)):
            raise NumericError("input points contain non-finite entries")
        B = float(self.radius)
        if not (np.isfinite(B) and B > 0):
            raise NumericError(f"radius must be positive and finite, got {B}")
        worst = float(np.linalg.norm(P, axis=1).max())
        if worst > B * (1.0 + RADIUS_RTOL):
            raise StructureError(f"a point has norm {worst:.6g}, outside the radius-{B:.6g} ball")
        P.setflags(write=False)
        object.__setattr__(self, "points", P)
        object.__setattr__(self, "radius", B)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def forward(net: NetworkSpec, x) -> float:
    """Evaluate the network on one input vector.

    ReLU is applied to every hidden layer's output but never to the final
    scalar, matching the definition above.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != net.input_dim:
        raise ShapeError(
            f"layer 1 expects an input of dimension {net.input_dim}, got shape {x.shape}"
        )
    a = x
    for W in net.layers[:-1]:
        a = np.maximum(W @ a, 0.0)
    return float((net.layers[-1] @ a)[0])


def forward_many(net: NetworkSpec, X) -> np.ndarray:
    """``forward`` over the rows of X, vectorized; returns shape (n,)."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != net.input_dim:
        raise ShapeError(
            f"layer 1 expects inputs of dimension {net.input_dim}, got shape {X.shape}"
        )
    A = X
    for W in net.layers[:-1]:
        A = np.maximum(A @ W.T, 0.0)
    return (A @ net.layers[-1].T)[:, 0]


@dataclass(frozen=True)
class LayerDiagnostic:
    layer: int
    frobenius: float
    frobenius_cap: float
    frobenius_ok: bool
    operator: float
    operator_cap: float
    operator_ok: bool


@dataclass(frozen=True)
class MembershipReport:
    ok: bool
    layers: tuple[LayerDiagnostic, ...]

    def __bool__(self) -> bool:
        return self.ok


def validate_membership(net: NetworkSpec, budget: "NormBudget") -> MembershipReport:
    """Check every layer against its Frobenius and operator caps.

    A layer passes when both norms are within cap * (1 + 1e-9); the report
    lists each layer's two norms next to its caps either way.
    """
    from .norms import frobenius_norm, operator_norm  # deferred: norms type-checks against this module

    if net.depth != budget.depth:
        raise StructureError(
            f"network depth {net.depth} does not match budget depth {budget.depth}"
        )
    diags = []
    ok = True
    for m, W in enumerate(net.layers):
        f = frobenius_norm(W)
        o = operator_norm(W)
        f_cap = float(budget.M_F[m])
        o_cap = float(budget.M_op[m])
        f_ok = f <= f_cap * (1.0 + MEMBERSHIP_RTOL)
        o_ok = o <= o_cap * (1.0 + MEMBERSHIP_RTOL)
        ok = ok and f_ok and o_ok
        diags.append(LayerDiagnostic(m + 1, f, f_cap, f_ok, o, o_cap, o_ok))
    return MembershipReport(ok, tuple(diags))


# --- JSON file formats -------------------------------------------------------
#
# Network:   {"layers": [M1, M2, ...]}   each Mi row-major, finite doubles
# Input set: {"B": <real>, "points": [[...], ...]}


def save_network(net: NetworkSpec, path) -> None:
    payload = {"layers": [W.tolist() for W in net.layers]}
    Path(path).write_text(json.dumps(payload))


def load_network(path) -> NetworkSpec:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict) or "layers" not in data:
        raise StructureError("network file must be an object with a 'layers' key")
    return NetworkSpec(tuple(np.asarray(M, dtype=float) for M in data["layers"]))


def save_inputs(inputs: InputSet, path) -> None:
    payload = {"B": inputs.radius, "points": inputs.points.tolist()}
    Path(path).write_text(json.dumps(payload))


def load_inputs(path) -> InputSet:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict) or "B" not in data or "points" not in data:
        raise StructureError("input-set file must be an object with 'B' and 'points' keys")
    return InputSet(np.asarray(data["points"], dtype=float), float(data["B"]))
