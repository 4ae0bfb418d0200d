import json

import numpy as np
import pytest

from radbound import (
    NetworkSpec,
    InputSet,
    NumericError,
    ShapeError,
    StructureError,
    budget_from_network,
    forward,
    forward_many,
    load_inputs,
    load_network,
    norm_profile,
    save_inputs,
    save_network,
    validate_membership,
)
from radbound.norms import NormBudget

from helpers import random_inputs, random_network


# --- forward ------------------------------------------------------------------


def test_forward_single_linear_layer():
    net = NetworkSpec((np.array([[1.0, -1.0]]),))
    assert forward(net, [3.0, 1.0]) == 2.0


def test_forward_relu_kills_all_negative_preactivations():
    net = NetworkSpec((np.array([[-1.0, 0.0], [0.0, -1.0]]), np.array([[1.0, 1.0]])))
    assert forward(net, [1.0, 1.0]) == 0.0


def test_forward_hand_evaluated_two_layer():
    # W1 x = (2, 4); relu keeps both; W2 sums them to 6
    net = NetworkSpec((np.array([[2.0, 0.0], [0.0, 2.0]]), np.array([[1.0, 1.0]])))
    assert forward(net, [1.0, 2.0]) == pytest.approx(6.0, rel=1e-12)


def test_forward_rejects_wrong_input_dimension():
    net = NetworkSpec((np.array([[1.0, -1.0]]),))
    with pytest.raises(ShapeError, match="layer 1"):
        forward(net, [1.0, 2.0, 3.0])


def test_forward_many_matches_forward():
    rng = np.random.default_rng(42)
    net = random_network(rng, (3, 4, 2, 1))
    X = rng.standard_normal((7, 3))
    batch = forward_many(net, X)
    for i in range(7):
        assert batch[i] == pytest.approx(forward(net, X[i]), rel=1e-12, abs=1e-15)


# --- NetworkSpec invariants -----------------------------------------------------


def test_network_rejects_shape_chain_mismatch():
    with pytest.raises(ShapeError, match="layer 2"):
        NetworkSpec((np.ones((3, 2)), np.ones((1, 4))))


def test_network_rejects_multirow_output():
    with pytest.raises(ShapeError, match="final layer"):
        NetworkSpec((np.ones((2, 2)),))


def test_network_rejects_empty_and_nonfinite():
    with pytest.raises(StructureError):
        NetworkSpec(())
    with pytest.raises(NumericError):
        NetworkSpec((np.array([[np.nan, 1.0]]),))


def test_network_widths():
    rng = np.random.default_rng(0)
    net = random_network(rng, (5, 3, 1))
    assert net.depth == 2
    assert net.widths == (5, 3, 1)
    assert net.input_dim == 5


# --- invariants of the function class -------------------------------------------


def test_positive_homogeneity_in_the_input():
    rng = np.random.default_rng(7)
    for _ in range(50):
        net = random_network(rng, (4, 3, 3, 1))
        x = rng.standard_normal(4)
        c = float(rng.uniform(0.0, 5.0))
        fx = forward(net, x)
        assert forward(net, c * x) == pytest.approx(c * fx, rel=1e-9, abs=1e-12)


def test_layer_scaling_covariance():
    rng = np.random.default_rng(8)
    for _ in range(20):
        net = random_network(rng, (3, 4, 1))
        x = rng.standard_normal(3)
        c = float(rng.uniform(0.0, 3.0))
        m = int(rng.integers(0, net.depth))
        scaled = NetworkSpec(
            tuple(c * W if j == m else W for j, W in enumerate(net.layers))
        )
        assert forward(scaled, x) == pytest.approx(c * forward(net, x), rel=1e-9, abs=1e-12)


def test_output_bounded_by_operator_product_on_unit_ball():
    rng = np.random.default_rng(9)
    for _ in range(30):
        net = random_network(rng, (4, 3, 2, 1))
        budget = budget_from_network(net, slack=0.0, B=1.0)
        p_op = float(np.exp(norm_profile(budget).log_P_op[-1]))
        x = rng.standard_normal(4)
        x /= np.linalg.norm(x)
        assert abs(forward(net, x)) <= p_op * (1.0 + 1e-9)


# --- membership ------------------------------------------------------------------


def _two_layer_net(first):
    """Wrap a 2x2 first layer into a valid scalar-output network."""
    return NetworkSpec((np.asarray(first, dtype=float), np.array([[1.0, 1.0]])))


def _budget_for(first_caps, second_caps=(10.0, 10.0), B=1.0):
    mf = np.array([first_caps[0], second_caps[0]])
    mo = np.array([first_caps[1], second_caps[1]])
    return NormBudget(mf, mo, B)


def test_zero_network_is_in_any_positive_budget():
    net = NetworkSpec((np.zeros((2, 2)), np.zeros((1, 2))))
    report = validate_membership(net, _budget_for((1.0, 1.0)))
    assert bool(report) is True


def test_membership_exact_diagonal_norms_pass():
    # first layer diag(3, 4): Frobenius 5, operator 4
    report = validate_membership(_two_layer_net([[3.0, 0.0], [0.0, 4.0]]), _budget_for((5.0, 4.0)))
    assert report.ok


def test_membership_flags_operator_norm_violation():
    report = validate_membership(_two_layer_net([[3.0, 0.0], [0.0, 4.0]]), _budget_for((5.0, 3.9)))
    assert not report.ok
    first = report.layers[0]
    assert first.frobenius_ok and not first.operator_ok
    assert first.operator == pytest.approx(4.0, rel=1e-9)


def test_membership_depth_mismatch_is_structural():
    net = NetworkSpec((np.array([[1.0, 1.0]]),))
    with pytest.raises(StructureError, match="depth"):
        validate_membership(net, _budget_for((1.0, 1.0)))


def test_membership_tolerance_is_tight():
    net = NetworkSpec((np.array([[1.0, 0.0]]),))
    ok = NormBudget(np.array([1.0]), np.array([1.0]), 1.0)
    low = NormBudget(np.array([1.0 - 1e-6]), np.array([1.0 - 1e-6]), 1.0)
    assert validate_membership(net, ok).ok
    assert not validate_membership(net, low).ok


# --- InputSet --------------------------------------------------------------------


def test_inputs_reject_point_outside_ball():
    with pytest.raises(StructureError, match="outside"):
        InputSet(np.array([[2.0, 0.0]]), 1.0)


def test_inputs_accept_points_on_the_boundary():
    s = InputSet(np.array([[1.0, 0.0], [0.0, -1.0]]), 1.0)
    assert s.n == 2 and s.dim == 2


def test_inputs_reject_empty_or_bad_radius():
    with pytest.raises(ShapeError):
        InputSet(np.zeros((0, 3)), 1.0)
    with pytest.raises(NumericError):
        InputSet(np.zeros((1, 3)), 0.0)


# --- JSON round trips --------------------------------------------------------------


def test_network_json_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    net = random_network(rng, (3, 2, 1))
    path = tmp_path / "net.json"
    save_network(net, path)
    back = load_network(path)
    assert back.depth == net.depth
    for W, V in zip(net.layers, back.layers):
        assert np.array_equal(W, V)


def test_inputs_json_round_trip(tmp_path):
    rng = np.random.default_rng(4)
    inputs = random_inputs(rng, 5, 3, B=2.5)
    path = tmp_path / "inputs.json"
    save_inputs(inputs, path)
    back = load_inputs(path)
    assert back.radius == inputs.radius
    assert np.array_equal(back.points, inputs.points)


def test_network_loader_rejects_malformed_payload(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"weights": []}))
    with pytest.raises(StructureError):
        load_network(path)
