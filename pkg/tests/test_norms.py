import math

import numpy as np
import pytest

from radbound import (
    ConvergenceError,
    DegenerateBudgetError,
    NumericError,
    StructureError,
    budget_from_network,
    frobenius_norm,
    load_budget,
    operator_norm,
    save_budget,
    validate_membership,
)
from radbound.network import NetworkSpec
from radbound.norms import NormBudget

from helpers import random_network


def top_singular_value_2x2(M):
    """Closed form from the characteristic polynomial of M^T M:
    sigma_1^2 = (T + sqrt(T^2 - 4 det^2)) / 2 with T the squared Frobenius norm."""
    a, b, c, d = np.asarray(M, dtype=float).ravel()
    T = a * a + b * b + c * c + d * d
    det = a * d - b * c
    disc = max(T * T - 4.0 * det * det, 0.0)
    return math.sqrt((T + math.sqrt(disc)) / 2.0)


# --- frobenius -----------------------------------------------------------------


def test_frobenius_diag_3_4():
    assert frobenius_norm([[3.0, 0.0], [0.0, 4.0]]) == 5.0


def test_frobenius_zero_matrix():
    assert frobenius_norm(np.zeros((3, 2))) == 0.0


def test_frobenius_all_ones():
    assert frobenius_norm([[1.0, 1.0], [1.0, 1.0]]) == 2.0


def test_frobenius_rejects_nonfinite():
    with pytest.raises(NumericError):
        frobenius_norm([[np.inf, 0.0], [0.0, 1.0]])


# --- operator ------------------------------------------------------------------


def test_operator_diagonal():
    assert operator_norm([[3.0, 0.0], [0.0, 4.0]]) == pytest.approx(4.0, rel=1e-9)


def test_operator_rank_one_equals_frobenius():
    assert operator_norm([[1.0, 1.0], [1.0, 1.0]]) == pytest.approx(2.0, rel=1e-9)


def test_operator_nilpotent_shift():
    assert operator_norm([[0.0, 1.0], [0.0, 0.0]]) == pytest.approx(1.0, rel=1e-9)


def test_operator_survives_all_ones_null_space_start():
    # the unperturbed all-ones vector is exactly in the null space of M^T M here
    assert operator_norm([[1.0, -1.0], [0.0, 0.0]]) == pytest.approx(math.sqrt(2.0), rel=1e-9)


def test_operator_zero_matrix():
    assert operator_norm(np.zeros((4, 4))) == 0.0


def test_operator_matches_2x2_closed_form_on_1000_random_matrices():
    rng = np.random.default_rng(20240917)
    worst = 0.0
    for _ in range(1000):
        M = rng.standard_normal((2, 2)) * 10.0 ** rng.uniform(-2, 2)
        got = operator_norm(M, rel_tol=1e-12)
        want = top_singular_value_2x2(M)
        worst = max(worst, abs(got - want) / want)
    assert worst < 1e-10


def test_operator_never_exceeds_frobenius():
    rng = np.random.default_rng(5)
    for _ in range(200):
        M = rng.standard_normal((rng.integers(1, 6), rng.integers(1, 6)))
        f = frobenius_norm(M)
        assert operator_norm(M) <= f * (1.0 + 1e-9)


def test_operator_absolute_homogeneity():
    rng = np.random.default_rng(6)
    for _ in range(50):
        M = rng.standard_normal((3, 4))
        c = float(rng.uniform(-5.0, 5.0))
        assert operator_norm(c * M) == pytest.approx(abs(c) * operator_norm(M), rel=1e-8, abs=1e-12)


def test_operator_rejects_bad_rel_tol():
    with pytest.raises(ValueError):
        operator_norm(np.eye(2), rel_tol=0.0)
    with pytest.raises(ValueError):
        operator_norm(np.eye(2), rel_tol=1e-2)


def test_operator_convergence_error_carries_last_estimate():
    M = np.array([[2.0, 1.0], [0.5, 1.5]])
    with pytest.raises(ConvergenceError) as err:
        operator_norm(M, max_iter=1)
    assert err.value.last_estimate is not None
    assert err.value.last_estimate > 0.0


# --- budgets --------------------------------------------------------------------


def test_budget_from_diag_layer_is_tight():
    net = NetworkSpec((np.array([[3.0, 0.0], [0.0, 4.0]]), np.array([[1.0, 1.0]])))
    budget = budget_from_network(net, slack=0.0, B=1.0)
    assert budget.M_F[0] == pytest.approx(5.0, rel=1e-12)
    assert budget.M_op[0] == pytest.approx(4.0, rel=1e-9)


def test_budget_membership_holds_by_construction():
    rng = np.random.default_rng(11)
    for _ in range(20):
        net = random_network(rng, (3, 4, 2, 1))
        budget = budget_from_network(net, slack=0.0, B=1.0)
        assert validate_membership(net, budget).ok


def test_rank_one_layers_have_equal_caps():
    # rank-1 matrices have a single nonzero singular value, so the operator
    # norm equals the Frobenius norm; cross-check against numpy's SVD
    rng = np.random.default_rng(12)
    for _ in range(20):
        u = rng.standard_normal(4)
        v = rng.standard_normal(3)
        W1 = np.outer(u, v)
        w2 = rng.standard_normal((1, 4))
        net = NetworkSpec((W1, w2))
        budget = budget_from_network(net, slack=0.0, B=1.0)
        for m, W in enumerate(net.layers):
            assert budget.M_op[m] == pytest.approx(budget.M_F[m], rel=1e-9)
            assert budget.M_op[m] == pytest.approx(np.linalg.svd(W, compute_uv=False)[0], rel=1e-9)


def test_budget_rejects_zero_layer():
    net = NetworkSpec((np.zeros((2, 2)), np.ones((1, 2))))
    with pytest.raises(DegenerateBudgetError, match="layer 1"):
        budget_from_network(net, slack=0.0, B=1.0)


def test_budget_clamps_operator_cap_to_frobenius_cap():
    rng = np.random.default_rng(13)
    for _ in range(20):
        net = random_network(rng, (3, 2, 1))
        budget = budget_from_network(net, slack=0.0, B=1.0)
        assert np.all(budget.M_op <= budget.M_F)


def test_budget_invariants_are_enforced():
    with pytest.raises(StructureError):
        NormBudget(np.array([1.0]), np.array([2.0]), 1.0)  # M_op > M_F
    with pytest.raises(DegenerateBudgetError):
        NormBudget(np.array([0.0]), np.array([0.0]), 1.0)
    with pytest.raises(NumericError):
        NormBudget(np.array([1.0]), np.array([1.0]), -1.0)


def test_budget_json_round_trip(tmp_path):
    budget = NormBudget(np.array([2.0, 2.0]), np.array([1.0, 1.0]), 1.5)
    path = tmp_path / "budget.json"
    save_budget(budget, path)
    back = load_budget(path)
    assert back.B == budget.B
    assert np.array_equal(back.M_F, budget.M_F)
    assert np.array_equal(back.M_op, budget.M_op)
