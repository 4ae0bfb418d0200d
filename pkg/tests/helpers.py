"""Shared generators for seeded randomized tests."""

import numpy as np

from radbound import InputSet, NetworkSpec, NormBudget, norm_profile


def random_network(rng, widths):
    """widths = (w_0, w_1, ..., w_D) with w_D = 1."""
    layers = tuple(
        rng.standard_normal((widths[m + 1], widths[m])) for m in range(len(widths) - 1)
    )
    return NetworkSpec(layers)


def random_inputs(rng, n, dim, B=1.0):
    """n points strictly inside the radius-B ball."""
    P = rng.standard_normal((n, dim))
    P *= 0.95 * B / np.linalg.norm(P, axis=1).max()
    return InputSet(P, B)


def random_budget(rng, depth, B=None):
    """Caps with log-uniform Frobenius entries and ratios in [0.1, 1]."""
    mf = np.exp(rng.uniform(np.log(0.5), np.log(3.0), depth))
    ratios = rng.uniform(0.1, 1.0, depth)
    if B is None:
        B = float(rng.uniform(0.1, 10.0))
    return NormBudget(mf, mf * ratios, B)


def random_profile(rng, depth):
    return norm_profile(random_budget(rng, depth, B=1.0))
