import math

import numpy as np
import pytest

from perccode import analytic
from perccode.analytic import ModelParams
from perccode.oracle import (
    SizeError,
    exact_enumeration,
    joint_leaf_distribution,
    node_distribution,
)


def test_node_distribution_examples():
    d1 = node_distribution(ModelParams(0.5), 1)
    assert np.allclose(d1.probs, [0.25, 0.5, 0.25], atol=1e-15)
    d2 = node_distribution(ModelParams(0.5), 2)
    assert d2.probs[0] == pytest.approx(0.390625, abs=1e-12)
    d0 = node_distribution(ModelParams(0.37), 0)
    assert np.allclose(d0.probs, [0.0, 1.0], atol=0)


def test_node_distribution_caps():
    with pytest.raises(SizeError):
        node_distribution(ModelParams(0.5), 13)
    with pytest.raises(ValueError):
        node_distribution(ModelParams(0.5), -1)


@pytest.mark.parametrize("p", [0.3, 0.5, 0.6])
def test_node_distribution_sums_and_moments(p):
    m = ModelParams(p)
    for n in range(11):
        dist = node_distribution(m, n)
        assert len(dist.probs) == 2**n + 1
        assert np.all(dist.probs >= 0.0)
        assert math.fsum(dist.probs.tolist()) == pytest.approx(1.0, abs=1e-9)
        mom = analytic.node_moments(m, n)
        assert dist.mean() == pytest.approx(mom.mean, abs=1e-9)
        assert dist.variance() == pytest.approx(mom.variance, abs=1e-9)


def test_extinction_atom_matches_iterate():
    m = ModelParams(0.6)
    for n in (1, 4, 9):
        dist = node_distribution(m, n)
        assert dist.probs[0] == pytest.approx(analytic.pgf_iterate(m, n, 0.0), abs=1e-12)


def test_joint_example_two_children_both_leaves():
    j = joint_leaf_distribution(ModelParams(0.5), 1)
    # both edges open, then each child keeps both of its edges closed
    assert j.probs[2, 2] == pytest.approx(0.015625, abs=1e-12)
    assert j.probs[2, 1] == pytest.approx(0.09375, abs=1e-12)
    assert j.probs[0, 0] == pytest.approx(0.25, abs=1e-12)


@pytest.mark.parametrize("p", [0.3, 0.5, 0.6])
@pytest.mark.parametrize("n", range(1, 7))
def test_joint_marginals_and_leaf_mean(p, n):
    m = ModelParams(p)
    j = joint_leaf_distribution(m, n)
    assert np.all(j.probs >= -1e-15)
    marginal = j.node_marginal()
    assert np.allclose(marginal, node_distribution(m, n).probs, atol=1e-9)
    assert j.leaf_mean() == pytest.approx(analytic.leaf_moments(m, n).mean, abs=1e-9)


def test_joint_upper_triangle_is_zero():
    j = joint_leaf_distribution(ModelParams(0.6), 3)
    rows, cols = np.indices(j.probs.shape)
    assert np.all(j.probs[cols > rows] == 0.0)


def test_joint_caps():
    with pytest.raises(SizeError):
        joint_leaf_distribution(ModelParams(0.5), 7)
    with pytest.raises(ValueError):
        joint_leaf_distribution(ModelParams(0.5), 0)


def test_enumeration_depth_one_by_hand():
    # 2 edges -> 4 configurations; only the both-closed one has a leaf
    stats = exact_enumeration(ModelParams(0.5), 1)
    assert stats.node_mean[0] == 1.0
    assert stats.node_mean[1] == pytest.approx(1.0, abs=1e-15)
    assert stats.leaf_mean[0] == pytest.approx(0.25, abs=1e-15)
    assert stats.leafless_probability == pytest.approx(0.75, abs=1e-15)
    assert stats.mean_entropy_bits == 0.0
    assert stats.mean_avg_length == 0.0
    assert stats.mean_normalization == pytest.approx(0.25, abs=1e-15)


def test_enumeration_depth_two_examples():
    stats = exact_enumeration(ModelParams(0.5), 2)
    assert stats.node_mean[1] == pytest.approx(1.0, abs=1e-12)
    assert stats.node_mean[2] == pytest.approx(1.0, abs=1e-12)
    assert stats.leaf_mean[1] == pytest.approx(0.25, abs=1e-12)
    assert stats.leaf_var[1] == pytest.approx(0.21875, abs=1e-12)


def test_enumeration_finds_true_leaf_variance():
    # ground truth 2pq^2(1 - q^2 + q^3) disagrees with both closed-form
    # variance conventions, while every mean formula agrees
    for p in (0.5, 0.55):
        m = ModelParams(p)
        stats = exact_enumeration(m, 3)
        q = m.q
        truth = 2 * p * q**2 * (1 - q**2 + q**3)
        assert stats.leaf_var[1] == pytest.approx(truth, abs=1e-12)
        lm = analytic.leaf_moments(m, 1)
        assert abs(lm.var_u1_scaled - truth) > 1e-3
        assert abs(lm.var_u1_squared - truth) > 1e-3
        for n in range(3):
            assert stats.node_mean[n] == pytest.approx((2 * p) ** n, abs=1e-12)
            assert stats.leaf_mean[n] == pytest.approx(
                q**2 * (2 * p) ** n, abs=1e-12
            )


def test_enumeration_node_histograms_match_polynomials():
    m = ModelParams(0.5)
    stats = exact_enumeration(m, 3)
    for n in range(4):
        assert np.allclose(
            stats.node_distributions[n], node_distribution(m, n).probs, atol=1e-9
        )


def test_enumeration_normalization_matches_truncated_series():
    m = ModelParams(0.5)
    stats = exact_enumeration(m, 3)
    series = math.fsum(m.u1 * (2 * m.p**2) ** n for n in range(3))
    assert stats.mean_normalization == pytest.approx(series, abs=1e-12)


def test_enumeration_node_variances_match_closed_forms():
    for p in (0.3, 0.55):
        m = ModelParams(p)
        stats = exact_enumeration(m, 3)
        for n in range(4):
            mom = analytic.node_moments(m, n)
            assert stats.node_var[n] == pytest.approx(mom.variance, abs=1e-12)


def test_enumeration_weights_cover_everything():
    # degenerate densities collapse to a single configuration
    full = exact_enumeration(ModelParams(1.0), 2)
    assert full.node_mean == [1.0, 2.0, 4.0]
    assert full.leaf_mean == [0.0, 0.0]
    assert full.leafless_probability == 1.0
    empty = exact_enumeration(ModelParams(0.0), 2)
    assert empty.node_mean == [1.0, 0.0, 0.0]
    assert empty.leaf_mean == [1.0, 0.0]
    assert empty.leafless_probability == 0.0
    assert empty.mean_entropy_bits == 0.0


def test_enumeration_caps():
    with pytest.raises(SizeError):
        exact_enumeration(ModelParams(0.5), 4)
    with pytest.raises(ValueError):
        exact_enumeration(ModelParams(0.5), -1)
