import math

import pytest
from hypothesis import given, strategies as st

from perccode import analytic, oracle
from perccode.analytic import DomainError, ModelParams


def test_params_derived_constants():
    m = ModelParams(0.6)
    assert m.q == 0.4
    assert m.mu == pytest.approx(1.2, abs=1e-12)
    assert m.p0 == pytest.approx(0.16, abs=1e-12)
    assert m.p1 == pytest.approx(0.48, abs=1e-12)
    assert m.p2 == pytest.approx(0.36, abs=1e-12)
    assert m.u1 == m.p0


@given(st.floats(min_value=0.0, max_value=1.0))
def test_params_probability_partitions(p):
    m = ModelParams(p)
    assert m.q == 1.0 - p
    assert m.p0 + m.p1 + m.p2 == pytest.approx(1.0, abs=1e-12)
    assert m.u0 + m.u1 == pytest.approx(1.0, abs=1e-12)
    assert m.mu == pytest.approx(2.0 * p, abs=1e-12)


@pytest.mark.parametrize("bad", [-0.1, 1.1, float("nan")])
def test_params_rejects_out_of_range(bad):
    with pytest.raises(DomainError):
        ModelParams(bad)


def test_pgf_eval_examples():
    assert analytic.pgf_eval(ModelParams(0.5), 1.0) == pytest.approx(1.0, abs=1e-12)
    assert analytic.pgf_eval(ModelParams(0.5), 0.0) == pytest.approx(0.25, abs=1e-12)
    assert analytic.pgf_eval(ModelParams(0.6), 0.5) == pytest.approx(0.49, abs=1e-12)


@given(st.floats(min_value=0.0, max_value=1.0))
def test_pgf_at_one_is_one(p):
    assert analytic.pgf_eval(ModelParams(p), 1.0) == pytest.approx(1.0, abs=1e-12)


@given(st.floats(min_value=0.0, max_value=1.0), st.floats(min_value=0.0, max_value=1.0))
def test_pgf_equals_probability_sum(p, xi):
    m = ModelParams(p)
    direct = m.p0 + m.p1 * xi + m.p2 * xi * xi
    assert analytic.pgf_eval(m, xi) == pytest.approx(direct, abs=1e-12)


def test_pgf_eval_domain():
    with pytest.raises(DomainError):
        analytic.pgf_eval(ModelParams(0.5), 1.5)
    with pytest.raises(DomainError):
        analytic.pgf_eval(ModelParams(0.5), -0.1)


def test_leaf_pgf_examples():
    assert analytic.leaf_pgf_eval(ModelParams(0.5), 1.0) == pytest.approx(1.0, abs=1e-12)
    assert analytic.leaf_pgf_eval(ModelParams(0.5), 0.0) == pytest.approx(0.75, abs=1e-12)
    assert analytic.leaf_pgf_eval(ModelParams(0.0), 0.0) == 0.0


def test_pgf_iterate_examples():
    assert analytic.pgf_iterate(ModelParams(0.5), 1, 0.0) == pytest.approx(0.25, abs=1e-12)
    # hand-composed: f(f(0)) = (0.5 * 0.25 + 0.5)^2
    assert analytic.pgf_iterate(ModelParams(0.5), 2, 0.0) == pytest.approx(
        0.390625, abs=1e-12
    )
    assert analytic.pgf_iterate(ModelParams(0.6), 64, 0.0) == pytest.approx(
        4.0 / 9.0, abs=1e-4
    )
    assert analytic.pgf_iterate(ModelParams(0.3), 0, 0.7) == 0.7


def test_extinction_probability_examples():
    assert analytic.extinction_probability(ModelParams(0.4)) == 1.0
    assert analytic.extinction_probability(ModelParams(0.5)) == 1.0
    assert analytic.extinction_probability(ModelParams(0.6)) == pytest.approx(
        4.0 / 9.0, abs=1e-12
    )


def test_iterates_monotone_and_converge_to_extinction():
    # f_n(0) increases to the extinction probability.  Right at the critical
    # density the gap closes only like ~4/n, so the tight tolerance is
    # checked away from the critical window and an O(1/n) band inside it.
    n = 200
    for i in range(0, 101):
        p = i / 100.0
        m = ModelParams(p)
        prev = 0.0
        for k in range(1, n + 1):
            cur = analytic.pgf_iterate(m, k, 0.0)
            assert cur >= prev - 1e-15
            prev = cur
        gap = abs(prev - analytic.extinction_probability(m))
        if 0.47 <= p <= 0.53:
            assert gap <= 5.0 / n
        else:
            assert gap <= 1e-6


@pytest.mark.parametrize(
    "p,n,mean,var",
    [
        (0.5, 4, 1.0, 2.0),
        (0.6, 2, 1.44, 1.2672),  # hand-evaluated q(2p)^n[((2p)^n-1)/(2p-1)]
        (0.3, 0, 1.0, 0.0),
        (0.9, 0, 1.0, 0.0),
    ],
)
def test_node_moments_examples(p, n, mean, var):
    got = analytic.node_moments(ModelParams(p), n)
    assert got.mean == pytest.approx(mean, abs=1e-12)
    assert got.variance == pytest.approx(var, abs=1e-12)


@pytest.mark.parametrize("p", [0.3, 0.5, 0.6])
@pytest.mark.parametrize("n", range(11))
def test_node_moments_match_exact_distribution(p, n):
    m = ModelParams(p)
    dist = oracle.node_distribution(m, n)
    got = analytic.node_moments(m, n)
    assert got.mean == pytest.approx(dist.mean(), abs=1e-9)
    assert got.variance == pytest.approx(dist.variance(), abs=1e-9)


def test_leaf_moments_examples():
    m = ModelParams(0.5)
    lm3 = analytic.leaf_moments(m, 3)
    assert lm3.mean == pytest.approx(0.25, abs=1e-12)
    assert lm3.var_u1_scaled == pytest.approx(0.375, abs=1e-12)  # 2npq^3 = n/8
    lm1 = analytic.leaf_moments(m, 1)
    assert lm1.var_u1_squared == pytest.approx(0.03125, abs=1e-12)  # q^4 * Var[N_1]


def test_leaf_variance_conventions_disagree():
    lm = analytic.leaf_moments(ModelParams(0.5), 1)
    truth = 0.21875  # 2pq^2(1 - q^2 + q^3), confirmed by exact enumeration
    assert lm.var_u1_scaled != pytest.approx(truth, abs=1e-6)
    assert lm.var_u1_squared != pytest.approx(truth, abs=1e-6)
    assert lm.var_u1_scaled != pytest.approx(lm.var_u1_squared, abs=1e-6)


def test_lambda_mean_examples():
    assert analytic.lambda_mean(ModelParams(0.5)) == pytest.approx(0.5, abs=1e-12)
    assert analytic.lambda_mean(ModelParams(0.6)) == pytest.approx(
        0.16 / 0.28, abs=1e-6
    )
    with pytest.raises(DomainError):
        analytic.lambda_mean(ModelParams(0.75))


@pytest.mark.parametrize("p", [0.0, 0.25, 0.5, 0.6, math.sqrt(0.45)])
def test_lambda_mean_matches_series(p):
    # independent route: partial sums of sum_n E[L_n] p^n
    m = ModelParams(p)
    series = math.fsum(
        analytic.leaf_moments(m, n).mean * p**n for n in range(201)
    )
    assert series == pytest.approx(analytic.lambda_mean(m), abs=1e-9)


def test_lambda_var_examples():
    assert analytic.lambda_var(ModelParams(0.5)) == pytest.approx(0.25, abs=1e-12)
    assert analytic.lambda_var(ModelParams(0.6)) == pytest.approx(
        0.04608 / (0.136 * 0.28), abs=1e-5
    )
    with pytest.raises(DomainError):
        analytic.lambda_var(ModelParams(0.65))


def test_expected_entropy_examples():
    assert analytic.expected_entropy(ModelParams(0.5)) == pytest.approx(0.0, abs=1e-12)
    assert analytic.expected_entropy(ModelParams(0.6)) == pytest.approx(
        1.0877, abs=1e-3
    )
    with pytest.raises(DomainError):
        analytic.expected_entropy(ModelParams(0.72))


def test_expected_code_length_examples():
    assert analytic.expected_code_length(ModelParams(0.5)) == pytest.approx(
        1.0, abs=1e-12
    )
    assert analytic.expected_code_length(ModelParams(0.6)) == pytest.approx(
        0.72 / 0.28, abs=1e-6
    )
    # subcritical densities are accepted wherever the series converges
    assert analytic.expected_code_length(ModelParams(0.25)) == pytest.approx(
        0.125 / 0.875, abs=1e-6
    )
    with pytest.raises(DomainError):
        analytic.expected_code_length(ModelParams(0.72))


@pytest.mark.parametrize("p", [0.1, 0.25, 0.5, 0.6, math.sqrt(0.45)])
def test_expected_code_length_matches_series(p):
    # the n-weighted series needs more terms than the plain one near the
    # window edge (2p^2 = 0.9), so sum until the tail is negligible
    m = ModelParams(p)
    lam = analytic.lambda_mean(m)
    series = math.fsum(
        n * analytic.leaf_moments(m, n).mean * p**n for n in range(601)
    )
    assert series / lam == pytest.approx(analytic.expected_code_length(m), abs=1e-9)


def test_moment_pair_rejects_negative_variance():
    with pytest.raises(ValueError):
        analytic.MomentPair(mean=1.0, variance=-0.5)
