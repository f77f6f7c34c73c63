import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poisson_approx.pmf import (
    BernoulliMoments,
    BernoulliSumSpec,
    FinitePmf,
    PoissonSpec,
    binomial_pmf,
    convolve_bernoulli_sum,
    poisson_pmf_truncated,
    poisson_tail_chernoff,
)

probs = st.lists(st.floats(0.0, 0.95), min_size=1, max_size=15)


def test_convolution_matches_hand_computation():
    pmf = convolve_bernoulli_sum(BernoulliSumSpec([0.1, 0.2, 0.3]))
    # frozen high-precision values
    np.testing.assert_allclose(pmf.probs, [0.504, 0.398, 0.092, 0.006], atol=1e-15)


def test_single_bernoulli():
    pmf = convolve_bernoulli_sum(BernoulliSumSpec([0.25]))
    np.testing.assert_allclose(pmf.probs, [0.75, 0.25])


def test_iid_matches_binomial():
    pmf = convolve_bernoulli_sum(BernoulliSumSpec(np.full(40, 0.07)))
    np.testing.assert_allclose(pmf.probs, binomial_pmf(40, 0.07).probs, atol=1e-14)


@given(probs)
@settings(max_examples=100, deadline=None)
def test_convolution_mass_and_mean(p):
    spec = BernoulliSumSpec(p)
    pmf = convolve_bernoulli_sum(spec)
    assert abs(math.fsum(pmf.probs) - 1) <= 1e-12
    assert abs(pmf.mean() - spec.lam) <= 1e-10
    assert pmf.probs.size == len(p) + 1


def test_spec_rejects_bad_probabilities():
    for bad in ([1.0], [-0.1], [0.2, float("nan")], []):
        with pytest.raises(ValueError):
            BernoulliSumSpec(bad)


def test_spec_derived_moments():
    spec = BernoulliSumSpec([0.1, 0.2, 0.3])
    assert spec.n == 3
    assert spec.lam == pytest.approx(0.6)
    assert spec.sum_p2 == pytest.approx(0.14)
    assert spec.sum_p3_ratio == pytest.approx(0.001 / 0.9 + 0.008 / 0.8 + 0.027 / 0.7)
    assert spec.theta_r == pytest.approx(0.14 / 0.6)


def test_all_zero_spec_is_degenerate_point_mass():
    spec = BernoulliSumSpec([0.0, 0.0])
    assert spec.lam == 0 and spec.theta_r == 0
    np.testing.assert_array_equal(convolve_bernoulli_sum(spec).probs, [1, 0, 0])


def test_moments_validation():
    with pytest.raises(ValueError):
        BernoulliMoments(10, 1.0, 2.0)
    assert BernoulliMoments(10, 1.0, 0.1).theta_r == pytest.approx(0.1)


@pytest.mark.parametrize("lam", [1e-3, 0.5, 1.0, 10.0, 100.0, 1000.0])
def test_poisson_truncation_certificate(lam):
    pmf = poisson_pmf_truncated(PoissonSpec(lam))
    assert pmf.tail_mass <= 1e-14
    assert abs(math.fsum(pmf.probs) + pmf.tail_mass - 1) <= 1e-12
    assert abs(pmf.mean() - lam) <= 1e-9 * max(1, lam)


def test_poisson_k_min_extends_support():
    pmf = poisson_pmf_truncated(0.5, k_min=50)
    assert pmf.last == 50
    assert pmf.tail_mass < 1e-60


def test_poisson_values():
    pmf = poisson_pmf_truncated(2.0)
    assert pmf.probs[0] == pytest.approx(math.exp(-2), rel=1e-14)
    assert pmf.probs[3] == pytest.approx(math.exp(-2) * 8 / 6, rel=1e-14)


def test_poisson_rejects_bad_mean():
    for bad in (0.0, -1.0, float("inf")):
        with pytest.raises(ValueError):
            PoissonSpec(bad)


def test_chernoff_tail_examples():
    # exponent is zero when M - 2 = lam = 1
    assert poisson_tail_chernoff(1.0, 3.0).value == pytest.approx(1.0)
    # lam = 10, M - 2 = 101 gives about 1.22e-62
    tail = poisson_tail_chernoff(10.0, 103.0)
    assert tail.value == pytest.approx(1.22e-62, rel=5e-3)
    assert tail.log_value == pytest.approx(math.log(tail.value))
    with pytest.raises(ValueError):
        poisson_tail_chernoff(10.0, 5.0)


@pytest.mark.parametrize("lam,m", [(1.0, 3), (5.0, 9), (20.0, 35)])
def test_chernoff_tail_dominates_exact_tail(lam, m):
    from scipy.stats import poisson

    assert poisson.sf(m - 1, lam) <= poisson_tail_chernoff(lam, m + 2).value


def test_finite_pmf_validation():
    with pytest.raises(ValueError):
        FinitePmf(0, np.array([0.5, 0.6]))
    with pytest.raises(ValueError):
        FinitePmf(0, np.array([-0.1, 1.1]))
    pmf = FinitePmf(2, np.array([0.25, 0.75]))
    assert list(pmf.support) == [2, 3]
