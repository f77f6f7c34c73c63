import math

import numpy as np
import pytest

from poisson_approx.divergences import (
    bhattacharyya,
    chernoff_information,
    hellinger,
    kl,
    tv,
)
from poisson_approx.kl_bounds import kl_lower_log_form
from poisson_approx.pmf import BernoulliSumSpec, FinitePmf, convolve_bernoulli_sum, poisson_pmf_truncated
from poisson_approx.related_bounds import (
    asymptotic_rate_check,
    bc_bounds,
    bc_bounds_poisson,
    chernoff_lower_from_tv,
    chernoff_lower_poisson,
    chernoff_lower_poisson_loosened,
    hellinger_bounds,
    hellinger_bounds_poisson,
)
from poisson_approx.tv_lower_improved import k1_tilde


def test_trivial_values():
    h = hellinger_bounds(0, 0)
    assert (h.lower, h.upper) == (0, 0)
    b = bc_bounds(0, 0)
    assert (b.lower, b.upper) == (1, 1)
    assert hellinger_bounds(1, math.inf).lower == 1
    assert bc_bounds(0.5, math.inf).lower == 0
    assert chernoff_lower_from_tv(0) == 0
    assert chernoff_lower_from_tv(0.6) == pytest.approx(-0.5 * math.log(0.64))
    assert chernoff_lower_from_tv(1) == math.inf


def test_refines_classical_inequalities():
    for t in np.linspace(0, 1, 101):
        assert hellinger_bounds(t, kl_lower_log_form(t) + 1).lower >= t / math.sqrt(2) - 1e-15
    for d in np.logspace(-8, 2, 50):
        assert math.sqrt(-math.expm1(-d / 2)) <= math.sqrt(d / 2)


def test_hellinger_bounds_consistent_with_log_form():
    # lower <= upper exactly when D >= log(1/(1-t^2))
    for t in np.linspace(0.01, 0.99, 30):
        d = kl_lower_log_form(t)
        h = hellinger_bounds(t, d * (1 + 1e-12))
        assert h.lower == pytest.approx(h.upper, rel=1e-9)


def test_random_pair_sandwiches():
    rng = np.random.default_rng(11)
    for _ in range(200):
        a, b = rng.uniform(0.01, 1, 9), rng.uniform(0.01, 1, 9)
        p, q = FinitePmf(0, a / a.sum()), FinitePmf(0, b / b.sum())
        d, k = tv(p, q), kl(p, q)
        assert hellinger_bounds(d, k).contains(hellinger(p, q), 1e-12)
        assert bc_bounds(d, k).contains(bhattacharyya(p, q), 1e-12)
        assert chernoff_lower_from_tv(d) <= chernoff_information(p, q) + 1e-12


def test_poisson_instantiations():
    spec = BernoulliSumSpec([0.1, 0.2, 0.3])
    pair = convolve_bernoulli_sum(spec), poisson_pmf_truncated(spec.lam, k_min=3)
    k1 = k1_tilde(spec.lam)
    assert hellinger_bounds_poisson(spec, k1).contains(hellinger(*pair))
    assert bc_bounds_poisson(spec, k1).contains(bhattacharyya(*pair))
    c = chernoff_information(*pair)
    assert chernoff_lower_poisson_loosened(spec) <= chernoff_lower_poisson(spec, k1) <= c


def test_zero_spec():
    spec = BernoulliSumSpec([0.0, 0.0])
    h = hellinger_bounds_poisson(spec, 0.1)
    assert (h.lower, h.upper) == (0, 0)
    assert chernoff_lower_poisson(spec, 0.1) == 0
    assert chernoff_lower_poisson_loosened(spec) == 0


def test_iid_rates():
    rep = asymptotic_rate_check(1.0, [50, 100, 200, 400])
    assert -2.2 <= rep.slopes["kl"] <= -1.8
    assert -1.2 <= rep.slopes["tv"] <= -0.8
    assert -1.2 <= rep.slopes["hellinger"] <= -0.8
    assert -2.2 <= rep.slopes["one_minus_bc"] <= -1.8
    with pytest.raises(ValueError):
        asymptotic_rate_check(1.0, [100])
