import math

import numpy as np
import pytest

from poisson_approx.chen_stein import ChenSteinCoefficients, DependencyModel
from poisson_approx.divergences import entropy
from poisson_approx.entropy_bounds import (
    BoundedIntegerSumSpec,
    EntropyErrorInputs,
    binary_entropy,
    bounded_integer_eta,
    entropy_diff_bound,
    entropy_error_bounded_integer,
    entropy_error_independent,
    entropy_error_independent_improved,
    entropy_error_poisson,
    log_poisson_mu,
    poisson_entropy,
    poisson_entropy_adell_bounds,
    poisson_entropy_series,
    poisson_mu,
)
from poisson_approx.errors import InapplicableBound
from poisson_approx.pmf import BernoulliSumSpec, convolve_bernoulli_sum, poisson_pmf_truncated

# frozen 50-digit Poisson entropies
H_PO_REF = {10.0: 2.5614099352749091, 0.5: 0.92763746749579737, 30.0: 3.1167110399882366}


def test_binary_entropy():
    assert binary_entropy(0) == 0 and binary_entropy(1) == 0
    assert binary_entropy(0.5) == pytest.approx(math.log(2))
    assert binary_entropy(0.1) == pytest.approx(0.32508297339144824, rel=1e-14)
    with pytest.raises(ValueError):
        binary_entropy(1.5)


def test_poisson_entropy_series():
    assert poisson_entropy(10.0) == pytest.approx(H_PO_REF[10.0], abs=1e-13)
    assert poisson_entropy(0.5) == pytest.approx(H_PO_REF[0.5], abs=1e-14)
    assert poisson_entropy(10.0) == pytest.approx(entropy(poisson_pmf_truncated(10.0)), abs=1e-6)
    assert poisson_entropy(1e-9) < 1e-7


def test_short_truncation_drops_factorial_terms():
    # keeping ceil(10 lam) = 1 term discards every log(k!) with k >= 2
    lam = 0.0987
    assert poisson_entropy_series(lam, 1) == pytest.approx(lam * (1 - math.log(lam)))
    assert poisson_entropy_series(lam) - poisson_entropy_series(lam, 1) > 3e-3


def test_adell_branch():
    assert poisson_entropy(1e6) == pytest.approx(8.327, abs=5e-4)
    assert poisson_entropy(30.0) == pytest.approx(H_PO_REF[30.0], rel=1e-3)
    for lam in (20.0, 50.0, 100.0):
        lo, hi = poisson_entropy_adell_bounds(lam)
        assert lo <= entropy(poisson_pmf_truncated(lam)) <= hi


def test_mu():
    assert poisson_mu(1.0, 3.0) == pytest.approx(1 + 1 + (6 * math.log(2 * math.pi) + 1) / 12)
    assert 0 < poisson_mu(0.5, 10.0) < 1e-6
    assert poisson_mu(10.0, 2.0**30) == 0.0
    assert log_poisson_mu(10.0, 2.0**30) < -1e9
    with pytest.raises(InapplicableBound):
        poisson_mu(4060.0, 32.0)


def test_entropy_diff_bound():
    assert entropy_diff_bound(EntropyErrorInputs(0.0, 5, 0.0)) == 0
    with pytest.raises(InapplicableBound):
        EntropyErrorInputs(1.0, 5, 0.0)
    # big M switches to 1/(1-eta) near eta = 1
    assert EntropyErrorInputs(0.99, 5, 0.0).big_m == pytest.approx(100.0)
    vals = [entropy_diff_bound(EntropyErrorInputs(e, 9, 0.01)) for e in np.linspace(0, 0.9, 40)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_example_one_closed_form():
    from poisson_approx.applications import linear_profile_moments

    m = linear_profile_moments(10**8, 1e-10 * 1e8 * (1e8 + 1))
    assert entropy_error_independent(m) == pytest.approx(0.316, abs=2e-3)
    assert entropy_error_independent_improved(m) == pytest.approx(0.110, abs=2e-3)


def test_zero_coefficients_leave_mu():
    c = ChenSteinCoefficients(0.0, 0.0, 0.0, 2.0, 30)
    assert entropy_error_poisson(c) == pytest.approx(poisson_mu(2.0, 32.0))


def test_poisson_model_matches_independent():
    p = [0.1, 0.05, 0.2, 0.3]
    spec = BernoulliSumSpec(p)
    assert entropy_error_poisson(DependencyModel.independent(p)) == pytest.approx(
        entropy_error_independent(spec))


def test_bounds_hold_on_random_specs():
    rng = np.random.default_rng(3)
    for _ in range(60):
        spec = BernoulliSumSpec(rng.uniform(0, 0.5, rng.integers(1, 13)))
        gap = poisson_entropy(spec.lam) - entropy(convolve_bernoulli_sum(spec))
        assert -1e-12 <= gap <= entropy_error_independent(spec)
        assert gap <= entropy_error_independent_improved(spec)


def _bounded(q, b=(0.0, 0.0, 0.0), lam=1.0):
    n = len(q)
    return BoundedIntegerSumSpec(
        cap=2, p=np.full(n, lam / n), q=np.asarray(q),
        chen_stein=ChenSteinCoefficients(*b, lam, n))


def test_bounded_integer():
    spec = _bounded([0.25, 0.25])
    assert bounded_integer_eta(spec) == pytest.approx(0.5)
    assert math.isfinite(entropy_error_bounded_integer(spec))
    with pytest.raises(InapplicableBound):
        entropy_error_bounded_integer(_bounded([0.5, 0.5]))


def test_bounded_integer_factor_two():
    b = (0.01, 0.02, 0.0)
    spec = _bounded([0.0, 0.0], b)
    plain = (0.03) * -math.expm1(-1.0)
    assert bounded_integer_eta(spec) == pytest.approx(2 * plain)
