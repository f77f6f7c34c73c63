"""Worked examples: random-graph and Gaussian moving-average entropy tables,
Bernoulli p-profiles, and sample-size planning for hypothesis tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcx

from poisson_approx.chen_stein import ChenSteinCoefficients
from poisson_approx.entropy_bounds import (
    EntropyErrorBreakdown,
    entropy_error_poisson_breakdown,
    poisson_entropy,
)
from poisson_approx.pmf import BernoulliMoments, BernoulliSumSpec

_SQRT2 = math.sqrt(2)
_INV_SQRT_2PI = 1 / math.sqrt(2 * math.pi)


def std_normal_cdf(t: float) -> float:
    return 0.5 * math.erfc(-t / _SQRT2)


def std_normal_sf(t: float) -> float:
    """1 - Phi(t), accurate in the far upper tail."""
    return 0.5 * math.erfc(t / _SQRT2)


def std_normal_pdf(u: float) -> float:
    return _INV_SQRT_2PI * math.exp(-0.5 * u * u)


@dataclass(frozen=True)
class EntropyReport:
    """Poisson entropy of a table row and the certified relative error."""

    lam: float
    approx_h: float
    error: EntropyErrorBreakdown

    @property
    def max_rel_error(self) -> float:
        return self.error.value / self.approx_h


@dataclass(frozen=True)
class RandomGraphCase:
    """Random orientation of the n-cube edges; W counts vertices of out-degree k."""

    n: int
    k: int

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.k <= self.n:
            raise ValueError("need n >= 1 and 0 <= k <= n")

    @property
    def vertices(self) -> int:
        return 2**self.n


def _comb(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


def random_graph_model(case: RandomGraphCase) -> tuple[float, ChenSteinCoefficients]:
    n, k = case.n, case.k
    # exact integer binomials; scaling by 2^-n via ldexp keeps the floats exact-ish
    lam = float(_comb(n, k))
    b1 = math.ldexp(float((n + 1) * _comb(n, k) ** 2), -n)
    b2 = math.ldexp(float(n * _comb(n - 1, k) * _comb(n - 1, k - 1)), 2 - n)
    return lam, ChenSteinCoefficients(b1, b2, 0.0, lam, case.vertices)


def random_graph_entropy_report(case: RandomGraphCase) -> EntropyReport:
    lam, coeffs = random_graph_model(case)
    return EntropyReport(lam, poisson_entropy(lam), entropy_error_poisson_breakdown(coeffs))


@dataclass(frozen=True)
class GaussianMACase:
    """W counts i <= n with Y_i > t for Y_i = (X_i + theta X_{i-1}) / sqrt(1 + theta^2)."""

    n: int
    theta_ma: float
    t: float

    def __post_init__(self):
        if self.n < 1 or self.t <= 0:
            raise ValueError("need n >= 1 and t > 0")

    @property
    def rho(self) -> float:
        return self.theta_ma / (1 + self.theta_ma**2)


def _pdf_minus_tail(u: float) -> float:
    # phi(u) - u (1 - Phi(u)) via the scaled erfc, avoiding cancellation for large u
    mills = math.sqrt(math.pi / 2) * float(erfcx(u / _SQRT2))
    return std_normal_pdf(u) * (1 - u * mills)


def gaussian_ma_model(case: GaussianMACase) -> tuple[float, ChenSteinCoefficients]:
    n, rho = case.n, case.rho
    lam = n * std_normal_sf(case.t)
    b1 = 3 * lam * lam / n
    u = case.t * math.sqrt(2 / (1 + rho))
    b2 = 2 * n * math.sqrt(2 * (1 + rho) / (math.pi * (1 - rho))) * _pdf_minus_tail(u)
    return lam, ChenSteinCoefficients(b1, b2, 0.0, lam, n)


def gaussian_ma_entropy_report(case: GaussianMACase) -> EntropyReport:
    lam, coeffs = gaussian_ma_model(case)
    return EntropyReport(lam, poisson_entropy(lam), entropy_error_poisson_breakdown(coeffs))


# rows as printed: (n, k, lambda, H, max relative error)
RANDOM_GRAPH_TABLE = (
    (30, 27, 4.060e3, 5.573, 1e-3),
    (30, 26, 2.741e4, 6.528, 5e-3),
    (30, 25, 1.425e5, 7.353, 2.3e-2),
    (50, 48, 1.225e3, 4.974, 7.6e-10),
    (50, 46, 2.303e5, 7.593, 9.5e-8),
    (50, 44, 1.589e7, 9.710, 5.2e-6),
    (50, 42, 5.369e8, 11.470, 1.5e-4),
    (50, 40, 1.027e10, 12.945, 2.5e-3),
    (100, 95, 7.529e7, 10.487, 7.9e-20),
    (100, 90, 1.731e13, 16.660, 1.2e-14),
    (100, 85, 2.533e17, 21.456, 1.3e-10),
    (100, 80, 5.360e20, 25.284, 2.4e-7),
    (100, 75, 2.425e23, 28.342, 9.6e-5),
    (100, 70, 2.937e25, 30.740, 1.1e-2),
)

# (n, theta, t, lambda, H, max relative error with the tightened b2)
GAUSSIAN_MA_TABLE = (
    (1e4, 1, 5, 2.87e-3, 0.020, 1.9e-2),
    (1e6, 1, 5, 0.287, 0.672, 4.9e-2),
    (1e8, 1, 5, 28.7, 3.094, 4.9e-2),
    (1e10, 1, 5, 2.87e3, 5.399, 3.3e-2),
    (1e12, 1, 5, 2.87e5, 7.702, 2.7e-2),
    (1e4, -1, 5, 2.87e-3, 0.020, 3.8e-6),
    (1e6, -1, 5, 0.287, 0.672, 9.6e-6),
    (1e8, -1, 5, 28.7, 3.094, 9.3e-6),
    (1e10, -1, 5, 2.87e3, 5.399, 6.1e-6),
    (1e12, -1, 5, 2.87e5, 7.702, 4.8e-6),
    (1e4, 1, 6, 9.87e-6, 1.24e-4, 2e-3),
    (1e6, 1, 6, 9.87e-4, 0.008, 3e-3),
    (1e8, 1, 6, 9.87e-2, 0.327, 7e-3),
    (1e10, 1, 6, 9.87, 2.555, 1.0e-2),
    (1e12, 1, 6, 9.87e2, 4.866, 6e-3),
)


def _check_profile(n: int, lam: float) -> None:
    if n < 1 or lam <= 0:
        raise ValueError("need n >= 1 and lam > 0")


def p_profile_linear(n: int, lam: float) -> BernoulliSumSpec:
    """p_i = i p_n / n with p_n = 2 lam / (n + 1)."""
    _check_profile(n, lam)
    p_n = 2 * lam / (n + 1)
    if p_n >= 1:
        raise ValueError(f"largest probability {p_n!r} is not below 1")
    if n == 1:
        return BernoulliSumSpec(np.array([lam]))
    return BernoulliSumSpec(np.arange(1, n + 1) * (p_n / n))


def p_profile_geometric(n: int, lam: float, alpha: float) -> BernoulliSumSpec:
    """p_i = p_1 alpha^(i-1) with p_1 = lam (1 - alpha) / (1 - alpha^n)."""
    _check_profile(n, lam)
    if not 0 < alpha < 1:
        raise ValueError("alpha must be in (0, 1)")
    p1 = lam * (1 - alpha) / (1 - alpha**n)
    if p1 >= 1:
        raise ValueError(f"largest probability {p1!r} is not below 1")
    return BernoulliSumSpec(p1 * alpha ** np.arange(n))


def linear_profile_moments(n: int, lam: float) -> BernoulliMoments:
    """Closed-form moments of :func:`p_profile_linear`, usable for huge n."""
    _check_profile(n, lam)
    if 2 * lam / (n + 1) >= 1:
        raise ValueError("largest probability is not below 1")
    return BernoulliMoments(n, lam, (2 * lam * lam / 3) * (2 * n + 1) / (n * (n + 1)))


def geometric_profile_sum_p2(n: int, lam: float, alpha: float) -> float:
    return lam * lam * (1 - alpha) / (1 + alpha) * (1 + alpha**n) / (1 - alpha**n)


@dataclass(frozen=True)
class HypothesisPlan:
    d_lower: float
    epsilon: float
    n_required: int


def _plan(exponent: float, epsilon: float) -> HypothesisPlan:
    if not exponent > 0:
        raise ValueError("the error exponent must be positive")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must be in (0, 1)")
    return HypothesisPlan(exponent, epsilon, math.ceil(-math.log(epsilon) / exponent))


def chernoff_stein_plan(d_lower: float, epsilon: float) -> HypothesisPlan:
    """Samples so that the type-II error exponent D guarantees beta_N <= epsilon."""
    return _plan(d_lower, epsilon)


def bayes_plan(c_lower: float, epsilon: float) -> HypothesisPlan:
    """Samples so that exp(-N C) <= epsilon for Chernoff information C."""
    return _plan(c_lower, epsilon)


def type1_exceed_bound(lam: float, n: int, samples: int) -> float:
    """Union bound N Pr(Po(lam) >= n + 1) using the Chernoff tail."""
    from poisson_approx.pmf import log_poisson_tail_chernoff

    return samples * math.exp(log_poisson_tail_chernoff(lam, n + 1))
