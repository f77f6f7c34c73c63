"""Hellinger, Bhattacharyya and Chernoff-information bounds derived from TV and KL."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from poisson_approx.divergences import hellinger, hellinger_squared, kl, tv
from poisson_approx.kl_bounds import kl_upper_kontoyiannis
from poisson_approx.pmf import BernoulliSumSpec, convolve_bernoulli_sum, poisson_pmf_truncated


class BoundKind(str, Enum):
    HELLINGER = "hellinger"
    BC = "bhattacharyya"
    CHERNOFF = "chernoff"


@dataclass(frozen=True)
class MetricBoundPair:
    lower: float
    upper: float
    kind: BoundKind

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"lower {self.lower!r} exceeds upper {self.upper!r}")

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack


def _one_minus_sqrt_one_minus_sq(t: float) -> float:
    # 1 - sqrt(1 - t^2) without cancellation for small t
    return t * t / (1 + math.sqrt(1 - t * t))


def _check(d_tv: float, kl_value: float) -> None:
    if not 0 <= d_tv <= 1:
        raise ValueError("total variation distance must lie in [0, 1]")
    if kl_value < 0:
        raise ValueError("relative entropy must be non-negative")


def hellinger_bounds(d_tv: float, kl_value: float) -> MetricBoundPair:
    _check(d_tv, kl_value)
    lower = math.sqrt(_one_minus_sqrt_one_minus_sq(d_tv))
    upper = math.sqrt(-math.expm1(-kl_value / 2))
    return MetricBoundPair(lower, upper, BoundKind.HELLINGER)


def bc_bounds(d_tv: float, kl_value: float) -> MetricBoundPair:
    _check(d_tv, kl_value)
    lower = math.exp(-kl_value / 2)
    upper = math.sqrt(1 - d_tv * d_tv)
    return MetricBoundPair(lower, upper, BoundKind.BC)


def chernoff_lower_from_tv(d_tv: float) -> float:
    if not 0 <= d_tv <= 1:
        raise ValueError("total variation distance must lie in [0, 1]")
    if d_tv == 1:
        return math.inf
    return -0.5 * math.log1p(-d_tv * d_tv)


def hellinger_bounds_poisson(spec, k1: float) -> MetricBoundPair:
    return hellinger_bounds(min(1.0, k1 * spec.sum_p2), kl_upper_kontoyiannis(spec))


def bc_bounds_poisson(spec, k1: float) -> MetricBoundPair:
    return bc_bounds(min(1.0, k1 * spec.sum_p2), kl_upper_kontoyiannis(spec))


def chernoff_lower_poisson(spec, k1: float) -> float:
    return chernoff_lower_from_tv(min(1.0, k1 * spec.sum_p2))


def chernoff_lower_poisson_loosened(spec) -> float:
    if spec.sum_p2 == 0:
        return 0.0
    t2 = min(1.0, 1.0 / spec.lam**2) * spec.sum_p2**2 / 1024.0
    return -0.5 * math.log1p(-t2)


@dataclass(frozen=True)
class RateReport:
    """Exact distances for i.i.d. p = lam/n and their fitted log-log slopes."""

    lam: float
    n_values: tuple[int, ...]
    values: dict[str, tuple[float, ...]]
    slopes: dict[str, float]


def asymptotic_rate_check(lam: float, n_list) -> RateReport:
    n_values = tuple(int(n) for n in n_list)
    if len(n_values) < 2 or min(n_values) <= lam:
        raise ValueError("need at least two n values, each larger than lam")
    cols: dict[str, list[float]] = {"kl": [], "tv": [], "hellinger": [], "one_minus_bc": []}
    for n in n_values:
        p_w = convolve_bernoulli_sum(BernoulliSumSpec(np.full(n, lam / n)))
        q = poisson_pmf_truncated(lam, k_min=n)
        cols["kl"].append(kl(p_w, q))
        cols["tv"].append(tv(p_w, q))
        cols["hellinger"].append(hellinger(p_w, q))
        # 1 - BC = d_H^2, computed without cancellation
        cols["one_minus_bc"].append(hellinger_squared(p_w, q))
    log_n = np.log(n_values)
    slopes = {k: float(np.polyfit(log_n, np.log(v), 1)[0]) for k, v in cols.items()}
    return RateReport(lam, n_values, {k: tuple(v) for k, v in cols.items()}, slopes)

