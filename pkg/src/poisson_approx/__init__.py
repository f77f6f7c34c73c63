"""Bounds on the Poisson approximation of sums of Bernoulli random variables."""

from poisson_approx.errors import InapplicableBound
from poisson_approx.pmf import (
    BernoulliMoments,
    BernoulliSumSpec,
    FinitePmf,
    PoissonSpec,
    convolve_bernoulli_sum,
    poisson_pmf_truncated,
    poisson_tail_chernoff,
)

__all__ = [
    "BernoulliMoments",
    "BernoulliSumSpec",
    "FinitePmf",
    "InapplicableBound",
    "PoissonSpec",
    "convolve_bernoulli_sum",
    "poisson_pmf_truncated",
    "poisson_tail_chernoff",
]

__version__ = "0.1.0"
