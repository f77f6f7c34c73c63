"""Finite PMFs, Bernoulli-sum specifications and truncated Poisson laws."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln, pdtrc

_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FinitePmf:
    """PMF on the integers ``offset, offset+1, ...`` with an optional lost tail.

    ``tail_mass`` is probability sitting to the right of the stored support
    (e.g. the part of a Poisson law cut off by truncation).
    """

    offset: int
    probs: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise ValueError("probs must be a non-empty 1-d array")
        if np.any(probs < 0) or not np.all(np.isfinite(probs)):
            raise ValueError("probs must be finite and non-negative")
        if self.tail_mass < 0:
            raise ValueError("tail_mass must be non-negative")
        total = math.fsum(probs) + self.tail_mass
        if abs(total - 1.0) > _SUM_TOL * max(1, probs.size) ** 0.5:
            raise ValueError(f"probabilities sum to {total!r}, expected 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + self.probs.size)

    @property
    def last(self) -> int:
        return self.offset + self.probs.size - 1

    def mean(self) -> float:
        return float(np.dot(self.support, self.probs))


class _Moments:
    """Shared derived quantities of a Bernoulli sum."""

    n: int
    lam: float
    sum_p2: float

    @property
    def theta_r(self) -> float:
        return self.sum_p2 / self.lam if self.lam > 0 else 0.0


@dataclass(frozen=True)
class BernoulliMoments(_Moments):
    """Closed-form moments of a Bernoulli sum, for n too large to enumerate.

    Every bound that needs only ``n``, ``lam`` and ``sum_p2`` (and
    optionally ``sum_p3_ratio`` = sum p^3/(1-p)) accepts this in place of a
    full :class:`BernoulliSumSpec`.
    """

    n: int
    lam: float
    sum_p2: float
    sum_p3_ratio: float | None = None

    def __post_init__(self):
        if self.n < 1 or self.lam <= 0 or self.sum_p2 <= 0:
            raise ValueError("need n >= 1, lam > 0, sum_p2 > 0")
        if self.sum_p2 > self.lam:
            raise ValueError("sum of p^2 cannot exceed sum of p")


@dataclass(frozen=True, eq=False)
class BernoulliSumSpec(_Moments):
    """W = sum of independent Bernoulli(p_i)."""

    p: np.ndarray
    n: int = field(init=False)
    lam: float = field(init=False)
    sum_p2: float = field(init=False)
    sum_p3_ratio: float = field(init=False)

    def __post_init__(self):
        p = np.atleast_1d(np.array(self.p, dtype=float))
        if p.ndim != 1 or p.size == 0:
            raise ValueError("p must be a non-empty vector")
        if np.any(p < 0) or np.any(p >= 1) or not np.all(np.isfinite(p)):
            raise ValueError("each p_i must lie in [0, 1)")
        lam = math.fsum(p)
        p.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "n", int(p.size))
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "sum_p2", math.fsum(p * p))
        object.__setattr__(self, "sum_p3_ratio", math.fsum(p**3 / (1 - p)))

    def moments(self) -> BernoulliMoments:
        return BernoulliMoments(self.n, self.lam, self.sum_p2, self.sum_p3_ratio)


@dataclass(frozen=True)
class PoissonSpec:
    lam: float

    def __post_init__(self):
        if not self.lam > 0 or not math.isfinite(self.lam):
            raise ValueError("Poisson mean must be positive and finite")


class ChernoffTail(NamedTuple):
    value: float
    log_value: float


def log_poisson_tail_chernoff(lam: float, m: float) -> float:
    """log of the Chernoff bound on Pr(Po(lam) >= m), valid for m >= lam."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    if m < lam:
        raise ValueError("Chernoff tail needs m >= lam")
    if m == 0:
        return 0.0
    return -(lam + m * math.log(m / (lam * math.e)))


def poisson_tail_chernoff(lam: float, big_m: float) -> ChernoffTail:
    """Bound on Pr(Po(lam) >= big_m - 2), the form used by the entropy bounds."""
    log_value = log_poisson_tail_chernoff(lam, big_m - 2)
    return ChernoffTail(math.exp(log_value), log_value)


def _truncation_point(lam: float, tail_eps: float) -> int:
    # smallest K with Chernoff bound on Pr(Z >= K+1) below tail_eps
    log_eps = math.log(tail_eps)
    lo = max(math.ceil(lam), 1)
    if log_poisson_tail_chernoff(lam, lo) <= log_eps:
        return lo - 1
    step = max(1, math.ceil(math.sqrt(lam)))
    hi = lo + step
    while log_poisson_tail_chernoff(lam, hi) > log_eps:
        lo, step = hi, 2 * step
        hi = lo + step
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if log_poisson_tail_chernoff(lam, mid) <= log_eps:
            hi = mid
        else:
            lo = mid
    return hi - 1


def poisson_pmf_truncated(
    spec: PoissonSpec | float, tail_eps: float = 1e-14, k_min: int = 0
) -> FinitePmf:
    """Po(lam) on {0..K}; K is certified by the Chernoff tail to leave at most
    ``tail_eps`` of mass behind, and is at least ``k_min``.

    The stored ``tail_mass`` is the exact upper tail Pr(Z > K).
    """
    lam = spec.lam if isinstance(spec, PoissonSpec) else float(spec)
    PoissonSpec(lam)
    if not 0 < tail_eps < 1:
        raise ValueError("tail_eps must be in (0, 1)")
    k_max = max(_truncation_point(lam, tail_eps), int(k_min))
    if k_max > 50_000_000:
        raise ValueError("lam too large for an enumerated Poisson PMF")
    k = np.arange(k_max + 1, dtype=float)
    log_pmf = np.where(k > 0, k * math.log(lam), 0.0) - lam - gammaln(k + 1)
    probs = np.exp(log_pmf)
    tail = float(pdtrc(k_max, lam))
    # absorb rounding so the invariant sum + tail = 1 holds to working precision
    drift = 1.0 - tail - math.fsum(probs)
    probs[int(np.argmax(probs))] += drift
    return FinitePmf(0, probs, tail)


def convolve_bernoulli_sum(spec: BernoulliSumSpec) -> FinitePmf:
    """Exact PMF of the Bernoulli sum on {0..n} by sequential convolution."""
    pmf = np.zeros(spec.n + 1)
    pmf[0] = 1.0
    for i, p in enumerate(spec.p, start=1):
        head = pmf[: i + 1].copy()
        pmf[: i + 1] = head * (1 - p)
        pmf[1 : i + 1] += head[:i] * p
    pmf = np.clip(pmf, 0.0, None)
    pmf /= math.fsum(pmf)
    return FinitePmf(0, pmf)


def binomial_pmf(n: int, p: float) -> FinitePmf:
    """Bin(n, p) through log-gamma; used as an independent oracle."""
    if not 0 < p < 1:
        raise ValueError("p must be in (0, 1)")
    k = np.arange(n + 1, dtype=float)
    log_pmf = (
        gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
        + k * math.log(p) + (n - k) * math.log1p(-p)
    )
    probs = np.exp(log_pmf)
    return FinitePmf(0, probs / math.fsum(probs))
