"""Relative-entropy bounds between a Bernoulli sum and its Poisson counterpart,
plus generic lower bounds on KL in terms of total variation."""

from __future__ import annotations

import math
from dataclasses import dataclass

_LOG2 = math.log(2)


def refined_pinsker_phi(p: float) -> float:
    """phi(p) = log((1-p)/p) / (1-2p) on (0, 1/2], with phi(1/2) = 2."""
    if not 0 < p <= 0.5:
        raise ValueError("phi is defined on (0, 1/2]")
    x = 1 - 2 * p
    # log((1+x)/(1-x)) / x = 2 atanh(x)/x; use its series near x = 0
    if x < 1e-4:
        return 2 * (1 + x * x / 3 + x**4 / 5)
    return 2 * math.atanh(x) / x


@dataclass(frozen=True)
class RefinedPinskerContext:
    pi_q: float
    phi: float

    @classmethod
    def from_pi(cls, pi_q: float) -> RefinedPinskerContext:
        return cls(pi_q, refined_pinsker_phi(pi_q))

    @classmethod
    def for_poisson(cls, lam: float) -> RefinedPinskerContext:
        return cls.from_pi(poisson_pi_q(lam))


@dataclass(frozen=True)
class K2Coefficient:
    k2: float
    m_lambda: float
    k1: float

    @classmethod
    def from_k1(cls, lam: float, k1: float) -> K2Coefficient:
        m = m_lambda(lam)
        return cls(m * k1 * k1, m, k1)


def poisson_pi_q(lam: float) -> float:
    """Balance coefficient of Po(lam); 1/2 (no refinement) once lam > log 2."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    if lam >= _LOG2:
        return 0.5
    return -math.expm1(-lam)


def m_lambda(lam: float) -> float:
    if lam <= 0:
        raise ValueError("lam must be positive")
    if lam >= _LOG2:
        return 2.0
    # equals log(1/(e^lam - 1)) / (2e^-lam - 1), written to stay finite near log 2
    return refined_pinsker_phi(-math.expm1(-lam))


def kl_upper_kontoyiannis(spec) -> float:
    ratio = getattr(spec, "sum_p3_ratio", None)
    if ratio is None:
        raise ValueError("needs sum of p^3/(1-p)")
    return ratio / spec.lam if spec.lam > 0 else 0.0


def kl_lower_improved(spec, k1: float) -> float:
    if spec.sum_p2 == 0:
        return 0.0
    return K2Coefficient.from_k1(spec.lam, k1).k2 * spec.sum_p2**2


def kl_lower_loosened(spec) -> float:
    if spec.sum_p2 == 0:
        return 0.0
    return min(1.0, 1.0 / spec.lam**2) * spec.sum_p2**2 / 512.0


def _check_tv(d_tv: float) -> None:
    if not 0 <= d_tv <= 1:
        raise ValueError("total variation distance must lie in [0, 1]")


def pinsker(d_tv: float) -> float:
    _check_tv(d_tv)
    return 2 * d_tv * d_tv


def refined_pinsker(d_tv: float, ctx: RefinedPinskerContext) -> float:
    _check_tv(d_tv)
    return ctx.phi * d_tv * d_tv


def kl_lower_log_form(d_tv: float) -> float:
    _check_tv(d_tv)
    if d_tv == 1:
        return math.inf
    return -math.log1p(-d_tv * d_tv)


def vajda_lower(d_tv: float) -> float:
    _check_tv(d_tv)
    if d_tv == 1:
        return math.inf
    return math.log1p(d_tv) - math.log1p(-d_tv) - 2 * d_tv / (1 + d_tv)
