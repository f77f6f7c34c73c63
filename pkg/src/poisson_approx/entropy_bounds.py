"""Poisson entropy and bounds on the entropy gap H(Po(lam)) - H(W)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from poisson_approx.chen_stein import ChenSteinCoefficients, DependencyModel, compute_b123
from poisson_approx.errors import InapplicableBound
from poisson_approx.pmf import log_poisson_tail_chernoff

ADELL_SWITCH = 20.0
_MU_CONST = (6 * math.log(2 * math.pi) + 1) / 12


def binary_entropy(x: float) -> float:
    if not 0 <= x <= 1:
        raise ValueError("binary entropy needs x in [0, 1]")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log(x) - (1 - x) * math.log1p(-x)


def poisson_entropy_series(lam: float, terms: int | None = None) -> float:
    """lam log(e/lam) + sum_{k=1}^{terms} lam^k e^-lam log(k!)/k!.

    The default keeps max(ceil(10 lam), ceil(lam + 12 sqrt(lam)) + 40)
    terms so that the omitted tail is far below double precision.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    if terms is None:
        terms = max(math.ceil(10 * lam), math.ceil(lam + 12 * math.sqrt(lam)) + 40)
    k = np.arange(1, terms + 1, dtype=float)
    log_fact = gammaln(k + 1)
    weights = np.exp(k * math.log(lam) - lam - log_fact)
    return lam * (1 - math.log(lam)) + math.fsum(weights * log_fact)


def poisson_entropy_adell_bounds(lam: float) -> tuple[float, float]:
    """Interval around 1/2 log(2 pi e lam) - 1/(12 lam) that contains H(Po(lam))."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    center = 0.5 * math.log(2 * math.pi * math.e * lam) - 1 / (12 * lam)
    lower = center - 31 / (24 * lam**2) - 33 / (20 * lam**3) - 1 / (20 * lam**4)
    upper = center + 5 / (24 * lam**2) + 1 / (60 * lam**3)
    return lower, upper


def poisson_entropy(lam: float) -> float:
    if lam <= 0:
        raise ValueError("lam must be positive")
    if lam < ADELL_SWITCH:
        return poisson_entropy_series(lam)
    lo, hi = poisson_entropy_adell_bounds(lam)
    return 0.5 * (lo + hi)


def log_poisson_mu(lam: float, big_m: float) -> float:
    if big_m - 2 < lam:
        raise InapplicableBound(f"needs M - 2 >= lam (M={big_m!r}, lam={lam!r})")
    prefix = max(lam * (1 - math.log(lam)), 0.0) + lam * lam + _MU_CONST
    return math.log(prefix) + log_poisson_tail_chernoff(lam, big_m - 2)


def poisson_mu(lam: float, big_m: float) -> float:
    """Tail correction term; underflows to 0.0 (see :func:`log_poisson_mu`)."""
    return math.exp(log_poisson_mu(lam, big_m))


@dataclass(frozen=True)
class EntropyErrorInputs:
    """eta, support size m of the finite variable, and mu; M is derived."""

    eta: float
    m_count: int
    mu: float
    big_m: float = field(init=False)

    def __post_init__(self):
        if not 0 <= self.eta < 1:
            raise InapplicableBound(f"needs 0 <= eta < 1, got eta={self.eta!r}")
        if self.m_count < 1 or self.mu < 0:
            raise ValueError("need m_count >= 1 and mu >= 0")
        object.__setattr__(self, "big_m", float(max(self.m_count + 1, 1 / (1 - self.eta))))


def entropy_diff_bound(inputs: EntropyErrorInputs) -> float:
    eta = inputs.eta
    return eta * math.log(inputs.big_m - 1) + binary_entropy(eta) + inputs.mu


@dataclass(frozen=True)
class EntropyErrorBreakdown:
    """All ingredients of one entropy-gap bound, for reporting and auditing."""

    eta: float
    big_m: float
    log_mu: float
    mu: float
    value: float


def entropy_error_breakdown(eta: float, m_count: int, lam: float) -> EntropyErrorBreakdown:
    if not 0 <= eta < 1:
        raise InapplicableBound(f"needs eta < 1, got eta={eta!r}")
    big_m = float(max(m_count + 1, 1 / (1 - eta)))
    log_mu = log_poisson_mu(lam, big_m)
    inputs = EntropyErrorInputs(eta, m_count, math.exp(log_mu))
    return EntropyErrorBreakdown(eta, inputs.big_m, log_mu, inputs.mu,
                                 entropy_diff_bound(inputs))


def poisson_eta(coeffs: ChenSteinCoefficients) -> float:
    lam = coeffs.lam
    return ((coeffs.b1 + coeffs.b2) * -math.expm1(-lam) / lam
            + coeffs.b3 * min(1.0, 1.4 / math.sqrt(lam)))


def entropy_error_poisson_breakdown(coeffs: ChenSteinCoefficients) -> EntropyErrorBreakdown:
    # W takes values in {0..n}, so its support has n + 1 points
    return entropy_error_breakdown(poisson_eta(coeffs), coeffs.n + 1, coeffs.lam)


def entropy_error_poisson(model: DependencyModel | ChenSteinCoefficients) -> float:
    coeffs = model if isinstance(model, ChenSteinCoefficients) else compute_b123(model)
    return entropy_error_poisson_breakdown(coeffs).value


def _require_mean(spec) -> None:
    if spec.lam <= 0:
        raise ValueError("entropy bounds need lam > 0")


def independent_eta(spec) -> float:
    _require_mean(spec)
    return -math.expm1(-spec.lam) / spec.lam * spec.sum_p2


def independent_eta_improved(spec) -> float:
    _require_mean(spec)
    theta = spec.theta_r
    if theta >= 1:
        raise InapplicableBound("needs sum p^2 / lam < 1")
    return theta * min(-math.expm1(-spec.lam),
                       3 / (4 * math.e * (1 - math.sqrt(theta)) ** 1.5))


def entropy_error_independent(spec) -> float:
    return entropy_error_breakdown(independent_eta(spec), spec.n + 1, spec.lam).value


def entropy_error_independent_improved(spec) -> float:
    return entropy_error_breakdown(independent_eta_improved(spec), spec.n + 1,
                                   spec.lam).value


@dataclass(frozen=True, eq=False)
class BoundedIntegerSumSpec:
    """W = sum of X_a with values in {0..A}; p[a] = Pr(X_a = 1), q[a] = Pr(X_a >= 2).

    ``chen_stein`` holds b1', b2', b3' of the indicators 1{X_a = 1}.
    """

    cap: int
    p: np.ndarray
    q: np.ndarray
    chen_stein: ChenSteinCoefficients

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        q = np.asarray(self.q, dtype=float)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        if self.cap < 1:
            raise ValueError("cap A must be a positive integer")
        if p.shape != q.shape or p.ndim != 1 or p.size == 0:
            raise ValueError("p and q must be vectors of equal length")
        if np.any(p < 0) or np.any(q < 0) or np.any(p + q > 1 + 1e-15):
            raise ValueError("need p, q >= 0 and p + q <= 1")
        if not math.isclose(self.lam, self.chen_stein.lam, rel_tol=1e-9):
            raise ValueError("chen_stein.lam must equal sum of p")

    @property
    def n(self) -> int:
        return self.p.size

    @property
    def lam(self) -> float:
        return math.fsum(self.p)

    @property
    def q_total(self) -> float:
        return math.fsum(self.q)


def bounded_integer_eta(spec: BoundedIntegerSumSpec) -> float:
    cs = spec.chen_stein
    lam = spec.lam
    return (2 * (cs.b1 + cs.b2) * -math.expm1(-lam) / lam
            + cs.b3 * min(1.0, 1.4 / math.sqrt(lam)) + spec.q_total)


def entropy_error_bounded_integer(spec: BoundedIntegerSumSpec) -> float:
    # W takes values in {0..nA}
    return entropy_error_breakdown(bounded_integer_eta(spec), spec.n * spec.cap + 1,
                                   spec.lam).value
