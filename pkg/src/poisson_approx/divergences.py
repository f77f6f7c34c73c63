"""Exact divergences between finite PMFs.

All functions align the two supports on a common integer range. Mass in
``tail_mass`` is treated as living beyond both supports where the other
distribution has none, which is exact when the truncated law was built with
``k_min`` covering the other support.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np
from scipy.special import logsumexp, xlogy

from poisson_approx.pmf import FinitePmf

_GOLDEN = (math.sqrt(5) - 1) / 2


class MetricKind(str, Enum):
    TV = "tv"
    KL = "kl"
    HELLINGER = "hellinger"
    BHATTACHARYYA = "bhattacharyya"
    CHERNOFF = "chernoff"
    ENTROPY = "entropy"


def _align(p: FinitePmf, q: FinitePmf) -> tuple[np.ndarray, np.ndarray]:
    lo = min(p.offset, q.offset)
    hi = max(p.last, q.last)
    a = np.zeros(hi - lo + 1)
    b = np.zeros(hi - lo + 1)
    a[p.offset - lo : p.offset - lo + p.probs.size] = p.probs
    b[q.offset - lo : q.offset - lo + q.probs.size] = q.probs
    return a, b


def tv(p: FinitePmf, q: FinitePmf) -> float:
    a, b = _align(p, q)
    l1 = math.fsum(np.abs(a - b)) + p.tail_mass + q.tail_mass
    return min(1.0, 0.5 * l1)


def kl(p: FinitePmf, q: FinitePmf) -> float:
    """D(P||Q) in nats; ``inf`` when P is not absolutely continuous wrt Q."""
    a, b = _align(p, q)
    if p.tail_mass > 0 or np.any((a > 0) & (b == 0)):
        return math.inf
    mask = a > 0
    # sum a log(a/b) rewritten as non-negative terms a log(a/b) - a + b plus the
    # Q-mass outside supp(P); this keeps divergences near 1e-7 accurate
    terms = xlogy(a[mask], a[mask] / b[mask]) - a[mask] + b[mask]
    outside = math.fsum(b[~mask]) + q.tail_mass
    # exact when both masses total one; corrects for rounding otherwise
    excess = (math.fsum(a) - 1.0) - (math.fsum(b) + q.tail_mass - 1.0)
    return max(0.0, math.fsum(terms) + outside + excess)


def hellinger_squared(p: FinitePmf, q: FinitePmf) -> float:
    a, b = _align(p, q)
    s = math.fsum((np.sqrt(a) - np.sqrt(b)) ** 2) + p.tail_mass + q.tail_mass
    return min(1.0, 0.5 * s)


def hellinger(p: FinitePmf, q: FinitePmf) -> float:
    """Normalized so that 0 <= d_H <= 1 and d_H^2 = 1 - BC."""
    return math.sqrt(hellinger_squared(p, q))


def bhattacharyya(p: FinitePmf, q: FinitePmf) -> float:
    a, b = _align(p, q)
    return min(1.0, math.fsum(np.sqrt(a * b)))


def _log_chernoff_sum(log_a: np.ndarray, log_b: np.ndarray, theta: float) -> float:
    return float(logsumexp(theta * log_a + (1 - theta) * log_b))


def chernoff_information(p: FinitePmf, q: FinitePmf, tol: float = 1e-10) -> float:
    """C(P,Q) = -min_{theta in [0,1]} log sum P^theta Q^(1-theta).

    The objective is convex in theta, so golden-section search converges to
    the minimizer; the interval is narrowed until it is shorter than ``tol``.
    """
    a, b = _align(p, q)
    common = (a > 0) & (b > 0)
    if not np.any(common):
        return math.inf
    log_a, log_b = np.log(a[common]), np.log(b[common])

    def f(t):
        return _log_chernoff_sum(log_a, log_b, t)

    lo, hi = 0.0, 1.0
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
    best = min(f1, f2, f(0.0), f(1.0))
    return max(0.0, -best)


def chernoff_information_grid(p: FinitePmf, q: FinitePmf, points: int = 1_000_001,
                              chunk: int = 20_000) -> float:
    """Brute-force version of :func:`chernoff_information` on a uniform grid."""
    a, b = _align(p, q)
    common = (a > 0) & (b > 0)
    if not np.any(common):
        return math.inf
    log_a, log_b = np.log(a[common]), np.log(b[common])
    best = math.inf
    thetas = np.linspace(0.0, 1.0, points)
    for start in range(0, points, chunk):
        t = thetas[start : start + chunk, None]
        vals = logsumexp(t * log_a + (1 - t) * log_b, axis=1)
        best = min(best, float(vals.min()))
    return max(0.0, -best)


def entropy(p: FinitePmf) -> float:
    """Shannon entropy in nats of the stored support (tail ignored)."""
    return float(-math.fsum(xlogy(p.probs, p.probs)))
