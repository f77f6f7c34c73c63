"""Chen-Stein coefficients and classical total-variation bounds."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from poisson_approx.errors import InapplicableBound


@dataclass(frozen=True)
class ChenSteinCoefficients:
    """b1, b2, b3 for a sum of indicators with mean ``lam``.

    ``n`` is the size of the index set, which caps the support of W at n.
    """

    b1: float
    b2: float
    b3: float
    lam: float
    n: int

    def __post_init__(self):
        if min(self.b1, self.b2, self.b3) < 0:
            raise ValueError("Chen-Stein coefficients must be non-negative")
        if self.lam <= 0:
            raise ValueError("lam must be positive")
        if self.n < 1:
            raise ValueError("index set must be non-empty")


@dataclass(eq=False)
class DependencyModel:
    """Indicators X_a with Pr(X_a = 1) = p[a] and dependency neighbourhoods.

    ``pair_moments[(a, b)]`` holds E[X_a X_b] for a != b in B_a, and ``s[a]``
    bounds E|E[X_a - p_a | sigma(X_b : b not in B_a)]|.
    Neighbourhoods must contain their own index.
    """

    p: np.ndarray
    neighborhoods: list[frozenset[int]]
    pair_moments: dict[tuple[int, int], float] = field(default_factory=dict)
    s: np.ndarray | None = None

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float)
        n = self.p.size
        if n == 0 or np.any(self.p < 0) or np.any(self.p > 1):
            raise ValueError("p must be a non-empty vector in [0, 1]")
        self.neighborhoods = [frozenset(int(b) for b in nb) for nb in self.neighborhoods]
        if len(self.neighborhoods) != n:
            raise ValueError("need one neighbourhood per index")
        for a, nb in enumerate(self.neighborhoods):
            if a not in nb:
                raise ValueError(f"neighbourhood {a} must contain {a}")
            if any(b < 0 or b >= n for b in nb):
                raise ValueError(f"neighbourhood {a} has an out-of-range index")
        for (a, b), v in self.pair_moments.items():
            if b not in self.neighborhoods[a] or a == b:
                raise ValueError(f"pair moment ({a}, {b}) is outside the neighbourhood")
            if v < 0:
                raise ValueError("pair moments must be non-negative")
        self.s = np.zeros(n) if self.s is None else np.asarray(self.s, dtype=float)
        if self.s.shape != (n,) or np.any(self.s < 0):
            raise ValueError("s must be a non-negative vector of length n")

    @property
    def n(self) -> int:
        return self.p.size

    @property
    def lam(self) -> float:
        return math.fsum(self.p)

    @classmethod
    def independent(cls, p) -> DependencyModel:
        p = np.asarray(p, dtype=float)
        return cls(p, [frozenset({a}) for a in range(p.size)])

    @classmethod
    def from_json(cls, path: str | Path) -> DependencyModel:
        """Load a model file; see ``docs/model-format.md`` for the schema."""
        raw = json.loads(Path(path).read_text())
        pairs = {}
        for a, b, v in raw.get("pair_moments", []):
            pairs[(int(a), int(b))] = float(v)
        return cls(
            np.asarray(raw["p"], dtype=float),
            [frozenset(nb) for nb in raw["neighborhoods"]],
            pairs,
            None if raw.get("s") is None else np.asarray(raw["s"], dtype=float),
        )


def compute_b123(model: DependencyModel) -> ChenSteinCoefficients:
    p = model.p
    b1 = 0.0
    b2 = 0.0
    for a, nb in enumerate(model.neighborhoods):
        others = [b for b in nb if b != a]
        b1 += p[a] * (p[a] + math.fsum(p[others]))
        b2 += math.fsum(model.pair_moments.get((a, b), 0.0) for b in others)
    return ChenSteinCoefficients(b1, b2, math.fsum(model.s), model.lam, model.n)


def independent_coefficients(spec) -> ChenSteinCoefficients:
    """Coefficients of an independent Bernoulli sum: b1 = sum p^2, b2 = b3 = 0."""
    return ChenSteinCoefficients(spec.sum_p2, 0.0, 0.0, spec.lam, spec.n)


def tv_upper_agg(coeffs: ChenSteinCoefficients) -> float:
    lam = coeffs.lam
    return min(1.0, (coeffs.b1 + coeffs.b2) * -math.expm1(-lam) / lam
               + coeffs.b3 * min(1.0, 1.4 / math.sqrt(lam)))


def tv_upper_barbour_hall(spec) -> float:
    if spec.sum_p2 == 0:
        return 0.0
    return -math.expm1(-spec.lam) / spec.lam * spec.sum_p2


def tv_lower_barbour_hall(spec) -> float:
    if spec.sum_p2 == 0:
        return 0.0
    return min(1.0, 1.0 / spec.lam) * spec.sum_p2 / 32.0


def tv_upper_lecam(spec) -> float:
    return spec.sum_p2


def tv_upper_cekanavicius_roos(spec) -> float:
    theta = spec.theta_r
    if theta >= 1:
        raise InapplicableBound("needs sum p^2 / lam < 1")
    return 3 * theta / (4 * math.e * (1 - math.sqrt(theta)) ** 1.5)
