"""Applicant score distributions and their analytic primitives.

Three score laws are supported: uniform on (0,1), the tent law 2(1-x) on (0,1),
and the unit-rate exponential on [0,inf).  Every sampling routine is an
inverse-CDF transform consuming exactly one uniform variate per score, which is
what makes parallel runs reproducible independent of worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

KINDS = ("uniform", "tent", "exp")


class ScoreDomainError(ValueError):
    """Raised when a point lies outside the closure of a distribution's support."""


class DegenerateFloorError(ValueError):
    """Raised when conditioning on scores above a floor with zero survival mass."""


@dataclass(frozen=True)
class ScoreDistribution:
    """One of the supported score laws, identified by ``kind``."""

    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown distribution kind {self.kind!r}, expected one of {KINDS}")

    # ------------------------------------------------------------------ support

    @property
    def compact(self) -> bool:
        return self.kind != "exp"

    @property
    def support(self) -> tuple[float, float]:
        return (0.0, 1.0) if self.compact else (0.0, math.inf)

    def _check_domain(self, x: float) -> None:
        lo, hi = self.support
        if not (lo <= x <= hi):
            raise ScoreDomainError(f"{x} outside closure of support [{lo}, {hi}] for {self.kind}")

    # ---------------------------------------------------------------- analytics

    def density(self, x: float) -> float:
        self._check_domain(x)
        if self.kind == "uniform":
            return 1.0
        if self.kind == "tent":
            return 2.0 * (1.0 - x)
        return math.exp(-x)

    def cdf(self, x: float) -> float:
        return 1.0 - self.survival(x)

    def survival(self, x: float) -> float:
        """P(score > x), monotone nonincreasing with R(inf of support) = 1."""
        self._check_domain(x)
        if self.kind == "uniform":
            return 1.0 - x
        if self.kind == "tent":
            return (1.0 - x) ** 2
        return math.exp(-x)

    def inverse_survival(self, s: float) -> float:
        """Point x with survival(x) = s, for s in (0, 1]."""
        if not (0.0 < s <= 1.0):
            raise ValueError("survival level must lie in (0, 1]")
        if self.kind == "uniform":
            return 1.0 - s
        if self.kind == "tent":
            return 1.0 - math.sqrt(s)
        return -math.log(s)

    def mean(self) -> float:
        return {"uniform": 0.5, "tent": 1.0 / 3.0, "exp": 1.0}[self.kind]

    # ----------------------------------------------------------------- sampling

    def sample(self, rng) -> float:
        """Draw one score; consumes exactly one uniform variate from ``rng``."""
        return float(self._from_uniform(rng.random()))

    def sample_tail(self, floor: float, rng) -> float:
        """Draw one score conditioned on exceeding ``floor`` (inverse-CDF, not rejection)."""
        self._check_domain(floor)
        if self.survival(floor) == 0.0:
            raise DegenerateFloorError(f"survival({floor}) = 0 for {self.kind}")
        return float(self._tail_from_uniform(floor, rng.random()))

    # Vectorised transforms used by the simulation engine.  ``u`` is an array of
    # uniforms in [0, 1); one entry is consumed per returned score.

    def _from_uniform(self, u):
        if self.kind == "uniform":
            return u
        if self.kind == "tent":
            return 1.0 - np.sqrt(1.0 - u)
        return -np.log1p(-u)

    def _tail_from_uniform(self, floor, u):
        if self.kind == "uniform":
            return floor + (1.0 - floor) * u
        if self.kind == "tent":
            return 1.0 - (1.0 - floor) * np.sqrt(1.0 - u)
        return floor - np.log1p(-u)

    def _survival_arr(self, x):
        if self.kind == "uniform":
            return 1.0 - x
        if self.kind == "tent":
            return (1.0 - x) ** 2
        return np.exp(-x)

    def _cdf_arr(self, x):
        return 1.0 - self._survival_arr(x)


UNIFORM = ScoreDistribution("uniform")
TENT = ScoreDistribution("tent")
EXPONENTIAL = ScoreDistribution("exp")


def parse_distribution(name: str) -> ScoreDistribution:
    """Parse a CLI distribution flag: "uniform" | "tent" | "exp"."""
    key = name.strip().lower()
    aliases = {"uniform": "uniform", "tent": "tent", "exp": "exp", "exponential": "exp"}
    if key not in aliases:
        raise ValueError(f"unknown distribution {name!r}; expected uniform|tent|exp")
    return ScoreDistribution(aliases[key])
