"""Hiring state machines: acceptance decisions and incremental company state.

Four acceptance rules are supported:

* ``mis``   -- accept iff the applicant beats every employee (the running max);
* ``ais``   -- accept iff the applicant beats the employee average;
* ``lis``   -- a uniformly random committee of ``c`` distinct employees
  interviews; accept iff the applicant beats every committee member (all
  employees serve while the company has at most ``c`` of them);
* ``mlis1`` -- single-interviewer rule with a permanent phantom zero-score
  employee in the interviewer pool; the phantom never counts toward company
  size or statistics.

Ties (probability zero in theory, representable in floats) are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import exact
from .distributions import ScoreDistribution

STRATEGY_KINDS = ("mis", "ais", "lis", "mlis1")


@dataclass(frozen=True)
class StrategySpec:
    """Which acceptance rule governs hiring; ``committee`` applies to ``lis`` only."""

    kind: str
    committee: int = 1

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy {self.kind!r}, expected one of {STRATEGY_KINDS}")
        if self.kind == "lis" and self.committee < 1:
            raise ValueError("committee size must be >= 1")

    @property
    def label(self) -> str:
        return f"lis:{self.committee}" if self.kind == "lis" else self.kind

    @property
    def uses_committee(self) -> bool:
        return self.kind in ("lis", "mlis1")


MIS = StrategySpec("mis")
AIS = StrategySpec("ais")
MLIS1 = StrategySpec("mlis1")


def lis(committee: int) -> StrategySpec:
    return StrategySpec("lis", committee)


def parse_strategy(name: str) -> StrategySpec:
    """Parse a CLI strategy flag: "mis" | "ais" | "lis:<c>" | "mlis1"."""
    key = name.strip().lower()
    if key in ("mis", "ais", "mlis1"):
        return StrategySpec(key)
    if key == "lis":
        return StrategySpec("lis", 1)
    if key.startswith("lis:"):
        try:
            c = int(key.split(":", 1)[1])
        except ValueError as err:
            raise ValueError(f"bad committee size in {name!r}") from err
        return StrategySpec("lis", c)
    raise ValueError(f"unknown strategy {name!r}; expected mis|ais|lis:<c>|mlis1")


@dataclass
class CompanyState:
    """Hire record of one company, with O(1) incremental statistics.

    ``best_index`` is 1-based, so the best employee's age is n - best_index;
    ``all_hired_so_far`` stays true while interviews == hires.
    """

    scores: list[float] = field(default_factory=list)
    score_sum: float = 0.0
    max_score: float = 0.0
    best_index: int = 0
    interviews: int = 0
    superior_so_far: bool = True
    all_hired_so_far: bool = True

    @property
    def n(self) -> int:
        return len(self.scores)

    @property
    def mean_score(self) -> float:
        return self.score_sum / self.n if self.scores else 0.0

    @property
    def age_of_best(self) -> int:
        return self.n - self.best_index

    def record_rejection(self) -> None:
        self.interviews += 1
        self.all_hired_so_far = False

    def hire(self, applicant: float, threshold: float | None = None) -> None:
        """Append an accepted applicant; ``threshold`` is the expected score
        <x_j> for this hire index when superiority is being tracked."""
        self.interviews += 1
        if not self.scores or applicant > self.max_score:
            self.max_score = applicant
            self.best_index = self.n + 1
        self.scores.append(applicant)
        self.score_sum += applicant
        if threshold is not None and not applicant > threshold:
            self.superior_so_far = False


@dataclass(frozen=True)
class Decision:
    accept: bool
    committee: tuple[int, ...] = ()


def committee_draw(pool_size: int, c: int, rng) -> tuple[int, ...]:
    """Floyd's distinct-subset sample of min(c, pool) indices from range(pool).

    Consumes exactly min(c, pool) variates when a random draw is needed and
    zero when everyone serves, so the variate count per decision is a fixed
    function of (pool_size, c).
    """
    c_eff = min(c, pool_size)
    if c_eff == pool_size:
        return tuple(range(pool_size))
    chosen: list[int] = []
    for i in range(pool_size - c_eff, pool_size):
        r = int(rng.random() * (i + 1))
        chosen.append(i if r in chosen else r)
    return tuple(chosen)


def decide(strategy: StrategySpec, state: CompanyState, applicant: float, rng=None) -> Decision:
    """Acceptance decision for one applicant.

    Pure in (state, applicant, committee draw): replaying the same rng stream
    state reproduces the decision.  An empty company accepts the first
    applicant under mis/ais/lis; under mlis1 the committee is the phantom, so
    acceptance means beating a zero score.
    """
    n = state.n
    if strategy.kind == "mis":
        return Decision(n == 0 or applicant > state.max_score)
    if strategy.kind == "ais":
        return Decision(n == 0 or applicant > state.mean_score)
    # committee strategies
    phantom = strategy.kind == "mlis1"
    pool = n + 1 if phantom else n
    if pool == 0:
        return Decision(True)
    c = 1 if phantom else strategy.committee
    if rng is None:
        raise ValueError("committee strategies need an rng for the committee draw")
    members = committee_draw(pool, c, rng)
    bar = max((0.0 if (phantom and i == n) else state.scores[i]) for i in members)
    return Decision(applicant > bar, members)


def expected_score_threshold(strategy: StrategySpec, dist: ScoreDistribution,
                             j: int) -> float | None:
    """Analytic expected score <x_j> of the j-th hire, or None where no closed
    form is known (e.g. any local-improvement rule with uniform scores)."""
    if strategy.kind == "mlis1":
        return None
    return exact.expected_score(strategy.kind, dist.kind, j, strategy.committee)


def threshold_table(strategy: StrategySpec, dist: ScoreDistribution, n: int):
    """Expected scores <x_1..x_n> as an array, or None if any is unavailable."""
    if strategy.kind == "mlis1":
        return None
    return exact.threshold_table(strategy.kind, dist.kind, n, strategy.committee)
