"""Monte Carlo harness: company growth, all-hired and superior-fraction
estimation, score-density histograms, and power-law exponent fits.

Trials are split into fixed-size blocks (see ``rng``); every block is an
independent Philox stream and block accumulators are merged by a left fold in
block order, so results are bit-identical for any worker count.  The
rejection-free kernel draws each hire directly from its conditional law and is
the default for growth; the naive kernel simulates every interview and is
mandatory whenever rejections must be observable (all-hired probabilities,
superior fractions, which condition on no rejection having occurred).
"""

from __future__ import annotations

import math
import multiprocessing
import os
import warnings
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import exact
from .distributions import ScoreDistribution
from .rng import DEFAULT_SEED, block_plan, block_rng
from .strategies import CompanyState, StrategySpec, threshold_table

_CHUNK_BUDGET = 1 << 22  # elements per applicant chunk in the naive kernel


class ConfigError(ValueError):
    """Invalid simulation configuration (flag combination or missing input)."""


def resolve_workers(workers: int | None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("HIRELAB_THREADS", "").strip()
    return max(1, int(env)) if env else 1


# ---------------------------------------------------------------------------
# Config and result containers
# ---------------------------------------------------------------------------


MODES = ("grow", "budget")
KERNELS = ("rejection-free", "naive")


COMMITTEE_MODES = ("per-applicant", "per-hire")


@dataclass(frozen=True)
class SimConfig:
    """One simulation request.

    ``mode="grow"`` grows each company to ``target`` employees; ``"budget"``
    interviews exactly ``target`` applicants per trial and stops a trial at its
    first rejection.  The rejection-free kernel marginalises rejections out and
    is therefore only valid in grow mode.

    ``committee_mode`` selects when local-improvement committees are refreshed:
    ``per-applicant`` (default; every applicant faces a fresh committee, so the
    hire's committee is survival-weighted) or ``per-hire`` (a committee holds
    office until it hires someone, so the hire's committee stays uniform).  The
    two variants agree on all-hired and superior-fraction runs, where every
    applicant is hired; they differ in growth statistics.
    """

    strategy: StrategySpec
    dist: ScoreDistribution
    mode: str
    target: int
    trials: int
    master_seed: int = DEFAULT_SEED
    kernel: str = "rejection-free"
    committee_mode: str = "per-applicant"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.kernel not in KERNELS:
            raise ConfigError(f"kernel must be one of {KERNELS}")
        if self.committee_mode not in COMMITTEE_MODES:
            raise ConfigError(f"committee_mode must be one of {COMMITTEE_MODES}")
        if self.target < 1 or self.trials < 1:
            raise ConfigError("target and trials must be >= 1")
        if self.mode == "budget" and self.kernel != "naive":
            raise ConfigError("rejections must be observable: budget mode needs the naive kernel")
        if self.strategy.kind == "mlis1" and self.mode == "grow" and self.kernel != "naive":
            raise ConfigError("the phantom-interviewer rule has no rejection-free kernel")
        if self.committee_mode == "per-hire" and self.strategy.kind != "lis":
            raise ConfigError("held committees only apply to local-improvement hiring")


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    count: int


def _estimate(total: float, total_sq: float, count: int) -> Estimate:
    mean = total / count
    var = max(total_sq / count - mean * mean, 0.0)
    if count > 1:
        var *= count / (count - 1)
    return Estimate(mean, math.sqrt(var / count), count)


def _binomial_estimate(hits: int, count: int) -> Estimate:
    p = hits / count if count else math.nan
    se = math.sqrt(p * (1.0 - p) / count) if count else math.nan
    return Estimate(p, se, count)


@dataclass(frozen=True)
class GrowthStats:
    """Per-size ensemble statistics from grown companies.

    Score-location arrays live in gap space (1 - value) for compact-support
    distributions and in raw space for the exponential; ``space`` records
    which.  ``superior_fraction`` and ``all_hired_fraction`` are conditioned
    quantities available from the naive kernel only.
    """

    strategy: str
    dist: str
    kernel: str
    space: str  # "gap" | "raw"
    count: int
    sizes: np.ndarray
    last: tuple[np.ndarray, np.ndarray]      # (mean, stderr) of last-hire location
    average: tuple[np.ndarray, np.ndarray]   # company average location
    best: tuple[np.ndarray, np.ndarray]      # best-employee location
    age_mean: np.ndarray
    age_stderr: np.ndarray
    age_variance: np.ndarray
    weighted_total: tuple[np.ndarray, np.ndarray]  # per-company sum of locations
    all_hired_count: np.ndarray | None = None
    superior_count: np.ndarray | None = None
    samples: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return int(self.sizes[-1])

    def mean_gap(self) -> np.ndarray:
        """1 - <a_k> (compact support only)."""
        self._need_gap()
        return self.average[0]

    def last_gap(self) -> np.ndarray:
        self._need_gap()
        return self.last[0]

    def best_gap(self) -> np.ndarray:
        self._need_gap()
        return self.best[0]

    def mean_scores(self) -> np.ndarray:
        """<x_k> in score units regardless of accumulation space."""
        return 1.0 - self.last[0] if self.space == "gap" else self.last[0]

    def mean_averages(self) -> np.ndarray:
        return 1.0 - self.average[0] if self.space == "gap" else self.average[0]

    def mean_best(self) -> np.ndarray:
        return 1.0 - self.best[0] if self.space == "gap" else self.best[0]

    def _need_gap(self):
        if self.space != "gap":
            raise ValueError("gap statistics are defined for compact-support distributions")

    def all_hired_fraction(self) -> np.ndarray | None:
        if self.all_hired_count is None:
            return None
        return self.all_hired_count / self.count

    def superior_fraction(self) -> list[Estimate] | None:
        """Conditioned per-size superior fractions (among all-hired companies)."""
        if self.superior_count is None or self.all_hired_count is None:
            return None
        return [_binomial_estimate(int(s), int(h))
                for s, h in zip(self.superior_count, self.all_hired_count)]


@dataclass(frozen=True)
class AllHiredResult:
    n_applicants: int
    trials: int
    prefix_counts: np.ndarray

    @property
    def estimate(self) -> Estimate:
        return _binomial_estimate(int(self.prefix_counts[-1]), self.trials)

    def prefix_estimate(self, n: int) -> Estimate:
        return _binomial_estimate(int(self.prefix_counts[n - 1]), self.trials)


@dataclass(frozen=True)
class SuperiorResult:
    n: int
    trials: int
    companies: int           # trials in which the first n applicants were all hired
    superior_companies: int
    thresholds_source: str   # "analytic" | "supplied" | "empirical"
    feasibility_warning: str | None = None

    @property
    def estimate(self) -> Estimate:
        return _binomial_estimate(self.superior_companies, self.companies)

    @property
    def all_hired(self) -> Estimate:
        return _binomial_estimate(self.companies, self.trials)


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    amplitude: float
    fit_window: tuple[int, int]
    r_squared: float


@dataclass(frozen=True)
class DensityResult:
    """Binned employee-score density with per-bin standard errors.

    ``hist[k]`` counts hires number k+1 per bin (final slot is overflow above
    the cap), so the size-m company density pools rows 0..m-1.  Pair-coincidence
    counts make the per-bin variance exact despite multiple scores per company
    sharing a bin.
    """

    strategy: str
    dist: str
    n: int
    count: int
    edges: np.ndarray
    hist: np.ndarray
    pair_hist: dict[tuple[int, int], np.ndarray]
    weighted_sum: tuple[np.ndarray, np.ndarray]  # per-size totals of (1-x) or x

    @property
    def bins(self) -> int:
        return len(self.edges) - 1

    def density_at(self, m: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """(density, stderr) arrays for the size-m company (default: final size)."""
        m = self.n if m is None else m
        if not 1 <= m <= self.n:
            raise ValueError("size out of range")
        width = np.diff(self.edges)
        counts = self.hist[:m, : self.bins].sum(axis=0).astype(float)
        sumsq = counts.copy()
        for (j, jp), coinc in self.pair_hist.items():
            if jp < m:
                sumsq += 2.0 * coinc[: self.bins]
        T = self.count
        var = np.maximum(sumsq - counts**2 / T, 0.0)
        return counts / (T * width), np.sqrt(var) / (T * width)

    def overflow_fraction(self, m: int | None = None) -> float:
        m = self.n if m is None else m
        return float(self.hist[:m, self.bins].sum()) / self.count

    def integral(self, m: int | None = None) -> float:
        """Integral of the binned density; equals m when nothing overflows."""
        m = self.n if m is None else m
        return float(self.hist[:m, : self.bins].sum()) / self.count

    def weighted_integral(self, m: int | None = None) -> Estimate:
        """Monte Carlo value of the location-weighted integral of the density:
        integral (1-x) rho_m dx for compact support (equals m * mean gap),
        integral x rho_m dx for the exponential."""
        m = self.n if m is None else m
        s, ss = self.weighted_sum
        return _estimate(float(s[m - 1]), float(ss[m - 1]), self.count)


# ---------------------------------------------------------------------------
# Vectorised committee machinery
# ---------------------------------------------------------------------------


def _floyd_indices(rng, shape, pool: int, c_eff: int) -> np.ndarray:
    """Distinct-subset draws, one subset of size c_eff from range(pool) per
    entry of ``shape``; consumes exactly c_eff uniform arrays."""
    cols = np.empty(shape + (c_eff,), dtype=np.int64)
    for t, i in enumerate(range(pool - c_eff, pool)):
        r = (rng.random(shape) * (i + 1)).astype(np.int64)
        if t:
            dup = (cols[..., :t] == r[..., None]).any(axis=-1)
            r = np.where(dup, i, r)
        cols[..., t] = r
    return cols


def _committee_bar_lanes(rng, scores, size, committee, phantom, mmax):
    """Committee max for one applicant per lane, all lanes at company size
    ``size``.  ``scores`` columns >= size are zero, which doubles as the
    phantom interviewer's score."""
    lanes = scores.shape[0]
    pool = size + 1 if phantom else size
    c_eff = min(committee, pool)
    if c_eff == pool:
        return mmax if size else np.zeros(lanes)
    cols = _floyd_indices(rng, (lanes,), pool, c_eff)
    vals = scores[np.arange(lanes)[:, None], cols]
    return vals.max(axis=1)


def _rank_combinations(n: int, committee: int) -> np.ndarray:
    """comb(i-1, c-1) for sorted ranks i = c..n: committees whose max is the
    rank-i employee."""
    return np.array([comb(i - 1, committee - 1) for i in range(committee, n + 1)],
                    dtype=float)


# ---------------------------------------------------------------------------
# Block kernels
# ---------------------------------------------------------------------------


def _growth_block(payload: dict, lanes: int, rng) -> dict:
    strategy: StrategySpec = payload["strategy"]
    dist: ScoreDistribution = payload["dist"]
    n: int = payload["n"]
    naive: bool = payload["kernel"] == "naive"
    thresholds = payload.get("thresholds")
    edges = payload.get("hist_edges")
    collect = payload.get("collect", False)
    held_committee = payload.get("committee_mode") == "per-hire"
    compact = dist.compact
    kind = strategy.kind
    c = strategy.committee if kind == "lis" else 1
    lis_like = strategy.uses_committee

    mmax = np.zeros(lanes)
    msum = np.zeros(lanes)
    age = np.zeros(lanes, dtype=np.int64)
    cum_weight = np.zeros(lanes)
    interviews = np.zeros(lanes, dtype=np.int64)
    all_hired = np.ones(lanes, dtype=bool) if naive else None
    superior = np.ones(lanes, dtype=bool) if thresholds is not None else None
    scores = np.zeros((lanes, n)) if lis_like else None  # naive: hire order; rf: sorted

    acc = {
        "count": lanes,
        "sum_last": np.zeros(n), "ss_last": np.zeros(n),
        "sum_avg": np.zeros(n), "ss_avg": np.zeros(n),
        "sum_best": np.zeros(n), "ss_best": np.zeros(n),
        "sum_age": np.zeros(n), "ss_age": np.zeros(n),
        "sum_wtot": np.zeros(n), "ss_wtot": np.zeros(n),
    }
    if naive:
        acc["hired"] = np.zeros(n, dtype=np.int64)
        if superior is not None:
            acc["sup"] = np.zeros(n, dtype=np.int64)
    if edges is not None:
        bins = len(edges) - 1
        width = float(edges[1] - edges[0])
        hist = np.zeros((n, bins + 1), dtype=np.int64)
        binidx = np.zeros((lanes, n), dtype=np.int64)

    comb_by_rank = _rank_combinations(n, c) if (kind == "lis" and not naive) else None
    lane_ids = np.arange(lanes)

    for k in range(n):  # company size k; hiring employee k + 1
        if naive:
            x = _naive_stage(rng, dist, strategy, k, lanes, mmax, msum, scores,
                             interviews, held_committee)
        else:
            if k == 0:
                x = dist._from_uniform(rng.random(lanes))
            elif kind == "mis":
                x = dist._tail_from_uniform(mmax, rng.random(lanes))
            elif kind == "ais":
                x = dist._tail_from_uniform(msum / k, rng.random(lanes))
            else:  # lis, rejection-free: pick the committee max by rank, then a tail draw
                if k <= c:
                    bar = mmax
                else:
                    w = np.broadcast_to(comb_by_rank[: k - c + 1],
                                        (lanes, k - c + 1)).copy()
                    if not held_committee:
                        # fresh committee per applicant: success re-weights by survival
                        w *= dist._survival_arr(scores[:, c - 1: k])
                    cum = np.cumsum(w, axis=1)
                    u = rng.random(lanes) * cum[:, -1]
                    sel = (cum <= u[:, None]).sum(axis=1)
                    bar = scores[lane_ids, c - 1 + np.minimum(sel, k - c)]
                x = dist._tail_from_uniform(bar, rng.random(lanes))
            if lis_like:
                scores[:, k] = x
                scores[:, : k + 1].sort(axis=1)

        if k == 0:
            mmax = x.copy()
        else:
            newbest = x > mmax
            age = np.where(newbest, 0, age + 1)
            np.maximum(mmax, x, out=mmax)
        msum += x
        if superior is not None:
            superior &= x > thresholds[k]
        if naive:
            all_hired &= interviews == k + 1

        loc_x = 1.0 - x if compact else x
        loc_a = 1.0 - msum / (k + 1) if compact else msum / (k + 1)
        loc_m = 1.0 - mmax if compact else mmax
        cum_weight += loc_x
        acc["sum_last"][k] = loc_x.sum()
        acc["ss_last"][k] = (loc_x * loc_x).sum()
        acc["sum_avg"][k] = loc_a.sum()
        acc["ss_avg"][k] = (loc_a * loc_a).sum()
        acc["sum_best"][k] = loc_m.sum()
        acc["ss_best"][k] = (loc_m * loc_m).sum()
        af = age.astype(float)
        acc["sum_age"][k] = af.sum()
        acc["ss_age"][k] = (af * af).sum()
        acc["sum_wtot"][k] = cum_weight.sum()
        acc["ss_wtot"][k] = (cum_weight * cum_weight).sum()
        if naive:
            acc["hired"][k] = all_hired.sum()
            if superior is not None:
                acc["sup"][k] = (all_hired & superior).sum()
        if edges is not None:
            idx = np.minimum((x / width).astype(np.int64), bins)
            hist[k] = np.bincount(idx, minlength=bins + 1)
            binidx[:, k] = idx

    if edges is not None:
        acc["hist"] = hist
        for j in range(n):
            for jp in range(j + 1, n):
                same = binidx[:, j] == binidx[:, jp]
                acc[f"pair_{j}_{jp}"] = np.bincount(binidx[same, j], minlength=bins + 1)
    if collect:
        acc["samples_last"] = x.copy()
        acc["samples_best"] = mmax.copy()
    return acc


def _naive_stage(rng, dist, strategy, size, lanes, mmax, msum, scores, interviews,
                 held_committee=False):
    """One hire for every lane under the naive kernel: draw applicants until
    each lane accepts one.  Chunks grow geometrically so lanes facing tiny
    acceptance probabilities (max-improvement at depth) stay vectorised."""
    kind = strategy.kind
    phantom = kind == "mlis1"
    c = 1 if phantom else strategy.committee
    if size == 0 and not phantom:
        interviews += 1
        hire = dist._from_uniform(rng.random(lanes))
        if scores is not None:
            scores[:, 0] = hire
        return hire

    pool = size + 1 if phantom else size
    c_eff = min(c, pool)
    random_committee = strategy.uses_committee and c_eff < pool
    held_bar = None
    if random_committee and held_committee:
        # the committee holds office for the whole hiring round
        cols = _floyd_indices(rng, (lanes,), pool, c_eff)
        held_bar = scores[np.arange(lanes)[:, None], cols].max(axis=1)
    hire = np.empty(lanes)
    pending = np.arange(lanes)
    chunk = 16
    while pending.size:
        p = pending.size
        u = rng.random((p, chunk))
        x = dist._from_uniform(u)
        if kind == "mis":
            bar = mmax[pending][:, None]
        elif kind == "ais":
            bar = (msum[pending] / size)[:, None]
        elif random_committee:
            if held_committee:
                bar = held_bar[pending][:, None]
            else:
                cols = _floyd_indices(rng, (p, chunk), pool, c_eff)
                vals = scores[pending][np.arange(p)[:, None, None], cols]
                bar = vals.max(axis=2)
        else:  # whole company serves (phantom included, contributing zero)
            bar = mmax[pending][:, None] if size else np.zeros((p, 1))
        accepted = x > bar
        first = accepted.argmax(axis=1)
        found = accepted[np.arange(p), first]
        sel = pending[found]
        hire[sel] = x[found, first[found]]
        interviews[sel] += first[found] + 1
        interviews[pending[~found]] += chunk
        pending = pending[~found]
        per_draw = max(c_eff, 1) + 1 if (random_committee and not held_committee) else 1
        cap = max(16, _CHUNK_BUDGET // (max(pending.size, 1) * per_draw))
        chunk = min(chunk * 8, cap)
    if scores is not None:
        scores[:, size] = hire
    return hire


def _episodes_block(payload: dict, lanes: int, rng) -> dict:
    """Interview exactly N applicants per trial, naive kernel; a trial dies at
    its first rejection.  Counts all-hired survivors (all prefixes) and, given
    thresholds, survivors whose every hire beat its expected score."""
    strategy: StrategySpec = payload["strategy"]
    dist: ScoreDistribution = payload["dist"]
    N: int = payload["n"]
    thresholds = payload.get("thresholds")
    kind = strategy.kind
    phantom = kind == "mlis1"
    c = 1 if phantom else strategy.committee

    alive = np.ones(lanes, dtype=bool)
    superior = np.ones(lanes, dtype=bool) if thresholds is not None else None
    mmax = np.zeros(lanes)
    msum = np.zeros(lanes)
    scores = np.zeros((lanes, N)) if strategy.uses_committee else None
    alive_counts = np.zeros(N, dtype=np.int64)
    sup_counts = np.zeros(N, dtype=np.int64)

    for s in range(N):
        x = dist._from_uniform(rng.random(lanes))
        if s == 0:
            bar = np.zeros(lanes) if phantom else np.full(lanes, -np.inf)
        elif kind == "mis":
            bar = mmax
        elif kind == "ais":
            bar = msum / s
        else:
            bar = _committee_bar_lanes(rng, scores, s, c, phantom, mmax)
        alive &= x > bar
        if scores is not None:
            scores[:, s] = x
        msum += x
        np.maximum(mmax, x, out=mmax)
        if superior is not None:
            superior &= x > thresholds[s]
            sup_counts[s] = (alive & superior).sum()
        alive_counts[s] = alive.sum()

    out = {"count": lanes, "alive": alive_counts}
    if superior is not None:
        out["sup"] = sup_counts
    return out


_BLOCK_FUNCS = {"growth": _growth_block, "episodes": _episodes_block}


# ---------------------------------------------------------------------------
# Block orchestration
# ---------------------------------------------------------------------------


def _run_block_slice(args):
    func_key, payload, blocks, seed = args
    fn = _BLOCK_FUNCS[func_key]
    return [(b, fn(payload, lanes, block_rng(seed, b))) for b, lanes in blocks]


def _fold(a: dict, b: dict) -> dict:
    out = {}
    for key, val in a.items():
        if key.startswith("samples_"):
            out[key] = np.concatenate([val, b[key]])
        else:
            out[key] = val + b[key]
    return out


def _map_blocks(func_key: str, payload: dict, trials: int, seed: int,
                workers: int | None) -> dict:
    plan = block_plan(trials)
    nw = min(resolve_workers(workers), len(plan))
    if nw <= 1:
        results = _run_block_slice((func_key, payload, plan, seed))
    else:
        slices = [plan[i::nw] for i in range(nw)]
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(nw) as pool:
            parts = pool.map(_run_block_slice,
                             [(func_key, payload, s, seed) for s in slices])
        results = [item for part in parts for item in part]
    results.sort(key=lambda t: t[0])
    acc = results[0][1]
    for _, r in results[1:]:
        acc = _fold(acc, r)
    return acc


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def run_growth(config: SimConfig, *, thresholds=None, track_superior: bool = False,
               workers: int | None = None, hist_edges=None,
               collect_samples: bool = False) -> GrowthStats:
    """Grow ``trials`` companies to ``target`` employees and aggregate per-size
    statistics.  Superiority tracking needs the naive kernel (the conditioning
    event "no rejection yet" must be observable) and a threshold table."""
    if config.mode != "grow":
        raise ConfigError("run_growth needs GrowToSize mode")
    n = config.target
    thr = None
    if track_superior:
        if config.kernel != "naive":
            raise ConfigError("superior tracking during growth needs the naive kernel")
        thr = np.asarray(thresholds, dtype=float) if thresholds is not None \
            else threshold_table(config.strategy, config.dist, n)
        if thr is None:
            raise ConfigError(
                "no analytic expected-score thresholds for this strategy/distribution; "
                "supply calibrated thresholds")
        if len(thr) != n:
            raise ConfigError("threshold table must have one entry per hire")
    payload = {
        "strategy": config.strategy, "dist": config.dist, "n": n,
        "kernel": config.kernel, "thresholds": thr,
        "hist_edges": None if hist_edges is None else np.asarray(hist_edges, float),
        "collect": collect_samples, "committee_mode": config.committee_mode,
    }
    raw = _map_blocks("growth", payload, config.trials, config.master_seed, workers)
    return _assemble_growth(config, raw, collect_samples)


def _assemble_growth(config: SimConfig, raw: dict, collected: bool) -> GrowthStats:
    n, count = config.target, raw["count"]

    def series(prefix):
        means = np.empty(n)
        errs = np.empty(n)
        for k in range(n):
            est = _estimate(raw[f"sum_{prefix}"][k], raw[f"ss_{prefix}"][k], count)
            means[k], errs[k] = est.mean, est.stderr
        return means, errs

    last = series("last")
    avg = series("avg")
    best = series("best")
    age_mean, age_err = series("age")
    age_var = np.maximum(raw["ss_age"] / count - (raw["sum_age"] / count) ** 2, 0.0)
    return GrowthStats(
        strategy=config.strategy.label, dist=config.dist.kind, kernel=config.kernel,
        space="gap" if config.dist.compact else "raw",
        count=count, sizes=np.arange(1, n + 1),
        last=last, average=avg, best=best,
        age_mean=age_mean, age_stderr=age_err, age_variance=age_var,
        weighted_total=series("wtot"),
        all_hired_count=raw.get("hired"),
        superior_count=raw.get("sup"),
        samples=(raw["samples_last"], raw["samples_best"]) if collected else None,
    )


def kernel_samples(config: SimConfig, workers: int | None = None):
    """(last-hire, best) score samples at the target size, for kernel
    cross-validation."""
    stats = run_growth(config, workers=workers, collect_samples=True)
    return stats.samples


def estimate_all_hired(config: SimConfig, workers: int | None = None) -> AllHiredResult:
    """Fraction of trials whose first N applicants are all hired.  Budget mode:
    each trial ends at its first rejection or at N hires."""
    if config.mode != "budget":
        raise ConfigError("all-hired estimation needs InterviewBudget mode")
    payload = {"strategy": config.strategy, "dist": config.dist, "n": config.target}
    raw = _map_blocks("episodes", payload, config.trials, config.master_seed, workers)
    return AllHiredResult(config.target, raw["count"], raw["alive"])


def estimate_superior(config: SimConfig, *, thresholds=None,
                      thresholds_source: str | None = None,
                      workers: int | None = None) -> SuperiorResult:
    """Fraction of size-n companies that are superior: every hire beat the
    expected score for its slot.

    A company "of size n" exists after n interviews only if nobody was
    rejected, matching the integral definitions whose normalising denominator
    is the all-hired probability; the estimator therefore conditions on that
    event.  Direct Monte Carlo only: a feasibility warning fires when the
    expected number of superior hits (from exact references, when known) is
    below 100.
    """
    if config.mode != "budget":
        raise ConfigError("superior estimation needs InterviewBudget mode")
    n = config.target
    thr = np.asarray(thresholds, dtype=float) if thresholds is not None else \
        threshold_table(config.strategy, config.dist, n)
    if thr is None:
        raise ConfigError(
            "no analytic expected-score thresholds for this strategy/distribution; "
            "supply calibrated thresholds (two-phase run)")
    if thresholds_source is None:
        thresholds_source = "analytic" if thresholds is None else "supplied"
    if len(thr) != n:
        raise ConfigError("threshold table must have one entry per hire")

    warning = None
    ref_p = exact.superior_reference(config.strategy.kind, config.dist.kind, n,
                                     config.strategy.committee)
    try:
        ref_f = float(exact.all_hired_exact(config.strategy.kind, config.dist.kind, n,
                                            config.strategy.committee))
    except exact.UnsupportedValueError:
        ref_f = None
    if ref_p is not None and ref_f is not None:
        expected_hits = config.trials * ref_f * ref_p
        if expected_hits < 100:
            warning = (f"expected superior hits {expected_hits:.1f} < 100 at "
                       f"{config.trials} trials; estimate will be noisy")
            warnings.warn(warning, RuntimeWarning, stacklevel=2)

    payload = {"strategy": config.strategy, "dist": config.dist, "n": n,
               "thresholds": thr}
    raw = _map_blocks("episodes", payload, config.trials, config.master_seed, workers)
    return SuperiorResult(
        n=n, trials=raw["count"], companies=int(raw["alive"][-1]),
        superior_companies=int(raw["sup"][-1]),
        thresholds_source=thresholds_source, feasibility_warning=warning)


def calibrate_thresholds(strategy: StrategySpec, dist: ScoreDistribution, n: int,
                         trials: int, master_seed: int,
                         workers: int | None = None) -> np.ndarray:
    """Phase-1 empirical expected scores <x_j> from a rejection-free growth run,
    for strategy/distribution pairs without analytic thresholds."""
    kernel = "naive" if strategy.kind == "mlis1" else "rejection-free"
    cfg = SimConfig(strategy, dist, "grow", n, trials, master_seed, kernel)
    stats = run_growth(cfg, workers=workers)
    return stats.mean_scores()


def density_histogram(config: SimConfig, bins: int, *, x_cap: float | None = None,
                      workers: int | None = None) -> DensityResult:
    """Histogram of all employee scores at the target size, normalised so the
    full-range integral equals the company size.

    Compact supports bin (0, 1); the exponential bins [0, x_cap] with an
    overflow bucket above (default cap: twice the analytic mean best score
    when known, else twice a pilot-run estimate).
    """
    if config.mode != "grow":
        raise ConfigError("density estimation needs GrowToSize mode")
    n = config.target
    if config.dist.compact:
        cap = 1.0
    elif x_cap is not None:
        cap = float(x_cap)
    else:
        cap = _default_cap(config, workers)
    edges = np.linspace(0.0, cap, bins + 1)
    payload = {
        "strategy": config.strategy, "dist": config.dist, "n": n,
        "kernel": config.kernel, "thresholds": None, "hist_edges": edges,
        "committee_mode": config.committee_mode,
    }
    raw = _map_blocks("growth", payload, config.trials, config.master_seed, workers)
    pair = {}
    for j in range(n):
        for jp in range(j + 1, n):
            pair[(j, jp)] = raw[f"pair_{j}_{jp}"]
    return DensityResult(
        strategy=config.strategy.label, dist=config.dist.kind, n=n,
        count=raw["count"], edges=edges, hist=raw["hist"], pair_hist=pair,
        weighted_sum=(raw["sum_wtot"], raw["ss_wtot"]))


def _default_cap(config: SimConfig, workers) -> float:
    n = config.target
    if config.strategy.kind == "mis":
        return 2.0 * n  # analytic mean best score is n for exponential scores
    pilot = SimConfig(config.strategy, config.dist, "grow", n, 4096,
                      config.master_seed + 1, config.kernel)
    stats = run_growth(pilot, workers=workers)
    return 2.0 * float(stats.mean_best()[-1])


def fit_power_law(sizes, values, window: tuple[int, int]) -> PowerLawFit:
    """Least-squares slope on log-log data inside ``window`` (inclusive).

    Returns the magnitude of the slope, so decaying series (best gap, exponent
    beta) and growing series (best age, exponent alpha) both report positive
    exponents; the amplitude is exp(intercept).
    """
    lo, hi = window
    sizes = np.asarray(sizes, dtype=float)
    values = np.asarray(values, dtype=float)
    mask = (sizes >= lo) & (sizes <= hi)
    if mask.sum() < 5:
        raise ValueError("fit window must contain at least 5 points")
    if np.any(values[mask] <= 0):
        raise ValueError("power-law fit requires positive values in the window")
    X = np.log(sizes[mask])
    Y = np.log(values[mask])
    slope, intercept = np.polyfit(X, Y, 1)
    pred = slope * X + intercept
    ss_res = float(((Y - pred) ** 2).sum())
    ss_tot = float(((Y - Y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return PowerLawFit(exponent=abs(float(slope)), amplitude=float(math.exp(intercept)),
                       fit_window=(int(lo), int(hi)), r_squared=r2)


def rejection_free_step(strategy: StrategySpec, state: CompanyState,
                        dist: ScoreDistribution, rng) -> tuple[float, tuple[int, ...]]:
    """Draw the next hire directly from its conditional law given acceptance.

    Max-improvement: tail above the running max.  Average-improvement: tail
    above the mean.  Local-improvement: a committee S is chosen with
    probability proportional to survival(max score in S), then the hire is a
    tail draw above that max; the resulting hire-sequence law equals the naive
    kernel's conditioned on hires.
    """
    if strategy.kind not in ("mis", "ais", "lis"):
        raise ConfigError("rejection-free stepping supports mis, ais, and lis only")
    n = state.n
    if n == 0:
        return dist.sample(rng), ()
    if strategy.kind == "mis":
        return dist.sample_tail(state.max_score, rng), ()
    if strategy.kind == "ais":
        return dist.sample_tail(state.mean_score, rng), ()
    c = strategy.committee
    order = sorted(range(n), key=state.scores.__getitem__)
    if n <= c:
        return dist.sample_tail(state.max_score, rng), tuple(range(n))
    weights = [comb(t, c - 1) * dist.survival(state.scores[order[t]])
               for t in range(c - 1, n)]
    total = sum(weights)
    u = rng.random() * total
    acc = 0.0
    pick = len(weights) - 1
    for idx, w in enumerate(weights):
        acc += w
        if u < acc:
            pick = idx
            break
    top = c - 1 + pick
    rest_pool = top  # ranks strictly below the committee max
    members = [order[top]]
    if c > 1:
        chosen: list[int] = []
        for i in range(rest_pool - (c - 1), rest_pool):
            r = int(rng.random() * (i + 1))
            chosen.append(i if r in chosen else r)
        members.extend(order[t] for t in chosen)
    score = dist.sample_tail(state.scores[order[top]], rng)
    return score, tuple(sorted(members))
