"""Closed-form results, recurrences, and named constants, evaluated exactly.

Rational quantities are returned as ``fractions.Fraction`` (arbitrary
precision); irrational ones as floats or high-precision quadrature values.
Gamma-function ratios are always evaluated through multiplicative recurrences,
never through large-argument Gamma calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np
from scipy.integrate import quad

EULER_GAMMA = 0.5772156649015329  # literature value

# Growth constants of the labeled-acyclic-digraph counting sequence, fitted from
# the exact recurrence at n ~ 60 (converged to all printed digits).
DAG_GROWTH_RATE_P = 1.488078545600
DAG_AMPLITUDE_M = 0.5743623733

BEST_GAP_AMPLITUDE_B = 3.0 / math.sqrt(math.pi)


class UnsupportedValueError(ValueError):
    """Requested closed form is not available for this strategy/distribution pair."""


# --------------------------------------------------------------------------- gaps


def mis_last_gap(j: int) -> Fraction:
    """Mean gap 1 - <x_j> of the j-th hire under max-improvement, uniform scores: 2^-j."""
    if j < 1:
        raise ValueError("index must be >= 1")
    return Fraction(1, 2**j)


def mis_mean_gap(n: int) -> Fraction:
    """Mean gap 1 - <a_n> of the company average under max-improvement, uniform scores."""
    if n < 1:
        raise ValueError("size must be >= 1")
    return Fraction(2**n - 1, n * 2**n)


@lru_cache(maxsize=None)
def ais_mean_gap(n: int) -> Fraction:
    """Mean gap 1 - <a_n> under average-improvement, uniform scores.

    Product recurrence mu_{k+1} = mu_k (k + 1/2)/(k + 1) from mu_1 = 1/2; the
    closed form is the central binomial ratio C(2n, n)/4^n.
    """
    if n < 0:
        raise ValueError("size must be >= 0")
    if n == 0:
        return Fraction(1)
    prev = ais_mean_gap(n - 1)
    return prev * Fraction(2 * n - 1, 2 * n)


def ais_last_gap(n: int) -> Fraction:
    """Mean gap 1 - <x_n> of the last hire under average-improvement, uniform scores."""
    if n < 1:
        raise ValueError("index must be >= 1")
    return ais_mean_gap(n - 1) / 2


@lru_cache(maxsize=None)
def tent_ais_mean_gap(n: int) -> Fraction:
    """Mean gap of the company average under average-improvement, tent scores."""
    if n < 1:
        raise ValueError("size must be >= 1")
    if n == 1:
        return Fraction(2, 3)
    return tent_ais_mean_gap(n - 1) * Fraction(3 * n - 1, 3 * n)


def ais_mean_gap_series(n: int) -> np.ndarray:
    """Float array of ais_mean_gap(1..n), by the stable product recurrence."""
    out = np.empty(n)
    mu = 0.5
    for k in range(1, n + 1):
        out[k - 1] = mu
        mu *= (k + 0.5) / (k + 1.0)
    return out


def tent_ais_mean_gap_series(n: int) -> np.ndarray:
    out = np.empty(n)
    mu = 2.0 / 3.0
    for k in range(1, n + 1):
        out[k - 1] = mu
        mu *= (k + 2.0 / 3.0) / (k + 1.0)
    return out


# ---------------------------------------------------------------- harmonic numbers


@lru_cache(maxsize=None)
def harmonic(n: int) -> Fraction:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return Fraction(0)
    return harmonic(n - 1) + Fraction(1, n)


def harmonic_float(n: int) -> float:
    return math.fsum(1.0 / k for k in range(1, n + 1))


# ------------------------------------------------------------ all-hired probabilities


def all_hired_exact(strategy_kind: str, dist_kind: str, n_applicants: int,
                    committee: int = 1) -> Fraction:
    """Exact probability that the first N applicants are all hired.

    Supported pairs: mis/any, ais/uniform, ais/exp, ais/tent (N <= 3),
    lis/any, mlis1/any.  Raises UnsupportedValueError otherwise.
    """
    N = n_applicants
    if N < 1:
        raise ValueError("N must be >= 1")
    if strategy_kind == "mis":
        return Fraction(1, factorial(N))
    if strategy_kind == "lis":
        c = committee
        if c < 1:
            raise ValueError("committee size must be >= 1")
        if N <= c:
            return Fraction(1, factorial(N))
        return Fraction(1, factorial(c) * (c + 1) ** (N - c))
    if strategy_kind == "mlis1":
        return Fraction(N + 1, 2**N)
    if strategy_kind == "ais":
        if dist_kind == "uniform":
            out = Fraction(1)
            for j in range(1, N):
                out *= 1 - Fraction(j, j + 1) ** (N - j)
            return out
        if dist_kind == "exp":
            return Fraction(factorial(N), N**N)
        if dist_kind == "tent":
            table = {1: Fraction(1), 2: Fraction(1, 2), 3: Fraction(17, 72)}
            if N in table:
                return table[N]
            raise UnsupportedValueError("ais/tent all-hired known only for N <= 3")
    raise UnsupportedValueError(f"no exact all-hired value for {strategy_kind}/{dist_kind}")


def ais_uniform_all_hired_table() -> dict[int, Fraction]:
    """Reference all-hired probabilities for average-improvement, uniform scores, N = 2..9."""
    return {
        2: Fraction(1, 2),
        3: Fraction(1, 4),
        4: Fraction(35, 288),
        5: Fraction(133, 2304),
        6: Fraction(14911, 552960),
        7: Fraction(991067, 79626240),
        8: Fraction(13058067737, 2293235712000),
        9: Fraction(3014412193738231, 1165037125238784000),
    }


# --------------------------------------------------- superior-company probabilities


@lru_cache(maxsize=None)
def _superior_recurrence_list(nmax: int) -> tuple[Fraction, ...]:
    P = [Fraction(1)]
    for n in range(1, nmax + 1):
        s = Fraction(0)
        for k in range(1, n + 1):
            s += Fraction((-1) ** (k - 1) * comb(n, k), 2 ** (n * k)) * P[n - k]
        P.append(s)
    return tuple(P)


def superior_recurrence(n: int) -> tuple[Fraction, int]:
    """Superior fraction P_n for max-improvement/uniform via the inclusion-exclusion
    recurrence P_n = sum_k (-1)^(k-1) C(n,k) 2^(-nk) P_{n-k}, plus the labeled
    acyclic-digraph count D_n = P_n 2^(n^2), which must be a positive integer.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    P = _superior_recurrence_list(n)[n]
    D = P * Fraction(2) ** (n * n)
    if D.denominator != 1:
        raise ArithmeticError(f"P_{n} * 2^(n^2) is not an integer")
    return P, int(D)


def mis_superior_asymptotic(n: int, p: float = DAG_GROWTH_RATE_P,
                            M: float = DAG_AMPLITUDE_M) -> float:
    """Large-n form n!/(M p^n) 2^(-n(n+1)/2) of the max-improvement superior fraction."""
    if n < 1:
        raise ValueError("n must be >= 1")
    log_val = (
        math.lgamma(n + 1) - math.log(M) - n * math.log(p)
        - 0.5 * n * (n + 1) * math.log(2.0)
    )
    return math.exp(log_val)


def ais_uniform_superior_table() -> dict[int, Fraction]:
    """Reference superior fractions for average-improvement, uniform scores, n <= 5."""
    return {
        1: Fraction(1, 2),
        2: Fraction(3, 2**4),
        3: Fraction(3**2 * 7, 2**10),
        4: Fraction(3**2 * 43 * 173, 2**19 * 7),
        5: Fraction(83 * 2051182663, 2**34 * 3 * 5 * 7 * 19),
    }


def exp_superior_reference() -> dict[tuple[str, int], float]:
    """High-precision superior fractions for the exponential score law.

    Keys are (strategy label, n); LIS entries apply for the stated committee
    size and above, as the strategies coincide while the company is small.
    """
    e = math.e
    return {
        ("any", 1): 1.0 / e,
        ("any", 2): (2 * e - 1) / e**4,
        ("ais", 3): (18 * e**2 - 9 * e - 14) / (4 * e**7.5),
        ("ais", 4): (288 * e**3 - 144 * e**2 - 224 * e - 397) / (27 * e ** (34 / 3)),
        ("ais", 5): (540000 * e**4 - 270000 * e**3 - 420000 * e**2
                     - 744375 * e - 1448239) / (20736 * e ** (185 / 12)),
        ("lis:1", 3): (4 * e - math.sqrt(e) - 2) / e**6.5,
        ("lis:2", 3): (6 * e**3 - 6 * e**2 + 1) / e**9,
        ("lis:3", 4): (24 * e**6 - 36 * e**5 + 6 * e**4 + 8 * e**3 - 1) / e**16,
        ("lis:4", 5): (120 * e**10 - 240 * e**9 + 90 * e**8 + 60 * e**7
                       - 20 * e**6 - 10 * e**4 + 1) / e**25,
        ("lis:5", 6): (720 * e**15 - 1800 * e**14 + 1080 * e**13 + 390 * e**12
                       - 360 * e**11 - 70 * e**9 + 30 * e**8 + 12 * e**5 - 1) / e**36,
    }


def superior_reference(strategy_kind: str, dist_kind: str, n: int,
                       committee: int = 1) -> float | None:
    """Best known exact value of the superior fraction, or None."""
    if n <= 0:
        raise ValueError("n must be >= 1")
    if dist_kind == "uniform":
        if strategy_kind == "mis" or n <= 2:
            return float(superior_recurrence(n)[0])
        if strategy_kind == "ais":
            table = ais_uniform_superior_table()
            return float(table[n]) if n in table else None
        return None
    if dist_kind == "exp":
        ref = exp_superior_reference()
        if n <= 2:
            return ref[("any", n)]
        if strategy_kind == "ais":
            return ref.get(("ais", n))
        if strategy_kind == "lis":
            if n <= committee + 1:
                # identical to max-improvement while everyone serves on the committee
                key = {3: ("lis:2", 3), 4: ("lis:3", 4), 5: ("lis:4", 5), 6: ("lis:5", 6)}
                return ref.get(key.get(n, (None, None)))
            if committee == 1 and n == 3:
                return ref[("lis:1", 3)]
        return None
    return None


# ---------------------------------------------------------------- expected scores


def expected_score(strategy_kind: str, dist_kind: str, j: int,
                   committee: int = 1) -> float | None:
    """Analytic mean score <x_j> of the j-th hire, or None where unknown.

    Known pairs: mis/uniform, ais/uniform, mis/exp, ais/exp, lis/exp with
    committee 1 or 2 (all j) and any committee for j <= committee + 1.
    """
    if j < 1:
        raise ValueError("index must be >= 1")
    if dist_kind == "uniform":
        if strategy_kind == "mis":
            return float(1 - mis_last_gap(j))
        if strategy_kind == "ais":
            return float(1 - ais_last_gap(j))
        return None
    if dist_kind == "exp":
        if strategy_kind == "mis":
            return float(j)
        if strategy_kind in ("ais",):
            return float(1 + harmonic(j - 1))
        if strategy_kind == "lis":
            if committee == 1:
                return float(1 + harmonic(j - 1))
            if committee == 2:
                return float(j) if j == 1 else float(2 * harmonic(j - 1))
            if j <= committee + 1:
                return float(j)
            return None
        return None
    return None


def threshold_table(strategy_kind: str, dist_kind: str, n: int,
                    committee: int = 1) -> np.ndarray | None:
    """Array of <x_j> for j = 1..n, or None if any entry is unavailable."""
    vals = [expected_score(strategy_kind, dist_kind, j, committee) for j in range(1, n + 1)]
    if any(v is None for v in vals):
        return None
    return np.array(vals, dtype=float)


# -------------------------------------------------------------------- score density


def score_density(strategy_kind: str, dist_kind: str, n: int | None, x: float) -> float:
    """Closed-form employee-score density rho_n(x); n = None means the n -> inf limit.

    Supported: mis/uniform for every n and the limit; ais/uniform for n <= 3,
    plus the small-x branch valid for x < 1/(n-1).
    """
    if dist_kind != "uniform":
        raise UnsupportedValueError("closed-form densities available for uniform scores only")
    if not (0.0 < x < 1.0):
        raise ValueError("x must lie inside (0, 1)")
    L = -math.log1p(-x)
    if strategy_kind == "mis":
        if n is None:
            return 1.0 / (1.0 - x)
        if n < 1:
            raise ValueError("n must be >= 1")
        return math.fsum(L**j / factorial(j) for j in range(n))
    if strategy_kind == "ais":
        if n is None:
            raise UnsupportedValueError("no closed-form limiting density for average-improvement")
        if n == 1:
            return 1.0
        if n == 2:
            return 1.0 + L
        if n == 3:
            if x < 0.5:
                return 1.0 + L + L * L
            ln2 = math.log(2.0)
            return 1.0 - ln2 * ln2 + (1.0 + 2.0 * ln2) * L
        if x < 1.0 / (n - 1):
            # small-x branch: unnormalised powers of -ln(1-x)
            return math.fsum(L**j for j in range(n))
        raise UnsupportedValueError(
            f"ais density for n={n} known only on x < 1/{n - 1}")
    raise UnsupportedValueError(f"no closed-form density for {strategy_kind}")


def ais_density_heuristic(n: int, x: float) -> tuple[float, bool]:
    """Large-n density estimate for average-improvement, uniform scores.

    Returns (value, heuristic flag); the (1-x)^-3 slope is believed exact while
    the 2/(3 pi) amplitude is not, so callers must not assert against it tightly.
    """
    if n < 1 or not (0.0 < x < 1.0):
        raise ValueError("need n >= 1 and x in (0, 1)")
    cut = 1.0 - 1.0 / math.sqrt(math.pi * n)
    amp = 2.0 / (3.0 * math.pi)
    val = amp * (1.0 - x) ** -3 if x < cut else amp * (math.pi * n) ** 1.5
    return val, True


def _powlog_antiderivative(j: int, t: float) -> float:
    """Antiderivative of (ln(1/t))^j with respect to t, vanishing at t = 0."""
    if t == 0.0:
        return 0.0
    L = math.log(1.0 / t)
    return t * math.fsum(factorial(j) / factorial(i) * L**i for i in range(j + 1))


def _bin_integral_powlog(j: int, a: float, b: float) -> float:
    """Integral of (-ln(1-x))^j over [a, b] in x."""
    return _powlog_antiderivative(j, 1.0 - a) - _powlog_antiderivative(j, 1.0 - b)


def score_density_bin_means(strategy_kind: str, dist_kind: str, n: int,
                            edges: np.ndarray) -> np.ndarray:
    """Exact bin averages of the closed-form density over consecutive edge intervals.

    Needed for histogram comparison: midpoint evaluation is biased where the
    density diverges near x = 1.
    """
    if dist_kind != "uniform":
        raise UnsupportedValueError("bin means available for uniform scores only")
    edges = np.asarray(edges, dtype=float)
    out = np.empty(len(edges) - 1)
    for i, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
        w = b - a
        if strategy_kind == "mis":
            val = math.fsum(_bin_integral_powlog(j, a, b) / factorial(j) for j in range(n))
        elif strategy_kind == "ais" and n == 3:
            val = 0.0
            for lo, hi in _split_at(a, b, 0.5):
                if hi <= 0.5 + 1e-15 and lo < 0.5:
                    val += math.fsum(_bin_integral_powlog(j, lo, hi) for j in range(3))
                else:
                    ln2 = math.log(2.0)
                    lin = _linear_log_integral(lo, hi)
                    val += (1.0 - ln2 * ln2) * (hi - lo) - (1.0 + 2.0 * ln2) * lin
        elif strategy_kind == "ais" and n <= 2:
            val = math.fsum(_bin_integral_powlog(j, a, b) / factorial(j) for j in range(n))
        else:
            raise UnsupportedValueError(f"no bin means for {strategy_kind}, n={n}")
        out[i] = val / w
    return out


def _split_at(a: float, b: float, cut: float):
    if a < cut < b:
        return [(a, cut), (cut, b)]
    return [(a, b)]


def _linear_log_integral(a: float, b: float) -> float:
    """Integral of ln(1-x) over [a, b]."""

    def anti(x):
        t = 1.0 - x
        return t * (1.0 - math.log(t)) if t > 0.0 else 0.0

    return anti(b) - anti(a)


# -------------------------------------------------------------- quadrature constants


@lru_cache(maxsize=1)
def all_hired_decay_constant() -> float:
    """Decay rate Lambda of the average-improvement all-hired probabilities,
    -integral_0^1 ln(1 - e^(1 - 1/y)) dy, computed to ~1e-10.

    The integrand has an essential flat spot at y -> 0 and a log singularity at
    y -> 1; split at 1/2 and substitute u = 1 - e^(1 - 1/y) on the upper half.
    """
    part1, _ = quad(lambda y: -math.log1p(-math.exp(1.0 - 1.0 / y)), 0.0, 0.5,
                    epsabs=1e-14, epsrel=1e-13, limit=200)

    def upper(u):
        return -math.log(u) / ((1.0 - u) * (1.0 - math.log1p(-u)) ** 2)

    u_at_half = 1.0 - math.exp(-1.0)
    part2, _ = quad(upper, 0.0, u_at_half, epsabs=1e-14, epsrel=1e-13, limit=200)
    return part1 + part2


@lru_cache(maxsize=1)
def age_amplitude_c() -> float:
    """Best-employee age amplitude C = e^2 * integral_1^inf e^(-2 x^(3/2)) dx.

    Computed via the substitution t = x^(3/2), which tames the infinite range.
    """
    val, _ = quad(lambda t: (2.0 / 3.0) * t ** (-1.0 / 3.0) * math.exp(-2.0 * t),
                  1.0, math.inf, epsabs=1e-14, epsrel=1e-13, limit=200)
    return math.exp(2.0) * val


@dataclass(frozen=True)
class NamedConstant:
    name: str
    value: float
    provenance: str  # "quadrature" | "literature" | "recurrence-fit"
    heuristic: bool = False


def named_constants() -> dict[str, NamedConstant]:
    """All named constants used by the verification suite."""
    return {
        "all_hired_decay": NamedConstant("all_hired_decay", all_hired_decay_constant(),
                                         "quadrature"),
        "age_amplitude": NamedConstant("age_amplitude", age_amplitude_c(),
                                       "quadrature", heuristic=True),
        "best_gap_amplitude": NamedConstant("best_gap_amplitude", BEST_GAP_AMPLITUDE_B,
                                            "literature", heuristic=True),
        "dag_growth_rate": NamedConstant("dag_growth_rate", DAG_GROWTH_RATE_P,
                                         "recurrence-fit"),
        "dag_amplitude": NamedConstant("dag_amplitude", DAG_AMPLITUDE_M,
                                       "recurrence-fit"),
        "euler_gamma": NamedConstant("euler_gamma", EULER_GAMMA, "literature"),
    }


# ------------------------------------------------------------------ misc references


def exp_mean_average(strategy_kind: str, n: int, committee: int = 1) -> float | None:
    """Analytic <a_n> for exponential scores, where known."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if strategy_kind == "mis":
        return (n + 1) / 2.0  # mean of 1..n
    if strategy_kind == "ais" or (strategy_kind == "lis" and committee == 1):
        return float(harmonic(n))
    return None


def decimal_string(value: Fraction, digits: int = 30) -> str:
    """Decimal rendering of an exact rational, truncation-free to ``digits`` places."""
    if value < 0:
        return "-" + decimal_string(-value, digits)
    whole, rem = divmod(value.numerator, value.denominator)
    scaled = rem * 10**digits
    frac_digits, leftover = divmod(scaled, value.denominator)
    # round half up on the last digit
    if 2 * leftover >= value.denominator:
        frac_digits += 1
        if frac_digits >= 10**digits:
            whole += 1
            frac_digits = 0
    return f"{whole}.{frac_digits:0{digits}d}"
