import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import kstest

from hirelab.distributions import (
    EXPONENTIAL,
    TENT,
    UNIFORM,
    DegenerateFloorError,
    ScoreDomainError,
    parse_distribution,
)
from hirelab.rng import trial_rng

ALL = [UNIFORM, TENT, EXPONENTIAL]


def test_parse_aliases():
    assert parse_distribution("uniform") is not None
    assert parse_distribution("exponential").kind == "exp"
    with pytest.raises(ValueError):
        parse_distribution("cauchy")


@pytest.mark.parametrize("dist", ALL)
def test_density_normalises(dist):
    hi = 1.0 if dist.compact else 60.0
    total, _ = quad(dist.density, 0.0, hi, epsabs=1e-14, limit=200)
    assert abs(total - 1.0) < 1e-12


@pytest.mark.parametrize("dist", ALL)
def test_survival_montone_and_limits(dist):
    lo, hi = dist.support
    assert dist.survival(lo) == 1.0
    if dist.compact:
        assert dist.survival(1.0) == 0.0
    xs = np.linspace(lo, 1.0 if dist.compact else 30.0, 200)
    vals = [dist.survival(float(x)) for x in xs]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_survival_values():
    assert UNIFORM.survival(0.25) == 0.75
    assert EXPONENTIAL.survival(0.0) == 1.0
    # tent: integral of 2(1-y) over [0.5, 1], by an independent quadrature oracle
    oracle, _ = quad(lambda y: 2.0 * (1.0 - y), 0.5, 1.0)
    assert abs(TENT.survival(0.5) - oracle) < 1e-12
    assert abs(TENT.survival(0.5) - 0.25) < 1e-15


def test_survival_domain_errors():
    with pytest.raises(ScoreDomainError):
        UNIFORM.survival(1.5)
    with pytest.raises(ScoreDomainError):
        EXPONENTIAL.survival(-0.1)


def test_sample_support_and_means():
    rng = trial_rng(101)
    n = 1_000_000
    u = rng.random(n)
    xs = UNIFORM._from_uniform(u)
    assert ((xs >= 0) & (xs < 1)).all()

    xs = EXPONENTIAL._from_uniform(rng.random(n))
    assert (xs >= 0).all()
    assert abs(xs.mean() - 1.0) < 0.005

    xs = TENT._from_uniform(rng.random(n))
    assert ((xs >= 0) & (xs < 1)).all()
    # tent mean: quadrature oracle for the first moment of 2(1-x)
    oracle, _ = quad(lambda x: 2.0 * x * (1.0 - x), 0.0, 1.0)
    assert abs(oracle - 1.0 / 3.0) < 1e-14
    assert abs(xs.mean() - oracle) < 0.002


def test_single_sample_consumes_one_variate():
    a, b = trial_rng(7), trial_rng(7)
    xs = [UNIFORM.sample(a) for _ in range(5)]
    raw = b.random(5)
    assert np.allclose(xs, raw)


@pytest.mark.parametrize("dist", ALL)
def test_kolmogorov_smirnov_against_analytic_cdf(dist):
    rng = trial_rng(55)
    xs = dist._from_uniform(rng.random(1_000_000))
    res = kstest(xs, lambda v: dist._cdf_arr(v))
    assert res.pvalue > 1e-3


def test_tail_sampling_means():
    rng = trial_rng(77)
    n = 1_000_000
    xs = UNIFORM._tail_from_uniform(0.5, rng.random(n))
    assert (xs > 0.5).all()
    assert abs(xs.mean() - 0.75) < 0.001

    xs = EXPONENTIAL._tail_from_uniform(2.0, rng.random(n))
    assert (xs > 2.0).all()
    assert abs(xs.mean() - 3.0) < 0.005  # memoryless: floor + unit mean


def test_tent_tail_at_zero_floor_reduces_to_sample():
    u = trial_rng(9).random(1000)
    assert np.array_equal(TENT._tail_from_uniform(0.0, u), TENT._from_uniform(u))


@pytest.mark.parametrize("dist", ALL)
def test_conditional_tail_survival(dist):
    # P(score > g | score > f) must equal R(g)/R(f)
    f = 0.3
    g = 0.6 if dist.compact else 1.1
    rng = trial_rng(13)
    n = 400_000
    xs = dist._tail_from_uniform(f, rng.random(n))
    p_hat = float((xs > g).mean())
    p_ref = dist.survival(g) / dist.survival(f)
    se = math.sqrt(p_ref * (1 - p_ref) / n)
    assert abs(p_hat - p_ref) <= 3 * se


def test_tail_degenerate_floor():
    rng = trial_rng(1)
    with pytest.raises(DegenerateFloorError):
        UNIFORM.sample_tail(1.0, rng)


def test_scalar_tail_matches_vector_path():
    rng1, rng2 = trial_rng(3), trial_rng(3)
    a = [EXPONENTIAL.sample_tail(1.5, rng1) for _ in range(4)]
    b = EXPONENTIAL._tail_from_uniform(1.5, rng2.random(4))
    assert np.allclose(a, b)
