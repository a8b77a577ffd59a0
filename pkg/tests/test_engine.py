import math
import warnings

import numpy as np
import pytest
from scipy.stats import ks_2samp

from hirelab import exact
from hirelab.distributions import EXPONENTIAL, TENT, UNIFORM
from hirelab.engine import (
    ConfigError,
    SimConfig,
    calibrate_thresholds,
    density_histogram,
    estimate_all_hired,
    estimate_superior,
    fit_power_law,
    kernel_samples,
    rejection_free_step,
    run_growth,
)
from hirelab.rng import trial_rng
from hirelab.strategies import AIS, MIS, MLIS1, CompanyState, lis


# ------------------------------------------------------------------ validation


def test_config_validation():
    with pytest.raises(ConfigError):
        SimConfig(MIS, UNIFORM, "budget", 4, 100, kernel="rejection-free")
    with pytest.raises(ConfigError):
        SimConfig(MIS, UNIFORM, "grow", 0, 100)
    with pytest.raises(ConfigError):
        SimConfig(MLIS1, UNIFORM, "grow", 4, 100)  # needs the naive kernel
    with pytest.raises(ConfigError):
        SimConfig(AIS, UNIFORM, "grow", 4, 100, committee_mode="per-hire")
    SimConfig(MLIS1, UNIFORM, "grow", 4, 100, kernel="naive")


def test_superior_needs_thresholds():
    cfg = SimConfig(lis(1), UNIFORM, "budget", 3, 1000, kernel="naive")
    with pytest.raises(ConfigError):
        estimate_superior(cfg)


def test_growth_superior_tracking_needs_naive():
    cfg = SimConfig(MIS, UNIFORM, "grow", 3, 1000)
    with pytest.raises(ConfigError):
        run_growth(cfg, track_superior=True)


# ------------------------------------------------------------------ growth laws


def test_mis_growth_gaps_and_identities():
    cfg = SimConfig(MIS, UNIFORM, "grow", 10, 200_000, 301)
    st = run_growth(cfg)
    for k in range(1, 11):
        ref = float(exact.mis_last_gap(k))
        assert abs(st.last_gap()[k - 1] - ref) <= 4 * st.last[1][k - 1]
    # last hire is always the best, so the two series coincide and ages vanish
    assert np.array_equal(st.last[0], st.best[0])
    assert np.all(st.age_mean == 0.0)
    assert np.all(st.age_variance == 0.0)
    # the identity holds per trial, not just on average
    xs, ms = kernel_samples(SimConfig(MIS, UNIFORM, "grow", 5, 20_000, 330))
    assert np.array_equal(xs, ms)


def test_best_gap_never_exceeds_mean_gap():
    # the maximum dominates the average, so its gap is the smaller one
    for strat in (MIS, AIS, lis(1)):
        st = run_growth(SimConfig(strat, UNIFORM, "grow", 8, 50_000, 331))
        assert np.all(st.best_gap() <= st.mean_gap() + 1e-12)


def test_ais_growth_mean_gap():
    cfg = SimConfig(AIS, UNIFORM, "grow", 8, 200_000, 302)
    st = run_growth(cfg)
    for k in (1, 3, 8):
        ref = float(exact.ais_mean_gap(k))
        assert abs(st.mean_gap()[k - 1] - ref) <= 4 * st.average[1][k - 1]


def test_ais_tent_growth_mean_gap():
    cfg = SimConfig(AIS, TENT, "grow", 6, 200_000, 303)
    st = run_growth(cfg)
    for k in (1, 4, 6):
        ref = float(exact.tent_ais_mean_gap(k))
        assert abs(st.mean_gap()[k - 1] - ref) <= 4 * st.average[1][k - 1]


def test_lis_uniform_mean_gap_three():
    cfg = SimConfig(lis(1), UNIFORM, "grow", 3, 400_000, 304)
    st = run_growth(cfg)
    ref = 5 / 24 + math.log(2) / 6
    assert abs(st.mean_gap()[2] - ref) <= 4 * st.average[1][2]


def test_lis_exp_fresh_committee_third_hire():
    # fresh committee per applicant: <x_3> = 3 - pi^2/12 for exponential scores
    cfg = SimConfig(lis(1), EXPONENTIAL, "grow", 3, 500_000, 305)
    st = run_growth(cfg)
    ref = 3 - math.pi**2 / 12
    assert abs(st.last[0][2] - ref) <= 4 * st.last[1][2]


def test_lis_exp_held_committee_harmonic_laws():
    # a committee held until it hires reproduces the harmonic mean-score law
    cfg = SimConfig(lis(1), EXPONENTIAL, "grow", 8, 400_000, 306,
                    committee_mode="per-hire")
    st = run_growth(cfg)
    for k in (2, 5, 8):
        ref = 1 + float(exact.harmonic(k - 1))
        assert abs(st.last[0][k - 1] - ref) <= 4 * st.last[1][k - 1]


def test_lis2_exp_held_committee_fifth_hire():
    # held committees: 2 H_(k-1) is exact through k = 4; the true k = 5 mean is 151/36
    cfg = SimConfig(lis(2), EXPONENTIAL, "grow", 5, 600_000, 307,
                    committee_mode="per-hire")
    st = run_growth(cfg)
    assert abs(st.last[0][3] - 2 * float(exact.harmonic(3))) <= 4 * st.last[1][3]
    assert abs(st.last[0][4] - 151 / 36) <= 4 * st.last[1][4]
    assert abs(st.last[0][4] - 2 * float(exact.harmonic(4))) > 8 * st.last[1][4]


def test_growth_naive_matches_rejection_free_means():
    for strat in (MIS, AIS, lis(2)):
        naive = run_growth(SimConfig(strat, UNIFORM, "grow", 5, 100_000, 308, "naive"))
        rf = run_growth(SimConfig(strat, UNIFORM, "grow", 5, 100_000, 309))
        for k in range(5):
            se = math.hypot(naive.last[1][k], rf.last[1][k])
            assert abs(naive.last[0][k] - rf.last[0][k]) <= 4 * se


def test_growth_naive_tracks_all_hired_fraction():
    cfg = SimConfig(AIS, UNIFORM, "grow", 4, 200_000, 310, "naive")
    st = run_growth(cfg, track_superior=True)
    frac = st.all_hired_fraction()
    for k in (2, 4):
        ref = float(exact.all_hired_exact("ais", "uniform", k))
        se = math.sqrt(ref * (1 - ref) / st.count)
        assert abs(frac[k - 1] - ref) <= 4 * se
    sup = st.superior_fraction()
    ref3 = float(exact.ais_uniform_superior_table()[3])
    assert abs(sup[2].mean - ref3) <= 4 * sup[2].stderr


def test_mlis1_naive_growth_runs():
    cfg = SimConfig(MLIS1, UNIFORM, "grow", 4, 50_000, 311, "naive")
    st = run_growth(cfg)
    assert st.count == 50_000
    assert np.all(np.diff(st.mean_averages()) > 0)  # averages keep improving on average


# ------------------------------------------------------------------- episodes


def test_all_hired_estimates():
    cfg = SimConfig(MIS, TENT, "budget", 4, 400_000, 312, "naive")
    r = estimate_all_hired(cfg)
    assert abs(r.estimate.mean - 1 / 24) <= 4 * r.estimate.stderr
    # prefix estimates come from the same run
    p2 = r.prefix_estimate(2)
    assert abs(p2.mean - 0.5) <= 4 * p2.stderr


def test_all_hired_ais_uniform_four():
    cfg = SimConfig(AIS, UNIFORM, "budget", 4, 1_000_000, 323, "naive")
    r = estimate_all_hired(cfg)
    assert abs(r.estimate.mean - 35 / 288) <= 4 * r.estimate.stderr


def test_all_hired_requires_budget_mode():
    cfg = SimConfig(MIS, UNIFORM, "grow", 4, 1000)
    with pytest.raises(ConfigError):
        estimate_all_hired(cfg)


def test_superior_estimates_conditioned():
    cfg = SimConfig(MIS, UNIFORM, "budget", 3, 400_000, 313, "naive")
    r = estimate_superior(cfg)
    assert abs(r.estimate.mean - 25 / 512) <= 4 * r.estimate.stderr
    assert abs(r.all_hired.mean - 1 / 6) <= 4 * r.all_hired.stderr
    assert r.companies < r.trials
    assert r.thresholds_source == "analytic"


def test_superior_exp_reference():
    cfg = SimConfig(AIS, EXPONENTIAL, "budget", 3, 600_000, 314, "naive")
    r = estimate_superior(cfg)
    assert abs(r.estimate.mean - 0.013071937993) <= 4 * r.estimate.stderr


def test_superior_feasibility_warning():
    cfg = SimConfig(AIS, UNIFORM, "budget", 5, 2000, 315, "naive")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        r = estimate_superior(cfg)
    assert r.feasibility_warning is not None
    assert any("expected superior hits" in str(w.message) for w in caught)


def test_superior_with_calibrated_thresholds():
    thr = calibrate_thresholds(lis(1), UNIFORM, 3, 200_000, 316)
    assert thr.shape == (3,)
    assert abs(thr[0] - 0.5) < 0.01 and abs(thr[1] - 0.75) < 0.01
    cfg = SimConfig(lis(1), UNIFORM, "budget", 3, 100_000, 317, "naive")
    r = estimate_superior(cfg, thresholds=thr, thresholds_source="empirical")
    assert r.thresholds_source == "empirical"
    assert 0 < r.estimate.mean < 1


def test_mlis1_all_hired_vs_lis1_identity():
    # the phantom-pool probability at N equals (N+1) times the plain
    # single-interviewer probability at N+1: both reduce to (N+1)/2^N
    N = 4
    cfg = SimConfig(MLIS1, UNIFORM, "budget", N, 400_000, 318, "naive")
    phi = estimate_all_hired(cfg)
    ref = (N + 1) * float(exact.all_hired_exact("lis", "uniform", N + 1, committee=1))
    assert ref == pytest.approx((N + 1) / 2**N)
    assert abs(phi.estimate.mean - ref) <= 3 * phi.estimate.stderr


# ------------------------------------------------------------------- densities


def test_density_flat_for_single_employee():
    cfg = SimConfig(MIS, UNIFORM, "grow", 1, 200_000, 319)
    res = density_histogram(cfg, 20)
    dens, err = res.density_at(1)
    assert np.all(np.abs(dens - 1.0) <= 4 * err)
    assert res.integral(1) == pytest.approx(1.0)


def test_density_sum_rules():
    cfg = SimConfig(AIS, UNIFORM, "grow", 3, 400_000, 320)
    res = density_histogram(cfg, 100)
    assert res.integral(3) == pytest.approx(3.0)  # compact support: nothing overflows
    w = res.weighted_integral(3)
    assert abs(w.mean - 3 * float(exact.ais_mean_gap(3))) <= 4 * w.stderr


def test_density_matches_closed_form_binwise():
    cfg = SimConfig(MIS, UNIFORM, "grow", 3, 1_000_000, 321)
    res = density_histogram(cfg, 100)
    for m in (1, 2, 3):
        dens, err = res.density_at(m)
        ref = exact.score_density_bin_means("mis", "uniform", m, res.edges)
        z = np.abs(dens - ref) / err
        assert (z <= 3).mean() > 0.97
        assert z.max() < 5.0


def test_density_exponential_cap_and_overflow():
    cfg = SimConfig(MIS, EXPONENTIAL, "grow", 2, 100_000, 322)
    res = density_histogram(cfg, 50)
    assert res.edges[-1] == pytest.approx(4.0)  # analytic cap: twice the mean best score
    assert 0 < res.overflow_fraction(2) < 0.15
    assert res.integral(2) + res.overflow_fraction(2) == pytest.approx(2.0)


# ------------------------------------------------------------------- power law


def test_fit_power_law_exact_synthetic():
    k = np.arange(10, 200)
    fit = fit_power_law(k, 3.7 * k**-1.5, (10, 199))
    assert fit.exponent == pytest.approx(1.5, abs=1e-9)
    assert fit.amplitude == pytest.approx(3.7, rel=1e-9)
    assert fit.r_squared == pytest.approx(1.0)
    grow = fit_power_law(k, 0.25 * k**1.0, (10, 199))
    assert grow.exponent == pytest.approx(1.0, abs=1e-9)


def test_fit_power_law_validation():
    k = np.arange(1, 50)
    with pytest.raises(ValueError):
        fit_power_law(k, np.ones(49), (40, 42))  # fewer than five points
    vals = np.ones(49)
    vals[5] = 0.0
    with pytest.raises(ValueError):
        fit_power_law(k, vals, (1, 49))


def test_fit_ais_mean_gap_exponent():
    series = exact.ais_mean_gap_series(1000)
    fit = fit_power_law(np.arange(1, 1001), series, (100, 1000))
    assert abs(fit.exponent - 0.5) < 0.02
    assert abs(fit.amplitude - 1 / math.sqrt(math.pi)) < 0.05


def test_fit_ais_tent_gap_exponent():
    series = exact.tent_ais_mean_gap_series(1000)
    fit = fit_power_law(np.arange(1, 1001), series, (100, 1000))
    assert abs(fit.exponent - 1 / 3) < 0.03


# --------------------------------------------------------------- scalar stepping


def test_rejection_free_step_mis_mean():
    rng = trial_rng(401)
    st = CompanyState()
    st.hire(0.5)
    vals = [rejection_free_step(MIS, st, UNIFORM, rng)[0] for _ in range(40_000)]
    se = np.std(vals) / math.sqrt(len(vals))
    assert abs(np.mean(vals) - 0.75) <= 3.5 * se


def test_rejection_free_step_lis_committee_weights():
    # success-conditioned interviewer distribution for two employees
    x1, x2 = 0.3, 0.6
    st = CompanyState()
    st.hire(x1)
    st.hire(x2)
    rng = trial_rng(402)
    n = 40_000
    hits = 0
    for _ in range(n):
        _, committee = rejection_free_step(lis(1), st, UNIFORM, rng)
        hits += committee == (0,)
    ref = (1 - x1) / (2 - x1 - x2)
    se = math.sqrt(ref * (1 - ref) / n)
    assert abs(hits / n - ref) <= 3.5 * se


def test_rejection_free_step_scores_exceed_committee_max():
    rng = trial_rng(403)
    st = CompanyState()
    for s in (0.2, 0.5, 0.8):
        st.hire(s)
    for _ in range(200):
        score, committee = rejection_free_step(lis(2), st, UNIFORM, rng)
        assert len(committee) == 2
        assert score > max(st.scores[i] for i in committee)


def test_rejection_free_step_rejects_mlis1():
    with pytest.raises(ConfigError):
        rejection_free_step(MLIS1, CompanyState(), UNIFORM, trial_rng(1))


# ------------------------------------------------------------ kernel equivalence


@pytest.mark.parametrize("strategy", [AIS, lis(1)])
def test_kernel_equivalence_quick(strategy):
    xs_n, ms_n = kernel_samples(SimConfig(strategy, UNIFORM, "grow", 4, 50_000, 404,
                                          "naive"))
    xs_r, ms_r = kernel_samples(SimConfig(strategy, UNIFORM, "grow", 4, 50_000, 405))
    assert ks_2samp(xs_n, xs_r).pvalue > 1e-3
    assert ks_2samp(ms_n, ms_r).pvalue > 1e-3


# ----------------------------------------------------------------- determinism


def test_growth_deterministic_across_workers():
    cfgs = [SimConfig(AIS, UNIFORM, "grow", 6, 200_000, 406) for _ in range(2)]
    a = run_growth(cfgs[0], workers=1)
    b = run_growth(cfgs[1], workers=4)
    assert np.array_equal(a.last[0], b.last[0])
    assert np.array_equal(a.average[1], b.average[1])
    assert np.array_equal(a.age_mean, b.age_mean)


def test_superior_deterministic_across_workers():
    cfg = SimConfig(AIS, UNIFORM, "budget", 4, 300_000, 407, "naive")
    a = estimate_superior(cfg, workers=1)
    b = estimate_superior(cfg, workers=3)
    assert (a.companies, a.superior_companies) == (b.companies, b.superior_companies)


def test_seed_changes_results():
    a = estimate_all_hired(SimConfig(MIS, UNIFORM, "budget", 4, 100_000, 408, "naive"))
    b = estimate_all_hired(SimConfig(MIS, UNIFORM, "budget", 4, 100_000, 409, "naive"))
    assert a.prefix_counts[-1] != b.prefix_counts[-1]
