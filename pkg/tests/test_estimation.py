import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from canyonclutter import (
    BackscatterStatsEstimator,
    DegenerateSeriesError,
    Environment,
    GridSpec,
    ProfileParams,
    ScenarioGeometry,
    autocorrelation,
    cdf_quantile_distance_db,
    environment_preset,
    estimate_grid,
    estimate_statistics,
    pearson_correlation,
    power_grid,
    relative_azimuth_power,
    synthesize,
    temporal_fluctuation,
)
from canyonclutter.estimation import mean_power

GEOM = ScenarioGeometry.midstreet(12.5, 12.5, 140e9)
MICRO = environment_preset(Environment.MICROCELLULAR_8M)


def test_mean_power_trivials():
    assert mean_power(np.full((3, 4), 2.0)) == 2.0
    assert mean_power([[1.0, 3.0], [5.0, 7.0]]) == 4.0
    with pytest.raises(ValueError):
        mean_power(np.empty((0, 4)))
    with pytest.raises(ValueError):
        mean_power([[1.0, -2.0]])
    with pytest.raises(ValueError):
        mean_power([1.0, 2.0])


def test_relative_azimuth_power():
    np.testing.assert_array_equal(relative_azimuth_power(np.full((4, 5), 3.0)), np.ones(4))
    out = relative_azimuth_power(np.array([[1.0, 1.0], [3.0, 3.0]]))
    np.testing.assert_allclose(out, [0.5, 1.5])
    # normalization is exact up to round-off
    rng = np.random.default_rng(1)
    powers = rng.exponential(1.0, (64, 200))
    assert abs(relative_azimuth_power(powers).mean() - 1.0) < 1e-12


def test_temporal_fluctuation():
    np.testing.assert_array_equal(
        temporal_fluctuation(np.full((2, 6), 4.0), 0), np.ones(6))
    row = temporal_fluctuation(np.array([[1.0, 3.0], [9.0, 9.0]]), 0)
    np.testing.assert_allclose(row, [0.5, 1.5])
    rng = np.random.default_rng(2)
    powers = rng.exponential(1.0, (8, 500))
    assert abs(temporal_fluctuation(powers, 3).mean() - 1.0) < 1e-12
    with pytest.raises(ValueError):
        temporal_fluctuation(np.zeros((2, 6)), 1)
    with pytest.raises(ValueError):
        temporal_fluctuation(np.ones((2, 6)), 5)


def test_fluctuation_k_roundtrip():
    from canyonclutter import k_moment_estimate, sample_fluctuation

    series = sample_fluctuation(13.9, psi=0.2, n_steps=10_000, seed=37)
    powers = np.abs(series.samples[None, :]) ** 2 * 5e-11
    flat = temporal_fluctuation(powers, 0)
    assert k_moment_estimate(flat) == pytest.approx(13.9, abs=0.5)


def naive_autocorrelation(series, max_lag):
    n = len(series)
    m = sum(series) / n
    out = []
    for lag in range(max_lag + 1):
        pairs = [(series[i] - m) * (series[i + lag] - m) for i in range(n - lag)]
        va = sum((series[i] - m) ** 2 for i in range(n - lag)) / (n - lag)
        vb = sum((series[i + lag] - m) ** 2 for i in range(n - lag)) / (n - lag)
        out.append((sum(pairs) / (n - lag)) / math.sqrt(va * vb))
    return out


def test_autocorrelation_lag0_and_square_wave():
    rng = np.random.default_rng(3)
    series = rng.exponential(1.0, 300)
    coeffs = autocorrelation(series, max_lag=6)
    assert coeffs[0] == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.abs(coeffs) <= 1.0 + 1e-9)

    wave = np.tile([2.0, 2.0, 0.0, 0.0], 25)
    coeffs = autocorrelation(wave, max_lag=8)
    expected = naive_autocorrelation(list(wave), 8)
    np.testing.assert_allclose(coeffs, expected, rtol=1e-12)
    assert coeffs[4] == pytest.approx(1.0, abs=0.05)
    assert coeffs[2] == pytest.approx(-1.0, abs=0.05)


def test_autocorrelation_matches_bruteforce_on_random_series():
    rng = np.random.default_rng(4)
    series = rng.exponential(1.0, 120)
    np.testing.assert_allclose(autocorrelation(series, 10),
                               naive_autocorrelation(list(series), 10), rtol=1e-12)


def test_autocorrelation_whiteness_on_iid_power():
    rng = np.random.default_rng(5)
    powers = rng.exponential(1.0, 100_000)
    coeffs = autocorrelation(powers, max_lag=5)
    assert np.all(np.abs(coeffs[1:]) < 0.02)


def test_autocorrelation_errors():
    with pytest.raises(DegenerateSeriesError):
        autocorrelation(np.ones(100), max_lag=3)
    with pytest.raises(ValueError):
        autocorrelation(np.arange(10.0), max_lag=5)


def test_estimators_match_bruteforce_on_hand_matrix():
    # 5 x 7 hand-checkable matrix
    powers = np.array([
        [1.0, 2.0, 3.0, 4.0, 3.0, 2.0, 1.0],
        [2.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0],
        [0.5, 1.5, 0.5, 1.5, 0.5, 1.5, 0.5],
        [4.0, 0.0, 4.0, 0.0, 4.0, 0.0, 4.0],
        [1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0],
    ])
    total = sum(sum(row) for row in powers.tolist()) / 35.0
    assert mean_power(powers) == pytest.approx(total, rel=1e-15)
    rel = [sum(row) / 7.0 / total for row in powers.tolist()]
    np.testing.assert_allclose(relative_azimuth_power(powers), rel, rtol=1e-14)
    for i in range(5):
        row_mean = sum(powers[i].tolist()) / 7.0
        np.testing.assert_allclose(temporal_fluctuation(powers, i),
                                   [v / row_mean for v in powers[i].tolist()], rtol=1e-14)
    # the autocorrelation window requires more samples than one 7-step row
    series = np.concatenate([powers[0], powers[4], powers[2]])
    np.testing.assert_allclose(autocorrelation(series, 3),
                               naive_autocorrelation(series.tolist(), 3), rtol=1e-12)


def test_cdf_quantile_distance():
    from scipy.special import ndtri

    probs = (np.arange(10_000) + 0.5) / 10_000
    samples = 9.3 + 6.1 * ndtri(probs)
    assert cdf_quantile_distance_db(samples, 9.3, 6.1) < 0.02
    assert cdf_quantile_distance_db(samples + 1.0, 9.3, 6.1) == pytest.approx(1.0, abs=0.02)
    rng = np.random.default_rng(0)
    draws = 9.3 + 6.1 * rng.standard_normal(100_000)
    assert cdf_quantile_distance_db(draws, 9.3, 6.1) < 0.2
    with pytest.raises(ValueError):
        cdf_quantile_distance_db(samples[:20], 0.0, 1.0)
    with pytest.raises(ValueError):
        cdf_quantile_distance_db(samples, 0.0, 1.0, p_lo=0.5, p_hi=0.2)


def test_pearson_correlation():
    x = np.arange(10.0)
    assert pearson_correlation(x, 2 * x + 1) == pytest.approx(1.0)
    assert pearson_correlation(x, -x) == pytest.approx(-1.0)
    with pytest.raises(DegenerateSeriesError):
        pearson_correlation(x, np.ones(10))
    with pytest.raises(ValueError):
        pearson_correlation(x[:2], x[:2])


def test_roundtrip_recovery_microcellular():
    spec = GridSpec(azimuth_start_deg=-75, n_azimuth=150, n_time=10_000)
    grid = synthesize(GEOM, MICRO, spec, seed=0)
    report = estimate_grid(grid)
    assert report.sigma_p_hat == pytest.approx(5.3, abs=0.7)
    assert report.mu_k_hat == pytest.approx(9.3, abs=1.2)
    assert report.sigma_k_hat == pytest.approx(6.1, abs=1.0)
    assert report.rho_pk_hat == pytest.approx(0.73, abs=0.10)
    assert report.mean_power_ratio == pytest.approx(grid.p0, rel=0.3)
    assert report.autocorr[0][1] == pytest.approx(1.0)
    assert report.dt_s == 0.6


def test_roundtrip_recovery_street_level():
    geom = ScenarioGeometry.intersection(9.0, 140e9)
    street = environment_preset(Environment.STREET_LEVEL_1M)
    spec = GridSpec(azimuth_start_deg=-45, n_azimuth=90, n_time=10_000)
    report = estimate_grid(synthesize(geom, street, spec, seed=1))
    assert report.mu_k_hat == pytest.approx(5.6, abs=1.2)
    assert report.rho_pk_hat == pytest.approx(0.47, abs=0.15)


def test_roundtrip_degenerate_grid():
    params = ProfileParams(sigma_p=0.0, mu_p=-3.2, sigma_k=0.0, mu_k=60.0, rho_pk=0.0)
    spec = GridSpec(azimuth_start_deg=-75, n_azimuth=150, n_time=200)
    report = estimate_grid(synthesize(GEOM, params, spec, seed=2))
    assert report.sigma_p_hat == pytest.approx(0.0, abs=1e-9)
    assert report.n_constant_bins == 150
    assert np.all(np.isposinf(report.k_db_per_bin))
    assert math.isnan(report.rho_pk_hat)
    assert report.autocorr == []


def test_roundtrip_size_preconditions():
    with pytest.raises(ValueError):
        estimate_statistics(np.ones((10, 200)))
    with pytest.raises(ValueError):
        estimate_statistics(np.ones((40, 50)))


def test_report_serializes():
    import json

    spec = GridSpec(azimuth_start_deg=-75, n_azimuth=40, n_time=200)
    report = estimate_grid(synthesize(GEOM, MICRO, spec, seed=3))
    payload = report.to_dict()
    assert len(payload["k_db_per_bin"]) == 40
    json.dumps(payload)  # all entries are plain python scalars


def test_sklearn_estimator_surface():
    est = BackscatterStatsEstimator(max_lag=10)
    assert est.get_params()["max_lag"] == 10
    cloned = clone(est)
    assert cloned.get_params() == est.get_params()
    with pytest.raises(NotFittedError):
        est.report()

    spec = GridSpec(azimuth_start_deg=-75, n_azimuth=150, n_time=2000)
    X = power_grid(synthesize(GEOM, MICRO, spec, seed=4))
    fitted = est.fit(X)
    assert fitted is est
    assert est.sigma_p_ == pytest.approx(5.3, abs=0.7)
    assert est.rho_pk_ == pytest.approx(0.73, abs=0.12)
    assert len(est.k_db_per_bin_) == 150
    assert est.report().sigma_p_hat == est.sigma_p_
    est.set_params(autocorr_bin=5)
    assert est.autocorr_bin == 5
