"""Recovery of model statistics from an azimuth x time power grid.

The analysis pipeline mirrors the generative model: overall mean power,
lognormal fit of the per-direction deviation from that mean, per-bin
moment-method K-factors with their own lognormal fit, the correlation
between deviation and K-factor, the temporal autocorrelation of one
bin's fluctuation, and quantile distances of both empirical
distributions from their fitted normals.  It applies equally to
synthesized grids (round-trip validation) and to external measurement
exports.
"""

from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import ndtri
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .errors import DegenerateSeriesError
from .synthesis import ChannelGrid, power_grid
from .temporal import DEFAULT_DT_S, k_moment_estimate
from .validation import check_count, check_power_matrix

MIN_AZIMUTH_BINS = 30
MIN_TIME_STEPS = 100

# Quantile sweep resolution for CDF distances.
_N_QUANTILE_POINTS = 199


def mean_power(powers) -> float:
    """Mean power ratio over all azimuth bins and time steps."""
    powers = check_power_matrix(powers)
    return float(powers.mean())


def relative_azimuth_power(powers) -> np.ndarray:
    """Per-bin time-averaged power relative to the overall mean.

    The output averages to one over bins by construction.
    """
    powers = check_power_matrix(powers)
    return powers.mean(axis=1) / mean_power(powers)


def temporal_fluctuation(powers, bin_index: int) -> np.ndarray:
    """One bin's power over time relative to its own time average."""
    powers = check_power_matrix(powers)
    if not 0 <= bin_index < powers.shape[0]:
        raise ValueError(f"bin_index {bin_index} out of range for {powers.shape[0]} bins")
    row = powers[bin_index]
    mean = row.mean()
    if mean <= 0.0:
        raise ValueError(f"bin {bin_index} has zero time-averaged power")
    return row / mean


def autocorrelation(series, max_lag: int) -> np.ndarray:
    """Normalized autocovariance of a series for lags 0..max_lag.

    Both factors subtract the mean of the full unshifted series, and the
    averages at each lag run over the overlapping pairs, so the lag-0
    coefficient is exactly one.
    """
    series = np.asarray(series, dtype=float)
    max_lag = check_count("max_lag", max_lag, minimum=0)
    if series.ndim != 1 or series.size <= max_lag + 8:
        raise ValueError(f"series of length {series.size} is too short for max_lag={max_lag}")
    if not np.all(np.isfinite(series)):
        raise ValueError("series contains non-finite values")
    centered = series - series.mean()
    if np.all(centered == 0.0):
        raise DegenerateSeriesError("series has zero variance")
    coeffs = np.empty(max_lag + 1)
    for lag in range(max_lag + 1):
        head = centered[: series.size - lag]
        tail = centered[lag:]
        denom = np.sqrt(np.mean(head**2) * np.mean(tail**2))
        coeffs[lag] = np.mean(head * tail) / denom
    return coeffs


def cdf_quantile_distance_db(samples_db, mu: float, sigma: float,
                             p_lo: float = 0.01, p_hi: float = 0.99) -> float:
    """Largest quantile gap (dB) between a sample and a Normal(mu, sigma).

    Sweeps probabilities in [p_lo, p_hi] and compares empirical quantiles
    against the model's, i.e. horizontal CDF distance on a dB axis.
    """
    samples_db = np.asarray(samples_db, dtype=float)
    if samples_db.ndim != 1 or samples_db.size < 50:
        raise ValueError(f"need at least 50 samples, got {samples_db.size}")
    if not np.all(np.isfinite(samples_db)):
        raise ValueError("samples contain non-finite values")
    if not 0.0 < p_lo < p_hi < 1.0:
        raise ValueError(f"require 0 < p_lo < p_hi < 1, got ({p_lo}, {p_hi})")
    probs = np.linspace(p_lo, p_hi, _N_QUANTILE_POINTS)
    empirical = np.quantile(samples_db, probs)
    model = mu + sigma * ndtri(probs)
    return float(np.max(np.abs(empirical - model)))


def pearson_correlation(x, y) -> float:
    """Pearson correlation coefficient of two equal-length samples."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-D arrays of equal length")
    if x.size < 3:
        raise ValueError(f"need at least 3 points, got {x.size}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("inputs contain non-finite values")
    if np.var(x) == 0.0 or np.var(y) == 0.0:
        raise DegenerateSeriesError("correlation is undefined for a constant input")
    r = float(np.corrcoef(x, y)[0, 1])
    return float(np.clip(r, -1.0, 1.0))


@dataclass(frozen=True)
class EstimationReport:
    """Statistics recovered from one power grid.

    k_db_per_bin uses -inf for bins estimated as Rayleigh and +inf for
    constant bins; both are excluded from the K fit and counted here.
    Fields that cannot be estimated (degenerate or too few samples) are
    NaN.  autocorr pairs lag time in seconds with the coefficient; it is
    empty when the designated bin has no variance.
    """

    mean_power_ratio: float
    mu_p_hat: float
    sigma_p_hat: float
    k_db_per_bin: np.ndarray
    mu_k_hat: float
    sigma_k_hat: float
    rho_pk_hat: float
    autocorr: list[tuple[float, float]]
    cdf_distance_p_db: float
    cdf_distance_k_db: float
    n_rayleigh_bins: int = 0
    n_constant_bins: int = 0
    dt_s: float = DEFAULT_DT_S

    def to_dict(self) -> dict:
        out = asdict(self)
        out["k_db_per_bin"] = [float(k) for k in self.k_db_per_bin]
        out["autocorr"] = [[float(lag), float(c)] for lag, c in self.autocorr]
        return out


def estimate_statistics(powers, dt: float = DEFAULT_DT_S, autocorr_bin: int = 0,
                        max_lag: int = 20, p_lo: float = 0.01,
                        p_hi: float = 0.99) -> EstimationReport:
    """Run the full analysis pipeline on an azimuth x time power matrix."""
    powers = check_power_matrix(powers)
    n_bins, n_steps = powers.shape
    if n_bins < MIN_AZIMUTH_BINS:
        raise ValueError(f"need at least {MIN_AZIMUTH_BINS} azimuth bins, got {n_bins}")
    if n_steps < MIN_TIME_STEPS:
        raise ValueError(f"need at least {MIN_TIME_STEPS} time steps, got {n_steps}")

    overall = mean_power(powers)
    p_rel = relative_azimuth_power(powers)
    with np.errstate(divide="ignore"):
        p_rel_db = 10.0 * np.log10(p_rel)
    mu_p_hat = float(np.mean(p_rel_db))
    sigma_p_hat = float(np.std(p_rel_db, ddof=1))

    k_db = np.empty(n_bins)
    for i in range(n_bins):
        try:
            k_db[i] = k_moment_estimate(temporal_fluctuation(powers, i))
        except ValueError as exc:
            raise ValueError(f"K estimation failed at azimuth bin {i}: {exc}") from exc
    finite = np.isfinite(k_db)
    n_rayleigh = int(np.sum(np.isneginf(k_db)))
    n_constant = int(np.sum(np.isposinf(k_db)))
    if np.sum(finite) >= 2:
        mu_k_hat = float(np.mean(k_db[finite]))
        sigma_k_hat = float(np.std(k_db[finite], ddof=1))
    else:
        mu_k_hat = float("nan")
        sigma_k_hat = float("nan")

    try:
        rho_pk_hat = pearson_correlation(p_rel_db[finite], k_db[finite])
    except (ValueError, DegenerateSeriesError):
        rho_pk_hat = float("nan")

    try:
        coeffs = autocorrelation(temporal_fluctuation(powers, autocorr_bin), max_lag)
        autocorr = [(lag * dt, float(c)) for lag, c in enumerate(coeffs)]
    except DegenerateSeriesError:
        autocorr = []

    cdf_p = float("nan")
    if np.all(np.isfinite(p_rel_db)) and p_rel_db.size >= 50:
        cdf_p = cdf_quantile_distance_db(p_rel_db, mu_p_hat, sigma_p_hat, p_lo, p_hi)
    cdf_k = float("nan")
    if np.isfinite(mu_k_hat) and np.sum(finite) >= 50:
        cdf_k = cdf_quantile_distance_db(k_db[finite], mu_k_hat, sigma_k_hat, p_lo, p_hi)

    return EstimationReport(
        mean_power_ratio=overall,
        mu_p_hat=mu_p_hat,
        sigma_p_hat=sigma_p_hat,
        k_db_per_bin=k_db,
        mu_k_hat=mu_k_hat,
        sigma_k_hat=sigma_k_hat,
        rho_pk_hat=rho_pk_hat,
        autocorr=autocorr,
        cdf_distance_p_db=cdf_p,
        cdf_distance_k_db=cdf_k,
        n_rayleigh_bins=n_rayleigh,
        n_constant_bins=n_constant,
        dt_s=dt,
    )


def estimate_grid(grid: ChannelGrid, **kwargs) -> EstimationReport:
    """Analyze a synthesized grid, taking the time step from its spec."""
    kwargs.setdefault("dt", grid.spec.dt_s)
    return estimate_statistics(power_grid(grid), **kwargs)


class BackscatterStatsEstimator(BaseEstimator):
    """Scikit-learn style wrapper around the analysis pipeline.

    fit(X) accepts any azimuth x time matrix of nonnegative power ratios
    and exposes the recovered statistics as fitted attributes, so the
    pipeline composes with the wider estimator ecosystem.
    """

    def __init__(self, dt: float = DEFAULT_DT_S, autocorr_bin: int = 0,
                 max_lag: int = 20, p_lo: float = 0.01, p_hi: float = 0.99):
        self.dt = dt
        self.autocorr_bin = autocorr_bin
        self.max_lag = max_lag
        self.p_lo = p_lo
        self.p_hi = p_hi

    def fit(self, X, y=None):
        report = estimate_statistics(
            X, dt=self.dt, autocorr_bin=self.autocorr_bin, max_lag=self.max_lag,
            p_lo=self.p_lo, p_hi=self.p_hi)
        self.report_ = report
        self.mean_power_ = report.mean_power_ratio
        self.mu_p_ = report.mu_p_hat
        self.sigma_p_ = report.sigma_p_hat
        self.k_db_per_bin_ = report.k_db_per_bin
        self.mu_k_ = report.mu_k_hat
        self.sigma_k_ = report.sigma_k_hat
        self.rho_pk_ = report.rho_pk_hat
        self.autocorr_ = report.autocorr
        return self

    def report(self) -> EstimationReport:
        if not hasattr(self, "report_"):
            raise NotFittedError("call fit before requesting the report")
        return self.report_
