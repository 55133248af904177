"""Static per-direction random field of the clutter channel.

Each azimuth bin gets one draw of a jointly lognormal pair: the
direction's power deviation from the scene mean (dB) and its temporal
Rician K-factor (dB), plus a static specular phase.  The positive
correlation between the pair captures that directions with strong
returns (large stationary scatterers) also tend to fluctuate less.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import streams
from .validation import check_correlation, check_count, check_nonnegative, check_positive, check_seed

_LN10 = np.log(10.0)


class Environment(str, Enum):
    """Measured environments with published profile statistics."""

    MICROCELLULAR_8M = "microcellular_8m"
    STREET_LEVEL_1M = "street_level_1m"


@dataclass(frozen=True)
class ProfileParams:
    """Joint statistics of per-direction power deviation and K-factor.

    sigma_p/mu_p describe the lognormal azimuth power deviation in dB,
    sigma_k/mu_k the lognormal K-factor in dB, and rho_pk their
    correlation coefficient.
    """

    sigma_p: float
    mu_p: float
    sigma_k: float
    mu_k: float
    rho_pk: float

    def __post_init__(self):
        check_nonnegative("sigma_p", self.sigma_p)
        check_nonnegative("sigma_k", self.sigma_k)
        check_correlation("rho_pk", self.rho_pk)
        for name in ("mu_p", "mu_k"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


_PRESETS = {
    Environment.MICROCELLULAR_8M: ProfileParams(
        sigma_p=5.3, mu_p=-3.2, sigma_k=6.1, mu_k=9.3, rho_pk=0.73),
    Environment.STREET_LEVEL_1M: ProfileParams(
        sigma_p=4.0, mu_p=-1.9, sigma_k=4.8, mu_k=5.6, rho_pk=0.47),
}


def environment_preset(env: Environment) -> ProfileParams:
    """Published profile statistics for one of the measured environments."""
    return _PRESETS[Environment(env)]


def mu_p_from_sigma(sigma_p: float) -> float:
    """Mean (dB) that gives the lognormal power deviation unit linear mean.

    With X ~ Normal(mu, sigma) in dB, returns the mu for which
    E[10^(X/10)] = 1.  The preset means follow this relation up to their
    published rounding.
    """
    sigma_p = check_nonnegative("sigma_p", sigma_p)
    x = 0.1 * sigma_p * _LN10
    return -10.0 * np.log10(np.e) * x * x / 2.0


@dataclass(frozen=True)
class AzimuthProfile:
    """Per-direction static draws on a uniform azimuth lattice."""

    azimuth_deg: np.ndarray
    p_db: np.ndarray
    k_db: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        n = len(self.azimuth_deg)
        for name in ("p_db", "k_db", "psi"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} length does not match azimuth_deg")
        if n > 1:
            steps = np.diff(self.azimuth_deg)
            if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-9):
                raise ValueError("azimuth bins must be strictly increasing with uniform spacing")
        if np.any(self.psi < 0.0) or np.any(self.psi >= 2.0 * np.pi):
            raise ValueError("psi values must lie in [0, 2*pi)")

    def __len__(self) -> int:
        return len(self.azimuth_deg)


def _correlation_sqrt(rho: float) -> tuple[float, float]:
    """Entries (a, b) of the symmetric square root [[a, b], [b, a]] of [[1, rho], [rho, 1]]."""
    a = (np.sqrt(1.0 + rho) + np.sqrt(1.0 - rho)) / 2.0
    b = (np.sqrt(1.0 + rho) - np.sqrt(1.0 - rho)) / 2.0
    return a, b


def sample_profile(params: ProfileParams, n_bins: int, bin_width_deg: float = 1.0,
                   seed: int = 0, azimuth_start_deg: float = 0.0) -> AzimuthProfile:
    """Draw the static azimuth profile for `n_bins` directions.

    Bins are independent and identically distributed.  Each bin consumes
    one fixed counter block of the profile substream, so bin i is fully
    determined by (seed, i): profiles of different lengths share their
    common prefix and any single bin can be regenerated alone.
    """
    n_bins = check_count("n_bins", n_bins)
    bin_width_deg = check_positive("bin_width_deg", bin_width_deg)
    seed = check_seed(seed)

    u = streams.uniform_blocks(seed, streams.PROFILE_TAG, n_bins)
    xi_p = streams.normal_from_uniform(u[:, 0])
    xi_k = streams.normal_from_uniform(u[:, 1])
    psi = 2.0 * np.pi * u[:, 2]

    a, b = _correlation_sqrt(params.rho_pk)
    p_db = params.mu_p + params.sigma_p * (a * xi_p + b * xi_k)
    k_db = params.mu_k + params.sigma_k * (b * xi_p + a * xi_k)

    azimuth = azimuth_start_deg + bin_width_deg * np.arange(n_bins)
    return AzimuthProfile(azimuth_deg=azimuth, p_db=p_db, k_db=k_db, psi=psi)
