"""Rician temporal fluctuation and moment-method K-factor estimation.

The time variation of the return from one direction is a unit-mean-power
Rician process: a static specular component (stationary scatterers) plus
a circularly-symmetric complex normal part (moving scatterers), mixed by
the K-factor.  Samples are independent across time steps because the
measured fluctuation decorrelates within one 0.6 s step; finer time
grids are refused upstream rather than invented.
"""

from dataclasses import dataclass

import numpy as np

from . import streams
from .validation import check_count, check_positive, check_power_series, check_seed

# Beyond these caps the process is numerically indistinguishable from its
# limit, so the exact limiting process (pure specular / pure Rayleigh) is used.
K_DB_CAP = 60.0

DEFAULT_DT_S = 0.6


@dataclass(frozen=True)
class FluctuationSeries:
    """Complex unit-mean-power fluctuation sampled at a fixed time step."""

    dt: float
    samples: np.ndarray

    def __post_init__(self):
        check_positive("dt", self.dt)
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("fluctuation samples must be finite")

    def __len__(self) -> int:
        return len(self.samples)


def sample_fluctuation(k_db: float, psi: float, n_steps: int, seed: int = 0,
                       dt: float = DEFAULT_DT_S) -> FluctuationSeries:
    """Draw the temporal fluctuation for one direction.

    Each sample is sqrt(K/(K+1)) * exp(i*psi) plus sqrt(1/(K+1)) times an
    independent CN(0, 1) innovation, with K = 10^(k_db/10).  k_db at or
    beyond +-K_DB_CAP selects the exact limit: a constant specular sample
    or pure Rayleigh fading.
    """
    n_steps = check_count("n_steps", n_steps)
    seed = check_seed(seed)
    psi = float(psi)
    if not np.isfinite(psi):
        raise ValueError(f"psi must be finite, got {psi!r}")

    specular = np.exp(1j * psi)
    if k_db >= K_DB_CAP:
        samples = np.full(n_steps, specular, dtype=complex)
        return FluctuationSeries(dt=dt, samples=samples)

    u = streams.keyed_generator(seed, streams.FLUCT_TAG).random(2 * n_steps)
    eta = (streams.normal_from_uniform(u[0::2])
           + 1j * streams.normal_from_uniform(u[1::2])) / np.sqrt(2.0)
    if k_db <= -K_DB_CAP:
        return FluctuationSeries(dt=dt, samples=eta)

    k = 10.0 ** (k_db / 10.0)
    samples = np.sqrt(k / (k + 1.0)) * specular + np.sqrt(1.0 / (k + 1.0)) * eta
    return FluctuationSeries(dt=dt, samples=samples)


def k_moment_estimate(powers) -> float:
    """Moment-method Rician K-factor (dB) of a power series.

    Uses the power mean and population variance: gamma = sqrt(1 - Var/Mean^2)
    and K = gamma / (1 - gamma).  Returns -inf (Rayleigh marker) when the
    variance reaches the mean squared, +inf (constant marker) when the
    series has no variance at all.
    """
    powers = check_power_series(powers, min_len=8)
    mean = powers.mean()
    if mean <= 0.0:
        raise ValueError("power series mean must be positive")
    var = powers.var()  # population variance, matching the moment derivation
    if var == 0.0:
        return float("inf")
    ratio = var / mean**2
    if ratio >= 1.0:
        return float("-inf")
    gamma = np.sqrt(1.0 - ratio)
    return float(10.0 * np.log10(gamma / (1.0 - gamma)))
