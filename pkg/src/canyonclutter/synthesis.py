"""Assembly of the complex backscatter channel grid.

Combines the three model layers into h(phi, t) on an azimuth x time
lattice: the scalar geometric mean power, the static per-direction
profile, and the per-direction temporal fluctuation.  Also applies
receive-antenna weighting by circular convolution over azimuth.
"""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import streams
from .errors import ModelValidityError
from .geometry import Reflectivity, ScenarioGeometry, ScenarioKind, scene_mean_power
from .profile import AzimuthProfile, ProfileParams, sample_profile
from .temporal import DEFAULT_DT_S, sample_fluctuation
from .validation import check_count, check_seed

# Native granularity of the underlying measurements; the model is valid at
# this resolution or coarser, never finer.
MIN_D_PHI_DEG = 1.0
MIN_DT_S = 0.6
MIN_BEAMWIDTH_DEG = 2.0

POWER_DB_FLOOR = -300.0

# Default display windows: the 150 deg field of view ahead of a wall-mounted
# midstreet radar, and the 90 deg sector facing an intersection.
_DEFAULT_WINDOWS = {
    ScenarioKind.MIDSTREET: (-75.0, 150),
    ScenarioKind.INTERSECTION: (-45.0, 90),
}


@dataclass(frozen=True)
class GridSpec:
    """Azimuth x time lattice on which a channel grid is synthesized."""

    azimuth_start_deg: float
    n_azimuth: int
    n_time: int
    d_phi_deg: float = 1.0
    dt_s: float = DEFAULT_DT_S

    def __post_init__(self):
        check_count("n_azimuth", self.n_azimuth)
        check_count("n_time", self.n_time)
        if self.d_phi_deg < MIN_D_PHI_DEG:
            raise ModelValidityError(
                f"d_phi_deg={self.d_phi_deg} is below the {MIN_D_PHI_DEG} deg model floor")
        if self.dt_s < MIN_DT_S:
            raise ModelValidityError(
                f"dt_s={self.dt_s} is below the {MIN_DT_S} s coherence floor")
        if self.n_azimuth * self.d_phi_deg > 360.0 + 1e-9:
            raise ValueError("azimuth window exceeds a full circle")

    @classmethod
    def default_for(cls, kind: ScenarioKind, n_time: int, dt_s: float = DEFAULT_DT_S) -> "GridSpec":
        start, n_azimuth = _DEFAULT_WINDOWS[ScenarioKind(kind)]
        return cls(azimuth_start_deg=start, n_azimuth=n_azimuth, n_time=n_time, dt_s=dt_s)

    @property
    def azimuth_deg(self) -> np.ndarray:
        return self.azimuth_start_deg + self.d_phi_deg * np.arange(self.n_azimuth)

    @property
    def time_s(self) -> np.ndarray:
        return self.dt_s * np.arange(self.n_time)


@dataclass(frozen=True)
class ChannelGrid:
    """Complex backscatter channel over one azimuth x time lattice.

    |h|^2 is a power ratio; p0 is the geometric scene mean that the grid
    realizes on average.  Immutable after construction.
    """

    spec: GridSpec
    geometry: ScenarioGeometry
    params: ProfileParams
    seed: int
    h: np.ndarray
    p0: float

    def __post_init__(self):
        if self.h.shape != (self.spec.n_azimuth, self.spec.n_time):
            raise ValueError(
                f"grid shape {self.h.shape} does not match spec "
                f"({self.spec.n_azimuth}, {self.spec.n_time})")


def bin_fluctuation_seed(seed: int, bin_index: int) -> int:
    """Seed of the fluctuation stream for one azimuth bin of a scenario.

    Derived from the scenario seed alone, so a single bin's time series
    can be regenerated without touching the rest of the grid.
    """
    return streams.child_seed(check_seed(seed), streams.BIN_TAG, bin_index)


def synthesize(geometry: ScenarioGeometry, params: ProfileParams,
               spec: Optional[GridSpec] = None, seed: int = 0,
               reflectivity: Reflectivity = Reflectivity()) -> ChannelGrid:
    """Generate one channel grid; deterministic given the scenario seed.

    With spec omitted, a 1000-step grid on the deployment's default
    azimuth window is produced.  Row i of the grid is
    sqrt(p0 * 10^(P_i/10)) times that bin's unit-mean-power fluctuation,
    so E[|h(phi, t)|^2] = p0 * 10^(P(phi)/10) for every direction.
    """
    seed = check_seed(seed)
    if spec is None:
        spec = GridSpec.default_for(geometry.kind, n_time=1000)

    p0 = scene_mean_power(geometry, reflectivity)
    prof = sample_profile(params, spec.n_azimuth, spec.d_phi_deg, seed,
                          azimuth_start_deg=spec.azimuth_start_deg)
    amplitude = np.sqrt(p0) * 10.0 ** (prof.p_db / 20.0)

    h = np.empty((spec.n_azimuth, spec.n_time), dtype=complex)
    for i in range(spec.n_azimuth):
        series = sample_fluctuation(prof.k_db[i], prof.psi[i], spec.n_time,
                                    seed=bin_fluctuation_seed(seed, i), dt=spec.dt_s)
        h[i] = amplitude[i] * series.samples
    return ChannelGrid(spec=spec, geometry=geometry, params=params, seed=seed, h=h, p0=p0)


def grid_profile(grid: ChannelGrid) -> AzimuthProfile:
    """Regenerate the static azimuth profile a grid was built from."""
    return sample_profile(grid.params, grid.spec.n_azimuth, grid.spec.d_phi_deg,
                          grid.seed, azimuth_start_deg=grid.spec.azimuth_start_deg)


@dataclass(frozen=True)
class AntennaPattern:
    """Receive-antenna field amplitude on a full-circle azimuth lattice.

    Patterns narrower than MIN_BEAMWIDTH_DEG at half power are outside
    the model's validity and rejected.  The single-nonzero-bin impulse is
    exempt: it performs no smoothing and acts as the identity.
    """

    field_gain: np.ndarray
    d_phi_deg: float = 1.0

    def __post_init__(self):
        gain = np.asarray(self.field_gain, dtype=complex)
        object.__setattr__(self, "field_gain", gain)
        if gain.ndim != 1 or gain.size == 0:
            raise ValueError("field_gain must be a nonempty 1-D array")
        if not np.all(np.isfinite(gain)):
            raise ValueError("field_gain must be finite")
        n_full = 360.0 / self.d_phi_deg
        if abs(n_full - round(n_full)) > 1e-9 or round(n_full) != gain.size:
            raise ValueError(
                f"pattern must cover 360 deg: {gain.size} bins at {self.d_phi_deg} deg do not")
        power = np.abs(gain) ** 2
        n_nonzero = int(np.count_nonzero(power))
        if n_nonzero == 0:
            raise ValueError("pattern must have at least one nonzero entry")
        if n_nonzero > 1 and self.half_power_beamwidth_deg < MIN_BEAMWIDTH_DEG:
            raise ModelValidityError(
                f"half-power beamwidth {self.half_power_beamwidth_deg:.2f} deg is below "
                f"the {MIN_BEAMWIDTH_DEG} deg model floor")

    @property
    def half_power_beamwidth_deg(self) -> float:
        """Total azimuth width where the power pattern is at least half its peak."""
        power = np.abs(self.field_gain) ** 2
        return float(np.count_nonzero(power >= 0.5 * power.max()) * self.d_phi_deg)

    @classmethod
    def impulse(cls, d_phi_deg: float = 1.0, boresight_bin: int = 0) -> "AntennaPattern":
        """Unit impulse; convolving with it returns the grid unchanged."""
        gain = np.zeros(int(round(360.0 / d_phi_deg)), dtype=complex)
        gain[boresight_bin] = 1.0
        return cls(field_gain=gain, d_phi_deg=d_phi_deg)


def _window_indices(spec: GridSpec, n_full: int) -> np.ndarray:
    """Indices of the grid's azimuth bins on the full-circle lattice."""
    offsets = spec.azimuth_deg / spec.d_phi_deg
    rounded = np.round(offsets)
    if np.any(np.abs(offsets - rounded) > 1e-9):
        raise ValueError("grid azimuth bins must sit on the pattern's full-circle lattice")
    return rounded.astype(int) % n_full


def apply_antenna(grid: ChannelGrid, pattern: AntennaPattern) -> ChannelGrid:
    """Circularly convolve each time step's azimuth row with the antenna field.

    The grid window is zero-padded to the full circle first (directions
    behind a wall-mounted radar are not illuminated), and the output is
    cropped back to the input window.
    """
    if abs(pattern.d_phi_deg - grid.spec.d_phi_deg) > 1e-9:
        raise ValueError(
            f"pattern bin width {pattern.d_phi_deg} deg does not match grid "
            f"{grid.spec.d_phi_deg} deg")
    n_full = pattern.field_gain.size
    idx = _window_indices(grid.spec, n_full)

    padded = np.zeros((n_full, grid.spec.n_time), dtype=complex)
    padded[idx] = grid.h
    out = np.zeros_like(padded)
    # Shift-and-add over the pattern's nonzero bins keeps the impulse case
    # exact and costs O(nnz * n) instead of O(n^2).
    for k in np.flatnonzero(pattern.field_gain):
        out += pattern.field_gain[k] * np.roll(padded, k, axis=0)
    return replace(grid, h=out[idx])


def power_grid(grid: ChannelGrid) -> np.ndarray:
    """Elementwise received power ratio |h|^2 of a grid."""
    return np.abs(grid.h) ** 2


def power_db(powers: np.ndarray, floor_db: float = POWER_DB_FLOOR) -> np.ndarray:
    """dB view of a power array with zeros mapped to a finite floor."""
    powers = np.asarray(powers, dtype=float)
    out = np.full(powers.shape, floor_db)
    positive = powers > 0.0
    out[positive] = 10.0 * np.log10(powers[positive])
    return np.maximum(out, floor_db)
