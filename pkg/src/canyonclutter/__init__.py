"""Statistical simulator and estimator for urban street-canyon monostatic
backscatter clutter channels.

Synthesizes complex clutter grids h(azimuth, time) from deployment
geometry and published environment statistics, and recovers those
statistics back from any azimuth x time power grid.
"""

from .config import ScenarioConfig, dump_config, load_config, parse_config
from .errors import (ConfigError, DegenerateSeriesError, GrazingAngleError,
                     GridFileError, ModelValidityError)
from .estimation import (BackscatterStatsEstimator, EstimationReport,
                         autocorrelation, cdf_quantile_distance_db,
                         estimate_grid, estimate_statistics, mean_power,
                         pearson_correlation, relative_azimuth_power,
                         temporal_fluctuation)
from .geometry import (Reflectivity, ScenarioGeometry, ScenarioKind,
                       directional_distance, mean_power_intersection,
                       mean_power_midstreet, mean_power_numeric,
                       scene_mean_power, wavelength)
from .gridfile import read_grid, read_power_csv, write_grid
from .profile import (AzimuthProfile, Environment, ProfileParams,
                      environment_preset, mu_p_from_sigma, sample_profile)
from .synthesis import (AntennaPattern, ChannelGrid, GridSpec, apply_antenna,
                        bin_fluctuation_seed, grid_profile, power_db,
                        power_grid, synthesize)
from .temporal import FluctuationSeries, k_moment_estimate, sample_fluctuation

__version__ = "0.1.0"

__all__ = [
    "AntennaPattern",
    "AzimuthProfile",
    "BackscatterStatsEstimator",
    "ChannelGrid",
    "ConfigError",
    "DegenerateSeriesError",
    "Environment",
    "EstimationReport",
    "FluctuationSeries",
    "GrazingAngleError",
    "GridFileError",
    "GridSpec",
    "ModelValidityError",
    "ProfileParams",
    "Reflectivity",
    "ScenarioConfig",
    "ScenarioGeometry",
    "ScenarioKind",
    "apply_antenna",
    "autocorrelation",
    "bin_fluctuation_seed",
    "cdf_quantile_distance_db",
    "directional_distance",
    "dump_config",
    "environment_preset",
    "estimate_grid",
    "estimate_statistics",
    "grid_profile",
    "k_moment_estimate",
    "load_config",
    "mean_power",
    "mean_power_intersection",
    "mean_power_midstreet",
    "mean_power_numeric",
    "mu_p_from_sigma",
    "parse_config",
    "pearson_correlation",
    "power_db",
    "power_grid",
    "read_grid",
    "read_power_csv",
    "relative_azimuth_power",
    "scene_mean_power",
    "sample_fluctuation",
    "sample_profile",
    "synthesize",
    "temporal_fluctuation",
    "wavelength",
    "write_grid",
]
