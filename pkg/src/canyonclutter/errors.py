"""Exception types shared across the package."""


class ModelValidityError(ValueError):
    """Request falls outside the validity region of the statistical model.

    Raised for grids finer than the native 1 deg / 0.6 s granularity and
    for antenna patterns narrower than the 2 deg beamwidth floor.  These
    are refused explicitly instead of extrapolating.
    """


class GrazingAngleError(ValueError):
    """Azimuth lies at a grazing direction where the wall distance diverges."""


class DegenerateSeriesError(ValueError):
    """Statistic is undefined because the input series has no variance."""


class ConfigError(ValueError):
    """Scenario configuration is malformed or inconsistent."""


class GridFileError(RuntimeError):
    """Grid file is malformed or inconsistent with its own header."""
