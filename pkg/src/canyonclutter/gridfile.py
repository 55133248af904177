"""Self-describing channel grid files.

A grid file carries a commented key=value header (format version, the
full scenario configuration, and the scene mean p0) followed by one CSV
row per lattice cell: azimuth_deg, time_s, h_re, h_im, power_db.  Floats
are written with 17 significant digits, so a write/read cycle reproduces
the in-memory grid bit-exactly and identical scenarios produce
byte-identical files.
"""

import os
import tempfile

import numpy as np

from .config import ScenarioConfig, config_items
from .errors import GridFileError
from .geometry import ScenarioGeometry, ScenarioKind, scene_mean_power
from .profile import ProfileParams
from .synthesis import ChannelGrid, GridSpec, power_db, power_grid

MAGIC = "# canyonclutter grid v1"

# Header p0 must match what the geometry recomputes to this relative tolerance.
_P0_RTOL = 1e-9


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def grid_config(grid: ChannelGrid, antenna_path=None) -> ScenarioConfig:
    """The scenario configuration a grid was (or could have been) built from."""
    return ScenarioConfig(geometry=grid.geometry, params=grid.params,
                          grid=grid.spec, seed=grid.seed, antenna_path=antenna_path)


def write_grid(grid: ChannelGrid, path, antenna_path=None) -> None:
    """Write a grid file atomically (temp file + rename)."""
    path = os.fspath(path)
    header_lines = [MAGIC]
    for section, key, value in config_items(grid_config(grid, antenna_path)):
        header_lines.append(f"# {section}.{key} = {value}")
    header_lines.append(f"# p0 = {_fmt(grid.p0)}")

    azimuth = grid.spec.azimuth_deg
    times = grid.spec.time_s
    p_db = power_db(power_grid(grid))

    directory = os.path.dirname(path) or "."
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".grid-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(header_lines) + "\n")
            fh.write("azimuth_deg,time_s,h_re,h_im,power_db\n")
            for i in range(grid.spec.n_azimuth):
                az = _fmt(azimuth[i])
                row = grid.h[i]
                for j in range(grid.spec.n_time):
                    fh.write(f"{az},{_fmt(times[j])},{_fmt(row[j].real)},"
                             f"{_fmt(row[j].imag)},{_fmt(p_db[i, j])}\n")
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def _header_value(header: dict, key: str, convert=str):
    if key not in header:
        raise GridFileError(f"grid header is missing '{key}'")
    try:
        return convert(header[key])
    except (TypeError, ValueError) as exc:
        raise GridFileError(f"grid header {key} = {header[key]!r}: {exc}") from exc


def _rebuild_geometry(header: dict) -> ScenarioGeometry:
    kind = ScenarioKind(_header_value(header, "geometry.kind"))
    freq = _header_value(header, "geometry.carrier_frequency_hz", float)
    try:
        if kind is ScenarioKind.MIDSTREET:
            return ScenarioGeometry.midstreet(
                _header_value(header, "geometry.d1_m", float),
                _header_value(header, "geometry.d2_m", float), freq)
        return ScenarioGeometry.intersection(_header_value(header, "geometry.w_m", float), freq)
    except ValueError as exc:
        raise GridFileError(f"grid header geometry invalid: {exc}") from exc


def read_grid(path) -> ChannelGrid:
    """Read a grid file back into a ChannelGrid, verifying its self-description."""
    path = os.fspath(path)
    header = {}
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        if first != MAGIC:
            raise GridFileError(f"{path} is not a canyonclutter grid file")
        line_no = 1
        for line in fh:
            line_no += 1
            line = line.rstrip("\n")
            if line.startswith("# "):
                key, sep, value = line[2:].partition(" = ")
                if not sep:
                    raise GridFileError(f"{path}:{line_no}: malformed header line {line!r}")
                header[key.strip()] = value.strip()
                continue
            if line != "azimuth_deg,time_s,h_re,h_im,power_db":
                raise GridFileError(f"{path}:{line_no}: expected column header, got {line!r}")
            break
        else:
            raise GridFileError(f"{path}: missing grid body")

        geometry = _rebuild_geometry(header)
        try:
            params = ProfileParams(
                sigma_p=_header_value(header, "params.sigma_p_db", float),
                mu_p=_header_value(header, "params.mu_p_db", float),
                sigma_k=_header_value(header, "params.sigma_k_db", float),
                mu_k=_header_value(header, "params.mu_k_db", float),
                rho_pk=_header_value(header, "params.rho_pk", float))
            spec = GridSpec(
                azimuth_start_deg=_header_value(header, "grid.azimuth_start_deg", float),
                n_azimuth=_header_value(header, "grid.n_azimuth", int),
                n_time=_header_value(header, "grid.n_time", int),
                d_phi_deg=_header_value(header, "grid.d_phi_deg", float),
                dt_s=_header_value(header, "grid.dt_s", float))
        except ValueError as exc:
            raise GridFileError(f"grid header invalid: {exc}") from exc
        seed = _header_value(header, "scenario.seed", int)
        p0 = _header_value(header, "p0", float)

        recomputed = scene_mean_power(geometry)
        if not np.isclose(p0, recomputed, rtol=_P0_RTOL, atol=0.0):
            raise GridFileError(
                f"header p0 = {p0!r} disagrees with geometry recomputation {recomputed!r}")

        n_rows = spec.n_azimuth * spec.n_time
        h = np.empty(n_rows, dtype=complex)
        count = 0
        for line in fh:
            line_no += 1
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 5:
                raise GridFileError(f"{path}:{line_no}: expected 5 columns, got {len(parts)}")
            if count >= n_rows:
                raise GridFileError(f"{path}:{line_no}: more rows than the header announces")
            try:
                h[count] = complex(float(parts[2]), float(parts[3]))
            except ValueError as exc:
                raise GridFileError(f"{path}:{line_no}: {exc}") from exc
            count += 1
        if count != n_rows:
            raise GridFileError(
                f"{path}: body has {count} rows, header announces {n_rows}")

    return ChannelGrid(spec=spec, geometry=geometry, params=params, seed=seed,
                       h=h.reshape(spec.n_azimuth, spec.n_time), p0=p0)


def read_power_csv(path) -> tuple[np.ndarray, float]:
    """Read a bare azimuth x time power matrix (one CSV row per azimuth bin).

    The time step comes from an optional sidecar '<path>.meta' INI file
    with a [grid] dt_s key; it defaults to 0.6 s otherwise.
    """
    path = os.fspath(path)
    try:
        powers = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise GridFileError(f"{path}: cannot parse power CSV: {exc}") from exc
    dt = 0.6
    meta_path = path + ".meta"
    if os.path.exists(meta_path):
        import configparser

        parser = configparser.ConfigParser()
        try:
            parser.read(meta_path)
            dt = parser.getfloat("grid", "dt_s", fallback=0.6)
        except (configparser.Error, ValueError) as exc:
            raise GridFileError(f"{meta_path}: malformed sidecar: {exc}") from exc
    return powers, dt
