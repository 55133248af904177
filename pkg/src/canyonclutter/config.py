"""Scenario configuration: strict INI-style parsing and serialization.

A scenario file has four sections.  Unknown sections or keys are
rejected outright so typos surface immediately instead of silently
falling back to defaults.

    [scenario]
    seed = 12345
    antenna_pattern = horn.csv        ; optional

    [geometry]
    kind = midstreet                  ; or intersection
    d1_m = 12.5
    d2_m = 12.5
    carrier_frequency_hz = 140e9      ; intersection uses w_m instead

    [params]
    preset = microcellular_8m         ; or the five explicit fields
    ; sigma_p_db / mu_p_db / sigma_k_db / mu_k_db / rho_pk

    [grid]
    n_time = 1000
    ; azimuth_start_deg / n_azimuth default to the deployment's window
    ; d_phi_deg defaults to 1, dt_s to 0.6
"""

import configparser
from dataclasses import dataclass, replace
from typing import Optional

from .errors import ConfigError, ModelValidityError
from .geometry import ScenarioGeometry, ScenarioKind
from .profile import Environment, ProfileParams, environment_preset
from .synthesis import GridSpec
from .validation import check_seed

_SECTION_KEYS = {
    "scenario": {"seed", "antenna_pattern"},
    "geometry": {"kind", "d1_m", "d2_m", "w_m", "carrier_frequency_hz"},
    "params": {"preset", "sigma_p_db", "mu_p_db", "sigma_k_db", "mu_k_db", "rho_pk"},
    "grid": {"azimuth_start_deg", "n_azimuth", "d_phi_deg", "n_time", "dt_s"},
}

_PARAM_FIELD_KEYS = ("sigma_p_db", "mu_p_db", "sigma_k_db", "mu_k_db", "rho_pk")


@dataclass(frozen=True)
class ScenarioConfig:
    """One fully resolved scenario: geometry, statistics, lattice, seed."""

    geometry: ScenarioGeometry
    params: ProfileParams
    grid: GridSpec
    seed: int
    antenna_path: Optional[str] = None

    def with_seed(self, seed: int) -> "ScenarioConfig":
        return replace(self, seed=check_seed(seed))


def _get(section: dict, section_name: str, key: str, convert, required: bool = True,
         default=None):
    if key not in section:
        if required:
            raise ConfigError(f"[{section_name}] is missing required key '{key}'")
        return default
    raw = section[key]
    try:
        return convert(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{section_name}] {key} = {raw!r}: {exc}") from exc


def _parse_sections(text: str) -> dict:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc

    sections = {}
    for name in parser.sections():
        if name not in _SECTION_KEYS:
            raise ConfigError(f"unknown section [{name}]")
        for key in parser[name]:
            if key not in _SECTION_KEYS[name]:
                raise ConfigError(f"unknown key '{key}' in section [{name}]")
        sections[name] = dict(parser[name])
    for name in ("scenario", "geometry", "params", "grid"):
        if name not in sections:
            raise ConfigError(f"missing required section [{name}]")
    return sections


def _parse_geometry(section: dict) -> ScenarioGeometry:
    kind_raw = _get(section, "geometry", "kind", str)
    try:
        kind = ScenarioKind(kind_raw.strip().lower())
    except ValueError:
        raise ConfigError(
            f"[geometry] kind must be 'midstreet' or 'intersection', got {kind_raw!r}") from None
    freq = _get(section, "geometry", "carrier_frequency_hz", float)
    d1 = _get(section, "geometry", "d1_m", float, required=False)
    d2 = _get(section, "geometry", "d2_m", float, required=False)
    w = _get(section, "geometry", "w_m", float, required=False)
    try:
        return ScenarioGeometry(kind, freq, d1=d1, d2=d2, w=w)
    except ValueError as exc:
        raise ConfigError(f"[geometry] {exc}") from exc


def _parse_params(section: dict) -> ProfileParams:
    has_preset = "preset" in section
    explicit = [key for key in _PARAM_FIELD_KEYS if key in section]
    if has_preset and explicit:
        raise ConfigError("[params] give either 'preset' or the five explicit fields, not both")
    if has_preset:
        raw = section["preset"].strip().lower()
        try:
            return environment_preset(Environment(raw))
        except ValueError:
            names = ", ".join(e.value for e in Environment)
            raise ConfigError(f"[params] unknown preset {raw!r}; choose one of: {names}") from None
    values = {key: _get(section, "params", key, float) for key in _PARAM_FIELD_KEYS}
    try:
        return ProfileParams(
            sigma_p=values["sigma_p_db"], mu_p=values["mu_p_db"],
            sigma_k=values["sigma_k_db"], mu_k=values["mu_k_db"],
            rho_pk=values["rho_pk"])
    except ValueError as exc:
        raise ConfigError(f"[params] {exc}") from exc


def _parse_grid(section: dict, kind: ScenarioKind) -> GridSpec:
    n_time = _get(section, "grid", "n_time", int)
    default = GridSpec.default_for(kind, n_time=max(n_time, 1)) if n_time >= 1 else None
    start = _get(section, "grid", "azimuth_start_deg", float, required=False,
                 default=default.azimuth_start_deg if default else 0.0)
    n_azimuth = _get(section, "grid", "n_azimuth", int, required=False,
                     default=default.n_azimuth if default else 0)
    d_phi = _get(section, "grid", "d_phi_deg", float, required=False, default=1.0)
    dt = _get(section, "grid", "dt_s", float, required=False, default=0.6)
    try:
        return GridSpec(azimuth_start_deg=start, n_azimuth=n_azimuth,
                        n_time=n_time, d_phi_deg=d_phi, dt_s=dt)
    except ModelValidityError:
        raise
    except ValueError as exc:
        raise ConfigError(f"[grid] {exc}") from exc


def parse_config(text: str) -> ScenarioConfig:
    """Parse a scenario config; raises ConfigError naming the offending field."""
    sections = _parse_sections(text)
    geometry = _parse_geometry(sections["geometry"])
    params = _parse_params(sections["params"])
    grid = _parse_grid(sections["grid"], geometry.kind)
    seed_raw = _get(sections["scenario"], "scenario", "seed", int)
    try:
        seed = check_seed(seed_raw)
    except ValueError as exc:
        raise ConfigError(f"[scenario] seed: {exc}") from exc
    antenna = sections["scenario"].get("antenna_pattern") or None
    return ScenarioConfig(geometry=geometry, params=params, grid=grid,
                          seed=seed, antenna_path=antenna)


def load_config(path) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def config_items(config: ScenarioConfig) -> list[tuple[str, str, str]]:
    """Flattened (section, key, formatted value) triples, in canonical order."""
    geom = config.geometry
    items = [("scenario", "seed", str(config.seed))]
    if config.antenna_path:
        items.append(("scenario", "antenna_pattern", config.antenna_path))
    items.append(("geometry", "kind", geom.kind.value))
    if geom.kind is ScenarioKind.MIDSTREET:
        items.append(("geometry", "d1_m", f"{geom.d1:.17g}"))
        items.append(("geometry", "d2_m", f"{geom.d2:.17g}"))
    else:
        items.append(("geometry", "w_m", f"{geom.w:.17g}"))
    items.append(("geometry", "carrier_frequency_hz", f"{geom.carrier_frequency_hz:.17g}"))
    p = config.params
    items += [
        ("params", "sigma_p_db", f"{p.sigma_p:.17g}"),
        ("params", "mu_p_db", f"{p.mu_p:.17g}"),
        ("params", "sigma_k_db", f"{p.sigma_k:.17g}"),
        ("params", "mu_k_db", f"{p.mu_k:.17g}"),
        ("params", "rho_pk", f"{p.rho_pk:.17g}"),
    ]
    g = config.grid
    items += [
        ("grid", "azimuth_start_deg", f"{g.azimuth_start_deg:.17g}"),
        ("grid", "n_azimuth", str(g.n_azimuth)),
        ("grid", "d_phi_deg", f"{g.d_phi_deg:.17g}"),
        ("grid", "n_time", str(g.n_time)),
        ("grid", "dt_s", f"{g.dt_s:.17g}"),
    ]
    return items


def dump_config(config: ScenarioConfig) -> str:
    """Serialize to the canonical INI form; parse(dump(c)) == c."""
    lines = []
    current = None
    for section, key, value in config_items(config):
        if section != current:
            if current is not None:
                lines.append("")
            lines.append(f"[{section}]")
            current = section
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"
