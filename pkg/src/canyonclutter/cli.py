"""Command-line surface: geometry, synthesize, estimate, validate.

Exit codes: 0 success, 2 configuration error, 3 model-validity error,
4 I/O or file-format error, 5 validation failure.
"""

import argparse
import json
import math
import sys

import numpy as np

from .config import ScenarioConfig, load_config
from .errors import ConfigError, GridFileError, ModelValidityError
from .estimation import EstimationReport, estimate_statistics
from .geometry import ScenarioKind, mean_power_numeric, scene_mean_power
from .gridfile import MAGIC, read_grid, read_power_csv, write_grid
from .synthesis import AntennaPattern, apply_antenna, power_db, power_grid, synthesize

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_MODEL = 3
EXIT_IO = 4
EXIT_VALIDATION = 5

# Round-trip gates: recovered profile statistics must sit this close to the
# configured ones.  Overridable per run.
DEFAULT_TOLERANCES = {
    "sigma_p_db": 0.7,
    "mu_k_db": 1.2,
    "sigma_k_db": 1.0,
    "rho_pk": 0.15,
}


def _to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)  # 'inf', '-inf', 'nan'
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def _print_json(payload) -> None:
    print(json.dumps(_json_safe(payload), indent=2))


def _geometry_summary(config: ScenarioConfig) -> str:
    geom = config.geometry
    if geom.kind is ScenarioKind.MIDSTREET:
        dims = f"d1={geom.d1:g} m  d2={geom.d2:g} m"
    else:
        dims = f"w={geom.w:g} m"
    return f"{geom.kind.value}  {dims}  f={geom.carrier_frequency_hz:g} Hz"


def _load_antenna(path, d_phi_deg: float) -> AntennaPattern:
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise GridFileError(f"cannot read antenna pattern {path}: {exc}") from exc
    if data.shape[1] == 2:
        gain = data[:, 1].astype(complex)
    elif data.shape[1] == 3:
        gain = data[:, 1] + 1j * data[:, 2]
    else:
        raise GridFileError(
            f"antenna pattern {path} must have 2 or 3 columns, got {data.shape[1]}")
    return AntennaPattern(field_gain=gain, d_phi_deg=d_phi_deg)


def cmd_geometry(args) -> int:
    config = load_config(args.config)
    p0 = scene_mean_power(config.geometry)
    p0_num = mean_power_numeric(config.geometry, n_steps=args.steps)
    rel_err = abs(p0_num - p0) / p0
    if args.json:
        _print_json({
            "geometry": _geometry_summary(config),
            "p0": p0, "p0_db": _to_db(p0),
            "p0_numeric": p0_num, "relative_error": rel_err,
        })
    else:
        print(f"geometry: {_geometry_summary(config)}")
        print(f"p0 (closed form): {p0:.6e}  ({_to_db(p0):.2f} dB)")
        print(f"p0 (numeric, {args.steps} steps): {p0_num:.6e}  relative error {rel_err:.2e}")
    return EXIT_OK


def _synthesize_from_config(config: ScenarioConfig):
    grid = synthesize(config.geometry, config.params, config.grid, config.seed)
    if config.antenna_path:
        pattern = _load_antenna(config.antenna_path, config.grid.d_phi_deg)
        grid = apply_antenna(grid, pattern)
    return grid


def cmd_synthesize(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    grid = _synthesize_from_config(config)
    write_grid(grid, args.out, antenna_path=config.antenna_path)
    rows = grid.spec.n_azimuth * grid.spec.n_time
    print(f"wrote {args.out}: {rows} rows "
          f"({grid.spec.n_azimuth} azimuth x {grid.spec.n_time} time), "
          f"p0 = {grid.p0:.6e} ({_to_db(grid.p0):.2f} dB), seed = {grid.seed}")
    return EXIT_OK


def _report_lines(report: EstimationReport) -> list[str]:
    mean_db = _to_db(report.mean_power_ratio) if report.mean_power_ratio > 0 else float("-inf")
    lines = [
        f"mean power ratio: {report.mean_power_ratio:.6e} ({mean_db:.2f} dB)",
        f"azimuth deviation fit: mu_p = {report.mu_p_hat:.3f} dB, "
        f"sigma_p = {report.sigma_p_hat:.3f} dB",
        f"K-factor fit: mu_k = {report.mu_k_hat:.3f} dB, sigma_k = {report.sigma_k_hat:.3f} dB "
        f"({report.n_rayleigh_bins} Rayleigh, {report.n_constant_bins} constant bins excluded)",
        f"P-K correlation: {report.rho_pk_hat:.3f}",
        f"CDF distance (P): {report.cdf_distance_p_db:.3f} dB, "
        f"(K): {report.cdf_distance_k_db:.3f} dB",
    ]
    if report.autocorr:
        head = ", ".join(f"{c:+.3f}" for _, c in report.autocorr[:6])
        lines.append(f"autocorrelation (lag 0..): {head}")
    return lines


def _read_powers(path):
    """Grid file or bare power CSV; returns (powers, dt)."""
    with open(path, "r", encoding="utf-8") as fh:
        is_grid = fh.readline().rstrip("\n") == MAGIC
    if is_grid:
        grid = read_grid(path)
        return power_grid(grid), grid.spec.dt_s
    return read_power_csv(path)


def cmd_estimate(args) -> int:
    powers, dt = _read_powers(args.grid)
    if args.dt is not None:
        dt = args.dt
    report = estimate_statistics(powers, dt=dt, autocorr_bin=args.autocorr_bin,
                                 max_lag=args.max_lag)
    if args.json:
        _print_json(report.to_dict())
    else:
        for line in _report_lines(report):
            print(line)
    return EXIT_OK


def validation_rows(config: ScenarioConfig, report: EstimationReport,
                    tolerances: dict) -> list[dict]:
    """Per-parameter comparison of configured targets vs recovered values."""
    p = config.params
    targets = {
        "sigma_p_db": (p.sigma_p, report.sigma_p_hat),
        "mu_k_db": (p.mu_k, report.mu_k_hat),
        "sigma_k_db": (p.sigma_k, report.sigma_k_hat),
        "rho_pk": (p.rho_pk, report.rho_pk_hat),
    }
    rows = []
    for name, (target, recovered) in targets.items():
        tol = tolerances[name]
        ok = math.isfinite(recovered) and abs(recovered - target) <= tol
        rows.append({"parameter": name, "target": target, "recovered": recovered,
                     "tolerance": tol, "pass": ok})
    return rows


def cmd_validate(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    tolerances = dict(DEFAULT_TOLERANCES)
    for name in tolerances:
        override = getattr(args, "tol_" + name.replace("_db", ""), None)
        if override is not None:
            tolerances[name] = override

    grid = _synthesize_from_config(config)
    report = estimate_statistics(power_grid(grid), dt=grid.spec.dt_s)
    rows = validation_rows(config, report, tolerances)
    all_ok = all(row["pass"] for row in rows)

    mean_db = _to_db(report.mean_power_ratio)
    p0_db = _to_db(grid.p0)
    if args.json:
        _print_json({
            "rows": rows, "pass": all_ok, "seed": config.seed,
            "mean_power_db": mean_db, "p0_db": p0_db,
            "mu_p_db": {"target": config.params.mu_p, "recovered": report.mu_p_hat},
        })
    else:
        print(f"round-trip validation (seed {config.seed}, "
              f"{grid.spec.n_azimuth} x {grid.spec.n_time} grid)")
        print(f"{'parameter':<12} {'target':>9} {'recovered':>10} {'tolerance':>10}  status")
        for row in rows:
            status = "pass" if row["pass"] else "FAIL"
            print(f"{row['parameter']:<12} {row['target']:>9.3f} {row['recovered']:>10.3f} "
                  f"{row['tolerance']:>10.3f}  {status}")
        print(f"{'mu_p_db':<12} {config.params.mu_p:>9.3f} {report.mu_p_hat:>10.3f} "
              f"{'(reported)':>10}")
        print(f"mean power: {mean_db:.2f} dB vs p0 {p0_db:.2f} dB (reported)")
        print("result:", "pass" if all_ok else "FAIL")
    return EXIT_OK if all_ok else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="canyonclutter",
        description="Synthesize and analyze street-canyon monostatic backscatter clutter grids.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_geom = sub.add_parser("geometry", help="evaluate the mean backscatter power ratio")
    p_geom.add_argument("--config", required=True, help="scenario config file")
    p_geom.add_argument("--steps", type=int, default=100_000,
                        help="steps for the numeric cross-check (default 100000)")
    p_geom.add_argument("--json", action="store_true", help="machine-readable output")
    p_geom.set_defaults(func=cmd_geometry)

    p_syn = sub.add_parser("synthesize", help="generate a channel grid file")
    p_syn.add_argument("--config", required=True, help="scenario config file")
    p_syn.add_argument("--out", required=True, help="output grid file path")
    p_syn.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_syn.set_defaults(func=cmd_synthesize)

    p_est = sub.add_parser("estimate", help="recover model statistics from a grid file")
    p_est.add_argument("grid", help="grid file or bare power CSV")
    p_est.add_argument("--dt", type=float, default=None, help="time step override (s)")
    p_est.add_argument("--autocorr-bin", type=int, default=0,
                       help="azimuth bin for the autocorrelation profile")
    p_est.add_argument("--max-lag", type=int, default=20, help="autocorrelation lags")
    p_est.add_argument("--json", action="store_true", help="machine-readable output")
    p_est.set_defaults(func=cmd_estimate)

    p_val = sub.add_parser("validate",
                           help="synthesize, re-estimate, and gate the recovered statistics")
    p_val.add_argument("--config", required=True, help="scenario config file")
    p_val.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_val.add_argument("--tol-sigma-p", dest="tol_sigma_p", type=float, default=None)
    p_val.add_argument("--tol-mu-k", dest="tol_mu_k", type=float, default=None)
    p_val.add_argument("--tol-sigma-k", dest="tol_sigma_k", type=float, default=None)
    p_val.add_argument("--tol-rho-pk", dest="tol_rho_pk", type=float, default=None)
    p_val.add_argument("--json", action="store_true", help="machine-readable output")
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ModelValidityError as exc:
        print(f"model validity error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except (GridFileError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
