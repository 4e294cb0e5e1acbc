"""Command-line front end for the bounds toolkit.

Subcommands
-----------
``crlb``        one scenario, bounds to stdout
``sweep``       one swept variable to CSV
``fig1``        radial bound vs distance, per aperture
``fig2``        transverse bound vs distance, per angle and aperture
``fig3``        carrier comparison with half-wavelength arrays
``fig4``        planar map of the transverse bound with link-budget SNR
``montecarlo``  estimator MSE vs the bounds over a list of SNRs

Configuration comes from an optional ``key = value`` file (``--config``),
overridden by repeatable ``--set key=value`` flags and the dedicated
``--seed``/``--threads``/``--out`` flags.  Frequencies accept ``GHz``,
``MHz``, ``kHz`` and ``Hz`` suffixes; powers accept ``dBm`` or watts; ratio
quantities (snr, gains, noise figure) accept ``dB``/``dBi`` or a bare linear
value; durations accept ``s``, ``ms``, ``us``.  Angles are always degrees on
the way in and out.  Exit codes: 0 success, 1 invalid configuration, 2 I/O
failure.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from dataclasses import replace
from pathlib import Path
from typing import Callable

from .experiments import (
    CsvTable,
    ScenarioConfig,
    SweepSpec,
    run_carrier_comparison,
    run_montecarlo,
    run_planar_map,
    run_radial_vs_distance,
    run_single,
    run_sweep,
    run_transverse_vs_distance,
)

__all__ = ["ConfigError", "main"]


class ConfigError(ValueError):
    """A configuration key, value or combination the toolkit cannot accept."""


_NUMBER_WITH_UNIT = re.compile(r"^\s*([-+]?[0-9.]+(?:[eE][-+]?[0-9]+)?)\s*([a-zA-Z]*)\s*$")

_FREQUENCY_UNITS = {"": 1.0, "hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}
_TIME_UNITS = {"": 1.0, "s": 1.0, "ms": 1e-3, "us": 1e-6}


def _split_unit(text: str, key: str) -> tuple[float, str]:
    match = _NUMBER_WITH_UNIT.match(text)
    if not match:
        raise ConfigError(f"{key}: cannot parse {text!r} as a number")
    return float(match.group(1)), match.group(2).lower()


def _parse_float(text: str, key: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {text!r} as a number") from exc


def _parse_int(text: str, key: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {text!r} as an integer") from exc


def _parse_frequency(text: str, key: str) -> float:
    value, unit = _split_unit(text, key)
    if unit not in _FREQUENCY_UNITS:
        raise ConfigError(f"{key}: unknown frequency unit {unit!r}")
    return value * _FREQUENCY_UNITS[unit]


def _parse_time(text: str, key: str) -> float:
    value, unit = _split_unit(text, key)
    if unit not in _TIME_UNITS:
        raise ConfigError(f"{key}: unknown time unit {unit!r}")
    return value * _TIME_UNITS[unit]


def _parse_power(text: str, key: str) -> float:
    """Transmit power: ``23 dBm``, ``0.2 W``, ``200 mW`` or bare watts."""
    value, unit = _split_unit(text, key)
    if unit == "dbm":
        return 10.0 ** (value / 10.0) * 1e-3
    if unit in ("", "w"):
        return value
    if unit == "mw":
        return value * 1e-3
    raise ConfigError(f"{key}: unknown power unit {unit!r}")


def _parse_ratio(text: str, key: str) -> float:
    """Dimensionless ratio: ``9 dB``, ``0 dBi`` or a bare linear value."""
    value, unit = _split_unit(text, key)
    if unit in ("db", "dbi"):
        return 10.0 ** (value / 10.0)
    if unit == "":
        return value
    raise ConfigError(f"{key}: unknown ratio unit {unit!r}")


def _parse_degrees(text: str, key: str) -> float:
    # deg/180*pi so that 90 degrees maps to the exact float pi/2.
    return _parse_float(text, key) / 180.0 * math.pi


def _parse_list(text: str, key: str, item: Callable[[str, str], float]) -> list[float]:
    parts = [part.strip() for part in text.split(",") if part.strip()]
    if not parts:
        raise ConfigError(f"{key}: empty list")
    return [item(part, key) for part in parts]


# key -> (parser, scenario-field?)  Scenario keys feed ScenarioConfig;
# the rest parameterize individual subcommands and are ignored elsewhere.
_SCENARIO_KEYS: dict[str, Callable[[str, str], object]] = {
    "carrier": _parse_frequency,
    "num_elements": _parse_int,
    "spacing": _parse_float,
    "aperture": _parse_float,
    "num_subcarriers": _parse_int,
    "subcarrier_spacing": _parse_frequency,
    "num_symbols": _parse_int,
    "symbol_time": _parse_time,
    "snr": _parse_ratio,
    "distance": _parse_float,
    "angle": _parse_degrees,
    "radial_velocity": _parse_float,
    "transverse_velocity": _parse_float,
    "tx_power": _parse_power,
    "noise_figure": _parse_ratio,
    "radar_cross_section": _parse_float,
    "tx_gain": _parse_ratio,
    "rx_gain": _parse_ratio,
    "temperature": _parse_float,
}

_EXPERIMENT_KEYS: dict[str, Callable[[str, str], object]] = {
    "apertures": lambda text, key: _parse_list(text, key, _parse_float),
    "angles": lambda text, key: _parse_list(text, key, _parse_float),
    "carriers": lambda text, key: _parse_list(text, key, _parse_frequency),
    "d_min": _parse_float,
    "d_max": _parse_float,
    "points": _parse_int,
    "x_min": _parse_float,
    "x_max": _parse_float,
    "x_points": _parse_int,
    "y_min": _parse_float,
    "y_max": _parse_float,
    "y_points": _parse_int,
    "snr_list": lambda text, key: _parse_list(text, key, _parse_float),
    "trials": _parse_int,
    "vr_window": _parse_float,
    "vt_window": _parse_float,
    "grid_points": _parse_int,
    "refine_tolerance": _parse_float,
    "seed": _parse_int,
    "threads": _parse_int,
}


def _normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse a ``key = value`` file; later duplicates win, ``#`` comments allowed."""
    raw: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line.strip()!r}")
        key, value = stripped.split("=", 1)
        raw[_normalize_key(key)] = value.strip()
    return raw


def _parse_settings(raw: dict[str, str]) -> tuple[dict, dict]:
    scenario: dict = {}
    experiment: dict = {}
    for key, text in raw.items():
        if key in _SCENARIO_KEYS:
            scenario[key] = _SCENARIO_KEYS[key](text, key)
        elif key in _EXPERIMENT_KEYS:
            experiment[key] = _EXPERIMENT_KEYS[key](text, key)
        else:
            raise ConfigError(f"unknown configuration key {key!r}")
    return scenario, experiment


def _collect_raw(args: argparse.Namespace) -> dict[str, str]:
    raw: dict[str, str] = {}
    if args.config:
        raw.update(read_config_file(args.config))
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        raw[_normalize_key(key)] = value.strip()
    return raw


class _Parser(argparse.ArgumentParser):
    # The contract reserves exit code 2 for I/O failures, so usage errors
    # (invalid configuration) exit 1 instead of argparse's default 2.
    def error(self, message: str):  # noqa: D102
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument(
        "--set",
        action="append",
        metavar="KEY=VALUE",
        help="override one configuration key (repeatable)",
    )
    common.add_argument("--seed", type=int, default=None, help="base RNG seed")
    common.add_argument("--threads", type=int, default=None, help="worker threads for sweeps")
    common.add_argument("--out", default=None, help="output CSV path")

    parser = _Parser(prog="nfvel", description="velocity estimation bounds toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("crlb", parents=[common], help="bounds for a single scenario")

    sweep = sub.add_parser("sweep", parents=[common], help="sweep one variable to CSV")
    sweep.add_argument(
        "--var",
        required=True,
        choices=("distance", "angle", "carrier", "aperture"),
        help="swept variable (angle in degrees)",
    )
    sweep.add_argument("--min", type=float, required=True, dest="sweep_min")
    sweep.add_argument("--max", type=float, required=True, dest="sweep_max")
    sweep.add_argument("--points", type=int, default=200)
    sweep.add_argument("--log", action="store_true", help="log-spaced grid")

    for name, text in (
        ("fig1", "radial bound vs distance per aperture"),
        ("fig2", "transverse bound vs distance per angle and aperture"),
        ("fig3", "carrier comparison with half-wavelength arrays"),
        ("fig4", "planar map of the transverse bound"),
    ):
        sub.add_parser(name, parents=[common], help=text)

    mc = sub.add_parser("montecarlo", parents=[common], help="estimator MSE vs the bounds")
    mc.add_argument("--trials", type=int, default=None)
    mc.add_argument("--snr-list", default=None, help="comma-separated SNRs in dB")

    return parser


def _subset(settings: dict, *names: str) -> dict:
    return {name: settings[name] for name in names if name in settings}


def _write_table(table: CsvTable, out: str | None, default_name: str, seed: int) -> None:
    # Every emitted file records the seed alongside the resolved scenario so
    # a rerun from the header alone reproduces it byte for byte.
    table = replace(table, meta={**table.meta, "seed": seed})
    path = table.write(out if out else default_name)
    print(f"wrote {path}")


def _dispatch(args: argparse.Namespace) -> int:
    scenario_kwargs, experiment = _parse_settings(_collect_raw(args))
    try:
        scenario = ScenarioConfig(**scenario_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    threads = args.threads if args.threads is not None else int(experiment.get("threads", 1))
    seed = args.seed if args.seed is not None else int(experiment.get("seed", 0))
    if seed < 0:
        raise ConfigError(f"seed must be nonnegative, got {seed}")
    if threads < 1:
        raise ConfigError(f"threads must be >= 1, got {threads}")

    if args.command == "crlb":
        for key, value in run_single(scenario).items():
            print(f"{key} = {_stdout_str(value)}")
        return 0

    if args.command == "sweep":
        spec = SweepSpec(
            variable=args.var,
            start=args.sweep_min,
            stop=args.sweep_max,
            points=args.points,
            log=args.log,
        )
        table = run_sweep(scenario, spec, threads=threads)
        _write_table(table, args.out, f"sweep_{spec.variable}.csv", seed)
        return 0

    if args.command == "fig1":
        table = run_radial_vs_distance(
            scenario,
            threads=threads,
            **_subset(experiment, "apertures", "d_min", "d_max", "points"),
        )
        _write_table(table, args.out, "fig1_radial_vs_distance.csv", seed)
        return 0

    if args.command == "fig2":
        kwargs = _subset(experiment, "apertures", "d_min", "d_max", "points")
        if "angles" in experiment:
            kwargs["angles_deg"] = experiment["angles"]
        table = run_transverse_vs_distance(scenario, threads=threads, **kwargs)
        _write_table(table, args.out, "fig2_transverse_vs_distance.csv", seed)
        return 0

    if args.command == "fig3":
        table = run_carrier_comparison(
            scenario,
            threads=threads,
            **_subset(experiment, "carriers", "d_min", "d_max", "points"),
        )
        _write_table(table, args.out, "fig3_carrier_comparison.csv", seed)
        return 0

    if args.command == "fig4":
        table = run_planar_map(
            scenario,
            threads=threads,
            **_subset(
                experiment, "x_min", "x_max", "x_points", "y_min", "y_max", "y_points"
            ),
        )
        _write_table(table, args.out, "fig4_planar_map.csv", seed)
        return 0

    if args.command == "montecarlo":
        trials = args.trials if args.trials is not None else int(experiment.get("trials", 1000))
        if args.snr_list is not None:
            snr_db_list = _parse_list(args.snr_list, "snr-list", _parse_float)
        else:
            snr_db_list = experiment.get("snr_list", [0.0, 5.0, 10.0, 15.0, 20.0])
        table = run_montecarlo(
            scenario,
            snr_db_list=snr_db_list,
            trials=trials,
            seed=seed,
            threads=threads,
            **_subset(
                experiment, "vr_window", "vt_window", "grid_points", "refine_tolerance"
            ),
        )
        _write_table(table, args.out, "montecarlo.csv", seed)
        return 0

    raise ConfigError(f"unknown command {args.command!r}")


def _stdout_str(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.12e}" if math.isfinite(value) else "inf"
    if value is None:
        return "none"
    return str(value)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else int(exc.code)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"nfvel: invalid configuration: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"nfvel: invalid configuration: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"nfvel: i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
