"""Reference sweeps over the bounds plus deterministic CSV emission.

Every runner returns a :class:`CsvTable` whose rows are plain Python tuples;
writing the table twice with the same configuration produces byte-identical
files.  Values are decimal with 12 significant digits; non-finite bounds are
emitted as the literal token ``inf`` (never NaN).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .bounds import (
    crlb_from_fisher,
    crossover_distance,
    fisher_info_closed_form,
    radial_crlb_far_field,
    radial_info_boresight,
    transverse_info_half_wavelength,
)
from .constants import REFERENCE_TEMPERATURE, SPEED_OF_LIGHT
from .estimator import MlSearchConfig, Scenario, monte_carlo_mse
from .geometry import ArrayGeometry, DegenerateGeometryError, TargetState
from .waveform import ChannelNoise, WaveformConfig, snr_from_link_budget

__all__ = [
    "CsvTable",
    "ScenarioConfig",
    "SweepSpec",
    "run_montecarlo",
    "run_planar_map",
    "run_radial_vs_distance",
    "run_single",
    "run_carrier_comparison",
    "run_sweep",
    "run_transverse_vs_distance",
]

_SWEEP_VARIABLES = ("distance", "angle", "carrier", "aperture")


@dataclass(frozen=True)
class ScenarioConfig:
    """Resolved scenario parameters shared by all experiment runners.

    Angles are radians and every physical quantity is in base SI units;
    ``snr``, gains and the noise figure are linear ratios.  ``spacing`` and
    ``aperture`` are mutually exclusive ways to size the array; with neither
    given the spacing defaults to half the carrier wavelength.
    """

    carrier: float = 28e9
    num_elements: int = 101
    spacing: float | None = None
    aperture: float | None = None
    num_subcarriers: int = 1
    subcarrier_spacing: float = 120e3
    num_symbols: int = 14
    symbol_time: float = 16.6e-3
    snr: float = 1.0
    distance: float = 10.0
    angle: float = 0.0
    radial_velocity: float = 3.0
    transverse_velocity: float = 1.0
    tx_power: float = 10.0**2.3 * 1e-3
    noise_figure: float = 10.0**0.9
    radar_cross_section: float = 1.0
    tx_gain: float = 1.0
    rx_gain: float = 1.0
    temperature: float = REFERENCE_TEMPERATURE

    def __post_init__(self) -> None:
        if self.spacing is not None and self.aperture is not None:
            raise ValueError("give spacing or aperture, not both")

    def geometry(self) -> ArrayGeometry:
        spacing = self.spacing
        if spacing is None:
            if self.aperture is not None:
                if self.num_elements < 2:
                    raise ValueError("aperture needs at least two elements")
                spacing = self.aperture / (self.num_elements - 1)
            else:
                spacing = SPEED_OF_LIGHT / (2.0 * self.carrier)
        return ArrayGeometry(num_elements=self.num_elements, spacing=spacing)

    def waveform(self) -> WaveformConfig:
        return WaveformConfig(
            carrier=self.carrier,
            num_subcarriers=self.num_subcarriers,
            subcarrier_spacing=self.subcarrier_spacing,
            num_symbols=self.num_symbols,
            symbol_time=self.symbol_time,
            total_power=self.tx_power,
        )

    def target(self) -> TargetState:
        return TargetState(
            distance=self.distance,
            angle=self.angle,
            radial_velocity=self.radial_velocity,
            transverse_velocity=self.transverse_velocity,
        )


@dataclass(frozen=True)
class SweepSpec:
    """One swept variable over a linear or log grid.

    ``variable`` is one of ``distance`` (m), ``angle`` (degrees), ``carrier``
    (Hz) or ``aperture`` (m).  Planar two-dimensional maps are produced by
    :func:`run_planar_map` instead.
    """

    variable: str
    start: float
    stop: float
    points: int
    log: bool = False

    def __post_init__(self) -> None:
        if self.variable not in _SWEEP_VARIABLES:
            raise ValueError(
                f"variable must be one of {_SWEEP_VARIABLES}, got {self.variable!r}"
            )
        if self.points < 2:
            raise ValueError(f"points must be >= 2, got {self.points!r}")
        if not self.stop > self.start:
            raise ValueError(f"stop must exceed start, got [{self.start!r}, {self.stop!r}]")
        if self.log and not self.start > 0.0:
            raise ValueError("log grids need a positive start")

    def grid(self) -> np.ndarray:
        if self.log:
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class CsvTable:
    """Column names, row tuples and the metadata echoed into the file header."""

    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    meta: dict

    def render(self) -> str:
        lines = [f"# nfvel {self.name}"]
        for key in sorted(self.meta):
            lines.append(f"# {key} = {_meta_str(self.meta[key])}")
        lines.append(",".join(self.columns))
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"row width {len(row)} != {len(self.columns)} columns")
            lines.append(",".join(_cell_str(value) for value in row))
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(self.render(), encoding="utf-8", newline="\n")
        return path


def _cell_str(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        # The file contract never carries NaN; anything non-finite means an
        # unbounded or unidentifiable quantity.
        return f"{v:.12e}" if math.isfinite(v) else "inf"
    return str(value)


def _meta_str(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return " ".join(_meta_str(v) for v in value)
    return str(value)


def _root_inverse(info: float) -> float:
    """sqrt(1/info) with an infinite result for a null information value."""
    return math.sqrt(1.0 / info) if info > 0.0 else math.inf


def _root(value: float) -> float:
    return math.sqrt(value) if math.isfinite(value) else math.inf


def _map_ordered(fn: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _scenario_meta(config: ScenarioConfig) -> dict:
    meta = asdict(config)
    geometry = config.geometry()
    meta["resolved_spacing"] = geometry.spacing
    meta["resolved_aperture"] = geometry.aperture
    return meta


def _default_apertures(config: ScenarioConfig) -> list[float]:
    base = (config.num_elements - 1) * SPEED_OF_LIGHT / (2.0 * config.carrier)
    return [base, 2.0 * base, 4.0 * base]


def run_single(config: ScenarioConfig) -> dict:
    """Bounds for one scenario, as an ordered key/value mapping."""
    geometry = config.geometry()
    wf = config.waveform()
    target = config.target()
    info = fisher_info_closed_form(target, geometry, wf, config.snr)
    crlb = crlb_from_fisher(info)

    out: dict = {}
    out.update(_scenario_meta(config))
    out["angle_deg"] = math.degrees(config.angle)
    out["j_rr"] = info.j_rr
    out["j_tt"] = info.j_tt
    out["j_rt"] = info.j_rt
    out["singular"] = crlb.singular
    out["crlb_vr"] = crlb.radial
    out["crlb_vt"] = crlb.transverse
    out["root_crlb_vr"] = _root(crlb.radial)
    out["root_crlb_vt"] = _root(crlb.transverse)
    out["crlb_vr_far_field"] = radial_crlb_far_field(wf, config.num_elements, config.snr)
    out["crossover_distance"] = crossover_distance(geometry)
    return out


def run_radial_vs_distance(
    config: ScenarioConfig,
    apertures: Sequence[float] | None = None,
    d_min: float | None = None,
    d_max: float | None = None,
    points: int = 200,
    threads: int = 1,
) -> CsvTable:
    """Radial bound against distance at boresight, one row group per aperture.

    Columns hold the exact bound, the reciprocal of the boresight closed
    form, and the far-field floor it approaches.
    """
    if apertures is None:
        apertures = _default_apertures(config)
    if d_min is None:
        d_min = min(apertures) / 20.0
    if d_max is None:
        d_max = 100.0 * max(apertures)
    wf = config.waveform()
    distances = np.geomspace(d_min, d_max, points)
    far_field = radial_crlb_far_field(wf, config.num_elements, config.snr)

    cases = [(aperture, d) for aperture in apertures for d in distances]

    def _row(case: tuple[float, float]) -> tuple:
        aperture, d = case
        geometry = ArrayGeometry(config.num_elements, aperture / (config.num_elements - 1))
        target = TargetState(distance=float(d), angle=0.0)
        crlb = crlb_from_fisher(fisher_info_closed_form(target, geometry, wf, config.snr))
        approx = radial_info_boresight(float(d), geometry, wf, config.snr)
        return (
            float(d),
            aperture,
            _root(crlb.radial),
            _root_inverse(approx),
            _root(far_field),
        )

    meta = _scenario_meta(config)
    meta.update(apertures=list(apertures), d_min=d_min, d_max=d_max, points=points)
    return CsvTable(
        name="radial-vs-distance",
        columns=(
            "distance_m",
            "aperture_m",
            "root_crlb_vr_exact",
            "root_jrr_inv_approx",
            "root_crlb_vr_far_field",
        ),
        rows=tuple(_map_ordered(_row, cases, threads)),
        meta=meta,
    )


def run_transverse_vs_distance(
    config: ScenarioConfig,
    apertures: Sequence[float] | None = None,
    angles_deg: Sequence[float] = (0.0, 45.0),
    d_min: float | None = None,
    d_max: float | None = None,
    points: int = 200,
    threads: int = 1,
) -> CsvTable:
    """Transverse bound against distance for several angles and apertures."""
    if apertures is None:
        apertures = _default_apertures(config)
    if d_min is None:
        d_min = min(apertures) / 20.0
    if d_max is None:
        d_max = 100.0 * max(apertures)
    wf = config.waveform()
    distances = np.geomspace(d_min, d_max, points)

    cases = [
        (aperture, angle_deg, d)
        for aperture in apertures
        for angle_deg in angles_deg
        for d in distances
    ]

    def _row(case: tuple[float, float, float]) -> tuple:
        aperture, angle_deg, d = case
        geometry = ArrayGeometry(config.num_elements, aperture / (config.num_elements - 1))
        target = TargetState(distance=float(d), angle=angle_deg / 180.0 * math.pi)
        info = fisher_info_closed_form(target, geometry, wf, config.snr)
        crlb = crlb_from_fisher(info)
        return (
            float(d),
            angle_deg,
            aperture,
            _root(crlb.transverse),
            _root_inverse(info.j_tt),
        )

    meta = _scenario_meta(config)
    meta.update(
        apertures=list(apertures),
        angles_deg=list(angles_deg),
        d_min=d_min,
        d_max=d_max,
        points=points,
    )
    return CsvTable(
        name="transverse-vs-distance",
        columns=(
            "distance_m",
            "angle_deg",
            "aperture_m",
            "root_crlb_vt_exact",
            "root_jtt_inv",
        ),
        rows=tuple(_map_ordered(_row, cases, threads)),
        meta=meta,
    )


def run_carrier_comparison(
    config: ScenarioConfig,
    carriers: Sequence[float] = (6e9, 28e9),
    d_min: float = 0.01,
    d_max: float = 1000.0,
    points: int = 200,
    threads: int = 1,
) -> CsvTable:
    """Both bounds against distance for half-wavelength arrays at several carriers.

    The transverse bound is also emitted through the carrier-free
    half-wavelength closed form, which is identical across carriers by
    construction; the radial bound scales with the carrier.
    """
    base_wf = config.waveform()
    distances = np.geomspace(d_min, d_max, points)
    cases = [(carrier, d) for carrier in carriers for d in distances]

    def _row(case: tuple[float, float]) -> tuple:
        carrier, d = case
        wf = replace(base_wf, carrier=carrier)
        geometry = ArrayGeometry.half_wavelength(config.num_elements, carrier)
        target = TargetState(distance=float(d), angle=0.0)
        crlb = crlb_from_fisher(fisher_info_closed_form(target, geometry, wf, config.snr))
        halfwave = transverse_info_half_wavelength(
            float(d), config.num_elements, wf, config.snr
        )
        return (
            float(d),
            carrier,
            geometry.aperture,
            _root(crlb.radial),
            _root(crlb.transverse),
            _root_inverse(halfwave),
            _root(radial_crlb_far_field(wf, config.num_elements, config.snr)),
        )

    meta = _scenario_meta(config)
    meta.update(carriers=list(carriers), d_min=d_min, d_max=d_max, points=points)
    return CsvTable(
        name="carrier-comparison",
        columns=(
            "distance_m",
            "carrier_hz",
            "aperture_m",
            "root_crlb_vr_exact",
            "root_crlb_vt_exact",
            "root_crlb_vt_halfwave",
            "root_crlb_vr_far_field",
        ),
        rows=tuple(_map_ordered(_row, cases, threads)),
        meta=meta,
    )


def run_planar_map(
    config: ScenarioConfig,
    x_min: float = -25.0,
    x_max: float = 25.0,
    x_points: int = 201,
    y_min: float = 0.0,
    y_max: float = 50.0,
    y_points: int = 101,
    threads: int = 1,
) -> CsvTable:
    """Transverse bound over a planar grid with a link-budget SNR per point.

    The y grid is half-open ``(y_min, y_max]`` so the default map never lands
    on the array line; a custom grid that does (or that hits an element)
    yields a row flagged degenerate with an ``inf`` bound, never NaN.
    """
    geometry = config.geometry()
    wf = config.waveform()
    xs = np.linspace(x_min, x_max, x_points)
    ys = y_min + (y_max - y_min) * np.arange(1, y_points + 1) / y_points

    def _rows_for_y(y: float) -> list[tuple]:
        rows = []
        for x in xs:
            x = float(x)
            distance = math.hypot(x, y)
            angle = math.atan2(x, y) if distance > 0.0 else 0.0
            if distance == 0.0:
                rows.append((x, y, 0.0, 0.0, math.inf, math.inf, True))
                continue
            snr = snr_from_link_budget(
                distance,
                wf,
                radar_cross_section=config.radar_cross_section,
                tx_gain=config.tx_gain,
                rx_gain=config.rx_gain,
                noise_figure=config.noise_figure,
                temperature=config.temperature,
            )
            snr_db = 10.0 * math.log10(snr)
            try:
                target = TargetState(distance=distance, angle=angle)
                crlb = crlb_from_fisher(
                    fisher_info_closed_form(target, geometry, wf, snr)
                )
                root_vt = _root(crlb.transverse)
                degenerate = crlb.singular
            except DegenerateGeometryError:
                root_vt = math.inf
                degenerate = True
            rows.append(
                (x, y, distance, math.degrees(angle), snr_db, root_vt, degenerate)
            )
        return rows

    groups = _map_ordered(_rows_for_y, [float(y) for y in ys], threads)
    rows = tuple(row for group in groups for row in group)

    meta = _scenario_meta(config)
    meta.update(
        x_min=x_min, x_max=x_max, x_points=x_points,
        y_min=y_min, y_max=y_max, y_points=y_points,
    )
    return CsvTable(
        name="planar-map",
        columns=(
            "x_m",
            "y_m",
            "distance_m",
            "angle_deg",
            "snr_db",
            "root_crlb_vt",
            "degenerate",
        ),
        rows=rows,
        meta=meta,
    )


def run_montecarlo(
    config: ScenarioConfig,
    snr_db_list: Sequence[float] = (0.0, 5.0, 10.0, 15.0, 20.0),
    trials: int = 1000,
    seed: int = 0,
    vr_window: float = 0.2,
    vt_window: float = 2.0,
    grid_points: int = 41,
    refine_tolerance: float = 1e-5,
    threads: int = 1,
) -> CsvTable:
    """Estimator MSE against the bounds for a list of SNR operating points.

    Each row reuses the same base seed; trials inside a row draw independent
    substreams, so the whole table is reproducible from the configuration.
    """
    if trials < 100:
        raise ValueError(f"trials must be >= 100 for a meaningful MSE, got {trials!r}")
    geometry = config.geometry()
    wf = config.waveform()
    target = config.target()
    half_r = vr_window / 2.0
    half_t = vt_window / 2.0
    search = MlSearchConfig(
        radial_span=(target.radial_velocity - half_r, target.radial_velocity + half_r),
        transverse_span=(
            target.transverse_velocity - half_t,
            target.transverse_velocity + half_t,
        ),
        radial_points=grid_points,
        transverse_points=grid_points,
        tolerance=refine_tolerance,
    )

    def _row(snr_db: float) -> tuple:
        noise = ChannelNoise.from_snr(wf, 10.0 ** (snr_db / 10.0))
        scenario = Scenario(
            target=target, geometry=geometry, waveform=wf, noise=noise, search=search
        )
        report = monte_carlo_mse(scenario, trials, seed)
        return (
            snr_db,
            report.trials,
            report.mse_radial,
            report.mse_transverse,
            report.crlb_radial,
            report.crlb_transverse,
            report.ratio_radial,
            report.ratio_transverse,
            report.seed,
            report.degenerate_trials,
        )

    meta = _scenario_meta(config)
    meta.update(
        snr_db_list=list(snr_db_list),
        trials=trials,
        seed=seed,
        vr_window=vr_window,
        vt_window=vt_window,
        grid_points=grid_points,
        refine_tolerance=refine_tolerance,
    )
    return CsvTable(
        name="montecarlo",
        columns=(
            "snr_db",
            "trials",
            "mse_vr",
            "mse_vt",
            "crlb_vr",
            "crlb_vt",
            "ratio_vr",
            "ratio_vt",
            "seed",
            "degenerate_trials",
        ),
        rows=tuple(_map_ordered(_row, list(snr_db_list), threads)),
        meta=meta,
    )


def run_sweep(config: ScenarioConfig, spec: SweepSpec, threads: int = 1) -> CsvTable:
    """Generic one-dimensional sweep of both bounds over a scenario variable."""
    base_spacing = config.geometry().spacing

    def _configure(value: float) -> ScenarioConfig:
        if spec.variable == "distance":
            return replace(config, distance=value)
        if spec.variable == "angle":
            return replace(config, angle=value / 180.0 * math.pi)
        if spec.variable == "carrier":
            # The physical array stays fixed while the carrier moves.
            return replace(config, carrier=value, spacing=base_spacing, aperture=None)
        return replace(config, aperture=value, spacing=None)

    def _row(value: float) -> tuple:
        sub = _configure(float(value))
        wf = sub.waveform()
        crlb = crlb_from_fisher(
            fisher_info_closed_form(sub.target(), sub.geometry(), wf, sub.snr)
        )
        far_field = radial_crlb_far_field(wf, sub.num_elements, sub.snr)
        return (
            float(value),
            _root(crlb.radial),
            _root(crlb.transverse),
            _root(far_field),
            crlb.singular,
        )

    meta = _scenario_meta(config)
    meta.update(
        variable=spec.variable,
        start=spec.start,
        stop=spec.stop,
        points=spec.points,
        log=spec.log,
    )
    return CsvTable(
        name=f"sweep-{spec.variable}",
        columns=(
            spec.variable,
            "root_crlb_vr",
            "root_crlb_vt",
            "root_crlb_vr_far_field",
            "singular",
        ),
        rows=tuple(_map_ordered(_row, list(spec.grid()), threads)),
        meta=meta,
    )
