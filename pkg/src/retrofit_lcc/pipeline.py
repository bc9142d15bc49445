"""Glue between a loaded scenario and the analysis functions."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Any

from .analysis import (
    MeasureDeltaRow,
    ParetoPoint,
    Waterfall,
    cumulative_waterfall,
    pareto_front,
    per_measure_deltas,
)
from .building import BuildingModel, PvSpec
from .config import ScenarioConfig
from .energy import (
    CalibrationResult,
    EndUseTable,
    MonthlyWeather,
    SimulationSettings,
    calibrate_model,
    default_weather,
    load_weather_csv,
)
from .measures import MeasureSpec
from .reports import import_end_use_csv


class ScenarioError(ValueError):
    """The scenario cannot run the requested analysis."""


@dataclass(frozen=True)
class PreparedScenario:
    config: ScenarioConfig
    building: BuildingModel
    settings: SimulationSettings
    weather: MonthlyWeather
    catalog: dict[str, MeasureSpec]
    calibration: CalibrationResult | None = None
    imported: dict[str, EndUseTable] | None = None


def _pv_spec(m: MeasureSpec) -> PvSpec:
    return PvSpec(float(m.params["array_area"]), float(m.params["module_efficiency"]),
                  float(m.params["performance_ratio"]))


def prepare(cfg: ScenarioConfig, *, calibrate: bool | None = None) -> PreparedScenario:
    """Load weather, run configured calibration and import results if needed."""
    weather = load_weather_csv(cfg.weather_file) if cfg.weather_file else default_weather()
    building, settings = cfg.building, cfg.simulation
    catalog = dict(cfg.catalog)
    result = None
    cal = cfg.calibration
    do_cal = cal is not None and (cal.enabled if calibrate is None else calibrate)
    if do_cal and cfg.mode == "simulate":
        pv = None
        if cal.pv_measure is not None:
            pm = catalog[cal.pv_measure]
            if pm.kind != "add_pv":
                raise ScenarioError(f"calibration.pv_measure {pm.id!r} is not an add_pv measure")
            pv = _pv_spec(pm)
        result = calibrate_model(building, weather, cal.targets, settings=settings, free=cal.free,
                                 pv=pv, tolerance=cal.tolerance)
        building, settings = result.building, result.settings
        if cal.pv_measure is not None and result.pv is not None and building.pv is None:
            pm = catalog[cal.pv_measure]
            catalog[pm.id] = dataclasses.replace(
                pm, params=dict(pm.params, performance_ratio=result.pv.performance_ratio))
    imported = None
    if cfg.mode == "import":
        imported = import_end_use_csv(cfg.import_path).tables
        if "base" not in imported:
            raise ScenarioError(f"{cfg.import_path}: imported results need a 'base' case")
    return PreparedScenario(cfg, building, settings, weather, catalog, result, imported)


def run_per_measure(p: PreparedScenario) -> list[MeasureDeltaRow]:
    if p.imported is not None:
        missing = [mid for mid in p.catalog if mid not in p.imported]
        if missing:
            raise ScenarioError(f"imported results lack cases for measures: {missing}")
        return per_measure_deltas(p.building, p.catalog, p.weather, p.config.economics, p.settings,
                                  base_table=p.imported["base"], tables=p.imported)
    return per_measure_deltas(p.building, p.catalog, p.weather, p.config.economics, p.settings)


def run_waterfall(p: PreparedScenario) -> Waterfall:
    order = p.config.waterfall_order or tuple(p.catalog)
    tables = None
    if p.imported is not None:
        keys = ["base"] + [f"waterfall:{k}" for k in range(1, len(order) + 1)]
        missing = [k for k in keys if k not in p.imported]
        if missing:
            raise ScenarioError(f"imported results lack waterfall cases: {missing}")
        tables = [p.imported[k] for k in keys]
    return cumulative_waterfall(p.building, order, p.catalog, p.weather, p.config.economics,
                                p.settings, tables=tables)


def run_pareto(p: PreparedScenario, **kwargs: Any) -> list[ParetoPoint]:
    if p.imported is not None:
        raise ScenarioError("Pareto enumeration needs simulate mode; imported results cover no subsets")
    return pareto_front(p.building, p.catalog, p.weather, p.config.economics, p.settings, **kwargs)


def calibration_summary(result: CalibrationResult | None) -> dict[str, Any] | None:
    if result is None:
        return None
    return {
        "parameters": dict(result.parameters),
        "residual": result.residual,
        "relative_errors": dict(result.relative_errors),
        "tolerance": result.tolerance,
        "feasible": result.feasible,
        "totals_gj": {"electricity": result.table.electricity, "natural_gas": result.table.natural_gas,
                      "total": result.table.total},
        "notes": list(result.notes),
    }
