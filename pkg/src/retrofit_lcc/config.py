"""Scenario configuration: TOML loading, validation and serialisation.

See ``docs/config_schema.md`` for the field reference. Loading collects
every problem it finds and raises one :class:`ConfigError` listing them;
unknown keys only produce warnings.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import tomli
import tomli_w

from .building import (
    END_USES,
    BuildingModel,
    DhwSpec,
    HrvSpec,
    HvacSpec,
    InfiltrationSpec,
    InternalLoads,
    PvSpec,
    Surface,
    ThermostatSchedule,
    convert_r_imperial_to_rsi,
    validate_building,
)
from .economics import CarbonTaxSchedule, EconomicScenario, EmissionFactors, Tariff
from .energy import CALIBRATION_PARAMETERS, TARGET_KEYS, SimulationSettings
from .measures import AREA_BASES, TRANSFORMATIONS, CostBasis, MeasureSpec

log = logging.getLogger(__name__)

MODES = ("simulate", "import")


@dataclass(frozen=True)
class ConfigIssue:
    path: str
    field: str
    reason: str

    def __str__(self) -> str:
        return f"{self.path}: {self.field}: {self.reason}"


class ConfigError(ValueError):
    def __init__(self, issues: list[ConfigIssue]):
        self.issues = issues
        super().__init__("\n".join(str(i) for i in issues))


@dataclass(frozen=True)
class CalibrationConfig:
    targets: Mapping[str, float]
    free: tuple[str, ...] = CALIBRATION_PARAMETERS
    tolerance: float = 0.10
    pv_measure: str | None = None
    enabled: bool = True


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    building: BuildingModel
    measures: tuple[MeasureSpec, ...]
    economics: EconomicScenario
    mode: str = "simulate"
    weather_file: Path | None = None
    import_path: Path | None = None
    waterfall_order: tuple[str, ...] = ()
    report_dir: Path | None = None
    simulation: SimulationSettings = SimulationSettings()
    calibration: CalibrationConfig | None = None
    # published figures echoed into summaries for comparison, e.g. final_ghg_t
    reference: Mapping[str, float] = field(default_factory=dict)
    source: Path | None = field(default=None, compare=False)

    @property
    def catalog(self) -> dict[str, MeasureSpec]:
        return {m.id: m for m in self.measures}


class _Reader:
    """Walks a parsed TOML document, recording issues instead of raising."""

    def __init__(self, path: str):
        self.path = path
        self.issues: list[ConfigIssue] = []
        self.warnings: list[str] = []

    def error(self, fld: str, reason: str) -> None:
        self.issues.append(ConfigIssue(self.path, fld, reason))

    def warn_unknown(self, table: Mapping[str, Any], known: set[str], prefix: str) -> None:
        for k in table:
            if k not in known:
                msg = f"{self.path}: {prefix}{k}: unknown field ignored"
                self.warnings.append(msg)
                log.warning(msg)

    def table(self, parent: Mapping[str, Any], key: str, prefix: str, required: bool = True) -> dict | None:
        v = parent.get(key)
        if v is None:
            if required:
                self.error(prefix + key, "required section missing")
            return None
        if not isinstance(v, dict):
            self.error(prefix + key, "must be a table")
            return None
        return v

    def number(self, t: Mapping[str, Any], key: str, prefix: str, default: Any = ..., *,
               lo: float | None = None, hi: float | None = None, lo_open: bool = False) -> float:
        if key not in t:
            if default is ...:
                self.error(prefix + key, "required field missing")
                return math.nan
            return default
        v = t[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            self.error(prefix + key, f"must be a finite number, got {v!r}")
            return math.nan
        v = float(v)
        if lo is not None and (v <= lo if lo_open else v < lo):
            self.error(prefix + key, f"must be {'>' if lo_open else '>='} {lo:g}, got {v:g}")
        if hi is not None and v > hi:
            self.error(prefix + key, f"must be <= {hi:g}, got {v:g}")
        return v

    def string(self, t: Mapping[str, Any], key: str, prefix: str, default: Any = ...,
               choices: tuple[str, ...] | None = None) -> str:
        if key not in t:
            if default is ...:
                self.error(prefix + key, "required field missing")
                return ""
            return default
        v = t[key]
        if not isinstance(v, str):
            self.error(prefix + key, f"must be a string, got {v!r}")
            return ""
        if choices is not None and v not in choices:
            self.error(prefix + key, f"must be one of {list(choices)}, got {v!r}")
        return v


def _surface(r: _Reader, t: Mapping[str, Any], prefix: str) -> Surface:
    r.warn_unknown(t, {"kind", "area", "u_value", "r_imperial", "rsi", "film_rsi", "shgc", "name"}, prefix)
    kind = r.string(t, "kind", prefix)
    area = r.number(t, "area", prefix, lo=0, lo_open=True)
    given = [k for k in ("u_value", "r_imperial", "rsi") if k in t]
    u = math.nan
    if len(given) != 1:
        r.error(prefix + "u_value", "give exactly one of u_value, r_imperial, rsi")
    elif given[0] == "u_value":
        u = r.number(t, "u_value", prefix, lo=0, lo_open=True)
    else:
        film = r.number(t, "film_rsi", prefix, 0.0, lo=0)
        if given[0] == "r_imperial":
            rv = r.number(t, "r_imperial", prefix, lo=0)
            rsi = convert_r_imperial_to_rsi(rv) if rv >= 0 else math.nan
        else:
            rsi = r.number(t, "rsi", prefix, lo=0)
        total = rsi + film
        if total > 0:
            u = 1.0 / total
        else:
            r.error(prefix + given[0], "total resistance must be > 0")
    shgc = r.number(t, "shgc", prefix, None) if "shgc" in t else None
    return Surface(kind=kind, area=area, u_value=u, shgc=shgc, name=t.get("name", ""))


def _building(r: _Reader, doc: Mapping[str, Any]) -> BuildingModel | None:
    bt = r.table(doc, "building", "")
    if bt is None:
        return None
    p = "building."
    r.warn_unknown(bt, {"name", "surfaces", "infiltration", "hvac", "dhw", "hrv", "pv",
                        "thermostat", "loads", "fuel_map"}, p)
    surfaces = []
    raw = bt.get("surfaces")
    if not isinstance(raw, list) or not raw:
        r.error(p + "surfaces", "must be a non-empty array of tables")
    else:
        for i, s in enumerate(raw):
            if not isinstance(s, dict):
                r.error(f"{p}surfaces[{i}]", "must be a table")
                continue
            surfaces.append(_surface(r, s, f"{p}surfaces[{i}]."))

    inf_t = r.table(bt, "infiltration", p) or {}
    q = p + "infiltration."
    r.warn_unknown(inf_t, {"rate_per_envelope_area", "reference_area"}, q)
    infiltration = InfiltrationSpec(r.number(inf_t, "rate_per_envelope_area", q),
                                    r.number(inf_t, "reference_area", q))

    hv_t = r.table(bt, "hvac", p) or {}
    q = p + "hvac."
    r.warn_unknown(hv_t, {"heating_cop", "cooling_cop", "heating_fuel", "fan_power"}, q)
    hvac = HvacSpec(r.number(hv_t, "heating_cop", q), r.number(hv_t, "cooling_cop", q),
                    r.string(hv_t, "heating_fuel", q), r.number(hv_t, "fan_power", q, 0.0))

    dh_t = r.table(bt, "dhw", p) or {}
    q = p + "dhw."
    r.warn_unknown(dh_t, {"cop", "delivery_temp", "fuel", "daily_draw_volume", "inlet_temp"}, q)
    dhw = DhwSpec(r.number(dh_t, "cop", q), r.number(dh_t, "delivery_temp", q, 60.0),
                  r.string(dh_t, "fuel", q), r.number(dh_t, "daily_draw_volume", q),
                  r.number(dh_t, "inlet_temp", q, 10.0))

    hrv = None
    hr_t = r.table(bt, "hrv", p, required=False)
    if hr_t is not None:
        q = p + "hrv."
        r.warn_unknown(hr_t, {"sensible_effectiveness", "ventilation_flow"}, q)
        hrv = HrvSpec(r.number(hr_t, "sensible_effectiveness", q), r.number(hr_t, "ventilation_flow", q))

    pv = None
    pv_t = r.table(bt, "pv", p, required=False)
    if pv_t is not None:
        q = p + "pv."
        r.warn_unknown(pv_t, {"array_area", "module_efficiency", "performance_ratio"}, q)
        pv = PvSpec(r.number(pv_t, "array_area", q), r.number(pv_t, "module_efficiency", q),
                    r.number(pv_t, "performance_ratio", q))

    th_t = r.table(bt, "thermostat", p) or {}
    q = p + "thermostat."
    r.warn_unknown(th_t, {"heating_setpoint", "heating_setback", "cooling_setpoint", "setback_fraction"}, q)
    sp = r.number(th_t, "heating_setpoint", q)
    thermostat = ThermostatSchedule(sp, r.number(th_t, "heating_setback", q, sp),
                                    r.number(th_t, "cooling_setpoint", q),
                                    r.number(th_t, "setback_fraction", q, 8.0 / 24.0))

    ld_t = r.table(bt, "loads", p) or {}
    q = p + "loads."
    r.warn_unknown(ld_t, {"lighting_density", "plug_density", "usage_fraction", "floor_area"}, q)
    loads = InternalLoads(r.number(ld_t, "lighting_density", q), r.number(ld_t, "plug_density", q),
                          r.number(ld_t, "usage_fraction", q), r.number(ld_t, "floor_area", q))

    fm = r.table(bt, "fuel_map", p) or {}
    fuel_map = {k: v for k, v in fm.items()}

    b = BuildingModel(surfaces=tuple(surfaces), infiltration=infiltration, hvac=hvac, dhw=dhw,
                      thermostat=thermostat, loads=loads, fuel_map=fuel_map, hrv=hrv, pv=pv,
                      name=str(bt.get("name", "")))
    for v in validate_building(b):
        r.error("building." + v.field, v.reason)
    return b


def _measure(r: _Reader, t: Mapping[str, Any], prefix: str) -> MeasureSpec | None:
    r.warn_unknown(t, {"id", "label", "kind", "params", "cost"}, prefix)
    mid = r.string(t, "id", prefix)
    kind = r.string(t, "kind", prefix, choices=tuple(TRANSFORMATIONS))
    params = t.get("params", {})
    if not isinstance(params, dict):
        r.error(prefix + "params", "must be a table")
        params = {}
    cost = None
    ct = t.get("cost")
    if ct is not None:
        if not isinstance(ct, dict):
            r.error(prefix + "cost", "must be a table")
        else:
            q = prefix + "cost."
            r.warn_unknown(ct, {"unit_cost", "area_basis", "lump_cost"}, q)
            basis = r.string(ct, "area_basis", q, None, choices=AREA_BASES)
            cost = CostBasis(r.number(ct, "unit_cost", q, 0.0, lo=0), basis or None,
                             r.number(ct, "lump_cost", q, 0.0, lo=0))
    if r.issues and any(i.field.startswith(prefix) for i in r.issues):
        return None
    try:
        return MeasureSpec(mid, str(t.get("label", mid)), kind, params, cost)
    except ValueError as exc:
        r.error(prefix.rstrip("."), str(exc))
        return None


def _measures(r: _Reader, doc: Mapping[str, Any], base_dir: Path) -> list[MeasureSpec]:
    raw: list[Any] = []
    if "measures_file" in doc:
        mpath = _resolve_path(doc["measures_file"], base_dir)
        try:
            with open(mpath, "rb") as fh:
                mdoc = tomli.load(fh)
        except OSError as exc:
            r.error("measures_file", f"cannot read {mpath}: {exc.strerror or exc}")
            mdoc = {}
        except tomli.TOMLDecodeError as exc:
            r.error("measures_file", f"{mpath}: {exc}")
            mdoc = {}
        raw.extend(mdoc.get("measures", []))
    overrides = doc.get("cost_overrides", {})
    raw.extend(doc.get("measures", []))
    out = []
    seen = set()
    for i, t in enumerate(raw):
        if not isinstance(t, dict):
            r.error(f"measures[{i}]", "must be a table")
            continue
        if isinstance(overrides, dict) and t.get("id") in overrides:
            t = dict(t, cost=dict(t.get("cost", {}), **overrides[t["id"]]))
        m = _measure(r, t, f"measures[{i}].")
        if m is None:
            continue
        if m.id in seen:
            r.error(f"measures[{i}].id", f"duplicate measure id {m.id!r}")
            continue
        seen.add(m.id)
        out.append(m)
    if isinstance(overrides, dict):
        for k in overrides:
            if k not in seen:
                r.error(f"cost_overrides.{k}", "no measure with this id")
    return out


def _economics(r: _Reader, doc: Mapping[str, Any]) -> EconomicScenario | None:
    et = r.table(doc, "economics", "")
    if et is None:
        return None
    p = "economics."
    r.warn_unknown(et, {"discount_rate", "horizon", "anchor_year", "include_carbon", "disposal_cost",
                        "tariff", "carbon", "emission_factors"}, p)
    rate = r.number(et, "discount_rate", p, lo=0)
    horizon = r.number(et, "horizon", p, lo=1)
    if not math.isnan(horizon) and horizon != int(horizon):
        r.error(p + "horizon", "must be a whole number of years")
    tt = r.table(et, "tariff", p) or {}
    q = p + "tariff."
    r.warn_unknown(tt, {"electricity_price", "gas_price", "escalation"}, q)
    tariff_args = (r.number(tt, "electricity_price", q, lo=0), r.number(tt, "gas_price", q, lo=0),
                   r.number(tt, "escalation", q, 0.0))
    carbon = CarbonTaxSchedule()
    ct = r.table(et, "carbon", p, required=False)
    if ct is not None:
        r.warn_unknown(ct, {"anchors"}, p + "carbon.")
        anchors = ct.get("anchors")
        try:
            carbon = CarbonTaxSchedule(tuple((a[0], a[1]) for a in anchors))
        except (TypeError, ValueError, IndexError) as exc:
            r.error(p + "carbon.anchors", f"must be [[year, price], ...] non-decreasing: {exc}")
    factors = EmissionFactors()
    ft = r.table(et, "emission_factors", p, required=False)
    if ft is not None:
        q = p + "emission_factors."
        r.warn_unknown(ft, {"electricity", "natural_gas"}, q)
        factors = EmissionFactors(r.number(ft, "electricity", q, factors.electricity, lo=0),
                                  r.number(ft, "natural_gas", q, factors.natural_gas, lo=0))
    anchor = et.get("anchor_year")
    if anchor is not None and (isinstance(anchor, bool) or not isinstance(anchor, int)):
        r.error(p + "anchor_year", "must be an integer year")
        anchor = None
    include = et.get("include_carbon", False)
    if not isinstance(include, bool):
        r.error(p + "include_carbon", "must be true or false")
        include = False
    disposal = r.number(et, "disposal_cost", p, 0.0, lo=0)
    if any(math.isnan(x) for x in (rate, horizon, *tariff_args)) or r.issues:
        return None
    try:
        return EconomicScenario(
            tariff=Tariff(*tariff_args), discount_rate=rate, horizon=int(horizon), carbon=carbon,
            factors=factors, anchor_year=anchor, include_carbon=include, disposal_cost=disposal,
        )
    except ValueError as exc:
        r.error("economics", str(exc))
        return None


def _resolve_path(value: Any, base_dir: Path) -> Path:
    p = Path(str(value)).expanduser()
    return p if p.is_absolute() else (base_dir / p).resolve()


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("retrofit_lcc.data").joinpath(name)))


def load_scenario_config(path: str | Path) -> ScenarioConfig:
    """Load and validate a scenario TOML file.

    Raises ``OSError`` if the file cannot be read and :class:`ConfigError`
    listing every issue (path, field, reason) if it is invalid.
    """
    path = Path(path)
    with open(path, "rb") as fh:
        raw = fh.read()
    r = _Reader(str(path))
    try:
        doc = tomli.loads(raw.decode("utf-8"))
    except (tomli.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError([ConfigIssue(str(path), "<document>", f"not valid TOML: {exc}")]) from None
    return _from_doc(doc, path.resolve().parent, r, source=path)


def _from_doc(doc: Mapping[str, Any], base_dir: Path, r: _Reader, source: Path | None = None) -> ScenarioConfig:
    r.warn_unknown(doc, {"name", "mode", "weather_file", "import_path", "waterfall_order", "report_dir",
                         "building", "measures", "measures_file", "cost_overrides", "economics",
                         "simulation", "calibration", "reference"}, "")
    mode = r.string(doc, "mode", "", "simulate", choices=MODES)
    building = _building(r, doc)
    measures = _measures(r, doc, base_dir)
    economics = _economics(r, doc)

    weather = None
    if "weather_file" in doc:
        weather = _resolve_path(doc["weather_file"], base_dir)
        if not weather.is_file():
            r.error("weather_file", f"file not found: {weather}")
    import_path = None
    if "import_path" in doc:
        import_path = _resolve_path(doc["import_path"], base_dir)
        if not import_path.is_file():
            r.error("import_path", f"file not found: {import_path}")
    if mode == "import" and import_path is None:
        r.error("import_path", "required when mode = 'import'")

    ids = [m.id for m in measures]
    order = doc.get("waterfall_order", ids)
    if not isinstance(order, list) or not all(isinstance(x, str) for x in order):
        r.error("waterfall_order", "must be an array of measure ids")
        order = []
    for x in order:
        if x not in ids:
            r.error("waterfall_order", f"unknown measure id {x!r}")
    if len(set(order)) != len(order):
        r.error("waterfall_order", "duplicate measure ids")

    report_dir = _resolve_path(doc["report_dir"], base_dir) if "report_dir" in doc else None

    st = r.table(doc, "simulation", "", required=False) or {}
    r.warn_unknown(st, {"gain_utilization", "window_irradiance_factor"}, "simulation.")
    settings = SimulationSettings(
        r.number(st, "gain_utilization", "simulation.", 0.9, lo=0, hi=1),
        r.number(st, "window_irradiance_factor", "simulation.", 0.5, lo=0, hi=1),
    )

    calibration = None
    cal = r.table(doc, "calibration", "", required=False)
    if cal is not None:
        q = "calibration."
        r.warn_unknown(cal, {"enabled", "targets", "free", "tolerance", "pv_measure"}, q)
        targets = cal.get("targets", {})
        if not isinstance(targets, dict) or not targets:
            r.error(q + "targets", "must be a non-empty table of GJ targets")
            targets = {}
        for k in targets:
            if k not in TARGET_KEYS:
                r.error(q + "targets." + k, f"must be one of {list(TARGET_KEYS)}")
        tvals = {k: r.number(targets, k, q + "targets.", lo=0) for k in targets if k in TARGET_KEYS}
        free = cal.get("free", list(CALIBRATION_PARAMETERS))
        if not isinstance(free, list) or len(free) > 3 or any(f not in CALIBRATION_PARAMETERS for f in free):
            r.error(q + "free", f"at most three of {list(CALIBRATION_PARAMETERS)}")
            free = []
        pv_measure = cal.get("pv_measure")
        if pv_measure is not None and pv_measure not in ids:
            r.error(q + "pv_measure", f"unknown measure id {pv_measure!r}")
        enabled = cal.get("enabled", True)
        if not isinstance(enabled, bool):
            r.error(q + "enabled", "must be true or false")
            enabled = True
        calibration = CalibrationConfig(
            targets=tvals, free=tuple(free), tolerance=r.number(cal, "tolerance", q, 0.10, lo=0),
            pv_measure=pv_measure, enabled=enabled,
        )

    reference = r.table(doc, "reference", "", required=False) or {}
    reference = {k: r.number(reference, k, "reference.") for k in reference}

    if r.issues:
        raise ConfigError(r.issues)
    return ScenarioConfig(
        name=str(doc.get("name", source.stem if source else "scenario")),
        building=building,
        measures=tuple(measures),
        economics=economics,
        mode=mode,
        weather_file=weather,
        import_path=import_path,
        waterfall_order=tuple(order),
        report_dir=report_dir,
        simulation=settings,
        calibration=calibration,
        reference=reference,
        source=source,
    )


def loads_scenario_config(text: str, base_dir: str | Path = ".") -> ScenarioConfig:
    r = _Reader("<string>")
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError([ConfigIssue("<string>", "<document>", f"not valid TOML: {exc}")]) from None
    return _from_doc(doc, Path(base_dir).resolve(), r)


def _drop_none(d: dict) -> dict:
    return {k: v for k, v in d.items() if v is not None}


def config_to_dict(cfg: ScenarioConfig) -> dict[str, Any]:
    """Fully inlined document that :func:`loads_scenario_config` reads back."""
    b = cfg.building
    building: dict[str, Any] = {
        "name": b.name,
        "surfaces": [
            _drop_none({"kind": s.kind, "area": s.area, "u_value": s.u_value, "shgc": s.shgc,
                        "name": s.name or None})
            for s in b.surfaces
        ],
        "infiltration": {"rate_per_envelope_area": b.infiltration.rate_per_envelope_area,
                         "reference_area": b.infiltration.reference_area},
        "hvac": {"heating_cop": b.hvac.heating_cop, "cooling_cop": b.hvac.cooling_cop,
                 "heating_fuel": b.hvac.heating_fuel, "fan_power": b.hvac.fan_power},
        "dhw": {"cop": b.dhw.cop, "delivery_temp": b.dhw.delivery_temp, "fuel": b.dhw.fuel,
                "daily_draw_volume": b.dhw.daily_draw_volume, "inlet_temp": b.dhw.inlet_temp},
        "thermostat": {"heating_setpoint": b.thermostat.heating_setpoint,
                       "heating_setback": b.thermostat.heating_setback,
                       "cooling_setpoint": b.thermostat.cooling_setpoint,
                       "setback_fraction": b.thermostat.setback_fraction},
        "loads": {"lighting_density": b.loads.lighting_density, "plug_density": b.loads.plug_density,
                  "usage_fraction": b.loads.usage_fraction, "floor_area": b.loads.floor_area},
        "fuel_map": dict(b.fuel_map),
    }
    if b.hrv is not None:
        building["hrv"] = {"sensible_effectiveness": b.hrv.sensible_effectiveness,
                           "ventilation_flow": b.hrv.ventilation_flow}
    if b.pv is not None:
        building["pv"] = {"array_area": b.pv.array_area, "module_efficiency": b.pv.module_efficiency,
                          "performance_ratio": b.pv.performance_ratio}
    measures = []
    for m in cfg.measures:
        d: dict[str, Any] = {"id": m.id, "label": m.label, "kind": m.kind, "params": dict(m.params)}
        if m.cost is not None:
            d["cost"] = _drop_none({"unit_cost": m.cost.unit_cost, "area_basis": m.cost.area_basis,
                                    "lump_cost": m.cost.lump_cost})
        measures.append(d)
    e = cfg.economics
    doc: dict[str, Any] = {
        "name": cfg.name,
        "mode": cfg.mode,
        "waterfall_order": list(cfg.waterfall_order),
    }
    if cfg.weather_file is not None:
        doc["weather_file"] = str(cfg.weather_file)
    if cfg.import_path is not None:
        doc["import_path"] = str(cfg.import_path)
    if cfg.report_dir is not None:
        doc["report_dir"] = str(cfg.report_dir)
    doc["simulation"] = {"gain_utilization": cfg.simulation.gain_utilization,
                         "window_irradiance_factor": cfg.simulation.window_irradiance_factor}
    if cfg.calibration is not None:
        c = cfg.calibration
        doc["calibration"] = _drop_none({"enabled": c.enabled, "targets": dict(c.targets), "free": list(c.free),
                                         "tolerance": c.tolerance, "pv_measure": c.pv_measure})
    doc["economics"] = {
        "discount_rate": e.discount_rate,
        "horizon": e.horizon,
        "anchor_year": e.anchor_year,
        "include_carbon": e.include_carbon,
        "disposal_cost": e.disposal_cost,
        "tariff": {"electricity_price": e.tariff.electricity_price, "gas_price": e.tariff.gas_price,
                   "escalation": e.tariff.escalation},
        "carbon": {"anchors": [[y, p] for y, p in e.carbon.anchors]},
        "emission_factors": {"electricity": e.factors.electricity, "natural_gas": e.factors.natural_gas},
    }
    if cfg.reference:
        doc["reference"] = dict(cfg.reference)
    doc["building"] = building
    doc["measures"] = measures
    return doc


def dumps_scenario_config(cfg: ScenarioConfig) -> str:
    return tomli_w.dumps(config_to_dict(cfg))
