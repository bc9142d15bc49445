"""Monthly quasi-steady-state energy model.

Space heating is a monthly degree-day balance: transmission, infiltration and
ventilation losses over the month minus utilised internal and solar gains,
clamped at zero, divided by the heating COP. Cooling uses cooling degree
days at the cooling setpoint. Lighting, plug and fan energy are schedule
free (density x area x usage x hours). PV generation is netted annually
against electricity.
"""

from __future__ import annotations

import csv
import dataclasses
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .building import END_USES, BuildingModel, PvSpec, require_valid

RHO_C_AIR = 1200.0  # J/m³K
RHO_WATER = 1.0  # kg/L
C_WATER = 4186.0  # J/kgK
SECONDS_PER_DAY = 86400.0
HOURS_PER_YEAR = 8760.0
J_PER_GJ = 1e9
J_PER_KWH = 3.6e6

WEATHER_HEADER = ["month", "mean_temp_c", "days", "ghi_kwh_m2"]


@dataclass(frozen=True)
class MonthlyWeather:
    mean_temp: tuple[float, ...]
    days: tuple[int, ...]
    ghi: tuple[float, ...]  # kWh/m² per month

    def __post_init__(self) -> None:
        object.__setattr__(self, "mean_temp", tuple(float(x) for x in self.mean_temp))
        object.__setattr__(self, "days", tuple(int(x) for x in self.days))
        object.__setattr__(self, "ghi", tuple(float(x) for x in self.ghi))
        if not (len(self.mean_temp) == len(self.days) == len(self.ghi) == 12):
            raise ValueError("monthly weather needs exactly 12 entries per series")
        for m, d in enumerate(self.days, start=1):
            if not 28 <= d <= 31:
                raise ValueError(f"month {m}: days must be within [28, 31], got {d}")
        for m, g in enumerate(self.ghi, start=1):
            if not (g >= 0 and math.isfinite(g)):
                raise ValueError(f"month {m}: irradiance must be >= 0, got {g}")
        for m, t in enumerate(self.mean_temp, start=1):
            if not math.isfinite(t):
                raise ValueError(f"month {m}: mean temperature is not finite")

    @property
    def annual_ghi(self) -> float:
        return sum(self.ghi)


def load_weather_csv(path: str | Path) -> MonthlyWeather:
    """Read a 12-row ``month,mean_temp_c,days,ghi_kwh_m2`` CSV."""
    with open(path, newline="", encoding="utf-8") as fh:
        return _parse_weather(fh, str(path))


def default_weather() -> MonthlyWeather:
    """Bundled Metro-Vancouver-like monthly profile."""
    ref = resources.files("retrofit_lcc.data").joinpath("weather_vancouver.csv")
    with ref.open("r", encoding="utf-8", newline="") as fh:
        return _parse_weather(fh, "weather_vancouver.csv")


def _parse_weather(lines: Iterable[str], source: str) -> MonthlyWeather:
    reader = csv.reader(lines)
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != WEATHER_HEADER:
        raise ValueError(f"{source}: header must be {','.join(WEATHER_HEADER)}")
    rows: dict[int, tuple[float, int, float]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 4:
            raise ValueError(f"{source}:{lineno}: expected 4 columns, got {len(row)}")
        try:
            month = int(row[0])
            temp = float(row[1])
            days = int(row[2])
            ghi = float(row[3])
        except ValueError as exc:
            raise ValueError(f"{source}:{lineno}: {exc}") from None
        if not 1 <= month <= 12 or month in rows:
            raise ValueError(f"{source}:{lineno}: bad or duplicate month {month}")
        rows[month] = (temp, days, ghi)
    if sorted(rows) != list(range(1, 13)):
        raise ValueError(f"{source}: expected 12 monthly rows, got {len(rows)}")
    ordered = [rows[m] for m in range(1, 13)]
    return MonthlyWeather(
        mean_temp=[r[0] for r in ordered],
        days=[r[1] for r in ordered],
        ghi=[r[2] for r in ordered],
    )


@dataclass(frozen=True)
class SimulationSettings:
    """Model parameters that are not properties of the building itself."""

    gain_utilization: float = 0.9
    # mean fraction of horizontal irradiance reaching vertical glazing
    window_irradiance_factor: float = 0.5


@dataclass(frozen=True)
class EndUseTable:
    """Annual delivered energy by end use (GJ) and by fuel.

    ``electricity`` is net of ``pv_generation`` and may go negative when the
    array out-produces the building; credits carry over within the year.
    """

    space_heating: float = 0.0
    space_cooling: float = 0.0
    dhw: float = 0.0
    lighting: float = 0.0
    plug: float = 0.0
    ventilation_fans: float = 0.0
    pv_generation: float = 0.0
    electricity: float = 0.0
    natural_gas: float = 0.0

    @classmethod
    def from_end_uses(
        cls,
        end_uses: Mapping[str, float],
        fuel_map: Mapping[str, str],
        pv_generation: float = 0.0,
    ) -> "EndUseTable":
        unknown = set(end_uses) - set(END_USES)
        if unknown:
            raise ValueError(f"unknown end uses: {sorted(unknown)}")
        totals = {"electricity": 0.0, "natural_gas": 0.0}
        for eu in END_USES:
            v = end_uses.get(eu, 0.0)
            if v == 0.0:
                continue
            fuel = fuel_map.get(eu)
            if fuel not in totals:
                raise ValueError(f"end use {eu!r} has no valid fuel mapping")
            totals[fuel] += v
        totals["electricity"] -= pv_generation
        return cls(
            **{eu: float(end_uses.get(eu, 0.0)) for eu in END_USES},
            pv_generation=float(pv_generation),
            **totals,
        )

    @property
    def total(self) -> float:
        return self.electricity + self.natural_gas

    def end_uses(self) -> dict[str, float]:
        return {eu: getattr(self, eu) for eu in END_USES}

    def violations(self) -> list[str]:
        out = []
        for name in (*END_USES, "pv_generation", "natural_gas"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                out.append(f"{name} must be >= 0, got {v}")
        return out


def degree_days(weather: MonthlyWeather, base_temp: float, mode: str = "heating") -> list[float]:
    """Monthly degree days in K·day."""
    if mode == "heating":
        return [max(0.0, base_temp - t) * d for t, d in zip(weather.mean_temp, weather.days)]
    if mode == "cooling":
        return [max(0.0, t - base_temp) * d for t, d in zip(weather.mean_temp, weather.days)]
    raise ValueError(f"mode must be 'heating' or 'cooling', got {mode!r}")


def transmission_coefficient(b: BuildingModel) -> float:
    return sum(s.u_value * s.area for s in b.surfaces)


def heat_loss_coefficient(b: BuildingModel) -> float:
    """Whole-building heat loss coefficient H in W/K.

    Sum of U·A over all surfaces, plus infiltration, plus ventilation net of
    heat-recovery effectiveness.
    """
    h = transmission_coefficient(b)
    h += RHO_C_AIR * b.infiltration.flow
    if b.hrv is not None:
        h += RHO_C_AIR * b.hrv.ventilation_flow * (1.0 - b.hrv.sensible_effectiveness)
    return h


def monthly_internal_gains(b: BuildingModel, weather: MonthlyWeather) -> list[float]:
    """Lighting and plug heat released per month, J."""
    ld = b.loads
    watts = (ld.lighting_density + ld.plug_density) * ld.floor_area * ld.usage_fraction
    return [watts * d * SECONDS_PER_DAY for d in weather.days]


def monthly_solar_gains(
    b: BuildingModel, weather: MonthlyWeather, settings: SimulationSettings = SimulationSettings()
) -> list[float]:
    """Solar heat admitted through glazing per month, J."""
    a_shgc = sum(s.area * (s.shgc or 0.0) for s in b.surfaces if s.kind == "window")
    f = settings.window_irradiance_factor
    return [a_shgc * f * g * J_PER_KWH for g in weather.ghi]


@dataclass(frozen=True)
class MonthlyHeating:
    demand: tuple[float, ...]  # GJ of useful heat
    delivered: tuple[float, ...]  # GJ of fuel/electricity

    @property
    def annual_demand(self) -> float:
        return math.fsum(self.demand)

    @property
    def annual_delivered(self) -> float:
        return math.fsum(self.delivered)


def monthly_space_heating(
    b: BuildingModel,
    weather: MonthlyWeather,
    settings: SimulationSettings = SimulationSettings(),
) -> MonthlyHeating:
    h = heat_loss_coefficient(b)
    dd = degree_days(weather, b.thermostat.effective_heating_base, "heating")
    internal = monthly_internal_gains(b, weather)
    solar = monthly_solar_gains(b, weather, settings)
    eta = settings.gain_utilization
    demand = []
    for dd_m, qi, qs in zip(dd, internal, solar):
        loss = h * dd_m * SECONDS_PER_DAY
        demand.append(max(0.0, loss - eta * (qi + qs)) / J_PER_GJ)
    cop = b.hvac.heating_cop
    return MonthlyHeating(tuple(demand), tuple(q / cop for q in demand))


def heating_from_demand(demand_gj: float, cop: float) -> float:
    if cop <= 0:
        raise ValueError("heating COP must be > 0")
    return demand_gj / cop


def dhw_annual(b: BuildingModel) -> float:
    """Delivered DHW energy in GJ/yr."""
    d = b.dhw
    if d.cop <= 0:
        raise ValueError("DHW COP must be > 0")
    useful = d.daily_draw_volume * 365 * RHO_WATER * C_WATER * (d.delivery_temp - d.inlet_temp)
    return useful / d.cop / J_PER_GJ


def pv_annual_yield(pv: PvSpec | None, weather: MonthlyWeather) -> float:
    """Annual PV output in GJ."""
    if pv is None:
        return 0.0
    kwh = pv.array_area * weather.annual_ghi * pv.module_efficiency * pv.performance_ratio
    return kwh * J_PER_KWH / J_PER_GJ


def annual_cooling(b: BuildingModel, weather: MonthlyWeather) -> float:
    cdd = sum(degree_days(weather, b.thermostat.cooling_setpoint, "cooling"))
    return heat_loss_coefficient(b) * cdd * SECONDS_PER_DAY / b.hvac.cooling_cop / J_PER_GJ


def simulate_annual(
    b: BuildingModel,
    weather: MonthlyWeather,
    settings: SimulationSettings = SimulationSettings(),
) -> EndUseTable:
    """Simulate one year and return the end-use table."""
    require_valid(b)
    ld = b.loads
    usage_seconds = ld.floor_area * ld.usage_fraction * HOURS_PER_YEAR * 3600.0
    end_uses = {
        "space_heating": monthly_space_heating(b, weather, settings).annual_delivered,
        "space_cooling": annual_cooling(b, weather),
        "dhw": dhw_annual(b),
        "lighting": ld.lighting_density * usage_seconds / J_PER_GJ,
        "plug": ld.plug_density * usage_seconds / J_PER_GJ,
        "ventilation_fans": b.hvac.fan_power * HOURS_PER_YEAR * 3600.0 / J_PER_GJ,
    }
    return EndUseTable.from_end_uses(end_uses, b.fuel_map, pv_annual_yield(b.pv, weather))


# -- calibration -------------------------------------------------------------

CALIBRATION_PARAMETERS = ("gain_utilization", "dhw_daily_draw", "pv_performance_ratio")
TARGET_KEYS = ("electricity", "natural_gas", "total", "pv_generation")


@dataclass(frozen=True)
class CalibrationResult:
    parameters: dict[str, float]
    building: BuildingModel
    settings: SimulationSettings
    pv: PvSpec | None
    table: EndUseTable
    residual: float
    relative_errors: dict[str, float]
    tolerance: float
    feasible: bool
    iterations: int = 0
    notes: tuple[str, ...] = field(default=())


def _pv_target_value(table: EndUseTable, pv: PvSpec | None, weather: MonthlyWeather) -> float:
    return table.pv_generation if table.pv_generation else pv_annual_yield(pv, weather)


def _relative_errors(
    table: EndUseTable, pv_gen: float, targets: Mapping[str, float]
) -> dict[str, float]:
    values = {
        "electricity": table.electricity,
        "natural_gas": table.natural_gas,
        "total": table.total,
        "pv_generation": pv_gen,
    }
    errs = {}
    for k, target in targets.items():
        v = values[k]
        if target == 0:
            errs[k] = abs(v)
        else:
            errs[k] = abs(v - target) / abs(target)
    return errs


def calibrate_model(
    b: BuildingModel,
    weather: MonthlyWeather,
    target_totals: Mapping[str, float],
    *,
    settings: SimulationSettings = SimulationSettings(),
    free: Sequence[str] = CALIBRATION_PARAMETERS,
    pv: PvSpec | None = None,
    tolerance: float = 0.10,
    max_draw: float = 50_000.0,
    sweeps: int = 12,
) -> CalibrationResult:
    """Tune up to three parameters so simulated totals match targets.

    Targets are GJ/yr keyed by ``electricity``, ``natural_gas``, ``total``
    and optionally ``pv_generation``. PV performance ratio is tuned on the
    building's array, or on ``pv`` when the building has none (used to size
    a catalog PV measure against a target yield).

    Search is a deterministic cyclic coordinate search with nested grid
    refinement, minimising the sum of squared relative errors. The reported
    residual is the largest relative error over the targets.
    """
    unknown = set(target_totals) - set(TARGET_KEYS)
    if unknown:
        raise ValueError(f"unknown calibration targets: {sorted(unknown)}")
    bad = set(free) - set(CALIBRATION_PARAMETERS)
    if bad:
        raise ValueError(f"unknown calibration parameters: {sorted(bad)}")
    if len(free) > 3:
        raise ValueError("at most three free parameters")
    require_valid(b)

    pv_spec = b.pv if b.pv is not None else pv
    free = [p for p in free if not (p == "pv_performance_ratio" and pv_spec is None)]
    free = [p for p in free if not (p == "pv_performance_ratio" and "pv_generation" not in target_totals)]

    initial = {
        "gain_utilization": settings.gain_utilization,
        "dhw_daily_draw": b.dhw.daily_draw_volume,
        "pv_performance_ratio": pv_spec.performance_ratio if pv_spec is not None else 0.0,
    }
    bounds = {
        "gain_utilization": (0.0, 1.0),
        "dhw_daily_draw": (0.0, max_draw),
        "pv_performance_ratio": (0.0, 1.0),
    }

    def build(params: Mapping[str, float]):
        s = dataclasses.replace(settings, gain_utilization=params["gain_utilization"])
        bb = dataclasses.replace(b, dhw=dataclasses.replace(b.dhw, daily_draw_volume=params["dhw_daily_draw"]))
        p = None
        if pv_spec is not None:
            p = dataclasses.replace(pv_spec, performance_ratio=params["pv_performance_ratio"])
            if b.pv is not None:
                bb = dataclasses.replace(bb, pv=p)
        return bb, s, p

    def evaluate(params: Mapping[str, float]):
        bb, s, p = build(params)
        table = simulate_annual(bb, weather, s)
        errs = _relative_errors(table, _pv_target_value(table, p, weather), target_totals)
        return math.fsum(e * e for e in errs.values()), errs, table, bb, s, p

    best = dict(initial)
    best_obj, best_errs, *_ = evaluate(best)
    iterations = 0
    if best_obj > 0.0:
        for _ in range(sweeps):
            improved = False
            for name in free:
                lo, hi = bounds[name]
                for _level in range(8):
                    n = 20
                    step = (hi - lo) / n
                    cand_best = None
                    for k in range(n + 1):
                        trial = dict(best)
                        trial[name] = lo + k * step
                        obj = evaluate(trial)[0]
                        iterations += 1
                        if obj < best_obj - 1e-15:
                            best_obj, best, cand_best = obj, trial, trial[name]
                            improved = True
                    centre = best[name]
                    lo = max(bounds[name][0], centre - step)
                    hi = min(bounds[name][1], centre + step)
                    if cand_best is None and step < 1e-9 * (bounds[name][1] - bounds[name][0]):
                        break
            if not improved or best_obj < 1e-20:
                break

    _, errs, table, bb, s, p = evaluate(best)
    residual = max(errs.values(), default=0.0)
    notes = []
    if residual > tolerance:
        notes.append(f"targets not reachable within tolerance {tolerance:g}: residual {residual:.4g}")
    return CalibrationResult(
        parameters={k: best[k] for k in CALIBRATION_PARAMETERS},
        building=bb,
        settings=s,
        pv=p,
        table=table,
        residual=residual,
        relative_errors=errs,
        tolerance=tolerance,
        feasible=residual <= tolerance,
        iterations=iterations,
        notes=tuple(notes),
    )
