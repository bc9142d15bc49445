"""Building model value types.

Everything is stored in SI units: areas in m², transmittances in W/m²K,
temperatures in °C, flows in m³/s. Imperial R-values are converted at the
config boundary with :func:`convert_r_imperial_to_rsi`.

Types are plain frozen dataclasses. Construction never raises on bad
physical values; :func:`validate_building` reports violations as data so a
config loader can show all of them at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

# ft²·°F·h/BTU -> m²K/W
R_TO_RSI = 0.1761

SURFACE_KINDS = ("wall", "roof", "floor", "window")
FUELS = ("electricity", "natural_gas")
END_USES = (
    "space_heating",
    "space_cooling",
    "dhw",
    "lighting",
    "plug",
    "ventilation_fans",
)


def convert_r_imperial_to_rsi(r_imperial: float) -> float:
    """Convert an imperial R-value (ft²·°F·h/BTU) to RSI (m²K/W)."""
    if r_imperial < 0 or math.isnan(r_imperial):
        raise ValueError(f"R-value must be non-negative, got {r_imperial}")
    return r_imperial * R_TO_RSI


def convert_rsi_to_r_imperial(rsi: float) -> float:
    if rsi < 0 or math.isnan(rsi):
        raise ValueError(f"RSI must be non-negative, got {rsi}")
    return rsi / R_TO_RSI


@dataclass(frozen=True)
class Surface:
    kind: str
    area: float
    u_value: float
    shgc: float | None = None
    name: str = ""


@dataclass(frozen=True)
class InfiltrationSpec:
    # m³/s per m² of above-grade envelope
    rate_per_envelope_area: float
    reference_area: float

    @property
    def flow(self) -> float:
        return self.rate_per_envelope_area * self.reference_area


@dataclass(frozen=True)
class HvacSpec:
    heating_cop: float
    cooling_cop: float
    heating_fuel: str = "natural_gas"
    # continuous fan-coil / pump power, W
    fan_power: float = 0.0


@dataclass(frozen=True)
class DhwSpec:
    cop: float
    delivery_temp: float = 60.0
    fuel: str = "electricity"
    daily_draw_volume: float = 0.0
    inlet_temp: float = 10.0


@dataclass(frozen=True)
class HrvSpec:
    sensible_effectiveness: float
    ventilation_flow: float


@dataclass(frozen=True)
class PvSpec:
    array_area: float
    module_efficiency: float
    performance_ratio: float


@dataclass(frozen=True)
class ThermostatSchedule:
    heating_setpoint: float = 22.0
    heating_setback: float = 22.0
    cooling_setpoint: float = 26.0
    setback_fraction: float = 8.0 / 24.0

    @property
    def effective_heating_base(self) -> float:
        """Hour-weighted heating setpoint used as the degree-day base."""
        f = self.setback_fraction
        return (1.0 - f) * self.heating_setpoint + f * self.heating_setback


@dataclass(frozen=True)
class InternalLoads:
    lighting_density: float
    plug_density: float
    usage_fraction: float
    floor_area: float


@dataclass(frozen=True)
class BuildingModel:
    surfaces: tuple[Surface, ...]
    infiltration: InfiltrationSpec
    hvac: HvacSpec
    dhw: DhwSpec
    thermostat: ThermostatSchedule
    loads: InternalLoads
    fuel_map: Mapping[str, str]
    hrv: HrvSpec | None = None
    pv: PvSpec | None = None
    name: str = ""
    # additive retrofits already applied, e.g. "add_insulation:wall"
    applied: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        # freeze containers so instances are safe to share
        object.__setattr__(self, "surfaces", tuple(self.surfaces))
        object.__setattr__(self, "fuel_map", _FrozenMap(self.fuel_map))
        object.__setattr__(self, "applied", tuple(self.applied))

    def surfaces_of(self, kind: str) -> tuple[Surface, ...]:
        return tuple(s for s in self.surfaces if s.kind == kind)

    def area_of(self, kind: str) -> float:
        return sum(s.area for s in self.surfaces if s.kind == kind)

    @property
    def ventilation_flow(self) -> float:
        return self.hrv.ventilation_flow if self.hrv is not None else 0.0


class _FrozenMap(dict):
    """Hashable, read-only dict used for ``BuildingModel.fuel_map``."""

    def _readonly(self, *args, **kwargs):
        raise TypeError("fuel_map is read-only")

    __setitem__ = __delitem__ = clear = pop = popitem = setdefault = update = _readonly

    def __hash__(self) -> int:  # type: ignore[override]
        return hash(tuple(sorted(self.items())))

    def __reduce__(self):
        # copy/pickle would otherwise rebuild via __setitem__
        return (type(self), (dict(self),))


@dataclass(frozen=True)
class Violation:
    field: str
    reason: str

    def __str__(self) -> str:
        return f"{self.field}: {self.reason}"


def _finite(x: float) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)


def validate_building(b: BuildingModel) -> list[Violation]:
    """Check every field bound and structural rule of a building.

    Returns an empty list when the building is valid. Each violation names
    the offending field using a dotted path such as ``surfaces[3].shgc``.
    """
    out: list[Violation] = []

    def check(ok: bool, path: str, reason: str) -> None:
        if not ok:
            out.append(Violation(path, reason))

    for i, s in enumerate(b.surfaces):
        p = f"surfaces[{i}]"
        check(s.kind in SURFACE_KINDS, f"{p}.kind", f"unknown surface kind {s.kind!r}")
        check(_finite(s.area) and s.area > 0, f"{p}.area", "must be > 0")
        check(_finite(s.u_value) and s.u_value > 0, f"{p}.u_value", "must be > 0")
        if s.kind == "window":
            check(
                s.shgc is not None and _finite(s.shgc) and 0.0 <= s.shgc <= 1.0,
                f"{p}.shgc",
                "window shgc must be within [0, 1]",
            )
        else:
            check(s.shgc is None, f"{p}.shgc", "only windows carry an shgc")

    kinds = {s.kind for s in b.surfaces}
    check("wall" in kinds, "surfaces", "at least one wall surface required")
    check("roof" in kinds, "surfaces", "at least one roof surface required")

    inf = b.infiltration
    check(_finite(inf.rate_per_envelope_area) and inf.rate_per_envelope_area >= 0,
          "infiltration.rate_per_envelope_area", "must be >= 0")
    check(_finite(inf.reference_area) and inf.reference_area > 0,
          "infiltration.reference_area", "must be > 0")

    h = b.hvac
    check(_finite(h.heating_cop) and h.heating_cop > 0, "hvac.heating_cop", "must be > 0")
    check(_finite(h.cooling_cop) and h.cooling_cop > 0, "hvac.cooling_cop", "must be > 0")
    check(h.heating_fuel in FUELS, "hvac.heating_fuel", f"must be one of {FUELS}")
    check(_finite(h.fan_power) and h.fan_power >= 0, "hvac.fan_power", "must be >= 0")

    d = b.dhw
    check(_finite(d.cop) and d.cop > 0, "dhw.cop", "must be > 0")
    check(d.fuel in FUELS, "dhw.fuel", f"must be one of {FUELS}")
    check(_finite(d.daily_draw_volume) and d.daily_draw_volume >= 0,
          "dhw.daily_draw_volume", "must be >= 0")
    check(d.delivery_temp > d.inlet_temp, "dhw.delivery_temp", "must exceed inlet_temp")

    if b.hrv is not None:
        check(0.0 <= b.hrv.sensible_effectiveness <= 1.0,
              "hrv.sensible_effectiveness", "must be within [0, 1]")
        check(b.hrv.ventilation_flow >= 0, "hrv.ventilation_flow", "must be >= 0")

    if b.pv is not None:
        pv = b.pv
        check(pv.array_area >= 0, "pv.array_area", "must be >= 0")
        check(0.0 <= pv.module_efficiency <= 1.0, "pv.module_efficiency", "must be within [0, 1]")
        check(0.0 <= pv.performance_ratio <= 1.0, "pv.performance_ratio", "must be within [0, 1]")

    t = b.thermostat
    check(t.heating_setback <= t.heating_setpoint, "thermostat.heating_setback",
          "must not exceed heating_setpoint")
    check(0.0 <= t.setback_fraction <= 1.0, "thermostat.setback_fraction", "must be within [0, 1]")

    ld = b.loads
    check(ld.lighting_density >= 0, "loads.lighting_density", "must be >= 0")
    check(ld.plug_density >= 0, "loads.plug_density", "must be >= 0")
    check(0.0 <= ld.usage_fraction <= 1.0, "loads.usage_fraction", "must be within [0, 1]")
    check(ld.floor_area >= 0, "loads.floor_area", "must be >= 0")

    for eu in END_USES:
        if eu not in b.fuel_map:
            out.append(Violation(f"fuel_map.{eu}", "end use has no fuel"))
        elif b.fuel_map[eu] not in FUELS:
            out.append(Violation(f"fuel_map.{eu}", f"unknown fuel {b.fuel_map[eu]!r}"))
    for eu in b.fuel_map:
        if eu not in END_USES:
            out.append(Violation(f"fuel_map.{eu}", "unknown end use"))

    return out


class BuildingValidationError(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


def require_valid(b: BuildingModel) -> BuildingModel:
    violations = validate_building(b)
    if violations:
        raise BuildingValidationError(violations)
    return b
