"""Retrofit measure catalog: declarative building transformations with costs.

Every measure is one transformation kind plus parameters. Most kinds set
absolute targets (window U/SHGC, infiltration rate, COPs, setback) and are
idempotent. Additive or relative kinds (insulation, PV, load scaling) are
recorded on the building and raise :class:`MeasureConflict` when applied a
second time, so package enumeration can never double count them.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .building import (
    FUELS,
    BuildingModel,
    HrvSpec,
    PvSpec,
    convert_r_imperial_to_rsi,
)


class MeasureConflict(ValueError):
    """A measure cannot be applied to the building in its current state."""

    def __init__(self, measure_id: str, reason: str):
        self.measure_id = measure_id
        super().__init__(f"measure {measure_id!r}: {reason}")


class MissingCostBasis(ValueError):
    def __init__(self, measure_id: str, reason: str):
        self.measure_id = measure_id
        super().__init__(f"measure {measure_id!r}: {reason}")


# kind -> (required params, optional params)
TRANSFORMATIONS: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    "none": ((), ()),
    "add_wall_rsi": ((), ("rsi", "r_imperial")),
    "add_roof_rsi": ((), ("rsi", "r_imperial")),
    "set_window_u_shgc": (("u_value", "shgc"), ()),
    "set_infiltration": (("rate_per_envelope_area",), ()),
    "set_heating_cop_fuel": (("heating_cop",), ("heating_fuel",)),
    "set_dhw_cop": (("cop",), ("fuel",)),
    "set_hrv_eff": (("sensible_effectiveness",), ("ventilation_flow",)),
    "add_pv": (("array_area", "module_efficiency", "performance_ratio"), ()),
    "set_setback": (("heating_setback",), ("setback_fraction",)),
    "scale_lighting": (("factor",), ()),
    "scale_plug": (("factor",), ()),
}

# kinds that add to or scale the current state instead of setting a target
ADDITIVE_KINDS = frozenset({"add_wall_rsi", "add_roof_rsi", "add_pv", "scale_lighting", "scale_plug"})

# area bases understood by the upfront-cost model
AREA_BASES = ("wall", "roof", "floor", "window", "envelope", "above_grade_envelope", "floor_area", "pv_array")


@dataclass(frozen=True)
class CostBasis:
    """Capital cost: ``unit_cost`` CAD/m² times an area, plus a lump sum."""

    unit_cost: float = 0.0
    area_basis: str | None = None
    lump_cost: float = 0.0


@dataclass(frozen=True)
class MeasureSpec:
    id: str
    label: str
    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)
    cost: CostBasis | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", dict(self.params))
        if self.kind not in TRANSFORMATIONS:
            raise ValueError(f"measure {self.id!r}: unknown transformation kind {self.kind!r}")
        required, optional = TRANSFORMATIONS[self.kind]
        missing = [p for p in required if p not in self.params]
        if missing:
            raise ValueError(f"measure {self.id!r}: missing parameters {missing}")
        extra = set(self.params) - set(required) - set(optional)
        if extra:
            raise ValueError(f"measure {self.id!r}: unexpected parameters {sorted(extra)}")
        if self.kind in ("add_wall_rsi", "add_roof_rsi"):
            if ("rsi" in self.params) == ("r_imperial" in self.params):
                raise ValueError(f"measure {self.id!r}: give exactly one of rsi or r_imperial")
        if self.cost is not None:
            c = self.cost
            if c.unit_cost < 0 or c.lump_cost < 0:
                raise ValueError(f"measure {self.id!r}: cost basis must be >= 0")
            if c.area_basis is not None and c.area_basis not in AREA_BASES:
                raise ValueError(f"measure {self.id!r}: unknown area basis {c.area_basis!r}")

    def __hash__(self) -> int:
        return hash((self.id, self.kind, tuple(sorted(self.params.items())), self.cost))

    @property
    def added_rsi(self) -> float:
        if "rsi" in self.params:
            return float(self.params["rsi"])
        return convert_r_imperial_to_rsi(float(self.params["r_imperial"]))


def _add_surface_rsi(b: BuildingModel, kind: str, rsi: float) -> BuildingModel:
    if not b.surfaces_of(kind):
        raise ValueError(f"building has no {kind} surface")
    surfaces = tuple(
        dataclasses.replace(s, u_value=1.0 / (1.0 / s.u_value + rsi)) if s.kind == kind else s
        for s in b.surfaces
    )
    return dataclasses.replace(b, surfaces=surfaces)


def apply_measure(b: BuildingModel, m: MeasureSpec) -> BuildingModel:
    """Return a new building with measure ``m`` applied; ``b`` is untouched."""
    p = m.params
    kind = m.kind
    tag = kind
    if kind in ADDITIVE_KINDS and tag in b.applied:
        raise MeasureConflict(m.id, f"{kind} already applied to this building")
    if kind == "add_pv" and b.pv is not None:
        raise MeasureConflict(m.id, "building already has a PV array")

    try:
        if kind == "none":
            out = b
        elif kind == "add_wall_rsi":
            out = _add_surface_rsi(b, "wall", m.added_rsi)
        elif kind == "add_roof_rsi":
            out = _add_surface_rsi(b, "roof", m.added_rsi)
        elif kind == "set_window_u_shgc":
            if not b.surfaces_of("window"):
                raise ValueError("building has no window surface")
            out = dataclasses.replace(b, surfaces=tuple(
                dataclasses.replace(s, u_value=float(p["u_value"]), shgc=float(p["shgc"]))
                if s.kind == "window" else s
                for s in b.surfaces
            ))
        elif kind == "set_infiltration":
            out = dataclasses.replace(b, infiltration=dataclasses.replace(
                b.infiltration, rate_per_envelope_area=float(p["rate_per_envelope_area"])))
        elif kind == "set_heating_cop_fuel":
            fuel = p.get("heating_fuel", b.hvac.heating_fuel)
            if fuel not in FUELS:
                raise ValueError(f"unknown fuel {fuel!r}")
            fuel_map = dict(b.fuel_map)
            fuel_map["space_heating"] = fuel
            out = dataclasses.replace(
                b,
                hvac=dataclasses.replace(b.hvac, heating_cop=float(p["heating_cop"]), heating_fuel=fuel),
                fuel_map=fuel_map,
            )
        elif kind == "set_dhw_cop":
            fuel = p.get("fuel", b.dhw.fuel)
            if fuel not in FUELS:
                raise ValueError(f"unknown fuel {fuel!r}")
            fuel_map = dict(b.fuel_map)
            fuel_map["dhw"] = fuel
            out = dataclasses.replace(
                b, dhw=dataclasses.replace(b.dhw, cop=float(p["cop"]), fuel=fuel), fuel_map=fuel_map)
        elif kind == "set_hrv_eff":
            flow = p.get("ventilation_flow", b.ventilation_flow if b.hrv is not None else None)
            if flow is None:
                raise ValueError("building has no ventilation flow; give ventilation_flow")
            out = dataclasses.replace(
                b, hrv=HrvSpec(sensible_effectiveness=float(p["sensible_effectiveness"]),
                               ventilation_flow=float(flow)))
        elif kind == "add_pv":
            out = dataclasses.replace(b, pv=PvSpec(
                array_area=float(p["array_area"]),
                module_efficiency=float(p["module_efficiency"]),
                performance_ratio=float(p["performance_ratio"]),
            ))
        elif kind == "set_setback":
            t = dataclasses.replace(b.thermostat, heating_setback=float(p["heating_setback"]))
            if "setback_fraction" in p:
                t = dataclasses.replace(t, setback_fraction=float(p["setback_fraction"]))
            out = dataclasses.replace(b, thermostat=t)
        elif kind == "scale_lighting":
            out = dataclasses.replace(b, loads=dataclasses.replace(
                b.loads, lighting_density=b.loads.lighting_density * float(p["factor"])))
        elif kind == "scale_plug":
            out = dataclasses.replace(b, loads=dataclasses.replace(
                b.loads, plug_density=b.loads.plug_density * float(p["factor"])))
        else:  # pragma: no cover - guarded by MeasureSpec
            raise ValueError(f"unknown kind {kind!r}")
    except ValueError as exc:
        raise MeasureConflict(m.id, str(exc)) from None

    if kind in ADDITIVE_KINDS:
        out = dataclasses.replace(out, applied=(*b.applied, tag))
    return out


@dataclass(frozen=True)
class Package:
    measure_ids: tuple[str, ...]

    def __post_init__(self) -> None:
        ids = tuple(self.measure_ids)
        object.__setattr__(self, "measure_ids", ids)
        seen = set()
        for i in ids:
            if i in seen:
                raise ValueError(f"duplicate measure id {i!r} in package")
            seen.add(i)

    def resolve(self, catalog: Mapping[str, MeasureSpec]) -> list[MeasureSpec]:
        missing = [i for i in self.measure_ids if i not in catalog]
        if missing:
            raise KeyError(f"package references unknown measures: {missing}")
        return [catalog[i] for i in self.measure_ids]


def apply_package(
    b: BuildingModel, package: Package | Sequence[str], catalog: Mapping[str, MeasureSpec]
) -> BuildingModel:
    """Apply the package's measures in order; the first conflict aborts."""
    if not isinstance(package, Package):
        package = Package(tuple(package))
    out = b
    for m in package.resolve(catalog):
        out = apply_measure(out, m)
    return out


def _basis_area(b: BuildingModel, m: MeasureSpec, basis: str) -> float:
    if basis in ("wall", "roof", "floor", "window"):
        area = b.area_of(basis)
    elif basis == "envelope":
        area = sum(s.area for s in b.surfaces)
    elif basis == "above_grade_envelope":
        area = b.infiltration.reference_area
    elif basis == "floor_area":
        area = b.loads.floor_area
    elif basis == "pv_array":
        area = float(m.params.get("array_area", 0.0)) if m.kind == "add_pv" else (
            b.pv.array_area if b.pv is not None else 0.0)
    else:  # pragma: no cover
        raise ValueError(basis)
    if area <= 0:
        raise MissingCostBasis(m.id, f"no {basis} area available for envelope cost")
    return area


def measure_upfront_cost(m: MeasureSpec, b: BuildingModel) -> float:
    """Capital cost: unit cost x affected area (from ``b``) plus lump sum, CAD."""
    if m.cost is None:
        raise MissingCostBasis(m.id, "no cost basis configured")
    c = m.cost
    total = c.lump_cost
    if c.unit_cost:
        if c.area_basis is None:
            raise MissingCostBasis(m.id, "unit cost given without an area basis")
        total += c.unit_cost * _basis_area(b, m, c.area_basis)
    return total


def upfront_cost_total(
    package: Package | Iterable[MeasureSpec], b: BuildingModel, catalog: Mapping[str, MeasureSpec] | None = None
) -> float:
    """Sum of measure capital costs over a package, priced on building ``b``."""
    if isinstance(package, Package):
        if catalog is None:
            raise ValueError("catalog required to resolve a Package")
        measures = package.resolve(catalog)
    else:
        measures = list(package)
    return sum(measure_upfront_cost(m, b) for m in measures)
