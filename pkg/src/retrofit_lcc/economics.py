"""Tariffs, carbon tax, emissions and life-cycle costing.

Energy is carried in GJ throughout. Tariffs are entered in CAD/kWh and
converted at ``KWH_PER_GJ``. Cash-flow year ``t`` (0..T) falls in calendar
year ``anchor_year + t``; only the carbon-tax term (and optional tariff
escalation) varies with ``t``.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Sequence

from .energy import EndUseTable

KWH_PER_GJ = 277.778


@dataclass(frozen=True)
class Tariff:
    electricity_price: float  # CAD/kWh
    gas_price: float  # CAD/kWh
    # annual price escalation, fraction/yr; off unless configured
    escalation: float = 0.0

    def __post_init__(self) -> None:
        if self.electricity_price < 0 or self.gas_price < 0:
            raise ValueError("tariff prices must be >= 0")

    @property
    def electricity_per_gj(self) -> float:
        return self.electricity_price * KWH_PER_GJ

    @property
    def gas_per_gj(self) -> float:
        return self.gas_price * KWH_PER_GJ


@dataclass(frozen=True)
class CarbonTaxSchedule:
    """Piecewise-linear carbon price through anchor points, flat after the last.

    The defaults start at 50 CAD/t in 2022, which makes the pre-2030 segment
    exactly +15 CAD/t per year up to 170 in 2030, then 6.5/yr to 300 in 2050.
    """

    anchors: tuple[tuple[int, float], ...] = ((2022, 50.0), (2030, 170.0), (2050, 300.0))

    def __post_init__(self) -> None:
        anchors = tuple((int(y), float(p)) for y, p in self.anchors)
        object.__setattr__(self, "anchors", anchors)
        if not anchors:
            raise ValueError("carbon schedule needs at least one anchor")
        for (y0, p0), (y1, p1) in zip(anchors, anchors[1:]):
            if y1 <= y0:
                raise ValueError("carbon anchor years must be strictly increasing")
            if p1 < p0:
                raise ValueError("carbon price must be non-decreasing over years")

    @property
    def anchor_year(self) -> int:
        return self.anchors[0][0]

    def segment_slopes(self) -> list[float]:
        return [(p1 - p0) / (y1 - y0) for (y0, p0), (y1, p1) in zip(self.anchors, self.anchors[1:])]


def carbon_tax_at(schedule: CarbonTaxSchedule, year: float) -> float:
    """Carbon price in CAD/tCO2e for a calendar year."""
    anchors = schedule.anchors
    if year < anchors[0][0]:
        raise ValueError(f"year {year} precedes carbon schedule anchor year {anchors[0][0]}")
    years = [y for y, _ in anchors]
    i = bisect.bisect_right(years, year) - 1
    if i >= len(anchors) - 1:
        return anchors[-1][1]
    (y0, p0), (y1, p1) = anchors[i], anchors[i + 1]
    if year == y0:
        return p0
    return p0 + (p1 - p0) * (year - y0) / (y1 - y0)


@dataclass(frozen=True)
class EmissionFactors:
    electricity: float = 6.79 / 2125.11  # tCO2e/GJ, E-building GHG / energy
    natural_gas: float = 0.0499  # tCO2e/GJ, combustion

    def __post_init__(self) -> None:
        if self.electricity < 0 or self.natural_gas < 0:
            raise ValueError("emission factors must be >= 0")


@dataclass(frozen=True)
class EconomicScenario:
    tariff: Tariff
    discount_rate: float
    horizon: int
    carbon: CarbonTaxSchedule = field(default_factory=CarbonTaxSchedule)
    factors: EmissionFactors = field(default_factory=EmissionFactors)
    anchor_year: int | None = None
    include_carbon: bool = False
    disposal_cost: float = 0.0

    def __post_init__(self) -> None:
        if self.discount_rate < 0:
            raise ValueError("discount_rate must be >= 0")
        if int(self.horizon) != self.horizon or self.horizon < 1:
            raise ValueError("horizon must be an integer >= 1")
        if self.anchor_year is None:
            object.__setattr__(self, "anchor_year", self.carbon.anchor_year)
        if self.anchor_year < self.carbon.anchor_year:
            raise ValueError("anchor_year precedes the carbon schedule")
        if self.disposal_cost < 0:
            raise ValueError("disposal_cost must be >= 0")

    def years(self) -> list[int]:
        return [self.anchor_year + t for t in range(self.horizon + 1)]


def annual_ghg(e: EndUseTable, f: EmissionFactors) -> float:
    """Annual emissions in tCO2e."""
    return e.electricity * f.electricity + e.natural_gas * f.natural_gas


def delta_cts(
    base: EndUseTable, retro: EndUseTable, f: EmissionFactors, schedule: CarbonTaxSchedule, year: float
) -> float:
    """Annual carbon-tax saving of ``retro`` relative to ``base``, CAD."""
    ct = carbon_tax_at(schedule, year)
    return ((base.electricity - retro.electricity) * f.electricity
            + (base.natural_gas - retro.natural_gas) * f.natural_gas) * ct


def annual_energy_cost(
    e: EndUseTable,
    tariff: Tariff,
    f: EmissionFactors | None = None,
    schedule: CarbonTaxSchedule | None = None,
    year: float | None = None,
    include_carbon: bool = False,
) -> float:
    cost = e.electricity * tariff.electricity_per_gj + e.natural_gas * tariff.gas_per_gj
    if include_carbon:
        if f is None or schedule is None or year is None:
            raise ValueError("carbon-inclusive cost needs factors, schedule and year")
        cost += annual_ghg(e, f) * carbon_tax_at(schedule, year)
    return cost


def delta_aocs(base: EndUseTable, retro: EndUseTable, scenario: EconomicScenario, year: int) -> float:
    """Annual operating-cost saving in CAD for calendar ``year``."""
    t = year - scenario.anchor_year
    esc = (1.0 + scenario.tariff.escalation) ** t if scenario.tariff.escalation else 1.0
    energy = ((base.electricity - retro.electricity) * scenario.tariff.electricity_per_gj
              + (base.natural_gas - retro.natural_gas) * scenario.tariff.gas_per_gj)
    return energy * esc + delta_cts(base, retro, scenario.factors, scenario.carbon, year)


def npv_ocs(flows: Sequence[float], r: float) -> float:
    """Discounted sum of flows for t = 0..T; the t = 0 flow is undiscounted."""
    if r <= -1:
        raise ValueError("discount rate must be > -1")
    if r == 0:
        return math.fsum(flows)
    return math.fsum(a / (1.0 + r) ** t for t, a in enumerate(flows))


def lcc(upfront: float, docs: float) -> float:
    """Life-cycle cost; negative means the savings outweigh the capital."""
    return upfront - docs


@dataclass(frozen=True)
class RetrofitEvaluation:
    delta_ee: float  # GJ/yr
    delta_ne: float  # GJ/yr
    delta_ghg: float  # tCO2e/yr
    delta_cts: tuple[float, ...]
    delta_aocs: tuple[float, ...]
    years: tuple[int, ...]
    docs: float
    uc: float
    lcc: float

    @property
    def delta_energy(self) -> float:
        return self.delta_ee + self.delta_ne


def evaluate_retrofit(
    base: EndUseTable, retro: EndUseTable, upfront: float, scenario: EconomicScenario
) -> RetrofitEvaluation:
    years = scenario.years()
    f = scenario.factors
    tariff = scenario.tariff
    # same arithmetic as delta_cts / delta_aocs, hoisted out of the year loop
    tonnes = (base.electricity - retro.electricity) * f.electricity + (base.natural_gas - retro.natural_gas) * f.natural_gas
    energy = ((base.electricity - retro.electricity) * tariff.electricity_per_gj
              + (base.natural_gas - retro.natural_gas) * tariff.gas_per_gj)
    cts = [tonnes * carbon_tax_at(scenario.carbon, y) for y in years]
    if tariff.escalation:
        aocs = [energy * (1.0 + tariff.escalation) ** (y - scenario.anchor_year) + c for y, c in zip(years, cts)]
    else:
        aocs = [energy + c for c in cts]
    flows = list(aocs)
    if scenario.disposal_cost:
        flows[-1] -= scenario.disposal_cost
    docs = npv_ocs(flows, scenario.discount_rate)
    return RetrofitEvaluation(
        delta_ee=base.electricity - retro.electricity,
        delta_ne=base.natural_gas - retro.natural_gas,
        delta_ghg=annual_ghg(base, f) - annual_ghg(retro, f),
        delta_cts=tuple(cts),
        delta_aocs=tuple(aocs),
        years=tuple(years),
        docs=docs,
        uc=upfront,
        lcc=lcc(upfront, docs),
    )


@dataclass(frozen=True)
class FuelSplit:
    electricity: float
    natural_gas: float
    feasible: bool
    residual: float  # relative cost mismatch of the forward model
    diagnostic: str = ""


def calibrate_fuel_split(
    total_energy: float,
    total_cost: float,
    tariff: Tariff,
    include_carbon: bool = False,
    ghg: float = 0.0,
    carbon_price: float = 0.0,
    fuels: Sequence[str] = ("electricity", "natural_gas"),
    tolerance: float = 0.005,
) -> FuelSplit:
    """Split an annual energy total between fuels from its annual cost.

    With both fuels free this solves ``EE + NE = total`` and
    ``EE*EP + NE*NP = cost`` (cost net of carbon tax when ``include_carbon``).
    With one fuel the split is fixed and the call reports how far the
    forward cost lands from ``total_cost``.
    """
    ep, np_ = tariff.electricity_per_gj, tariff.gas_per_gj
    energy_cost = total_cost - (ghg * carbon_price if include_carbon else 0.0)
    fuels = tuple(fuels)

    if fuels in (("electricity",), ("natural_gas",)):
        ee, ne = (total_energy, 0.0) if fuels == ("electricity",) else (0.0, total_energy)
        forward = ee * ep + ne * np_
        residual = abs(forward - energy_cost) / abs(energy_cost) if energy_cost else abs(forward)
        ok = residual <= tolerance
        diag = "" if ok else (
            f"single-fuel cost {forward:.2f} CAD disagrees with observed {energy_cost:.2f} CAD "
            f"(relative residual {residual:.4f})")
        return FuelSplit(ee, ne, ok, residual, diag)
    if set(fuels) != {"electricity", "natural_gas"} or len(fuels) != 2:
        raise ValueError(f"unsupported fuel set {fuels}")

    if ep == np_:
        raise ValueError("electricity and gas prices are equal; split is undetermined")
    ee = (energy_cost - total_energy * np_) / (ep - np_)
    ne = total_energy - ee
    forward = ee * ep + ne * np_
    residual = abs(forward - energy_cost) / abs(energy_cost) if energy_cost else abs(forward)
    diag = ""
    ok = True
    if ee < 0 or ne < 0:
        ok = False
        diag = f"split outside physical range: electricity={ee:.3f} GJ, natural_gas={ne:.3f} GJ"
    return FuelSplit(ee, ne, ok, residual, diag)


def fuel_split_from_ghg(total_energy: float, ghg: float, f: EmissionFactors) -> FuelSplit:
    """Split an energy total between fuels from its annual emissions."""
    if f.electricity == f.natural_gas:
        raise ValueError("emission factors are equal; split is undetermined")
    ne = (ghg - total_energy * f.electricity) / (f.natural_gas - f.electricity)
    ee = total_energy - ne
    ok = ee >= 0 and ne >= 0
    diag = "" if ok else f"split outside physical range: electricity={ee:.3f}, natural_gas={ne:.3f}"
    return FuelSplit(ee, ne, ok, 0.0, diag)
