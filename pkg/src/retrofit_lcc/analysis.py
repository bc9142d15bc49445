"""Scenario analytics: single-measure deltas, cumulative waterfalls, rankings
and exhaustive Pareto fronts over measure subsets.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .building import BuildingModel
from .economics import (
    EconomicScenario,
    annual_energy_cost,
    annual_ghg,
    evaluate_retrofit,
)
from .energy import EndUseTable, MonthlyWeather, SimulationSettings, simulate_annual
from .measures import MeasureConflict, MeasureSpec, Package, apply_measure, upfront_cost_total

MAX_EXHAUSTIVE = 20


@dataclass(frozen=True)
class MeasureDeltaRow:
    measure_id: str
    label: str
    delta_energy: float  # GJ/yr
    delta_cost: float  # CAD/yr, anchor year
    delta_ghg: float  # tCO2e/yr
    uc: float
    docs: float
    lcc: float
    delta_electricity: float = 0.0
    delta_gas: float = 0.0


@dataclass(frozen=True)
class WaterfallStep:
    measure_id: str
    energy: float
    cost: float
    ghg: float
    marginal_energy: float
    marginal_cost: float
    marginal_ghg: float


@dataclass(frozen=True)
class Waterfall:
    base_energy: float
    base_cost: float
    base_ghg: float
    steps: tuple[WaterfallStep, ...]


@dataclass(frozen=True)
class ParetoPoint:
    measure_ids: tuple[str, ...]
    lcc: float
    ghg: float
    uc: float = 0.0
    energy: float = 0.0


def _as_list(catalog: Mapping[str, MeasureSpec] | Iterable[MeasureSpec]) -> list[MeasureSpec]:
    if isinstance(catalog, Mapping):
        return list(catalog.values())
    return list(catalog)


def _metrics(t: EndUseTable, scenario: EconomicScenario) -> tuple[float, float, float]:
    cost = annual_energy_cost(
        t, scenario.tariff, scenario.factors, scenario.carbon, scenario.anchor_year, scenario.include_carbon
    )
    return t.total, cost, annual_ghg(t, scenario.factors)


def per_measure_deltas(
    base: BuildingModel,
    catalog: Mapping[str, MeasureSpec] | Iterable[MeasureSpec],
    weather: MonthlyWeather,
    scenario: EconomicScenario,
    settings: SimulationSettings = SimulationSettings(),
    *,
    base_table: EndUseTable | None = None,
    tables: Mapping[str, EndUseTable] | None = None,
) -> list[MeasureDeltaRow]:
    """Evaluate each catalog measure alone against the base building.

    ``base_table`` and ``tables`` (keyed by measure id) replace simulation
    with imported end-use results where given.
    """
    if base_table is None:
        base_table = simulate_annual(base, weather, settings)
    e0, c0, g0 = _metrics(base_table, scenario)
    rows = []
    for m in _as_list(catalog):
        if tables is not None and m.id in tables:
            retro = tables[m.id]
        else:
            retro = simulate_annual(apply_measure(base, m), weather, settings)
        e1, c1, g1 = _metrics(retro, scenario)
        ev = evaluate_retrofit(base_table, retro, upfront_cost_total([m], base), scenario)
        rows.append(MeasureDeltaRow(
            measure_id=m.id,
            label=m.label,
            delta_energy=e0 - e1,
            delta_cost=c0 - c1,
            delta_ghg=g0 - g1,
            uc=ev.uc,
            docs=ev.docs,
            lcc=ev.lcc,
            delta_electricity=ev.delta_ee,
            delta_gas=ev.delta_ne,
        ))
    return rows


def telescoping_marginals(values: Sequence[float]) -> list[float]:
    """Step differences ``values[k-1] - values[k]`` whose exact sum telescopes.

    Every marginal is the correctly rounded step difference except the
    last, which is nudged by at most a few ulps so that
    ``math.fsum(marginals) == values[0] - values[-1]`` holds bit for bit.

    The nudge needs the target to lie on the float grid of the steps. That
    holds for waterfalls whose steps are no larger than the base value; a
    tiny target reached by cancelling huge steps may miss by an ulp.
    """
    n = len(values) - 1
    if n <= 0:
        return []
    out = [values[k - 1] - values[k] for k in range(1, n + 1)]
    target = values[0] - values[-1]
    head = sum((Fraction(m) for m in out[:-1]), Fraction(0))
    last = float(Fraction(target) - head)
    for _ in range(64):
        out[-1] = last
        s = math.fsum(out)
        if s == target:
            break
        last = math.nextafter(last, math.inf if s < target else -math.inf)
    return out


def cumulative_waterfall(
    base: BuildingModel,
    package: Package | Sequence[str],
    catalog: Mapping[str, MeasureSpec],
    weather: MonthlyWeather,
    scenario: EconomicScenario,
    settings: SimulationSettings = SimulationSettings(),
    *,
    tables: Sequence[EndUseTable] | None = None,
) -> Waterfall:
    """Apply the package one measure at a time in its listed order.

    Attribution is sequential-marginal, so reordering the package changes
    the per-step marginals but not the final state. ``tables`` may supply
    imported results: base first, then one table per step.
    """
    if not isinstance(package, Package):
        package = Package(tuple(package))
    measures = package.resolve(catalog)
    if tables is None:
        states = [simulate_annual(base, weather, settings)]
        b = base
        for m in measures:
            b = apply_measure(b, m)
            states.append(simulate_annual(b, weather, settings))
    else:
        if len(tables) != len(measures) + 1:
            raise ValueError("need one imported table for base plus one per package step")
        states = list(tables)
    metrics = [_metrics(t, scenario) for t in states]
    energy, cost, ghg = (list(col) for col in zip(*metrics))
    me, mc, mg = (telescoping_marginals(col) for col in (energy, cost, ghg))
    steps = tuple(
        WaterfallStep(m.id, energy[k + 1], cost[k + 1], ghg[k + 1], me[k], mc[k], mg[k])
        for k, m in enumerate(measures)
    )
    return Waterfall(energy[0], cost[0], ghg[0], steps)


def _dominates(a: tuple[float, float], b: tuple[float, float]) -> bool:
    return a[0] <= b[0] and a[1] <= b[1] and (a[0] < b[0] or a[1] < b[1])


def non_dominated(points: Sequence[ParetoPoint]) -> list[ParetoPoint]:
    """Minimal non-dominated subset under (minimise LCC, minimise GHG).

    Points with identical objective values do not dominate each other and
    are all kept. Output is ordered by LCC, then GHG, then measure ids.
    """
    ordered = sorted(points, key=lambda p: (p.lcc, p.ghg, p.measure_ids))
    front: list[ParetoPoint] = []
    best_ghg = math.inf
    for p in ordered:
        if p.ghg < best_ghg:
            front.append(p)
            best_ghg = p.ghg
        elif front and p.ghg == front[-1].ghg and p.lcc == front[-1].lcc:
            front.append(p)
    return front


def evaluate_subsets(
    base: BuildingModel,
    catalog: Mapping[str, MeasureSpec] | Iterable[MeasureSpec],
    weather: MonthlyWeather,
    scenario: EconomicScenario,
    settings: SimulationSettings = SimulationSettings(),
    *,
    sample: int | None = None,
    seed: int = 0,
    max_measures: int = MAX_EXHAUSTIVE,
) -> list[ParetoPoint]:
    """Evaluate measure subsets (all of them unless ``sample`` is given).

    Measures inside a subset are applied in catalog order. Subsets that
    raise :class:`MeasureConflict` are skipped. The empty subset (do
    nothing, LCC 0) is always included.
    """
    measures = _as_list(catalog)
    n = len(measures)
    if sample is None and n > max_measures:
        raise ValueError(
            f"catalog has {n} measures; exhaustive enumeration is limited to {max_measures}. "
            "Pass a subset sample size (--sample N) instead."
        )
    base_table = simulate_annual(base, weather, settings)
    if sample is None:
        masks: Iterable[int] = range(1 << n)
    else:
        rng = random.Random(seed)
        total = 1 << n
        k = min(sample, total)
        masks = sorted({0, *rng.sample(range(1, total), k=min(k, total - 1))}) if total > 1 else [0]
    # building for a mask = its highest-index measure applied to the rest,
    # which matches applying the chosen measures in catalog order
    memo: dict[int, BuildingModel | None] = {0: base}

    def building_for(mask: int) -> BuildingModel | None:
        if mask in memo:
            return memo[mask]
        hi = mask.bit_length() - 1
        prev = building_for(mask & ~(1 << hi))
        out = None
        if prev is not None:
            try:
                out = apply_measure(prev, measures[hi])
            except MeasureConflict:
                out = None
        memo[mask] = out
        return out

    points = []
    for mask in masks:
        b = building_for(mask)
        if b is None:
            continue
        chosen = [measures[i] for i in range(n) if mask >> i & 1]
        retro = simulate_annual(b, weather, settings) if chosen else base_table
        uc = upfront_cost_total(chosen, base)
        ev = evaluate_retrofit(base_table, retro, uc, scenario)
        points.append(ParetoPoint(
            measure_ids=tuple(m.id for m in chosen),
            lcc=ev.lcc,
            ghg=annual_ghg(retro, scenario.factors),
            uc=uc,
            energy=retro.total,
        ))
    return points


def pareto_front(
    base: BuildingModel,
    catalog: Mapping[str, MeasureSpec] | Iterable[MeasureSpec],
    weather: MonthlyWeather,
    scenario: EconomicScenario,
    settings: SimulationSettings = SimulationSettings(),
    **kwargs,
) -> list[ParetoPoint]:
    """Non-dominated measure packages minimising (LCC, annual GHG)."""
    return non_dominated(evaluate_subsets(base, catalog, weather, scenario, settings, **kwargs))


RANK_METRICS = {
    # metric -> (row attribute, descending)
    "energy": ("delta_energy", True),
    "cost": ("delta_cost", True),
    "ghg": ("delta_ghg", True),
    "lcc": ("lcc", False),
}


def rank_measures(rows: Sequence[MeasureDeltaRow]) -> dict[str, list[str]]:
    """Measure ids ordered best-first per metric; ties broken by id.

    Savings (energy, cost, GHG) rank largest first; LCC ranks lowest first.
    """
    out = {}
    for metric, (attr, desc) in RANK_METRICS.items():
        by_id = sorted(rows, key=lambda r: r.measure_id)
        ranked = sorted(by_id, key=lambda r: getattr(r, attr), reverse=desc)
        out[metric] = [r.measure_id for r in ranked]
    return out


