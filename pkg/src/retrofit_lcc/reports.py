"""End-use CSV import and report file emission.

All numbers are written with six significant digits and no locale or clock
dependence, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from .analysis import MeasureDeltaRow, ParetoPoint, Waterfall
from .building import END_USES, FUELS
from .energy import EndUseTable

END_USE_HEADER = ["case", "end_use", "fuel", "gj"]
PER_MEASURE_HEADER = [
    "measure_id", "label", "delta_energy_gj", "delta_cost_cad", "delta_ghg_t",
    "uc_cad", "docs_cad", "lcc_cad", "delta_electricity_gj", "delta_gas_gj",
]
WATERFALL_HEADER = ["step", "measure_id", "remaining", "marginal", "remaining_pct"]
PARETO_HEADER = ["rank", "measures", "lcc_cad", "ghg_t", "uc_cad", "energy_gj"]
WATERFALL_METRICS = {"energy": "energy", "cost": "cost", "ghg": "ghg"}
REPORT_FILES = ("per_measure.csv", "pareto.csv", "summary.json", "summary.md") + tuple(
    f"waterfall_{m}.csv" for m in WATERFALL_METRICS
)


class EndUseImportError(ValueError):
    """Malformed end-use CSV; message carries the line number."""


@dataclass(frozen=True)
class ImportedEndUses:
    tables: dict[str, EndUseTable]
    source: str


def fmt(x: float) -> str:
    """Six significant digits, no negative zero."""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if not math.isfinite(x):
        return str(x)
    s = f"{x:.6g}"
    return "0" if s in ("-0", "0") else s


def read_csv_records(path: str | Path) -> list[dict[str, str]]:
    """Read any CSV written by this package (or the importer) into dicts."""
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def import_end_use_csv(path: str | Path) -> ImportedEndUses:
    """Read externally simulated results, one table per ``case``.

    Rows are ``case,end_use,fuel,gj``. ``end_use`` is one of the known end
    uses or ``pv_generation`` (always electricity, subtracted from it). An
    end use may appear under both fuels; its GJ add up.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != END_USE_HEADER:
            raise EndUseImportError(f"{path}:1: header must be {','.join(END_USE_HEADER)}")
        acc: dict[str, dict[str, Any]] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                raise EndUseImportError(f"{path}:{lineno}: expected 4 columns, got {len(row)}")
            case, end_use, fuel, gj_s = (c.strip() for c in row)
            if not case:
                raise EndUseImportError(f"{path}:{lineno}: empty case name")
            if end_use not in END_USES and end_use != "pv_generation":
                raise EndUseImportError(f"{path}:{lineno}: unknown end_use {end_use!r}")
            if fuel not in FUELS:
                raise EndUseImportError(f"{path}:{lineno}: unknown fuel {fuel!r}")
            if end_use == "pv_generation" and fuel != "electricity":
                raise EndUseImportError(f"{path}:{lineno}: pv_generation must be electricity")
            try:
                gj = float(gj_s)
            except ValueError:
                raise EndUseImportError(f"{path}:{lineno}: gj is not a number: {gj_s!r}") from None
            if not math.isfinite(gj) or gj < 0:
                raise EndUseImportError(f"{path}:{lineno}: gj must be >= 0, got {gj_s}")
            t = acc.setdefault(case, {"end_uses": {}, "fuels": {f: [] for f in FUELS}, "pv": 0.0})
            if end_use == "pv_generation":
                t["pv"] += gj
            else:
                t["end_uses"][end_use] = t["end_uses"].get(end_use, 0.0) + gj
                t["fuels"][fuel].append(gj)
    tables = {}
    for case, t in acc.items():
        tables[case] = EndUseTable(
            **{eu: t["end_uses"].get(eu, 0.0) for eu in END_USES},
            pv_generation=t["pv"],
            electricity=math.fsum(t["fuels"]["electricity"]) - t["pv"],
            natural_gas=math.fsum(t["fuels"]["natural_gas"]),
        )
    return ImportedEndUses(tables, str(path))


def end_use_csv_text(tables: Mapping[str, EndUseTable], fuel_maps: Mapping[str, Mapping[str, str]]) -> str:
    """Render tables in the import format (inverse of :func:`import_end_use_csv`)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(END_USE_HEADER)
    for case, t in tables.items():
        for eu in END_USES:
            v = getattr(t, eu)
            if v:
                w.writerow([case, eu, fuel_maps[case][eu], repr(v)])
        if t.pv_generation:
            w.writerow([case, "pv_generation", "electricity", repr(t.pv_generation)])
    return buf.getvalue()


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if isinstance(v, (int, float)) else v for v in r])
    return buf.getvalue()


def per_measure_csv(rows: Sequence[MeasureDeltaRow]) -> str:
    return _csv_text(PER_MEASURE_HEADER, [
        [r.measure_id, r.label, r.delta_energy, r.delta_cost, r.delta_ghg, r.uc, r.docs, r.lcc,
         r.delta_electricity, r.delta_gas]
        for r in rows
    ])


def waterfall_csv(w: Waterfall | None, metric: str) -> str:
    if w is None:
        return _csv_text(WATERFALL_HEADER, [])
    base = getattr(w, f"base_{metric}")
    rows: list[list[Any]] = [[0, "base", base, 0.0, 100.0]]
    for k, s in enumerate(w.steps, start=1):
        remaining = getattr(s, metric)
        pct = 100.0 * remaining / base if base else 0.0
        rows.append([k, s.measure_id, remaining, getattr(s, f"marginal_{metric}"), pct])
    return _csv_text(WATERFALL_HEADER, rows)


def pareto_csv(front: Sequence[ParetoPoint] | None) -> str:
    return _csv_text(PARETO_HEADER, [
        [k, "+".join(p.measure_ids), p.lcc, p.ghg, p.uc, p.energy]
        for k, p in enumerate(front or (), start=1)
    ])


def _rounded(obj: Any) -> Any:
    if isinstance(obj, float):
        return float(fmt(obj)) if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    return obj


def build_summary(
    rows: Sequence[MeasureDeltaRow],
    waterfall: Waterfall | None,
    front: Sequence[ParetoPoint] | None,
    extra: Mapping[str, Any] | None = None,
) -> dict[str, Any]:
    from .analysis import rank_measures

    summary: dict[str, Any] = {
        "measures_evaluated": len(rows),
        "rankings": rank_measures(rows),
        "waterfall": None,
        "pareto": {"points": len(front or ())},
    }
    if waterfall is not None and waterfall.steps:
        last = waterfall.steps[-1]
        summary["waterfall"] = {
            "order": [s.measure_id for s in waterfall.steps],
            "base": {"energy_gj": waterfall.base_energy, "cost_cad": waterfall.base_cost,
                     "ghg_t": waterfall.base_ghg},
            "final": {"energy_gj": last.energy, "cost_cad": last.cost, "ghg_t": last.ghg},
            "reduction_pct": {
                m: (100.0 * (1 - getattr(last, m) / getattr(waterfall, f"base_{m}"))
                    if getattr(waterfall, f"base_{m}") else 0.0)
                for m in WATERFALL_METRICS
            },
        }
    if front:
        summary["pareto"]["min_lcc"] = {"measures": list(front[0].measure_ids), "lcc_cad": front[0].lcc,
                                        "ghg_t": front[0].ghg}
        summary["pareto"]["min_ghg"] = {"measures": list(front[-1].measure_ids), "lcc_cad": front[-1].lcc,
                                        "ghg_t": front[-1].ghg}
    if extra:
        summary.update(extra)
    return _rounded(summary)


def summary_markdown(summary: Mapping[str, Any], rows: Sequence[MeasureDeltaRow]) -> str:
    lines = [f"# Retrofit evaluation: {summary.get('scenario', 'scenario')}", ""]
    if rows:
        lines += ["## Individual measures", "",
                  "| measure | ΔE (GJ/yr) | Δcost (CAD/yr) | ΔGHG (t/yr) | UC (CAD) | LCC (CAD) |",
                  "|---|---:|---:|---:|---:|---:|"]
        for r in rows:
            lines.append(f"| {r.measure_id} | {fmt(r.delta_energy)} | {fmt(r.delta_cost)} | "
                         f"{fmt(r.delta_ghg)} | {fmt(r.uc)} | {fmt(r.lcc)} |")
        lines.append("")
        lines += ["## Rankings", ""]
        for metric, ids in summary["rankings"].items():
            lines.append(f"- {metric}: {', '.join(ids)}")
        lines.append("")
    wf = summary.get("waterfall")
    if wf:
        lines += ["## Full package", "", f"Order: {', '.join(wf['order'])}", "",
                  "| metric | base | final | reduction % |", "|---|---:|---:|---:|"]
        for key, metric in (("energy_gj", "energy"), ("cost_cad", "cost"), ("ghg_t", "ghg")):
            lines.append(f"| {key} | {fmt(wf['base'][key])} | {fmt(wf['final'][key])} | "
                         f"{fmt(wf['reduction_pct'][metric])} |")
        lines.append("")
    pareto = summary.get("pareto") or {}
    lines += ["## Pareto front", "", f"Non-dominated packages: {pareto.get('points', 0)}", ""]
    ref = summary.get("reference")
    if ref:
        lines += ["## Reference values", ""]
        for k, v in ref.items():
            lines.append(f"- {k}: {fmt(v)}")
        lines.append("")
    return "\n".join(lines)


def emit_reports(
    rows: Sequence[MeasureDeltaRow],
    waterfall: Waterfall | None,
    front: Sequence[ParetoPoint] | None,
    out_dir: str | Path,
    extra: Mapping[str, Any] | None = None,
) -> list[Path]:
    """Write the full report set into ``out_dir`` and return the paths.

    Parts that were not computed are written as header-only CSVs.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = build_summary(rows, waterfall, front, extra)
    files = {
        "per_measure.csv": per_measure_csv(rows),
        **{f"waterfall_{m}.csv": waterfall_csv(waterfall, m) for m in WATERFALL_METRICS},
        "pareto.csv": pareto_csv(front),
        "summary.json": json.dumps(summary, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        "summary.md": summary_markdown(summary, rows),
    }
    written = []
    for name, text in files.items():
        p = out / name
        with open(p, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        written.append(p)
    return written
