"""Plot-ready CSV/JSON emitters.

Every CSV starts with a ``# graphcost <table> v<N>`` line naming the
frozen column schema; bump the version when columns change. Floats are
written with 6 significant digits in both formats.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from typing import Iterable, Sequence

from .analysis import DisruptionResult, IsoPriceContour, LadderStep
from .costing import CATEGORIES, PLANT, CostBreakdown
from .montecarlo import METRICS, MonteCarloSummary

SCHEMA_VERSION = 1

BREAKDOWN_COLUMNS = ("row", "lines", "capex_total") + CATEGORIES + ("opex", "total")
SAMPLE_COLUMNS = ("index",) + METRICS
SUMMARY_COLUMNS = ("kind", "key", "value")
LADDER_COLUMNS = ("step", "parameter", "from_value", "to_value", "price_before", "price_after",
                  "saving")
CONTOUR_COLUMNS = ("price", "slope", "ci_start", "opex_start", "ci_end", "opex_end")
VARIANT_COLUMNS = ("variant", "capital_intensity", "opex", "breakeven_price") + CATEGORIES
PROJECT_COLUMNS = ("owner", "report_year", "location", "process_type", "capacity", "capex",
                   "opex_per_tonne", "total_cost", "reported_total")
DISRUPTION_COLUMNS = ("ev_cost_delta", "sales_drop_fraction", "producer_delta", "consumer_delta")
HEADROOM_COLUMNS = ("target_price", "avoided", "headroom")


def fmt(x):
    """Round floats to 6 significant digits; pass everything else through."""
    if isinstance(x, float):
        return float(format(x, ".6g"))
    if isinstance(x, dict):
        return {str(k): fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [fmt(v) for v in x]
    return x


def _cell(x) -> str:
    if isinstance(x, float):
        return format(x, ".6g")
    return "" if x is None else str(x)


def render(table: str, columns: Sequence[str], rows: Iterable[dict], form: str,
           payload: dict | None = None) -> str:
    """Serialize ``rows`` as CSV, or ``payload`` (default: the rows) as JSON."""
    rows = list(rows)
    if form == "json":
        doc = {"schema": f"graphcost {table} v{SCHEMA_VERSION}"}
        doc.update(fmt(payload) if payload is not None else {"rows": fmt(rows)})
        return json.dumps(doc, indent=2) + "\n"
    if form != "csv":
        raise ValueError(f"unknown format {form!r}")
    buf = io.StringIO()
    buf.write(f"# graphcost {table} v{SCHEMA_VERSION}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def breakdown_rows(b: CostBreakdown) -> list[dict]:
    rows = []
    for key, cats in b.rows.items():
        row = {"row": key, "lines": b.lines.get(key) if key != PLANT else None,
               "capex_total": b.capex[key], **cats}
        row["opex"] = sum(v for c, v in cats.items() if c != "capex")
        row["total"] = sum(cats.values())
        rows.append(row)
    totals = b.totals
    rows.append({"row": "total", "lines": sum(b.lines.values()), "capex_total": b.total_capex,
                 **totals, "opex": b.total_opex_per_tonne, "total": b.breakeven_price})
    return rows


def emit_breakdown(b: CostBreakdown, form: str) -> str:
    return render("breakdown", BREAKDOWN_COLUMNS, breakdown_rows(b), form, b.to_dict())


def emit_samples(summary: MonteCarloSummary, form: str) -> str:
    rows = [dict(zip(SAMPLE_COLUMNS, (i, *map(float, r)))) for i, r in enumerate(summary.samples)]
    return render("samples", SAMPLE_COLUMNS, rows, form)


def summary_rows(summary: MonteCarloSummary) -> list[dict]:
    rows = [{"kind": "meta", "key": "n_samples", "value": summary.n},
            {"kind": "meta", "key": "seed", "value": summary.seed}]
    for m, pct in summary.percentiles.items():
        rows += [{"kind": "percentile", "key": f"{m}.p{p}", "value": v} for p, v in pct.items()]
    rows += [{"kind": "competitive_fraction", "key": format(p, "g"), "value": f}
             for p, f in summary.competitive.items()]
    return rows


def emit_summary(summary: MonteCarloSummary, form: str) -> str:
    return render("mc-summary", SUMMARY_COLUMNS, summary_rows(summary), form, summary.to_dict())


def emit_ladder(steps: Sequence[LadderStep], form: str) -> str:
    rows = [{"step": i + 1, "parameter": s.parameter, "from_value": float(s.from_value),
             "to_value": s.to_value, "price_before": s.price_before,
             "price_after": s.price_after, "saving": s.saving} for i, s in enumerate(steps)]
    return render("ladder", LADDER_COLUMNS, rows, form)


def emit_contour(contours: Sequence[IsoPriceContour], ci_max: float, form: str) -> str:
    rows = []
    for c in contours:
        (x0, y0), (x1, y1) = c.segment(ci_max)
        rows.append({"price": float(c.price), "slope": c.slope, "ci_start": x0,
                     "opex_start": y0, "ci_end": float(x1), "opex_end": y1})
    return render("contour", CONTOUR_COLUMNS, rows, form)


def emit_variants(breakdowns: dict[str, CostBreakdown], form: str) -> str:
    rows = [{"variant": k, "capital_intensity": b.capital_intensity,
             "opex": b.total_opex_per_tonne, "breakeven_price": b.breakeven_price, **b.totals}
            for k, b in breakdowns.items()]
    return render("variants", VARIANT_COLUMNS, rows, form)


def emit_projects(rows: Sequence[dict], form: str) -> str:
    return render("projects", PROJECT_COLUMNS, rows, form)


def emit_disruption(d: DisruptionResult, form: str) -> str:
    row = {c: float(getattr(d, c)) for c in DISRUPTION_COLUMNS}
    return render("disruption", DISRUPTION_COLUMNS, [row], form)


def emit_headroom(target: float, avoided: Sequence[str], headroom: float, form: str) -> str:
    row = {"target_price": float(target), "avoided": ";".join(avoided), "headroom": headroom}
    return render("headroom", HEADROOM_COLUMNS, [row], form)
