"""Stage-by-stage CapEx/OpEx breakdowns for a route, region and capacity."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .finance import FinanceSpec, crf
from .flowsheet import (
    Flowsheet,
    PlantSpec,
    StageSpec,
    ValidationError,
    feed_per_tonne,
    line_count,
    stage_feed_tonnage,
)

# Per-tonne cost categories. "capex" is the annualized capital charge.
CATEGORIES = (
    "capex",
    "feedstock",
    "electricity",
    "labor",
    "consumables",
    "maintenance",
    "overhead",
    "sales",
)
OPEX_CATEGORIES = CATEGORIES[1:]
PLANT = "plant"


@dataclass(frozen=True)
class CostFactors:
    """Regional price environment."""

    region: str
    electricity_price: float  # $/kWh
    salary: float  # $/FTE-yr
    construction_rate: float  # $/h
    maintenance_rate: float = 0.05
    sales_rate: float = 0.03
    scaling_exponent: float = 0.7
    material_prices: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.region not in ("US", "China"):
            raise ValidationError(f"unknown region {self.region!r}")
        for name in ("electricity_price", "salary", "construction_rate"):
            if getattr(self, name) < 0:
                raise ValidationError(f"cost factors: negative {name}")
        if not 0 <= self.maintenance_rate < 1:
            raise ValidationError("maintenance rate must lie in [0, 1)")
        if not 0 <= self.sales_rate < 1:
            raise ValidationError("sales rate must lie in [0, 1)")
        if not 0 < self.scaling_exponent <= 1:
            raise ValidationError("scaling exponent must lie in (0, 1]")
        for material, price in self.material_prices.items():
            if price < 0:
                raise ValidationError(f"negative price for {material}")

    def price(self, material: str) -> float:
        try:
            return self.material_prices[material]
        except KeyError:
            raise ValidationError(f"missing price for material {material!r}") from None


@dataclass(frozen=True)
class Scenario:
    """A fully specified plant: route, plant parameters, prices and finance."""

    flowsheet: Flowsheet
    plant: PlantSpec
    costs: CostFactors
    finance: FinanceSpec


@dataclass
class CostBreakdown:
    """Per-tonne cost matrix (rows: stages plus ``plant``; columns: CATEGORIES).

    ``rows`` holds every stage followed by the plant-level row, so the
    totals are plain column sums.
    """

    rows: dict[str, dict[str, float]]
    capex: dict[str, float]
    lines: dict[str, int]
    capacity: float
    crf: float

    @property
    def stage_ids(self) -> list[str]:
        return [k for k in self.rows if k != PLANT]

    @property
    def per_stage(self) -> dict[str, dict[str, float]]:
        return {k: v for k, v in self.rows.items() if k != PLANT}

    @property
    def plant_level(self) -> dict[str, float]:
        return self.rows[PLANT]

    @property
    def totals(self) -> dict[str, float]:
        return {c: sum(r[c] for r in self.rows.values()) for c in CATEGORIES}

    @property
    def total_capex(self) -> float:
        return sum(self.capex.values())

    @property
    def capital_intensity(self) -> float:
        return self.total_capex / self.capacity

    @property
    def total_opex_per_tonne(self) -> float:
        t = self.totals
        return sum(t[c] for c in OPEX_CATEGORIES)

    @property
    def breakeven_price(self) -> float:
        return self.total_opex_per_tonne + self.capital_intensity * self.crf

    def row_total(self, row: str) -> float:
        return sum(self.rows[row].values())

    def to_dict(self) -> dict:
        return {
            "capacity": self.capacity,
            "crf": self.crf,
            "lines": dict(self.lines),
            "capex": dict(self.capex),
            "rows": {k: dict(v) for k, v in self.rows.items()},
            "totals": self.totals,
            "total_capex": self.total_capex,
            "capital_intensity": self.capital_intensity,
            "total_opex_per_tonne": self.total_opex_per_tonne,
            "breakeven_price": self.breakeven_price,
        }


def stage_capex(stage: StageSpec, lines: int, cf: CostFactors) -> float:
    """Initial capital for ``lines`` parallel lines of ``stage``.

    A per-line lump (``capex_override_per_line``) replaces equipment and
    other capital when present; construction hours are always charged at
    the regional rate.
    """
    if lines < 0:
        raise ValidationError(f"stage {stage.id}: negative line count")
    construction = stage.construction_hours_per_line * cf.construction_rate
    if stage.capex_override_per_line is not None:
        per_line = stage.capex_override_per_line + construction
    else:
        per_line = stage.equipment_cost_per_line + stage.other_capex_per_line + construction
    return lines * per_line


def consumable_costs(stage: StageSpec, flowsheet: Flowsheet, cf: CostFactors) -> dict[str, float]:
    """Cost of each consumable of ``stage`` per tonne of product."""
    feed = feed_per_tonne(flowsheet, stage.id)
    return {c.material: c.effective_rate * cf.price(c.material) * feed for c in stage.consumables}


def stage_opex(stage: StageSpec, flowsheet: Flowsheet, plant: PlantSpec, cf: CostFactors,
               lines: int) -> dict[str, float]:
    """Direct operating cost of one stage, per tonne of product.

    Returns feedstock, electricity, labor and consumables; maintenance,
    overhead and sales are added by :func:`plant_cost`.
    """
    feed = feed_per_tonne(flowsheet, stage.id)
    consumables = sum(consumable_costs(stage, flowsheet, cf).values())
    feedstock = 0.0
    if stage.id == flowsheet.first.id:
        feedstock = cf.price(flowsheet.feed_material) * feed
    return {
        "feedstock": feedstock,
        "electricity": stage.electricity * feed * cf.electricity_price,
        "labor": lines * stage.line_fte * cf.salary / plant.capacity,
        "consumables": consumables,
    }


def plant_lump_capex(plant: PlantSpec, cf: CostFactors) -> float:
    """Plant-wide capital, power-law scaled from the reference capacity."""
    base = plant.equipment + plant.other_capex + plant.construction_hours * cf.construction_rate
    return base * (plant.capacity / plant.reference_capacity) ** cf.scaling_exponent


def plant_cost(scenario: Scenario) -> CostBreakdown:
    fs, plant, cf, fin = scenario.flowsheet, scenario.plant, scenario.costs, scenario.finance
    factor = crf(fin.required_irr, fin.payback_years)
    cap = plant.capacity

    rows: dict[str, dict[str, float]] = {}
    capex: dict[str, float] = {}
    lines: dict[str, int] = {}
    for stage in fs.stages:
        n = line_count(stage, stage_feed_tonnage(plant, fs, stage.id), plant.uptime)
        lines[stage.id] = n
        capex[stage.id] = stage_capex(stage, n, cf)
        row = dict.fromkeys(CATEGORIES, 0.0)
        row.update(stage_opex(stage, fs, plant, cf, n))
        rows[stage.id] = row

    capex[PLANT] = plant_lump_capex(plant, cf)
    plant_row = dict.fromkeys(CATEGORIES, 0.0)
    plant_row["labor"] = plant.fte * cf.salary / cap
    plant_row["electricity"] = plant.electricity * cf.electricity_price
    plant_row["consumables"] = plant.annual_consumables / cap
    plant_row["overhead"] = plant.annual_ga / cap
    rows[PLANT] = plant_row

    for key, row in rows.items():
        row["capex"] = capex[key] * factor / cap
        # maintenance on initial capital, attributed where the capital sits
        row["maintenance"] = cf.maintenance_rate * capex[key] / cap
        row["sales"] = cf.sales_rate * sum(row[c] for c in OPEX_CATEGORIES if c != "sales")

    return CostBreakdown(rows=rows, capex=capex, lines=lines, capacity=cap, crf=factor)
