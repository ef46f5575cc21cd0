"""Process routes, yield cascades and production-line sizing."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

HOURS_PER_YEAR = 8760.0

ROUTES = ("SG_acheson", "SG_box", "SG_continuous", "NG_carbochlorination", "NG_acid_leach")
FUNCTIONS = ("shaping", "graphitization", "purification", "coating")
TECHNOLOGIES = (
    "spheronization",
    "acheson",
    "box",
    "continuous",
    "carbochlorination",
    "acid_leach",
    "pitch_coat",
)
MATERIALS = (
    "needle_coke",
    "graphite_concentrate",
    "pitch",
    "nitrogen",
    "chlorine",
    "lime",
    "HCl",
    "HNO3",
    "HF",
    "water",
    "natural_gas",
    "crucible",
    "packing_material",
)

# shaping precedes graphitization/purification, which precedes coating
_FUNCTION_RANK = {"shaping": 0, "graphitization": 1, "purification": 1, "coating": 2}


class ValidationError(ValueError):
    """Raised when a model input violates a declared invariant."""


@dataclass(frozen=True)
class ParameterSpec:
    """One uncertain model input with its baseline and sampling range."""

    id: str
    unit: str
    baseline: float
    low: float
    high: float
    distribution: str = "uniform"
    region: str = "both"
    integer: bool = False

    def __post_init__(self):
        if self.distribution not in ("uniform", "fixed"):
            raise ValidationError(f"{self.id}: unknown distribution {self.distribution!r}")
        if self.region not in ("US", "China", "both"):
            raise ValidationError(f"{self.id}: unknown region {self.region!r}")
        if self.low > self.high:
            raise ValidationError(f"{self.id}: range inverted (low {self.low} > high {self.high})")
        if not self.low <= self.baseline <= self.high:
            raise ValidationError(
                f"{self.id}: baseline {self.baseline} outside range [{self.low}, {self.high}]"
            )
        if self.distribution == "fixed" and not self.low == self.baseline == self.high:
            raise ValidationError(f"{self.id}: fixed parameter must have low = baseline = high")

    @classmethod
    def fixed(cls, id: str, unit: str, value: float, region: str = "both") -> "ParameterSpec":
        return cls(id, unit, value, value, value, "fixed", region)

    @property
    def is_fixed(self) -> bool:
        return self.distribution == "fixed"


@dataclass(frozen=True)
class ConsumableRate:
    material: str
    rate: float
    lifetime_uses: float = 1

    def __post_init__(self):
        if self.material not in MATERIALS:
            raise ValidationError(f"unknown consumable material {self.material!r}")
        if self.rate < 0:
            raise ValidationError(f"{self.material}: negative consumption rate {self.rate}")
        if self.lifetime_uses < 1:
            raise ValidationError(f"{self.material}: lifetime uses must be >= 1")

    @property
    def effective_rate(self) -> float:
        """Consumption per tonne of stage feed after amortizing reuse."""
        return self.rate / self.lifetime_uses


@dataclass(frozen=True)
class StageSpec:
    """A single processing stage; all rates are per tonne of stage feed."""

    id: str
    function: str
    technology: str
    throughput_per_line: float  # t feed / h
    yield_fraction: float = 1.0
    electricity: float = 0.0  # kWh / t feed
    line_fte: float = 0.0
    equipment_cost_per_line: float = 0.0
    construction_hours_per_line: float = 0.0
    other_capex_per_line: float = 0.0
    capex_override_per_line: Optional[float] = None
    consumables: tuple[ConsumableRate, ...] = ()

    def __post_init__(self):
        if self.function not in FUNCTIONS:
            raise ValidationError(f"stage {self.id}: unknown function {self.function!r}")
        if self.technology not in TECHNOLOGIES:
            raise ValidationError(f"stage {self.id}: unknown technology {self.technology!r}")
        if not self.throughput_per_line > 0:
            raise ValidationError(f"stage {self.id}: throughput must be positive")
        if not 0 < self.yield_fraction <= 1:
            raise ValidationError(f"stage {self.id}: yield must lie in (0, 1]")
        for name in (
            "electricity",
            "line_fte",
            "equipment_cost_per_line",
            "construction_hours_per_line",
            "other_capex_per_line",
        ):
            if getattr(self, name) < 0:
                raise ValidationError(f"stage {self.id}: negative {name}")
        if self.capex_override_per_line is not None and self.capex_override_per_line < 0:
            raise ValidationError(f"stage {self.id}: negative capex override")

    def consumable(self, material: str) -> Optional[ConsumableRate]:
        for c in self.consumables:
            if c.material == material:
                return c
        return None


@dataclass(frozen=True)
class Flowsheet:
    route_id: str
    stages: tuple[StageSpec, ...]
    feed_material: str

    def __post_init__(self):
        if self.route_id not in ROUTES:
            raise ValidationError(f"unknown route {self.route_id!r}")
        if self.feed_material not in ("needle_coke", "graphite_concentrate"):
            raise ValidationError(f"unsupported feed material {self.feed_material!r}")
        if not self.stages:
            raise ValidationError(f"{self.route_id}: flowsheet has no stages")
        ids = [s.id for s in self.stages]
        if len(set(ids)) != len(ids):
            raise ValidationError(f"{self.route_id}: duplicate stage ids {ids}")
        ranks = [_FUNCTION_RANK[s.function] for s in self.stages]
        if ranks != sorted(ranks):
            raise ValidationError(
                f"{self.route_id}: stage order {[s.function for s in self.stages]} "
                "violates shaping -> graphitization/purification -> coating"
            )
        if self.stages[-1].function != "coating":
            raise ValidationError(f"{self.route_id}: route must end with a coating stage")

    def index(self, stage_id: str) -> int:
        for i, s in enumerate(self.stages):
            if s.id == stage_id:
                return i
        raise KeyError(f"unknown stage {stage_id!r} in route {self.route_id} "
                       f"(stages: {', '.join(s.id for s in self.stages)})")

    def stage(self, stage_id: str) -> StageSpec:
        return self.stages[self.index(stage_id)]

    @property
    def first(self) -> StageSpec:
        return self.stages[0]


@dataclass(frozen=True)
class PlantSpec:
    """Plant-wide parameters not attributable to a single stage."""

    capacity: float  # t product / yr
    uptime: float = 0.9
    fte: float = 0.0
    equipment: float = 0.0
    other_capex: float = 0.0
    construction_hours: float = 0.0
    annual_consumables: float = 0.0
    annual_ga: float = 0.0
    electricity: float = 0.0  # kWh / t product
    reference_capacity: float = 45_000.0

    def __post_init__(self):
        if not self.capacity > 0:
            raise ValidationError("plant capacity must be positive")
        if not 0 < self.uptime <= 1:
            raise ValidationError("plant uptime must lie in (0, 1]")
        if not self.reference_capacity > 0:
            raise ValidationError("reference capacity must be positive")
        for name in ("fte", "equipment", "other_capex", "construction_hours",
                     "annual_consumables", "annual_ga", "electricity"):
            if getattr(self, name) < 0:
                raise ValidationError(f"plant: negative {name}")


def feed_per_tonne(flowsheet: Flowsheet, down_to_stage: str) -> float:
    """Tonnes entering ``down_to_stage`` per tonne of finished product.

    Losses are taken at the end of each stage, so the feed into a stage
    is the product divided by the yields of that stage and every stage
    after it.
    """
    i = flowsheet.index(down_to_stage)
    product = 1.0
    for stage in flowsheet.stages[i:]:
        if not stage.yield_fraction > 0:
            raise ValidationError(f"stage {stage.id}: yield must be positive")
        product *= stage.yield_fraction
    return 1.0 / product


def stage_feed_tonnage(plant: PlantSpec, flowsheet: Flowsheet, stage: str) -> float:
    """Annual tonnes fed to ``stage``."""
    return plant.capacity * feed_per_tonne(flowsheet, stage)


def line_count(stage: StageSpec, annual_feed: float, uptime: float) -> int:
    """Number of parallel lines needed to process ``annual_feed`` t/yr."""
    if not stage.throughput_per_line > 0:
        raise ValidationError(f"stage {stage.id}: throughput must be positive")
    if annual_feed < 0:
        raise ValidationError(f"stage {stage.id}: negative annual feed")
    if not 0 < uptime <= 1:
        raise ValidationError("uptime must lie in (0, 1]")
    if annual_feed == 0:
        return 0
    per_line = stage.throughput_per_line * HOURS_PER_YEAR * uptime
    n = math.ceil(annual_feed / per_line)
    # the quotient can round below an exact multiple, or underflow to 0
    while n * per_line < annual_feed:
        n += 1
    return n
