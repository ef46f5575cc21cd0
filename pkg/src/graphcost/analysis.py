"""Cost-reduction ladders, iso-price contours, furnace variants, headroom
for alternative feedstock routes, and demand response to supply shocks."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

from .costing import PLANT, CostBreakdown, Scenario, plant_cost
from .finance import FinanceSpec, crf
from .flowsheet import ParameterSpec, ValidationError
from .parameters import (
    ParametricScenario,
    UnknownParameter,
    canonical,
    get_value,
    has_parameter,
    set_value,
)

# Cost-minimizing ends of the parameter ranges, in the order they are
# fixed along the published ladders.
SG_LADDER = (
    ("finance.irr", 0.05),
    ("plant.capacity", 80_000.0),
    ("cost.electricity_price", 0.045),
    ("price.needle_coke", 350.0),
    ("shaping.yield", 0.80),
    ("graphitization.throughput", 0.30),
)
NG_LADDER = (
    ("finance.irr", 0.05),
    ("plant.capacity", 80_000.0),
    ("price.graphite_concentrate", 500.0),
    ("shaping.yield", 0.80),
    ("purification.throughput", 0.80),
)


@dataclass(frozen=True)
class LadderStep:
    parameter: str
    from_value: float
    to_value: float
    price_before: float
    price_after: float

    @property
    def saving(self) -> float:
        return self.price_before - self.price_after


def default_ladder(scenario: Union[ParametricScenario, Scenario]):
    base = scenario.base if isinstance(scenario, ParametricScenario) else scenario
    return SG_LADDER if base.flowsheet.route_id.startswith("SG") else NG_LADDER


def sensitivity_ladder(scenario: ParametricScenario,
                       targets: Iterable[tuple[str, float]]) -> list[LadderStep]:
    """Fix parameters one at a time at their best values, left to right.

    Step k starts from the scenario with targets 1..k-1 already applied
    and moves parameter k from its baseline to its best value.
    """
    targets = [(canonical(pid), float(v)) for pid, v in targets]
    for pid, best in targets:
        spec = scenario.spec(pid)
        if not spec.low <= best <= spec.high:
            raise ValidationError(
                f"{pid}: best value {best} outside declared range [{spec.low}, {spec.high}]")
    current = scenario.base
    price = plant_cost(current).breakeven_price
    steps = []
    for pid, best in targets:
        start = get_value(current, pid)
        current = set_value(current, pid, best)
        after = plant_cost(current).breakeven_price
        steps.append(LadderStep(pid, start, best, price, after))
        price = after
    return steps


@dataclass(frozen=True)
class IsoPriceContour:
    """Line of (capital intensity, OpEx) pairs sharing one break-even price."""

    price: float
    slope: float

    def __call__(self, capital_intensity: float) -> float:
        return self.price + self.slope * capital_intensity

    def segment(self, ci_max: float) -> tuple[tuple[float, float], tuple[float, float]]:
        return (0.0, self(0.0)), (ci_max, self(ci_max))


def iso_price_contour(price: float, fin: FinanceSpec) -> IsoPriceContour:
    if price < 0:
        raise ValueError("price must be non-negative")
    return IsoPriceContour(price, -crf(fin.required_irr, fin.payback_years))


def _variant_edits(variant: str) -> dict[str, Callable[[float], float]]:
    if variant == "box":
        # no packing or crucibles; more usable volume per furnace
        return {
            "graphitization.packing_material": lambda v: 0.0,
            "graphitization.crucible": lambda v: 0.0,
            "graphitization.throughput": lambda v: v * 1.10,
            "graphitization.electricity": lambda v: v * 0.60,
        }
    if variant == "continuous":
        edits = {
            "graphitization.packing_material": lambda v: 0.0,
            "graphitization.crucible": lambda v: 0.0,
        }
        for f in ("equipment", "other_capex", "construction_hours", "capex_override"):
            edits[f"graphitization.{f}"] = lambda v: v * 1.25
        return edits
    raise ValueError(f"unknown furnace variant {variant!r} (box, continuous)")


def _edit_spec(spec: ParameterSpec, fn: Callable[[float], float]) -> ParameterSpec:
    lo, base, hi = fn(spec.low), fn(spec.baseline), fn(spec.high)
    if lo == base == hi:
        return dataclasses.replace(spec, baseline=base, low=lo, high=hi, distribution="fixed")
    return dataclasses.replace(spec, baseline=base, low=lo, high=hi)


def apply_furnace_variant(scenario: Union[ParametricScenario, Scenario], variant: str):
    """Swap the Acheson graphitization stage for a box or continuous furnace.

    Accepts either a parametric or a concrete scenario and returns the
    same kind; ranges of edited parameters are transformed alongside the
    baselines.
    """
    parametric = isinstance(scenario, ParametricScenario)
    ps = scenario if parametric else ParametricScenario(scenario.flowsheet.route_id, scenario)
    fs = ps.base.flowsheet
    try:
        stage = fs.stage("graphitization")
    except KeyError:
        raise ValidationError(
            f"furnace variants apply to synthetic graphite routes, not {fs.route_id}") from None
    if stage.technology != "acheson":
        raise ValidationError(f"variant requires an Acheson furnace, found {stage.technology}")
    edits = _variant_edits(variant)

    for pid, fn in edits.items():
        if pid in ps.params:
            ps = ps.with_spec(_edit_spec(ps.params[pid], fn))
        elif has_parameter(ps.base, pid) and get_value(ps.base, pid) is not None:
            ps = dataclasses.replace(ps, base=set_value(ps.base, pid, fn(get_value(ps.base, pid))))

    if variant == "continuous":
        spec = ParameterSpec("graphitization.electricity", "kWh/t", 7000.0, 6000.0, 8000.0)
        if "graphitization.electricity" in ps.params:
            ps = ps.with_spec(dataclasses.replace(spec, region=ps.params[spec.id].region))
        else:
            ps = dataclasses.replace(ps, base=set_value(ps.base, spec.id, spec.baseline))

    fs = ps.base.flowsheet
    stages = tuple(dataclasses.replace(s, technology=variant) if s.id == "graphitization" else s
                   for s in fs.stages)
    new_fs = dataclasses.replace(fs, route_id=f"SG_{variant}", stages=stages)
    ps = dataclasses.replace(ps, base=dataclasses.replace(ps.base, flowsheet=new_fs))
    return ps if parametric else ps.base


def alt_route_headroom(reference: CostBreakdown, target_price: float,
                       avoided_stages: Iterable[str], plant_capital: bool = False) -> float:
    """Ceiling cost for a replacement of ``avoided_stages``.

    The target price less the per-tonne cost of every row of
    ``reference`` that is still needed: full cost (capital charge plus
    operating cost) for stages, and operating overhead only for the
    ``"plant"`` row unless ``plant_capital`` is set. Feedstock is carried
    by the first stage, so avoiding it also avoids the feedstock.
    """
    avoided = set(avoided_stages)
    unknown = avoided - set(reference.rows)
    if unknown:
        raise UnknownParameter(f"unknown stages {sorted(unknown)}")
    kept = 0.0
    for r in reference.rows:
        if r in avoided:
            continue
        kept += reference.row_total(r)
        if r == PLANT and not plant_capital:
            kept -= reference.rows[r]["capex"]
    return target_price - kept


@dataclass(frozen=True)
class MarketCalibration:
    """Response of US EV sales and surpluses to removing a per-vehicle subsidy."""

    reference_subsidy: float = 7500.0
    sales_drop_at_reference: float = 0.37
    producer_surplus_at_reference: float = 3e9
    consumer_surplus_at_reference: float = 5e9

    def __post_init__(self):
        if min(dataclasses.astuple(self)) <= 0:
            raise ValueError("market calibration values must be positive")


@dataclass(frozen=True)
class DisruptionResult:
    ev_cost_delta: float
    sales_drop_fraction: float
    producer_delta: float
    consumer_delta: float


def disruption_impact(price_before: float, price_after: float, kg_per_ev: float,
                      cal: MarketCalibration = MarketCalibration()) -> DisruptionResult:
    """Scale the subsidy-removal response linearly to a graphite price shock ($/kg)."""
    if not price_after >= price_before >= 0:
        raise ValueError("require price_after >= price_before >= 0")
    if not kg_per_ev > 0:
        raise ValueError("kg_per_ev must be positive")
    delta = (price_after - price_before) * kg_per_ev
    s = delta / cal.reference_subsidy
    return DisruptionResult(
        ev_cost_delta=delta,
        sales_drop_fraction=s * cal.sales_drop_at_reference,
        producer_delta=-s * cal.producer_surplus_at_reference,
        consumer_delta=-s * cal.consumer_surplus_at_reference,
    )


def variant_comparison(scenario: ParametricScenario,
                       variants: Sequence[str] = ("box", "continuous")) -> dict[str, CostBreakdown]:
    out = {"acheson": plant_cost(scenario.base)}
    for v in variants:
        out[v] = plant_cost(apply_furnace_variant(scenario, v).base)
    return out
