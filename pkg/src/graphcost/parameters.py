"""Addressing scalar model inputs by id.

Ids take one of these forms::

    <stage>.<field>        shaping.throughput, graphitization.yield, ...
    <stage>.<material>     consumption rate, e.g. graphitization.crucible
    <stage>.crucible_uses  crucible reuse count
    plant.<field>          plant.capacity, plant.uptime, ...
    cost.<field>           cost.electricity_price, cost.salary, ...
    price.<material>       price.needle_coke (bare material names alias here)
    finance.<field>        finance.irr, finance.payback_years
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Mapping

from .costing import Scenario
from .flowsheet import MATERIALS, ConsumableRate, ParameterSpec, ValidationError

STAGE_FIELDS = {
    "throughput": "throughput_per_line",
    "yield": "yield_fraction",
    "electricity": "electricity",
    "fte": "line_fte",
    "equipment": "equipment_cost_per_line",
    "construction_hours": "construction_hours_per_line",
    "other_capex": "other_capex_per_line",
    "capex_override": "capex_override_per_line",
}
PLANT_FIELDS = {
    "capacity": "capacity",
    "uptime": "uptime",
    "fte": "fte",
    "equipment": "equipment",
    "other_capex": "other_capex",
    "construction_hours": "construction_hours",
    "consumables": "annual_consumables",
    "ga": "annual_ga",
    "electricity": "electricity",
    "reference_capacity": "reference_capacity",
}
COST_FIELDS = {
    "electricity_price": "electricity_price",
    "salary": "salary",
    "construction_rate": "construction_rate",
    "maintenance_rate": "maintenance_rate",
    "sales_rate": "sales_rate",
    "scaling_exponent": "scaling_exponent",
}
FINANCE_FIELDS = {"irr": "required_irr", "payback_years": "payback_years"}


class UnknownParameter(KeyError):
    pass


def canonical(pid: str) -> str:
    """Resolve aliases: a bare material name means its price."""
    if pid in MATERIALS:
        return f"price.{pid}"
    return pid


def _split(pid: str) -> tuple[str, str]:
    head, sep, tail = pid.partition(".")
    if not sep or not tail:
        raise UnknownParameter(pid)
    return head, tail


def get_value(scenario: Scenario, pid: str) -> float:
    pid = canonical(pid)
    head, tail = _split(pid)
    if head == "plant" and tail in PLANT_FIELDS:
        return getattr(scenario.plant, PLANT_FIELDS[tail])
    if head == "cost" and tail in COST_FIELDS:
        return getattr(scenario.costs, COST_FIELDS[tail])
    if head == "finance" and tail in FINANCE_FIELDS:
        return getattr(scenario.finance, FINANCE_FIELDS[tail])
    if head == "price" and tail in MATERIALS:
        return scenario.costs.price(tail)
    try:
        stage = scenario.flowsheet.stage(head)
    except KeyError:
        raise UnknownParameter(pid) from None
    if tail in STAGE_FIELDS:
        return getattr(stage, STAGE_FIELDS[tail])
    if tail == "crucible_uses" and stage.consumable("crucible") is not None:
        return stage.consumable("crucible").lifetime_uses
    if tail in MATERIALS and stage.consumable(tail) is not None:
        return stage.consumable(tail).rate
    raise UnknownParameter(pid)


def has_parameter(scenario: Scenario, pid: str) -> bool:
    try:
        get_value(scenario, pid)
    except UnknownParameter:
        return False
    return True


def _set_stage(scenario: Scenario, stage_id: str, tail: str, value: float, pid: str) -> Scenario:
    fs = scenario.flowsheet
    try:
        idx = fs.index(stage_id)
    except KeyError:
        raise UnknownParameter(pid) from None
    stage = fs.stages[idx]
    if tail in STAGE_FIELDS:
        new = dataclasses.replace(stage, **{STAGE_FIELDS[tail]: value})
    else:
        material, attr = tail, "rate"
        if tail == "crucible_uses":
            material, attr = "crucible", "lifetime_uses"
        if material not in MATERIALS or stage.consumable(material) is None:
            raise UnknownParameter(pid)
        consumables = tuple(
            dataclasses.replace(c, **{attr: value}) if c.material == material else c
            for c in stage.consumables
        )
        new = dataclasses.replace(stage, consumables=consumables)
    stages = fs.stages[:idx] + (new,) + fs.stages[idx + 1:]
    return dataclasses.replace(scenario, flowsheet=dataclasses.replace(fs, stages=stages))


def set_value(scenario: Scenario, pid: str, value: float) -> Scenario:
    """Return a copy of ``scenario`` with parameter ``pid`` set to ``value``."""
    pid = canonical(pid)
    head, tail = _split(pid)
    if head == "plant" and tail in PLANT_FIELDS:
        return dataclasses.replace(
            scenario, plant=dataclasses.replace(scenario.plant, **{PLANT_FIELDS[tail]: value}))
    if head == "cost" and tail in COST_FIELDS:
        return dataclasses.replace(
            scenario, costs=dataclasses.replace(scenario.costs, **{COST_FIELDS[tail]: value}))
    if head == "finance" and tail in FINANCE_FIELDS:
        if tail == "payback_years":
            value = int(round(value))
        return dataclasses.replace(
            scenario, finance=dataclasses.replace(scenario.finance, **{FINANCE_FIELDS[tail]: value}))
    if head == "price":
        if tail not in MATERIALS:
            raise UnknownParameter(pid)
        prices = dict(scenario.costs.material_prices)
        prices[tail] = value
        return dataclasses.replace(
            scenario, costs=dataclasses.replace(scenario.costs, material_prices=prices))
    return _set_stage(scenario, head, tail, value, pid)


def apply_values(scenario: Scenario, values: Mapping[str, float]) -> Scenario:
    for pid, value in values.items():
        scenario = set_value(scenario, pid, value)
    return scenario


@dataclass(frozen=True)
class ParametricScenario:
    """A baseline scenario together with the uncertain inputs that perturb it.

    Every ``ParameterSpec.baseline`` equals the corresponding value in
    ``base``; sampling and sensitivity sweeps work by substituting values
    through :func:`set_value`.
    """

    name: str
    base: Scenario
    params: Mapping[str, ParameterSpec] = field(default_factory=dict)

    def __post_init__(self):
        for pid, spec in self.params.items():
            if pid != spec.id:
                raise ValidationError(f"parameter key {pid!r} does not match spec id {spec.id!r}")
            if not has_parameter(self.base, pid):
                raise ValidationError(f"parameter {pid!r} does not exist in scenario {self.name}")

    @property
    def route(self) -> str:
        return self.base.flowsheet.route_id

    @property
    def region(self) -> str:
        return self.base.costs.region

    def spec(self, pid: str) -> ParameterSpec:
        pid = canonical(pid)
        try:
            return self.params[pid]
        except KeyError:
            raise UnknownParameter(pid) from None

    def baseline_values(self) -> dict[str, float]:
        return {pid: s.baseline for pid, s in self.params.items()}

    def build(self, values: Mapping[str, float] | None = None) -> Scenario:
        return apply_values(self.base, values or {})

    def with_spec(self, spec: ParameterSpec) -> "ParametricScenario":
        """Replace (or add) one parameter spec and move the base to its baseline."""
        params = dict(self.params)
        params[spec.id] = spec
        base = set_value(self.base, spec.id, spec.baseline)
        return dataclasses.replace(self, base=base, params=params)


def consumable(material: str, rate: float = 0.0, uses: float = 1) -> ConsumableRate:
    return ConsumableRate(material, rate, uses)
