import dataclasses
import pytest
from hypothesis import given, settings, strategies as st

from graphcost.costing import (
    CATEGORIES,
    OPEX_CATEGORIES,
    PLANT,
    CostFactors,
    consumable_costs,
    plant_cost,
    plant_lump_capex,
    stage_capex,
    stage_opex,
)
from graphcost.flowsheet import PlantSpec, ValidationError
from graphcost.montecarlo import sample_scenario
from graphcost.parameters import get_value, set_value
from graphcost.scenarios import load_builtin

CORE = ("US_SG", "CN_SG", "US_NG", "CN_NG")


@pytest.fixture(scope="module")
def base():
    return {n: load_builtin(n).base for n in CORE}


def test_acheson_us_capex(base):
    s = base["US_SG"]
    graph = s.flowsheet.stage("graphitization")
    capex = stage_capex(graph, 26, s.costs)
    assert capex == pytest.approx(26 * (6.8e6 + 5.7e6 + 47_000 * 50))
    assert capex == pytest.approx(386.1e6)
    assert capex * 0.199252 / 45_000 == pytest.approx(1700, rel=0.05)


def test_spheronization_us_capex(base):
    s = base["US_SG"]
    assert stage_capex(s.flowsheet.stage("shaping"), 4, s.costs) == pytest.approx(111.8e6)


def test_zero_lines_zero_capex(base):
    s = base["CN_NG"]
    assert all(stage_capex(st_, 0, s.costs) == 0 for st_ in s.flowsheet.stages)


def test_acheson_consumables_and_electricity(base):
    us, cn = base["US_SG"], base["CN_SG"]
    g = us.flowsheet.stage("graphitization")
    c = consumable_costs(g, us.flowsheet, us.costs)
    assert c == {"crucible": pytest.approx(500), "packing_material": pytest.approx(700)}
    us_e = stage_opex(g, us.flowsheet, us.plant, us.costs, 26)["electricity"]
    assert us_e == pytest.approx(975)
    cn_g = cn.flowsheet.stage("graphitization")
    cn_e = stage_opex(cn_g, cn.flowsheet, cn.plant, cn.costs, 26)["electricity"]
    assert us_e - cn_e == pytest.approx(146, abs=10)


def test_stage_with_zero_rates(base):
    s = base["US_SG"]
    g = dataclasses.replace(s.flowsheet.stage("coating"), electricity=0, line_fte=0, consumables=())
    fs = dataclasses.replace(s.flowsheet, stages=s.flowsheet.stages[:-1] + (g,))
    assert set(stage_opex(g, fs, s.plant, s.costs, 3).values()) == {0.0}


def test_plant_lump_capex(base):
    cf = base["CN_NG"].costs
    scaled = plant_lump_capex(PlantSpec(45_000, other_capex=30e6, reference_capacity=25_000), cf)
    assert scaled == pytest.approx(45.3e6, abs=0.5e6)
    same = plant_lump_capex(PlantSpec(25_000, other_capex=30e6, reference_capacity=25_000), cf)
    assert same == 30e6
    us = base["US_SG"]
    assert plant_lump_capex(us.plant, us.costs) == pytest.approx(22e6 + 129e6 + 180_000 * 50)


def test_cn_ng_plant_capex_from_dataset(base):
    s = base["CN_NG"]
    hours = s.plant.construction_hours * s.costs.construction_rate
    assert plant_lump_capex(s.plant, s.costs) == pytest.approx(45e6 + hours)


@pytest.mark.parametrize("name,total,tol", [("US_SG", 8625, 0.10), ("CN_NG", 4340, 0.10)])
def test_baseline_totals(base, name, total, tol):
    assert plant_cost(base[name]).breakeven_price == pytest.approx(total, rel=tol)


def test_us_sg_row_anchors(base):
    b = plant_cost(base["US_SG"])
    assert b.lines == {"shaping": 4, "graphitization": 26, "coating": 7}
    assert b.rows["shaping"]["feedstock"] == pytest.approx(650 / 0.7)
    assert b.rows["graphitization"]["consumables"] == pytest.approx(1200)


def test_us_ng_purification_near_2000(base):
    b = plant_cost(base["US_NG"])
    assert b.row_total("purification") == pytest.approx(2000, rel=0.10)


def test_null_economy_costs_nothing(base):
    s = base["US_NG"]
    zero_prices = {m: 0.0 for m in s.costs.material_prices}
    cf = dataclasses.replace(s.costs, electricity_price=0, salary=0, construction_rate=0,
                             material_prices=zero_prices)
    stages = tuple(dataclasses.replace(st_, equipment_cost_per_line=0, other_capex_per_line=0,
                                       capex_override_per_line=None) for st_ in s.flowsheet.stages)
    fs = dataclasses.replace(s.flowsheet, stages=stages)
    plant = dataclasses.replace(s.plant, equipment=0, other_capex=0, annual_consumables=0,
                                annual_ga=0)
    b = plant_cost(dataclasses.replace(s, flowsheet=fs, plant=plant, costs=cf))
    assert b.breakeven_price == 0


def test_missing_price_is_named(base):
    s = base["US_SG"]
    prices = dict(s.costs.material_prices)
    del prices["crucible"]
    s = dataclasses.replace(s, costs=dataclasses.replace(s.costs, material_prices=prices))
    with pytest.raises(ValidationError, match="crucible"):
        plant_cost(s)


def test_cost_factor_validation():
    with pytest.raises(ValidationError):
        CostFactors("EU", 0.1, 1, 1)
    with pytest.raises(ValidationError):
        CostFactors("US", 0.1, 1, 1, sales_rate=1.0)
    with pytest.raises(ValidationError):
        CostFactors("US", 0.1, 1, 1, scaling_exponent=0)


@pytest.mark.parametrize("name", CORE)
def test_breakdown_identities(base, name):
    b = plant_cost(base[name])
    assert list(b.rows) == [s.id for s in base[name].flowsheet.stages] + [PLANT]
    assert b.breakeven_price == pytest.approx(
        b.total_opex_per_tonne + b.capital_intensity * b.crf, rel=1e-12)
    assert sum(b.totals.values()) == pytest.approx(b.breakeven_price, rel=1e-12)
    assert b.total_opex_per_tonne == pytest.approx(sum(b.totals[c] for c in OPEX_CATEGORIES))
    maint = sum(r["maintenance"] for r in b.rows.values())
    assert maint == pytest.approx(0.05 * b.total_capex / b.capacity, rel=1e-12)
    for r in b.rows.values():
        other = sum(r[c] for c in OPEX_CATEGORIES if c != "sales")
        assert r["sales"] == pytest.approx(0.03 * other)
    assert set(b.to_dict()["rows"][PLANT]) == set(CATEGORIES)


@pytest.mark.parametrize("name", CORE)
def test_capacity_ordering_with_integer_lines(base, name):
    price = {c: plant_cost(set_value(base[name], "plant.capacity", c)).breakeven_price
             for c in (20_000, 45_000, 80_000)}
    assert price[80_000] < price[45_000] < price[20_000]


def test_china_cheaper_than_us(base):
    p = {n: plant_cost(s).breakeven_price for n, s in base.items()}
    assert p["CN_SG"] < p["US_SG"]
    assert p["CN_NG"] < p["US_NG"]


def _scenario(data):
    name = data.draw(st.sampled_from(CORE))
    idx = data.draw(st.integers(0, 10_000))
    return sample_scenario(load_builtin(name), idx, 5)


@settings(max_examples=200, deadline=None)
@given(st.data(), st.floats(0.0, 2.0))
def test_monotone_in_unit_prices_and_rates(data, bump):
    s = _scenario(data)
    ids = [f"price.{m}" for m in s.costs.material_prices]
    ids += ["cost.electricity_price", "cost.salary", "cost.construction_rate",
            "cost.maintenance_rate", "cost.sales_rate", "finance.irr"]
    pid = data.draw(st.sampled_from(ids))
    v = get_value(s, pid)
    up = v * (1 + bump) + 1e-3
    if pid in ("cost.maintenance_rate", "cost.sales_rate"):
        up = min(up, 0.99)
    assert plant_cost(set_value(s, pid, up)).breakeven_price >= plant_cost(s).breakeven_price


@settings(max_examples=200, deadline=None)
@given(st.data(), st.floats(0.0, 1.0))
def test_antitone_in_yield_and_throughput(data, frac):
    s = _scenario(data)
    stage = data.draw(st.sampled_from([x.id for x in s.flowsheet.stages]))
    field = data.draw(st.sampled_from(["yield", "throughput"]))
    pid = f"{stage}.{field}"
    v = get_value(s, pid)
    better = v + (1 - v) * frac if field == "yield" else v * (1 + frac)
    assert plant_cost(set_value(s, pid, better)).breakeven_price <= \
        plant_cost(s).breakeven_price * (1 + 1e-12)


def test_plant_capital_intensity_falls_with_capacity(base):
    # the continuous part of the economy of scale; stage lines are stepwise
    s = base["US_SG"]
    ci = [plant_lump_capex(set_value(s, "plant.capacity", c).plant, s.costs) / c
          for c in (20_000, 30_000, 45_000, 60_000, 80_000)]
    assert all(a > b for a, b in zip(ci, ci[1:]))
