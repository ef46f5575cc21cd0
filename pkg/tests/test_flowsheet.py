import dataclasses
import math

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from graphcost.flowsheet import (
    ConsumableRate,
    Flowsheet,
    ParameterSpec,
    PlantSpec,
    StageSpec,
    ValidationError,
    feed_per_tonne,
    line_count,
    stage_feed_tonnage,
)
from graphcost.scenarios import load_builtin

TECH = {"shaping": "spheronization", "graphitization": "acheson",
        "purification": "acid_leach", "coating": "pitch_coat"}


def make_stage(sid, function, tph=1.0, y=1.0, **kw):
    return StageSpec(sid, function, TECH[function], throughput_per_line=tph, yield_fraction=y, **kw)


def make_flowsheet(yields, route="NG_acid_leach"):
    funcs = ["shaping"] * (len(yields) - 2) + ["purification", "coating"]
    stages = tuple(make_stage(f"s{i}", f, y=y) for i, (f, y) in enumerate(zip(funcs, yields)))
    return Flowsheet(route, stages, "graphite_concentrate")


@pytest.fixture(scope="module")
def us_sg():
    return load_builtin("US_SG").base


@pytest.fixture(scope="module")
def us_ng():
    return load_builtin("US_NG").base


def test_parameter_spec_ordering():
    ParameterSpec("x", "", 1.0, 0.5, 2.0)
    with pytest.raises(ValidationError):
        ParameterSpec("x", "", 3.0, 0.5, 2.0)
    with pytest.raises(ValidationError):
        ParameterSpec("x", "", 1.0, 0.5, 2.0, distribution="fixed")
    assert ParameterSpec.fixed("x", "", 4.0).is_fixed


def test_consumable_effective_rate():
    assert ConsumableRate("crucible", 10.0, 5).effective_rate == 2.0
    with pytest.raises(ValidationError):
        ConsumableRate("crucible", -1.0)
    with pytest.raises(ValidationError):
        ConsumableRate("crucible", 1.0, 0.5)


def test_sg_feed_per_tonne(us_sg):
    f = feed_per_tonne(us_sg.flowsheet, "shaping")
    assert f == pytest.approx(1.4286, abs=1e-4)
    assert 650 * f == pytest.approx(928.6, abs=0.05)


def test_ng_feed_per_tonne(us_ng):
    assert feed_per_tonne(us_ng.flowsheet, "shaping") == pytest.approx(1 / (0.5 * 0.95))
    assert feed_per_tonne(us_ng.flowsheet, "shaping") == pytest.approx(2.1053, abs=1e-4)


def test_unit_yields_give_unit_feed():
    fs = make_flowsheet([1.0, 1.0, 1.0])
    assert all(feed_per_tonne(fs, s.id) == 1.0 for s in fs.stages)


def test_stage_feed_tonnage(us_sg, us_ng):
    assert stage_feed_tonnage(us_sg.plant, us_sg.flowsheet, "shaping") == pytest.approx(64285.7, abs=0.1)
    assert stage_feed_tonnage(us_sg.plant, us_sg.flowsheet, "coating") == 45_000
    assert stage_feed_tonnage(us_ng.plant, us_ng.flowsheet, "purification") == pytest.approx(47368.4, abs=0.1)


def test_line_count_examples(us_sg):
    assert line_count(us_sg.flowsheet.stage("graphitization"), 45_000, 0.9) == 26
    assert line_count(us_sg.flowsheet.stage("shaping"), 64_286, 0.9) == 4
    assert line_count(us_sg.flowsheet.stage("shaping"), 0, 0.9) == 0


def test_line_count_rejects_bad_inputs(us_sg):
    st_ = us_sg.flowsheet.stage("shaping")
    with pytest.raises(ValidationError):
        line_count(st_, -1, 0.9)
    with pytest.raises(ValidationError):
        line_count(st_, 100, 0.0)


def test_stage_validation():
    with pytest.raises(ValidationError):
        make_stage("a", "shaping", tph=0)
    with pytest.raises(ValidationError):
        make_stage("a", "shaping", y=0)
    with pytest.raises(ValidationError):
        make_stage("a", "shaping", y=1.2)
    with pytest.raises(ValidationError):
        StageSpec("a", "milling", "spheronization", 1.0)


def test_flowsheet_order_enforced():
    coat, shape = make_stage("c", "coating"), make_stage("s", "shaping")
    with pytest.raises(ValidationError, match="order"):
        Flowsheet("SG_acheson", (coat, shape), "needle_coke")
    with pytest.raises(ValidationError, match="coating"):
        Flowsheet("SG_acheson", (shape,), "needle_coke")
    with pytest.raises(ValidationError):
        Flowsheet("SG_acheson", (shape, make_stage("s", "coating")), "needle_coke")


def test_unknown_stage_lookup(us_sg):
    with pytest.raises(KeyError, match="purification"):
        us_sg.flowsheet.stage("purification")


def test_plant_validation():
    with pytest.raises(ValidationError):
        PlantSpec(capacity=0)
    with pytest.raises(ValidationError):
        PlantSpec(capacity=1, uptime=1.5)


yields_st = st.lists(st.floats(0.05, 1.0), min_size=2, max_size=6)


@settings(max_examples=300)
@given(yields_st)
def test_feed_cascade_matches_loop(ys):
    fs = make_flowsheet(ys)
    for k, s in enumerate(fs.stages):
        assert math.isclose(feed_per_tonne(fs, s.id), oracles.feed_by_loop(ys, k), rel_tol=1e-12)
        assert feed_per_tonne(fs, s.id) >= 1.0


@settings(max_examples=300)
@given(yields_st, st.data())
def test_feed_multiplicative_between_stages(ys, data):
    fs = make_flowsheet(ys)
    a = data.draw(st.integers(0, len(ys) - 2))
    b = data.draw(st.integers(a + 1, len(ys) - 1))
    between = math.prod(ys[a:b])
    assert math.isclose(feed_per_tonne(fs, fs.stages[a].id),
                        feed_per_tonne(fs, fs.stages[b].id) / between, rel_tol=1e-12)


@settings(max_examples=200)
@given(yields_st, st.data())
def test_feed_strictly_decreasing_in_yield(ys, data):
    fs = make_flowsheet(ys)
    k = data.draw(st.integers(0, len(ys) - 1))
    if ys[k] > 0.99:
        return
    bumped = list(ys)
    bumped[k] = min(1.0, ys[k] * 1.01)
    assert feed_per_tonne(make_flowsheet(bumped), "s0") < feed_per_tonne(fs, "s0")


line_args = st.tuples(st.floats(0, 5e5), st.floats(0.01, 50), st.floats(0.05, 1.0))


@settings(max_examples=500)
@given(line_args)
def test_line_count_bounds(args):
    feed, tph, up = args
    n = line_count(make_stage("x", "coating", tph=tph), feed, up)
    per = tph * 8760 * up
    assert n * per >= feed
    assert n == 0 or (n - 1) * per < feed
    assert n == oracles.lines_by_search(feed, tph, up)


@settings(max_examples=300)
@given(line_args, st.floats(1.0, 3.0))
def test_line_count_monotone(args, k):
    feed, tph, up = args
    n = line_count(make_stage("x", "coating", tph=tph), feed, up)
    assert line_count(make_stage("x", "coating", tph=tph), feed * k, up) >= n
    assert line_count(make_stage("x", "coating", tph=tph * k), feed, up) <= n
    assert line_count(make_stage("x", "coating", tph=tph), feed, min(1.0, up * k)) <= n


def test_frozen():
    s = make_stage("x", "coating")
    with pytest.raises(dataclasses.FrozenInstanceError):
        s.throughput_per_line = 2
