"""Built-in datasets, scenario files and reported-project adjustment.

Scenario file format (version 1), one ``key = value`` per line::

    # graphcost scenario v1
    route = NG_carbochlorination
    region = US
    capacity = 60000

    [overrides]
    graphite_concentrate = 500
    purification.throughput = 0.3 .. 0.8

    [finance]
    irr = 0.08

A scalar pins the parameter (fixed distribution); ``low .. high`` makes it
uniform on that range and keeps the dataset baseline, which must lie
inside it. ``#`` starts a comment.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .costing import CostFactors, Scenario
from .finance import FinanceSpec, breakeven_price
from .flowsheet import (
    Flowsheet,
    ParameterSpec,
    PlantSpec,
    StageSpec,
    ValidationError,
)
from .parameters import (
    ParametricScenario,
    UnknownParameter,
    canonical,
    consumable,
    get_value,
    set_value,
)

DATA_ENV = "GRAPHCOST_DATA_DIR"
FORMAT_HEADER = "# graphcost scenario v1"

BUILTINS = {
    "US_SG": ("SG", "US", None),
    "CN_SG": ("SG", "China", None),
    "US_NG": ("NG", "US", None),
    "CN_NG": ("NG", "China", None),
    "US_SG_box": ("SG", "US", "box"),
    "US_SG_continuous": ("SG", "US", "continuous"),
}

Override = Union[float, tuple[float, float]]


class ScenarioSyntaxError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


# --------------------------------------------------------------------------
# dataset tables


def data_dir() -> Path:
    override = os.environ.get(DATA_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("graphcost") / "data"))


def read_table(name: str) -> list[dict[str, str]]:
    path = data_dir() / name
    with open(path, newline="", encoding="utf-8") as fh:
        lines = [ln for ln in fh if ln.strip() and not ln.startswith("#")]
    return list(csv.DictReader(lines))


def read_manifest() -> dict[str, dict]:
    out = {}
    with open(data_dir() / "manifest.txt", encoding="utf-8") as fh:
        for ln in fh:
            if not ln.strip() or ln.startswith("#"):
                continue
            name, rows, *tables = ln.split()
            out[name] = {"rows": int(rows),
                         "tables": {k: int(v) for k, v in (t.split(":") for t in tables)}}
    return out


def _to_model_units(value: float, unit: str) -> float:
    if unit == "MUSD":
        return value * 1e6
    if unit == "%":
        return value / 100
    if unit == "ktpa":
        return value * 1000
    return value


def parse_range(text: str, baseline: float) -> Optional[tuple[float, float]]:
    """Range notation from the assumption tables, in table units.

    Returns None for a fixed value.
    """
    text = text.strip()
    if text in ("", "0"):
        return None
    m = re.fullmatch(r"\(\s*([-\d.]+)\s*,\s*([-\d.]+)\s*\)", text)
    if m:
        return float(m[1]), float(m[2])
    m = re.fullmatch(r"(?:±\s*)?([\d.]+)\s*(%?)", text)
    if not m:
        raise ValueError(f"unrecognized range {text!r}")
    delta = float(m[1])
    if m[2]:
        delta = baseline * delta / 100
    return baseline - delta, baseline + delta


def row_spec(row: dict[str, str]) -> ParameterSpec:
    unit = row["unit"]
    base = float(row["baseline"])
    rng = parse_range(row["range"], base)
    integer = unit == "#" and rng is not None
    if rng is None:
        v = _to_model_units(base, unit)
        return ParameterSpec.fixed(row["param"], unit, v, row["region"])
    return ParameterSpec(
        row["param"],
        unit,
        _to_model_units(base, unit),
        _to_model_units(rng[0], unit),
        _to_model_units(rng[1], unit),
        "uniform",
        row["region"],
        integer,
    )


def _rows_for(family: str, region: str) -> list[dict[str, str]]:
    rows = read_table("parameters.csv") + read_table("assumptions.csv")
    return [r for r in rows
            if r["route"] in (family, "all") and r["region"] in (region, "both")]


# --------------------------------------------------------------------------
# built-in scenarios


def _skeleton(family: str, region: str) -> Scenario:
    shaping = StageSpec("shaping", "shaping", "spheronization", 1.0)
    coating = StageSpec("coating", "coating", "pitch_coat", 1.0,
                        consumables=(consumable("nitrogen"), consumable("pitch")))
    if family == "SG":
        middle = StageSpec(
            "graphitization", "graphitization", "acheson", 1.0,
            consumables=(consumable("crucible"), consumable("packing_material")))
        route, feed = "SG_acheson", "needle_coke"
    elif region == "US":
        middle = StageSpec("purification", "purification", "carbochlorination", 1.0,
                           consumables=(consumable("chlorine"),))
        route, feed = "NG_carbochlorination", "graphite_concentrate"
    else:
        middle = StageSpec(
            "purification", "purification", "acid_leach", 1.0,
            consumables=tuple(consumable(m) for m in
                              ("water", "natural_gas", "lime", "HCl", "HNO3", "HF")))
        route, feed = "NG_acid_leach", "graphite_concentrate"
    return Scenario(
        flowsheet=Flowsheet(route, (shaping, middle, coating), feed),
        plant=PlantSpec(capacity=1.0),
        costs=CostFactors(region, 0.0, 0.0, 0.0),
        finance=FinanceSpec(),
    )


def load_builtin(name: str) -> ParametricScenario:
    """One of the built-in route x region scenarios with every dataset row applied."""
    try:
        family, region, variant = BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; valid names: {', '.join(BUILTINS)}") from None
    ps = _base_parametric(name, family, region)
    if variant:
        from .analysis import apply_furnace_variant

        ps = dataclasses.replace(apply_furnace_variant(ps, variant), name=name)
    return ps


def _base_parametric(name: str, family: str, region: str) -> ParametricScenario:
    scenario = _skeleton(family, region)
    params: dict[str, ParameterSpec] = {}
    for row in _rows_for(family, region):
        spec = row_spec(row)
        if spec.id in params:
            raise ValidationError(f"{name}: parameter {spec.id} defined twice in dataset")
        params[spec.id] = spec
        scenario = set_value(scenario, spec.id, spec.baseline)
    return ParametricScenario(name, scenario, params)


def builtin_name(route: str, region: str) -> tuple[str, Optional[str]]:
    """Dataset and furnace variant for a route/region pair."""
    prefix = {"US": "US", "China": "CN"}.get(region)
    if prefix is None:
        raise ValidationError(f"unknown region {region!r} (US, China)")
    if route.startswith("SG_"):
        variant = route[3:]
        return f"{prefix}_SG", None if variant == "acheson" else variant
    expected = "NG_carbochlorination" if region == "US" else "NG_acid_leach"
    if route != expected:
        raise ValidationError(f"route {route} is not modeled for region {region} (use {expected})")
    return f"{prefix}_NG", None


# --------------------------------------------------------------------------
# scenario files


@dataclass
class ScenarioFile:
    route: str
    region: str
    capacity: Optional[float] = None
    overrides: dict[str, Override] = field(default_factory=dict)
    finance: dict[str, Override] = field(default_factory=dict)
    line_numbers: dict[str, int] = field(default_factory=dict, compare=False, repr=False)


def _parse_value(raw: str, lineno: int) -> Override:
    parts = [p.strip() for p in raw.split("..")]
    try:
        if len(parts) == 1:
            return float(parts[0])
        if len(parts) == 2:
            return float(parts[0]), float(parts[1])
    except ValueError:
        pass
    raise ScenarioSyntaxError(lineno, f"expected a number or 'low .. high', got {raw!r}")


def parse_scenario(text: str) -> ScenarioFile:
    section = None
    top: dict[str, tuple[str, int]] = {}
    overrides: dict[str, Override] = {}
    finance: dict[str, Override] = {}
    where: dict[str, int] = {}
    for lineno, line in enumerate(io.StringIO(text), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[\s*(\w+)\s*\]", line)
        if m:
            if m[1] not in ("overrides", "finance"):
                raise ScenarioSyntaxError(lineno, f"unknown section [{m[1]}]")
            section = m[1]
            continue
        key, sep, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if not sep or not key or not raw:
            raise ScenarioSyntaxError(lineno, f"expected 'key = value', got {line!r}")
        if section is None:
            if key not in ("route", "region", "capacity"):
                raise ScenarioSyntaxError(lineno, f"unknown top-level key {key!r}")
            if key in top:
                raise ScenarioSyntaxError(lineno, f"duplicate key {key!r}")
            top[key] = (raw, lineno)
            continue
        target = overrides if section == "overrides" else finance
        if key in target:
            raise ScenarioSyntaxError(lineno, f"duplicate key {key!r}")
        target[key] = _parse_value(raw, lineno)
        where[f"{section}.{key}"] = lineno
    for key in ("route", "region"):
        if key not in top:
            raise ScenarioSyntaxError(0, f"missing required key {key!r}")
    capacity = None
    if "capacity" in top:
        raw, lineno = top["capacity"]
        value = _parse_value(raw, lineno)
        if isinstance(value, tuple):
            raise ScenarioSyntaxError(lineno, "capacity must be a single number")
        capacity = value
        where["capacity"] = lineno
    where["route"], where["region"] = top["route"][1], top["region"][1]
    return ScenarioFile(top["route"][0], top["region"][0], capacity, overrides, finance, where)


def _fmt_value(v: Override) -> str:
    if isinstance(v, tuple):
        return f"{v[0]!r} .. {v[1]!r}"
    return repr(float(v))


def serialize_scenario(sf: ScenarioFile) -> str:
    out = [FORMAT_HEADER, f"route = {sf.route}", f"region = {sf.region}"]
    if sf.capacity is not None:
        out.append(f"capacity = {float(sf.capacity)!r}")
    for name, section in (("overrides", sf.overrides), ("finance", sf.finance)):
        if section:
            out += ["", f"[{name}]"]
            out += [f"{k} = {_fmt_value(v)}" for k, v in section.items()]
    return "\n".join(out) + "\n"


def _entries(sf: ScenarioFile):
    """(parameter id, value, line) for every override in the file."""
    if sf.capacity is not None:
        yield "plant.capacity", sf.capacity, sf.line_numbers.get("capacity")
    for k, v in sf.overrides.items():
        yield canonical(k), v, sf.line_numbers.get(f"overrides.{k}")
    for k, v in sf.finance.items():
        yield f"finance.{k}", v, sf.line_numbers.get(f"finance.{k}")


def _at(line: Optional[int]) -> str:
    return f"line {line}: " if line else ""


def _apply_override(spec: ParameterSpec, value: Override) -> ParameterSpec:
    if isinstance(value, tuple):
        lo, hi = value
        return dataclasses.replace(spec, low=lo, high=hi, distribution="uniform")
    return dataclasses.replace(spec, baseline=value, low=value, high=value, distribution="fixed")


def validate(sf: ScenarioFile) -> list[str]:
    """All violations in ``sf``; an empty list means it resolves cleanly."""
    problems = []
    try:
        base = load_builtin(builtin_name(sf.route, sf.region)[0])
    except (KeyError, ValidationError) as exc:
        return [f"{_at(sf.line_numbers.get('route'))}{exc.args[0]}"]
    for pid, value, line in _entries(sf):
        try:
            spec = base.spec(pid)
        except UnknownParameter:
            problems.append(f"{_at(line)}unknown parameter {pid!r}")
            continue
        if isinstance(value, tuple) and value[0] > value[1]:
            problems.append(f"{_at(line)}{pid}: range inverted ({value[0]} > {value[1]})")
            continue
        try:
            new = _apply_override(spec, value)
            get_value(base.with_spec(new).base, pid)
        except (ValidationError, ValueError) as exc:
            problems.append(f"{_at(line)}{exc.args[0]}")
    return problems


def resolve(sf: ScenarioFile) -> ParametricScenario:
    problems = validate(sf)
    if problems:
        raise ValidationError("; ".join(problems))
    name, variant = builtin_name(sf.route, sf.region)
    ps = load_builtin(name)
    if variant:
        from .analysis import apply_furnace_variant

        ps = apply_furnace_variant(ps, variant)
    for pid, value, _ in _entries(sf):
        ps = ps.with_spec(_apply_override(ps.spec(pid), value))
    return dataclasses.replace(ps, name=f"{sf.route}/{sf.region}")


def load_scenario(ref: str) -> ParametricScenario:
    """A built-in name or a path to a scenario file."""
    if ref in BUILTINS:
        return load_builtin(ref)
    path = Path(ref)
    if not path.exists():
        raise KeyError(f"unknown scenario {ref!r}; valid names: {', '.join(BUILTINS)} "
                       "or a scenario file path")
    return resolve(parse_scenario(path.read_text(encoding="utf-8")))


def with_overrides(ps: ParametricScenario, overrides: dict[str, Override]) -> ParametricScenario:
    """Apply command-line style overrides to an already loaded scenario."""
    problems = []
    for pid, value in overrides.items():
        try:
            spec = ps.spec(pid)
        except UnknownParameter:
            problems.append(f"unknown parameter {canonical(pid)!r}")
            continue
        if isinstance(value, tuple) and value[0] > value[1]:
            problems.append(f"{spec.id}: range inverted ({value[0]} > {value[1]})")
            continue
        try:
            ps = ps.with_spec(_apply_override(spec, value))
        except (ValidationError, ValueError) as exc:
            problems.append(exc.args[0])
    if problems:
        raise ValidationError("; ".join(problems))
    return ps


# --------------------------------------------------------------------------
# reported projects

ADJUSTMENT_KINDS = ("addOpexPerTonne", "addCapex", "capacityOverride")


@dataclass(frozen=True)
class ReportedProject:
    owner: str
    report_year: int
    location: str
    process_type: str
    capacity: float
    capex: float
    opex_per_tonne: float
    adjustments: tuple[tuple[str, float], ...] = ()
    note: str = ""
    reported_total: Optional[float] = None

    def __post_init__(self):
        for kind, _ in self.adjustments:
            if kind not in ADJUSTMENT_KINDS:
                raise ValidationError(f"{self.owner}: unknown adjustment {kind!r}")


def load_projects() -> list[ReportedProject]:
    projects = []
    for row in read_table("projects.csv"):
        adjustments = []
        for item in filter(None, row["adjustments"].split(";")):
            kind, value = item.split(":")
            adjustments.append((kind.strip(), float(value)))
        projects.append(ReportedProject(
            owner=row["owner"],
            report_year=int(row["report_year"]),
            location=row["location"],
            process_type=row["process_type"],
            capacity=float(row["capacity_tpa"]),
            capex=float(row["capex_usd"]),
            opex_per_tonne=float(row["opex_usd_per_t"]),
            adjustments=tuple(adjustments),
            note=row["note"],
            reported_total=float(row["reported_total"]) if row["reported_total"] else None,
        ))
    return projects


def adjust_reported(project: ReportedProject, fin: FinanceSpec) -> float:
    """Harmonized total cost per tonne of coated anode material."""
    capacity, capex, opex = project.capacity, project.capex, project.opex_per_tonne
    for kind, value in project.adjustments:
        if kind == "addOpexPerTonne":
            opex += value
        elif kind == "addCapex":
            capex += value
        else:
            capacity = value
    if not capacity > 0:
        raise ValidationError(f"{project.owner}: capacity must be positive after adjustment")
    return breakeven_price(capex, opex, capacity, fin)
