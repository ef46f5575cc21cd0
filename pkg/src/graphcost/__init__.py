"""Techno-economic cost model for battery-grade natural and synthetic graphite."""

from .analysis import (
    alt_route_headroom,
    apply_furnace_variant,
    disruption_impact,
    iso_price_contour,
    sensitivity_ladder,
    variant_comparison,
)
from .costing import CostBreakdown, CostFactors, Scenario, plant_cost
from .finance import FinanceSpec, MarginError, breakeven_price, crf, irr_from_price
from .flowsheet import (
    Flowsheet,
    ParameterSpec,
    PlantSpec,
    StageSpec,
    ValidationError,
    feed_per_tonne,
    line_count,
)
from .montecarlo import MonteCarloSummary, SamplePlan, run_monte_carlo
from .parameters import ParametricScenario, UnknownParameter
from .scenarios import adjust_reported, load_builtin, load_projects, load_scenario

__version__ = "0.1.0"

__all__ = [
    "CostBreakdown", "CostFactors", "FinanceSpec", "Flowsheet", "MarginError",
    "MonteCarloSummary", "ParameterSpec", "ParametricScenario", "PlantSpec", "SamplePlan",
    "Scenario", "StageSpec", "UnknownParameter", "ValidationError", "adjust_reported",
    "alt_route_headroom", "apply_furnace_variant", "breakeven_price", "crf",
    "disruption_impact", "feed_per_tonne", "irr_from_price", "iso_price_contour",
    "line_count", "load_builtin", "load_projects", "load_scenario", "plant_cost",
    "run_monte_carlo", "sensitivity_ladder", "variant_comparison",
]
