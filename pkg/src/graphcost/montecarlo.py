"""Seeded Monte Carlo sampling of scenario inputs.

Each sample draws from its own generator keyed on ``(seed, index)``, so a
sample's inputs do not depend on how many samples precede it or on how
the work is split across processes.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

import numpy as np

from .costing import Scenario, plant_cost
from .flowsheet import ValidationError
from .parameters import ParametricScenario, apply_values

log = logging.getLogger(__name__)

METRICS = ("capital_intensity", "opex_per_tonne", "breakeven_price")
PERCENTILES = (5, 25, 50, 75, 95)


@dataclass(frozen=True)
class SamplePlan:
    n_samples: int
    seed: int
    scenario: str

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


@dataclass
class MonteCarloSummary:
    scenario: str
    seed: int
    samples: np.ndarray  # shape (n, 3), columns = METRICS
    percentiles: dict[str, dict[int, float]]
    competitive: dict[float, float] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.samples)

    def column(self, metric: str) -> np.ndarray:
        return self.samples[:, METRICS.index(metric)]

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "n_samples": self.n,
            "percentiles": {m: {str(p): v for p, v in d.items()}
                            for m, d in self.percentiles.items()},
            "competitive_fraction": {repr(float(p)): f for p, f in self.competitive.items()},
        }


def draw_values(scenario: ParametricScenario, index: int, seed: int) -> dict[str, float]:
    """Uniform draws for every non-fixed parameter of sample ``index``."""
    rng = np.random.default_rng([seed, index])
    values = {}
    for pid in sorted(scenario.params):
        spec = scenario.params[pid]
        if spec.is_fixed:
            continue
        if spec.integer:
            values[pid] = float(rng.integers(int(spec.low), int(spec.high), endpoint=True))
        else:
            values[pid] = float(rng.uniform(spec.low, spec.high))
    return values


def sample_scenario(scenario: ParametricScenario, index: int, seed: int) -> Scenario:
    return apply_values(scenario.base, draw_values(scenario, index, seed))


def _evaluate(scenario: ParametricScenario, seed: int, indices: Iterable[int]) -> np.ndarray:
    rows = []
    for i in indices:
        values = draw_values(scenario, i, seed)
        try:
            b = plant_cost(apply_values(scenario.base, values))
        except (ValidationError, ValueError) as exc:
            raise ValidationError(f"sample {i}: {exc}") from exc
        rows.append((b.capital_intensity, b.total_opex_per_tonne, b.breakeven_price))
    return np.asarray(rows, dtype=float).reshape(-1, len(METRICS))


def evaluate_samples(scenario: ParametricScenario, n: int, seed: int,
                     workers: int = 1) -> np.ndarray:
    """Metric table for samples ``0..n-1``; identical for any ``workers``."""
    if workers <= 1 or n < 2 * workers:
        return _evaluate(scenario, seed, range(n))
    bounds = np.linspace(0, n, workers + 1).astype(int)
    chunks = [range(a, b) for a, b in zip(bounds[:-1], bounds[1:])]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_evaluate, [scenario] * len(chunks), [seed] * len(chunks), chunks))
    return np.concatenate(parts)


def competitive_fraction(summary: MonteCarloSummary, price: float) -> float:
    """Share of samples whose break-even price is at or below ``price``."""
    costs = np.sort(summary.column("breakeven_price"))
    return float(np.searchsorted(costs, price, side="right")) / len(costs)


def summarize(name: str, seed: int, samples: np.ndarray,
              prices: Iterable[float] = ()) -> MonteCarloSummary:
    pct = {m: {p: float(np.percentile(samples[:, j], p)) for p in PERCENTILES}
           for j, m in enumerate(METRICS)}
    summary = MonteCarloSummary(name, seed, samples, pct)
    for p in prices:
        summary.competitive[float(p)] = competitive_fraction(summary, p)
    return summary


def reference_prices(scenario: ParametricScenario) -> list[float]:
    family = "SG" if scenario.route.startswith("SG") else "NG"
    ref = scenario.base.finance.reference_prices
    return [ref[f"{family}_2024"], ref[f"{family}_2022"]]


def run_monte_carlo(plan: SamplePlan, scenario: Optional[ParametricScenario] = None,
                    prices: Optional[Iterable[float]] = None,
                    workers: int = 1) -> MonteCarloSummary:
    """Evaluate ``plan.n_samples`` draws and summarize their cost distribution.

    ``scenario`` defaults to the built-in named by ``plan.scenario``;
    ``prices`` defaults to the route's 2024 and 2022 reference prices.
    """
    if scenario is None:
        from .scenarios import load_scenario

        scenario = load_scenario(plan.scenario)
    if prices is None:
        prices = reference_prices(scenario)
    log.info("monte carlo %s: n=%d seed=%d workers=%d",
             plan.scenario, plan.n_samples, plan.seed, workers)
    samples = evaluate_samples(scenario, plan.n_samples, plan.seed, workers)
    return summarize(plan.scenario, plan.seed, samples, prices)


def sample_table(summary: MonteCarloSummary) -> list[Mapping[str, float]]:
    return [dict(zip(("index",) + METRICS, (i, *row))) for i, row in enumerate(summary.samples)]
