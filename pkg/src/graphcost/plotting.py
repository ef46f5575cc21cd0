"""Static PNG figures written next to CLI output files."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .analysis import IsoPriceContour, LadderStep  # noqa: E402
from .costing import CATEGORIES, CostBreakdown  # noqa: E402
from .montecarlo import MonteCarloSummary  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "figure.figsize": (6.4, 4.0),
}
COLORS = dict(zip(CATEGORIES, plt.get_cmap("tab10").colors))


def _save(fig, path: str) -> None:
    # drop the Software tag so files do not change with the matplotlib version
    fig.savefig(path, bbox_inches="tight", metadata={"Software": None})
    plt.close(fig)


def plot_breakdown(b: CostBreakdown, path: str, title: str = "") -> None:
    """Stacked bars: one per row, one segment per cost category."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        rows = list(b.rows)
        bottom = np.zeros(len(rows))
        for cat in CATEGORIES:
            h = np.array([b.rows[r][cat] for r in rows])
            ax.bar(rows, h, bottom=bottom, color=COLORS[cat], label=cat)
            bottom += h
        ax.set_ylabel("cost ($/t product)")
        ax.set_title(title or f"total {b.breakeven_price:,.0f} $/t")
        ax.legend(fontsize=7, frameon=False, ncol=2)
        _save(fig, path)


def plot_cloud(summary: MonteCarloSummary, path: str,
               contours: Sequence[IsoPriceContour] = ()) -> None:
    """Capital intensity against operating cost, one dot per sample."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ci, opex = summary.column("capital_intensity"), summary.column("opex_per_tonne")
        ax.scatter(ci, opex, s=2, alpha=0.3, color="tab:blue", rasterized=True)
        xmax = float(ci.max()) * 1.05
        for c in contours:
            (x0, y0), (x1, y1) = c.segment(xmax)
            ax.plot([x0, x1], [y0, y1], "k--", lw=0.8)
            ax.annotate(f"${c.price:,.0f}/t", (x0, y0), fontsize=7)
        ax.set_xlim(0, xmax)
        ax.set_ylim(0, None)
        ax.set_xlabel("capital intensity ($ per t/yr)")
        ax.set_ylabel("operating cost ($/t)")
        ax.set_title(f"{summary.scenario}, n={summary.n}")
        _save(fig, path)


def plot_ladder(steps: Sequence[LadderStep], path: str) -> None:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        labels = ["baseline"] + [s.parameter for s in steps]
        prices = [steps[0].price_before] + [s.price_after for s in steps] if steps else []
        ax.bar(range(len(prices)), prices, color="tab:gray")
        ax.set_xticks(range(len(prices)), labels[:len(prices)], rotation=30, ha="right")
        ax.set_ylabel("break-even price ($/t)")
        _save(fig, path)


def plot_contours(contours: Sequence[IsoPriceContour], ci_max: float, path: str) -> None:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for c in contours:
            (x0, y0), (x1, y1) = c.segment(ci_max)
            ax.plot([x0, x1], [y0, y1], label=f"${c.price:,.0f}/t")
        ax.set_xlim(0, ci_max)
        ax.set_ylim(0, None)
        ax.set_xlabel("capital intensity ($ per t/yr)")
        ax.set_ylabel("operating cost ($/t)")
        ax.legend(frameon=False)
        _save(fig, path)


def plot_variants(breakdowns: dict[str, CostBreakdown], path: str) -> None:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        names = list(breakdowns)
        bottom = np.zeros(len(names))
        for cat in CATEGORIES:
            h = np.array([breakdowns[n].totals[cat] for n in names])
            ax.bar(names, h, bottom=bottom, color=COLORS[cat], label=cat)
            bottom += h
        ax.set_ylabel("cost ($/t product)")
        ax.legend(fontsize=7, frameon=False, ncol=2)
        _save(fig, path)
