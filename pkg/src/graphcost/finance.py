"""Capital annuitization, break-even pricing and IRR inversion.

Cash flows are constant real annual amounts, discounted at the end of
each year, with no taxes, depreciation, working capital or salvage.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field

from scipy.optimize import bisect

REFERENCE_PRICES = {"SG_2024": 7500.0, "NG_2024": 7000.0, "SG_2022": 11000.0, "NG_2022": 9000.0}


class MarginError(ValueError):
    """Price does not exceed operating cost, so no IRR exists."""


@dataclass(frozen=True)
class FinanceSpec:
    required_irr: float = 0.15
    payback_years: int = 10
    reference_prices: dict = field(default_factory=lambda: dict(REFERENCE_PRICES))

    def __post_init__(self):
        if self.required_irr < 0:
            raise ValueError("required IRR must be non-negative")
        if self.payback_years < 1:
            raise ValueError("payback period must be at least one year")

    @property
    def crf(self) -> float:
        return crf(self.required_irr, self.payback_years)


def crf(rate: float, years: int) -> float:
    """Capital recovery factor: level annual payment per unit of capital.

    ``rate * (1 + rate)**years / ((1 + rate)**years - 1)``, evaluated in a
    form that stays accurate as ``rate`` approaches zero, where it tends
    to ``1 / years``.
    """
    if years < 1:
        raise ValueError(f"years must be >= 1, got {years}")
    if rate < 0:
        raise ValueError(f"rate must be non-negative, got {rate}")
    if rate == 0:
        return 1.0 / years
    return rate / -math.expm1(-years * math.log1p(rate))


def breakeven_price(capex: float, opex_per_tonne: float, capacity: float,
                    fin: FinanceSpec) -> float:
    """Product price that earns exactly the required IRR over the payback period."""
    if not capacity > 0:
        raise ValueError("capacity must be positive")
    return opex_per_tonne + capex / capacity * crf(fin.required_irr, fin.payback_years)


def irr_from_price(price: float, capex: float, opex_per_tonne: float, capacity: float,
                   years: int, xtol: float = 1e-12) -> float:
    """Invert :func:`breakeven_price` for the rate of return.

    The annual margin ``(price - opex) * capacity`` is treated as a level
    annuity repaying ``capex``; the rate is bracketed on [0, 10] and found
    by bisection, which is unique because the capital recovery factor is
    strictly increasing in the rate.
    """
    if price <= opex_per_tonne:
        raise MarginError("margin non-positive")
    if not capex > 0:
        raise ValueError("capex must be positive")
    if not capacity > 0:
        raise ValueError("capacity must be positive")
    target = (price - opex_per_tonne) * capacity / capex

    def gap(r):
        return crf(r, years) - target

    lo, hi = 0.0, 10.0
    g_lo, g_hi = gap(lo), gap(hi)
    if g_lo == 0:
        return 0.0
    if g_lo > 0 or g_hi < 0:
        raise ValueError(f"no sign change for IRR in [{lo}, {hi}]")
    return bisect(gap, lo, hi, xtol=xtol, rtol=4 * sys.float_info.epsilon, maxiter=200)
