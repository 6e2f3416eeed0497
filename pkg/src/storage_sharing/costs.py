"""Daily cost functions for a household or coalition.

All functions return a :class:`CostBreakdown`; ``total`` is always
``capital + peak_energy + offpeak_energy`` evaluated in that order, so two
formulas that agree term by term agree bit for bit.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .model import CoalitionView, HouseholdDay
from .tariff import Tariff


def pos(x: float) -> float:
    """(x)^+ = max{x, 0}."""
    return x if x > 0.0 else 0.0


@dataclass(frozen=True)
class CostBreakdown:
    capital: float
    peak_energy: float  # negative when peak surplus is sold back
    offpeak_energy: float
    total: float

    @classmethod
    def of(cls, capital: float, peak: float, offpeak: float) -> "CostBreakdown":
        return cls(capital, peak, offpeak, capital + peak + offpeak)

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


def cost_no_storage(h: HouseholdDay, t: Tariff) -> CostBreakdown:
    """Plain ToU bill: every kWh bought from the grid in its own period."""
    return CostBreakdown.of(0.0, t.lambda_h * h.X, t.lambda_l * h.Y)


def cost_storage_no_capital(h: HouseholdDay, t: Tariff) -> CostBreakdown:
    """ToU bill with ideal storage charged off-peak, capital ignored.

    Only ``min(B, X)`` is charged: without net metering there is nothing to
    gain from storing more than the peak demand.
    """
    return CostBreakdown.of(
        0.0,
        t.lambda_h * pos(h.X - h.B),
        t.lambda_l * (h.Y + min(h.B, h.X)),
    )


def cost_storage_with_capital(h: HouseholdDay, t: Tariff) -> CostBreakdown:
    s = cost_storage_no_capital(h, t)
    return CostBreakdown.of(h.capital, s.peak_energy, s.offpeak_energy)


def _net_metered(capital: float, X: float, Y: float, B: float, t: Tariff) -> CostBreakdown:
    # storage is always charged full off-peak; peak surplus is sold at mu_h
    peak = t.lambda_h * pos(X - B) - t.mu_h * pos(B - X)
    return CostBreakdown.of(capital, peak, t.lambda_l * (Y + B))


def cost_net_metering(h: HouseholdDay, t: Tariff) -> CostBreakdown:
    """Individual cost J(i) under ToU plus net metering."""
    return _net_metered(h.capital, h.X, h.Y, h.B, t)


def coalition_cost(v: CoalitionView, t: Tariff) -> CostBreakdown:
    """J(S): the coalition behaves as one household with pooled storage."""
    return _net_metered(v.capital_S, v.X_S, v.Y_S, v.B_S, t)


def coalition_cost_batch(X, Y, B, capital, t: Tariff):
    """Vectorized ``coalition_cost(...).total`` over numpy arrays of aggregates.

    Same operation order as the scalar path, so results match it bit for bit.
    """
    peak = t.lambda_h * np.maximum(X - B, 0.0) - t.mu_h * np.maximum(B - X, 0.0)
    return capital + peak + t.lambda_l * (Y + B)
