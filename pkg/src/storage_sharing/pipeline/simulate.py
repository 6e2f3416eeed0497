"""Run the daily cost/allocation/settlement cycle over a date range."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import date as Date
from typing import Any, Iterable

import numpy as np

from ..costs import cost_net_metering, cost_no_storage
from ..game import (
    DEFAULT_ENUM_CAP,
    Regime,
    allocate,
    check_core,
    check_imputation,
    check_subadditivity,
)
from ..model import CommunityDay, HouseholdDay, grand_coalition, id_sort_key
from ..settlement import TradeLedger, check_ledger, savings_consistency, settle_day
from ..tariff import Tariff, TariffError, validate_tariff
from ..tolerance import tol
from .loads import DEFAULT_PEAK_WINDOW, DataError, HourlyLoadRecord, LoadTable, StorageSpec, check_peak_window

log = logging.getLogger(__name__)


@dataclass
class SimulationConfig:
    tariff: Tariff
    households: dict[str, StorageSpec]
    peak_window: tuple[int, int] = DEFAULT_PEAK_WINDOW
    start: Date | None = None
    end: Date | None = None  # inclusive
    enum_cap: int = DEFAULT_ENUM_CAP
    seed: int | None = None
    fill_missing: bool = False
    # per-day verification effort; core is exhaustive when N <= enum_cap
    core_samples: int = 256
    subadditivity_trials: int = 16

    def __post_init__(self):
        check_peak_window(self.peak_window)
        for hid, s in self.households.items():
            if s.capacity_kwh < 0 or s.lambda_b < 0:
                raise ValueError(f"household {hid}: capacity and lambda_b must be >= 0")


@dataclass
class HouseholdTotals:
    id: str
    without_storage: float = 0.0
    with_storage: float = 0.0
    with_sharing: float = 0.0

    @property
    def savings(self) -> float:
        return self.with_storage - self.with_sharing

    @property
    def percent_savings(self) -> float:
        return 100.0 * self.savings / self.with_storage if self.with_storage else 0.0


@dataclass
class DaySummary:
    date: Date
    regime: Regime
    X_N: float
    B_N: float
    total_excess: float
    total_deficit: float
    p2p_kwh: float
    grid_kwh: float
    savings: float
    grand_cost: float
    sum_individual_costs: float


@dataclass
class AnnualReport:
    households: list[HouseholdTotals]
    days: list[DaySummary]
    ledgers: list[TradeLedger] = field(default_factory=list)
    violations: list[dict[str, Any]] = field(default_factory=list)

    @property
    def total_without_storage(self) -> float:
        return sum(h.without_storage for h in self.households)

    @property
    def total_with_storage(self) -> float:
        return sum(h.with_storage for h in self.households)

    @property
    def total_with_sharing(self) -> float:
        return sum(h.with_sharing for h in self.households)

    @property
    def total_savings(self) -> float:
        return self.total_with_storage - self.total_with_sharing

    @property
    def percent_savings(self) -> float:
        base = self.total_with_storage
        return 100.0 * self.total_savings / base if base else 0.0

    def summary_rows(self) -> list[tuple[str, float]]:
        return [
            ("total_cost_without_storage", self.total_without_storage),
            ("total_cost_with_storage", self.total_with_storage),
            ("total_cost_with_sharing", self.total_with_sharing),
            ("total_cost_savings_with_sharing", self.total_savings),
            ("percent_savings_with_sharing", self.percent_savings),
        ]


def community_days(
    table: LoadTable, config: SimulationConfig
) -> Iterable[CommunityDay]:
    """One CommunityDay per date in range, households in id order."""
    missing = sorted(set(config.households) - set(table.ids), key=id_sort_key)
    if missing:
        raise DataError(f"no load data for household(s): {', '.join(missing)}")
    extra = sorted(set(table.ids) - set(config.households), key=id_sort_key)
    if extra:
        log.warning("ignoring load data for households without storage config: %s", ", ".join(extra))

    rows = [table.ids.index(h) for h in sorted(config.households, key=id_sort_key)]
    cols = [k for k, d in enumerate(table.dates)
            if (config.start is None or d >= config.start) and (config.end is None or d <= config.end)]
    if not cols:
        raise DataError("no load data inside the requested date range")
    sub = LoadTable([table.ids[r] for r in rows], [table.dates[k] for k in cols],
                    table.kwh[np.ix_(rows, cols)])
    X, Y = sub.peak_offpeak(config.peak_window, config.fill_missing)
    specs = [config.households[h] for h in sub.ids]
    for d, day in enumerate(sub.dates):
        yield CommunityDay(
            day,
            tuple(
                HouseholdDay(hid, float(X[k, d]), float(Y[k, d]), s.capacity_kwh, s.lambda_b)
                for k, (hid, s) in enumerate(zip(sub.ids, specs))
            ),
        )


def verify_day(c: CommunityDay, t: Tariff, config: SimulationConfig, alloc=None, ledger=None,
               costs=None) -> list[dict[str, Any]]:
    """Every per-day invariant; returns violation records (empty when clean)."""
    alloc = alloc or allocate(c, t)
    ledger = ledger or settle_day(c, t)
    costs = costs or {h.id: cost_net_metering(h, t).total for h in c.households}
    seed = None if config.seed is None else config.seed + (c.date.toordinal() if c.date else 0)
    reports = [
        check_imputation(c, t, alloc),
        savings_consistency(ledger, alloc, costs),
        check_ledger(ledger, c, t),
    ]
    if len(c) >= 2 and config.subadditivity_trials:
        reports.append(check_subadditivity(c, t, config.subadditivity_trials, seed))
    core = check_core(
        c, t, enum_cap=config.enum_cap, allocation=alloc,
        samples=None if len(c) <= config.enum_cap else config.core_samples, seed=seed,
    )
    out = [{"date": c.date.isoformat() if c.date else None, "check": r.name, **v}
           for r in reports for v in r.violations]
    if not core.passed:
        out.append({"date": c.date.isoformat() if c.date else None, "check": "core", **core.to_dict()})

    gap = sum(costs.values()) - alloc.grand_cost
    if abs(ledger.total_savings - gap) > tol(ledger.total_savings, gap, alloc.grand_cost):
        out.append({"date": c.date.isoformat() if c.date else None, "check": "savings_equals_gap",
                    "ledger": ledger.total_savings, "gap": gap})
    return out


def simulate(records: Iterable[HourlyLoadRecord] | LoadTable, config: SimulationConfig,
             verify: bool = True) -> AnnualReport:
    if not validate_tariff(config.tariff):
        raise TariffError(f"invalid tariff: {validate_tariff(config.tariff).to_dict()['violations']}")
    table = records if isinstance(records, LoadTable) else LoadTable.from_records(records)
    t = config.tariff
    totals: dict[str, HouseholdTotals] = {}
    days: list[DaySummary] = []
    ledgers: list[TradeLedger] = []
    violations: list[dict[str, Any]] = []

    for c in community_days(table, config):
        costs = {h.id: cost_net_metering(h, t).total for h in c.households}
        alloc = allocate(c, t)
        ledger = settle_day(c, t)
        for h in c.households:
            acc = totals.setdefault(h.id, HouseholdTotals(h.id))
            acc.without_storage += cost_no_storage(h, t).total
            acc.with_storage += costs[h.id]
            acc.with_sharing += alloc.shares[h.id]
        grand = grand_coalition(c)
        days.append(DaySummary(
            c.date, alloc.regime, grand.X_S, grand.B_S, ledger.total_excess, ledger.total_deficit,
            ledger.total_p2p_kwh, ledger.total_grid_kwh, ledger.total_savings, alloc.grand_cost,
            sum(costs.values()),
        ))
        ledgers.append(ledger)
        if verify:
            violations.extend(verify_day(c, t, config, alloc, ledger, costs))

    if violations:
        log.error("%d invariant violations detected", len(violations))
    return AnnualReport(list(totals.values()), days, ledgers, violations)
