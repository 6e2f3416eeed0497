"""Daily P2P settlement: prices, pro-rata matching and the trade ledger."""
from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass
from datetime import date as Date
from typing import Any, Mapping

from .game import Allocation, PropertyReport, Regime, individual_savings, regime_of
from .model import CommunityDay, grand_coalition
from .tariff import Tariff
from .tolerance import tol


@dataclass(frozen=True)
class SharingPrices:
    p: float
    g_by_household: dict[str, float]
    regime: Regime


@dataclass(frozen=True)
class TradePosition:
    id: str
    E: float
    D: float
    p2p_kwh: float
    grid_kwh: float
    g: float
    G: float

    @property
    def side(self) -> str:
        if self.E > 0:
            return "seller"
        if self.D > 0:
            return "buyer"
        return "idle"


@dataclass(frozen=True)
class TradeLedger:
    date: Date | None
    regime: Regime
    p: float
    positions: tuple[TradePosition, ...]
    total_excess: float
    total_deficit: float
    total_p2p_kwh: float
    total_grid_kwh: float
    total_savings: float

    @property
    def grid_sales_kwh(self) -> float:
        return sum(pos.grid_kwh for pos in self.positions if pos.E > 0)

    @property
    def grid_purchases_kwh(self) -> float:
        return sum(pos.grid_kwh for pos in self.positions if pos.D > 0)

    def savings(self) -> dict[str, float]:
        return {pos.id: pos.G for pos in self.positions}

    def to_dict(self) -> dict[str, Any]:
        return {
            "date": self.date.isoformat() if self.date else None,
            "regime": self.regime.value,
            "p": self.p,
            "total_excess_kwh": self.total_excess,
            "total_deficit_kwh": self.total_deficit,
            "total_p2p_kwh": self.total_p2p_kwh,
            "total_grid_kwh": self.total_grid_kwh,
            "grid_sales_kwh": self.grid_sales_kwh,
            "grid_purchases_kwh": self.grid_purchases_kwh,
            "total_savings": self.total_savings,
            "positions": [asdict(pos) for pos in self.positions],
        }

    def csv_rows(self) -> list[list[str]]:
        day = self.date.isoformat() if self.date else ""
        return [
            [pos.id, day, self.regime.value]
            + [f"{v:.6f}" for v in (pos.E, pos.D, pos.p2p_kwh, pos.grid_kwh, self.p, pos.g, pos.G)]
            for pos in self.positions
        ]


LEDGER_CSV_HEADER = ["id", "date", "regime", "E", "D", "p2p_kwh", "grid_kwh", "p", "g", "G"]


def write_ledger_csv(ledgers, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(LEDGER_CSV_HEADER)
    for ledger in ledgers:
        w.writerows(ledger.csv_rows())


def ledger_csv(ledger: TradeLedger) -> str:
    buf = io.StringIO()
    write_ledger_csv([ledger], buf)
    return buf.getvalue()


def sharing_prices(c: CommunityDay, t: Tariff) -> SharingPrices:
    grand = grand_coalition(c)
    regime = regime_of(grand.X_S, grand.B_S)
    p = t.lambda_h if regime is Regime.DEFICIT else t.mu_h
    g = {h.id: t.lambda_h if h.X >= h.B else t.mu_h for h in c.households}
    return SharingPrices(p, g, regime)


def settle_day(c: CommunityDay, t: Tariff) -> TradeLedger:
    """Clear the day's P2P market and price each household's gain.

    Sellers supply ``min(sum E, sum D)`` pro-rata to their excess, buyers
    take it pro-rata to their deficit; whatever is left goes to the grid at
    the household's own grid price ``g``. Since every P2P kWh clears at the
    single price ``p``, who trades with whom does not affect any gain.
    """
    if len(c) == 0:
        raise ValueError("community has no households")
    prices = sharing_prices(c, t)
    p = prices.p
    total_E = sum(h.excess for h in c.households)
    total_D = sum(h.deficit for h in c.households)
    traded = min(total_E, total_D)

    positions = []
    for h in c.households:
        E, D = h.excess, h.deficit
        g = prices.g_by_household[h.id]
        if E > 0:
            p2p = E * (traded / total_E)
            gain = (p - g) * E
        elif D > 0:
            p2p = D * (traded / total_D)
            gain = (g - p) * D
        else:
            p2p, gain = 0.0, 0.0
        positions.append(TradePosition(h.id, E, D, p2p, (E + D) - p2p, g, gain))

    return TradeLedger(
        date=c.date,
        regime=prices.regime,
        p=p,
        positions=tuple(positions),
        total_excess=total_E,
        total_deficit=total_D,
        total_p2p_kwh=traded,
        total_grid_kwh=sum(pos.grid_kwh for pos in positions),
        total_savings=sum(pos.G for pos in positions),
    )


def savings_consistency(
    ledger: TradeLedger, alloc: Allocation, costs: Mapping[str, float]
) -> PropertyReport:
    """Check xi_i == J(i) - G_i for every household."""
    ledger_ids = {pos.id for pos in ledger.positions}
    if ledger_ids != set(alloc.shares) or ledger_ids != set(costs):
        raise ValueError("ledger, allocation and costs cover different households")
    report = PropertyReport("savings_consistency")
    for pos in ledger.positions:
        j_i, xi = costs[pos.id], alloc.shares[pos.id]
        report.checked += 1
        if abs((j_i - pos.G) - xi) > tol(j_i, xi, pos.G):
            report.violations.append({"id": pos.id, "J_i": j_i, "G_i": pos.G, "xi": xi})
    return report


def check_ledger(ledger: TradeLedger, c: CommunityDay, t: Tariff) -> PropertyReport:
    """Market clearing, routing, savings total and agreement with the closed form."""
    report = PropertyReport("ledger")
    expected = individual_savings(c, t)
    sold = sum(pos.p2p_kwh for pos in ledger.positions if pos.E > 0)
    bought = sum(pos.p2p_kwh for pos in ledger.positions if pos.D > 0)
    traded = ledger.total_p2p_kwh

    def fail(check: str, **detail):
        report.violations.append({"check": check, **detail})

    report.checked += 3
    if abs(sold - traded) > tol(sold, traded) or abs(bought - traded) > tol(bought, traded):
        fail("market_clearing", sold=sold, bought=bought, traded=traded)
    paid, received = ledger.p * bought, ledger.p * sold
    if abs(paid - received) > tol(paid, received):
        fail("money_conservation", paid=paid, received=received)
    want = t.spread * traded
    if abs(ledger.total_savings - want) > tol(ledger.total_savings, want):
        fail("total_savings", ledger=ledger.total_savings, expected=want)
    for pos in ledger.positions:
        report.checked += 1
        if pos.E * pos.D != 0 or pos.E < 0 or pos.D < 0 or pos.G < 0:
            fail("position_signs", id=pos.id)
        if abs(pos.p2p_kwh + pos.grid_kwh - (pos.E + pos.D)) > tol(pos.E, pos.D):
            fail("routing", id=pos.id)
        if pos.G != expected[pos.id]:
            fail("closed_form_savings", id=pos.id, ledger=pos.G, closed_form=expected[pos.id])
    return report
