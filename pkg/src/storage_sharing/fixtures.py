"""Communities rebuilt from the published Austin case-study aggregates.

Only day-level aggregates were published, so these communities are one
valid reconstruction, not the metered data: houses 1-80 take the tabulated
storage capacities, the listed deficit houses share the total deficit and
the remaining houses share the total excess, both pro-rata to capacity.
"""
from __future__ import annotations

from datetime import date as Date

from .model import CommunityDay, HouseholdDay
from .tariff import CASE_STUDY_TARIFF

# Storage capacity (kWh) of houses 1..80.
CAPACITIES_KWH = (
    20.3, 28.8, 42.7, 44.0, 18.2, 24.9, 28.4, 45.4, 29.9, 40.1,
    30.5, 15.5, 17.6, 52.0, 42.0, 48.9, 18.9, 17.5, 29.7, 27.9,
    23.2, 28.1, 24.1, 42.8, 27.6, 35.2, 48.4, 42.1, 59.9, 22.5,
    50.2, 24.5, 35.0, 98.6, 28.6, 44.2, 25.8, 16.5, 30.1, 19.5,
    71.4, 48.5, 23.0, 70.5, 45.1, 29.9, 28.7, 20.2, 29.9, 14.3,
    28.2, 35.7, 34.9, 44.0, 48.3, 13.2, 23.8, 41.7, 28.4, 19.9,
    25.4, 17.2, 38.6, 44.0, 55.1, 30.5, 40.3, 28.4, 29.9, 25.2,
    33.2, 42.5, 50.0, 50.2, 45.1, 44.1, 24.5, 50.2, 40.2, 38.6,
)

# Houses whose peak consumption exceeded their capacity.
DAY78_DEFICIT_HOUSES = (1, 5, 13, 18, 23, 38, 61, 62)
DAY78_TOTAL_EXCESS = 1570.05
DAY78_TOTAL_DEFICIT = 49.77

DAY198_DEFICIT_HOUSES = (
    1, 2, 5, 6, 7, 12, 15, 17, 18, 19, 20, 22, 23, 25, 30, 35, 37, 38, 39, 40,
    44, 46, 47, 48, 50, 51, 56, 57, 58, 59, 60, 61, 62, 66, 68, 70, 75, 76, 77,
)
DAY198_TOTAL_EXCESS = 564.60
DAY198_TOTAL_DEFICIT = 710.30

TARIFF = CASE_STUDY_TARIFF


def _lambda_b(house: int) -> float:
    # spread evenly over the published 6.7-9.8 c/kWh/day range
    return 0.067 + 0.031 * (house - 1) / 79


def community_from_aggregates(
    deficit_houses, total_excess: float, total_deficit: float,
    day: Date | None = None, offpeak_kwh: float = 10.0,
) -> CommunityDay:
    buyers = set(deficit_houses)
    houses = range(1, len(CAPACITIES_KWH) + 1)
    cap = dict(zip(houses, CAPACITIES_KWH))
    seller_cap = sum(cap[h] for h in houses if h not in buyers)
    buyer_cap = sum(cap[h] for h in buyers)
    out = []
    for h in houses:
        B = cap[h]
        if h in buyers:
            X = B + total_deficit * B / buyer_cap
        else:
            X = B - total_excess * B / seller_cap
        out.append(HouseholdDay(str(h), X, offpeak_kwh, B, _lambda_b(h)))
    return CommunityDay(day, tuple(out))


def day78_community() -> CommunityDay:
    return community_from_aggregates(DAY78_DEFICIT_HOUSES, DAY78_TOTAL_EXCESS, DAY78_TOTAL_DEFICIT)


def day198_community() -> CommunityDay:
    return community_from_aggregates(DAY198_DEFICIT_HOUSES, DAY198_TOTAL_EXCESS, DAY198_TOTAL_DEFICIT)
