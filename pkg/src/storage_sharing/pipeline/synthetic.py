"""Synthetic year of hourly household loads with storage sizes.

Stand-in for metered data. Households fall into five peak-period
consumption tiers (daily peak-window kWh):

    low          9-16   (18 of 80)
    moderately   17-21  (18 of 80)
    moderate     22-34  (38 of 80)
    high         ~40    (4 of 80)
    very high    ~70    (2 of 80)

Each household's daily peak total averages exactly its tier draw over the
generated period; seasonality and day-to-day noise are normalized to mean 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import date as Date
from datetime import datetime, timedelta

import numpy as np

from .loads import DEFAULT_PEAK_WINDOW, HourlyLoadRecord, StorageSpec

# (name, share of households, low, high) for the mean daily peak-window kWh
TIERS = (
    ("low", 18, 9.1, 16.0),
    ("moderately_low", 18, 17.0, 21.0),
    ("moderate", 38, 22.0, 34.0),
    ("high", 4, 38.0, 42.0),
    ("very_high", 2, 66.0, 74.0),
)
CAPACITY_RANGE = (13.2, 98.6)
LAMBDA_B_RANGE = (0.067, 0.098)
DEFAULT_START = Date(2016, 1, 1)


@dataclass
class SyntheticData:
    records: list[HourlyLoadRecord]
    storage: dict[str, StorageSpec]
    tiers: dict[str, str]
    peak_means: dict[str, float]


def tier_counts(n: int) -> list[int]:
    """Split ``n`` households across tiers by largest remainder."""
    weights = np.array([t[1] for t in TIERS], dtype=float)
    exact = n * weights / weights.sum()
    counts = np.floor(exact).astype(int)
    for k in np.argsort(-(exact - counts), kind="stable")[: n - counts.sum()]:
        counts[k] += 1
    return counts.tolist()


def _hour_shape(rng: np.random.Generator) -> np.ndarray:
    """Relative hourly weights: overnight base, morning bump, evening bump."""
    hours = np.arange(24)
    morning = rng.uniform(6.0, 9.0)
    evening = rng.uniform(17.0, 21.0)
    w = (
        rng.uniform(0.3, 0.6)
        + rng.uniform(0.3, 1.0) * np.exp(-0.5 * ((hours - morning) / 1.5) ** 2)
        + rng.uniform(0.8, 2.0) * np.exp(-0.5 * ((hours - evening) / rng.uniform(1.5, 3.0)) ** 2)
    )
    return w


def generate_synthetic(
    households: int = 80,
    days: int = 365,
    seed: int = 42,
    start: Date = DEFAULT_START,
    peak_window: tuple[int, int] = DEFAULT_PEAK_WINDOW,
) -> SyntheticData:
    if households < 1 or days < 1:
        raise ValueError("need at least one household and one day")
    rng = np.random.default_rng(seed)
    p0, p1 = peak_window
    peak_hours = np.zeros(24, dtype=bool)
    peak_hours[p0:p1] = True

    tier_of = np.repeat(np.arange(len(TIERS)), tier_counts(households))
    rng.shuffle(tier_of)

    doy = np.array([(start + timedelta(d)).timetuple().tm_yday for d in range(days)])
    kwh = np.empty((households, days, 24))
    storage, tiers, means = {}, {}, {}
    for i in range(households):
        hid = str(i + 1)
        name, _, lo, hi = TIERS[tier_of[i]]
        peak_mean = rng.uniform(lo, hi)
        offpeak_mean = peak_mean * rng.uniform(0.45, 0.9)

        # hot-climate seasonality: summer cooling peak around late July
        season = 1.0 + rng.uniform(0.15, 0.4) * np.cos(2 * np.pi * (doy - 200) / 365.25)
        noise = rng.lognormal(0.0, 0.25, days)
        daily = season * noise
        daily /= daily.mean()

        shape = _hour_shape(rng)
        jitter = rng.lognormal(0.0, 0.3, (days, 24)) * shape
        peak_w = np.where(peak_hours, jitter, 0.0)
        off_w = np.where(peak_hours, 0.0, jitter)
        peak_w /= peak_w.sum(axis=1, keepdims=True)
        off_w /= off_w.sum(axis=1, keepdims=True)
        kwh[i] = (peak_mean * daily)[:, None] * peak_w + (offpeak_mean * daily)[:, None] * off_w

        capacity = float(np.clip(peak_mean * rng.uniform(0.6, 1.6), *CAPACITY_RANGE))
        storage[hid] = StorageSpec(round(capacity, 1), round(rng.uniform(*LAMBDA_B_RANGE), 4))
        tiers[hid] = name
        means[hid] = float(peak_mean)

    # meter resolution of 1 Wh; also makes CSV round trips exact
    kwh = np.round(kwh, 3)
    stamps = [datetime.combine(start + timedelta(d), datetime.min.time()) + timedelta(hours=h)
              for d in range(days) for h in range(24)]
    records = [
        HourlyLoadRecord(str(i + 1), ts, v)
        for i in range(households)
        for ts, v in zip(stamps, kwh[i].ravel().tolist())
    ]
    return SyntheticData(records, storage, tiers, means)
