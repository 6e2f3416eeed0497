"""Hourly load and storage-capacity CSV files."""
from __future__ import annotations

import csv
import logging
import math
import warnings
from collections import defaultdict
from dataclasses import dataclass
from datetime import date as Date
from datetime import datetime
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from ..model import id_sort_key

log = logging.getLogger(__name__)

LOADS_HEADER = ["household_id", "timestamp", "kwh"]
CAPACITIES_HEADER = ["household_id", "capacity_kwh", "lambda_b"]
DEFAULT_PEAK_WINDOW = (8, 22)


class DataError(ValueError):
    """Input data is malformed or incomplete."""


class MissingHoursWarning(UserWarning):
    pass


class HourlyLoadRecord(NamedTuple):
    household_id: str
    timestamp: datetime
    kwh: float


@dataclass(frozen=True)
class StorageSpec:
    capacity_kwh: float
    lambda_b: float


def _parse_nonneg(text: str, what: str, where: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DataError(f"{where}: {what} is not a number: {text!r}") from None
    if not math.isfinite(value):
        raise DataError(f"{where}: {what} is not finite: {text!r}")
    if value < 0:
        raise DataError(f"{where}: negative {what}: {text!r}")
    return value


def _hour_key(ts: datetime) -> int:
    return ts.date().toordinal() * 24 + ts.hour


def ingest_csv(path: str | Path) -> list[HourlyLoadRecord]:
    """Read ``household_id,timestamp,kwh`` rows.

    Duplicate (household, hour) pairs, malformed rows and negative readings
    raise :class:`DataError`. Hours missing inside the file's date span are
    reported with a :class:`MissingHoursWarning`, not an error; whether they
    are fatal is decided at simulation time.
    """
    path = Path(path)
    records: list[HourlyLoadRecord] = []
    seen: dict[str, set[int]] = defaultdict(set)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != LOADS_HEADER:
            raise DataError(f"{path}: expected header {','.join(LOADS_HEADER)}, got {header!r}")
        for row in reader:
            where = f"{path}:{reader.line_num}"
            if not row:
                continue
            if len(row) != 3:
                raise DataError(f"{where}: expected 3 fields, got {len(row)}")
            hid, stamp, kwh = (f.strip() for f in row)
            if not hid:
                raise DataError(f"{where}: empty household_id")
            try:
                ts = datetime.fromisoformat(stamp)
            except ValueError:
                raise DataError(f"{where}: bad timestamp {stamp!r}") from None
            if ts.minute or ts.second or ts.microsecond:
                raise DataError(f"{where}: timestamp {stamp!r} is not on the hour")
            value = _parse_nonneg(kwh, "kwh", where)
            key = _hour_key(ts)
            if key in seen[hid]:
                raise DataError(f"{where}: duplicate reading for household {hid} at {ts.isoformat()}")
            seen[hid].add(key)
            records.append(HourlyLoadRecord(hid, ts, value))

    missing = find_missing_hours(seen)
    if missing:
        shown = ", ".join(f"({h}, {d.isoformat()}, {hr:02d})" for h, d, hr in missing[:10])
        more = f" and {len(missing) - 10} more" if len(missing) > 10 else ""
        warnings.warn(f"{path}: {len(missing)} missing hourly readings: {shown}{more}", MissingHoursWarning)
    s = load_summary(records)
    log.info("read %d rows, %d households, %d days from %s", s["rows"], s["households"], s["days"], path)
    return records


def find_missing_hours(seen: dict[str, set[int]]) -> list[tuple[str, Date, int]]:
    """(household, day, hour) triples absent within the overall date span."""
    if not seen:
        return []
    first = min(min(keys) for keys in seen.values() if keys) // 24
    last = max(max(keys) for keys in seen.values() if keys) // 24
    expected = range(first * 24, (last + 1) * 24)
    out = []
    for hid in sorted(seen, key=id_sort_key):
        have = seen[hid]
        if len(have) == len(expected):
            continue
        out.extend((hid, Date.fromordinal(k // 24), k % 24) for k in expected if k not in have)
    return out


def load_summary(records: Sequence[HourlyLoadRecord]) -> dict[str, int]:
    return {
        "rows": len(records),
        "households": len({r.household_id for r in records}),
        "days": len({r.timestamp.date() for r in records}),
    }


def write_loads_csv(records: Iterable[HourlyLoadRecord], path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(LOADS_HEADER)
        for r in records:
            w.writerow([r.household_id, r.timestamp.isoformat(), f"{r.kwh:.6f}"])
    return path


def read_capacities_csv(path: str | Path) -> dict[str, StorageSpec]:
    path = Path(path)
    out: dict[str, StorageSpec] = {}
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != CAPACITIES_HEADER:
            raise DataError(f"{path}: expected header {','.join(CAPACITIES_HEADER)}, got {header!r}")
        for row in reader:
            where = f"{path}:{reader.line_num}"
            if not row:
                continue
            if len(row) != 3:
                raise DataError(f"{where}: expected 3 fields, got {len(row)}")
            hid = row[0].strip()
            if hid in out:
                raise DataError(f"{where}: duplicate household {hid}")
            out[hid] = StorageSpec(
                _parse_nonneg(row[1], "capacity_kwh", where),
                _parse_nonneg(row[2], "lambda_b", where),
            )
    return out


def write_capacities_csv(storage: dict[str, StorageSpec], path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CAPACITIES_HEADER)
        for hid in sorted(storage, key=id_sort_key):
            s = storage[hid]
            w.writerow([hid, f"{s.capacity_kwh:.6f}", f"{s.lambda_b:.6f}"])
    return path


def parse_peak_window(text: str) -> tuple[int, int]:
    """``"8:22"`` -> (8, 22)."""
    try:
        start, end = (int(part) for part in text.split(":"))
    except ValueError:
        raise ValueError(f"peak window must look like START:END, got {text!r}") from None
    check_peak_window((start, end))
    return start, end


def check_peak_window(window: tuple[int, int]) -> None:
    start, end = window
    if not 0 <= start < end <= 24:
        raise ValueError(f"peak window needs 0 <= start < end <= 24, got {start}:{end}")


def _fill(hours: np.ndarray, fill_missing: bool, what: str) -> np.ndarray:
    gaps = np.isnan(hours)
    if gaps.any():
        where = ", ".join(str(h) for h in np.flatnonzero(gaps.reshape(-1, 24).any(axis=0)))
        if not fill_missing:
            raise DataError(f"{what}: missing hour(s) {where}")
        warnings.warn(f"{what}: missing hour(s) {where} filled with 0", MissingHoursWarning)
        hours = np.where(gaps, 0.0, hours)
    return hours


def split_profile(hours: np.ndarray, peak_window=DEFAULT_PEAK_WINDOW) -> tuple[np.ndarray, np.ndarray]:
    """Peak/off-peak totals for hourly profiles shaped (..., 24)."""
    start, end = peak_window
    X = hours[..., start:end].sum(axis=-1)
    Y = hours[..., :start].sum(axis=-1) + hours[..., end:].sum(axis=-1)
    return X, Y


def split_day(
    records: Iterable[HourlyLoadRecord],
    peak_window: tuple[int, int] = DEFAULT_PEAK_WINDOW,
    fill_missing: bool = False,
) -> tuple[float, float]:
    """(X, Y) for one household's calendar day.

    Off-peak is hours [0, start) and [end, 24) of the same date; the night
    spanning midnight is split between two calendar days.
    """
    check_peak_window(peak_window)
    hours = np.full(24, np.nan)
    owner = None
    for r in records:
        key = (r.household_id, r.timestamp.date())
        if owner is None:
            owner = key
        elif key != owner:
            raise DataError(f"split_day got records for {owner} and {key}")
        hours[r.timestamp.hour] = r.kwh
    if owner is None:
        raise DataError("split_day got no records")
    hours = _fill(hours, fill_missing, f"household {owner[0]} on {owner[1].isoformat()}")
    X, Y = split_profile(hours, peak_window)
    return float(X), float(Y)


@dataclass
class LoadTable:
    """Hourly loads as a dense (household, day, hour) array; gaps are NaN."""

    ids: list[str]
    dates: list[Date]
    kwh: np.ndarray

    @classmethod
    def from_records(cls, records: Iterable[HourlyLoadRecord]) -> "LoadTable":
        rows = list(records)
        ids = sorted({r.household_id for r in rows}, key=id_sort_key)
        if not rows:
            return cls([], [], np.zeros((0, 0, 24)))
        ordinals = [r.timestamp.date().toordinal() for r in rows]
        first, last = min(ordinals), max(ordinals)
        dates = [Date.fromordinal(o) for o in range(first, last + 1)]
        index = {hid: k for k, hid in enumerate(ids)}
        kwh = np.full((len(ids), len(dates), 24), np.nan)
        hi = np.fromiter((index[r.household_id] for r in rows), dtype=np.int64, count=len(rows))
        di = np.asarray(ordinals, dtype=np.int64) - first
        hr = np.fromiter((r.timestamp.hour for r in rows), dtype=np.int64, count=len(rows))
        kwh[hi, di, hr] = np.fromiter((r.kwh for r in rows), dtype=float, count=len(rows))
        return cls(ids, dates, kwh)

    def peak_offpeak(self, peak_window=DEFAULT_PEAK_WINDOW, fill_missing: bool = False):
        """X and Y arrays shaped (household, day)."""
        check_peak_window(peak_window)
        hours = self.kwh
        if np.isnan(hours).any():
            bad = np.argwhere(np.isnan(hours).any(axis=2))
            sample = ", ".join(f"({self.ids[h]}, {self.dates[d].isoformat()})" for h, d in bad[:5])
            hours = _fill(hours, fill_missing, f"{len(bad)} household-days incl. {sample}")
        return split_profile(hours, peak_window)
