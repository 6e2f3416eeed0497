"""Households, community days and coalition aggregates."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from datetime import date as Date
from typing import Iterable, Sequence


def id_sort_key(hid: str) -> tuple:
    # numeric ids ("26", "77", "171") sort numerically, everything else after
    return (0, int(hid), hid) if hid.isdigit() else (1, 0, hid)


def _check_quantity(name: str, value: float, hid: str) -> None:
    if not math.isfinite(value) or value < 0:
        raise ValueError(f"household {hid}: {name} must be finite and >= 0, got {value!r}")


@dataclass(frozen=True)
class HouseholdDay:
    """One household's daily two-period position.

    ``X``/``Y`` are peak and off-peak consumption (kWh), ``B`` the storage
    capacity (kWh) and ``lambda_b`` the amortized daily storage cost per kWh
    of capacity.
    """

    id: str
    X: float
    Y: float
    B: float
    lambda_b: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "id", str(self.id))
        for name in ("X", "Y", "B", "lambda_b"):
            value = float(getattr(self, name))
            _check_quantity(name, value, self.id)
            object.__setattr__(self, name, value)

    @property
    def capital(self) -> float:
        return self.lambda_b * self.B

    @property
    def excess(self) -> float:
        """E_i: stored energy left after covering own peak demand."""
        return max(self.B - self.X, 0.0)

    @property
    def deficit(self) -> float:
        """D_i: peak demand not covered by own storage."""
        return max(self.X - self.B, 0.0)


@dataclass(frozen=True)
class CoalitionView:
    members: tuple[str, ...]
    X_S: float
    Y_S: float
    B_S: float
    capital_S: float

    def __post_init__(self):
        if not self.members:
            raise ValueError("coalition must have at least one member")
        if len(set(self.members)) != len(self.members):
            raise ValueError("coalition has duplicate members")

    def scaled(self, alpha: float) -> "CoalitionView":
        """Same members, all aggregates multiplied by ``alpha``."""
        return CoalitionView(
            self.members,
            alpha * self.X_S,
            alpha * self.Y_S,
            alpha * self.B_S,
            alpha * self.capital_S,
        )


@dataclass(frozen=True)
class CommunityDay:
    """The grand coalition on one calendar day.

    Households are stored in ascending-id order regardless of input order,
    which fixes summation order everywhere downstream.
    """

    date: Date | None
    households: tuple[HouseholdDay, ...] = field(default_factory=tuple)

    def __post_init__(self):
        hh = tuple(sorted(self.households, key=lambda h: id_sort_key(h.id)))
        if not hh:
            raise ValueError("community day has no households")
        dupes = sorted((i for i, n in Counter(h.id for h in hh).items() if n > 1), key=id_sort_key)
        if dupes:
            raise ValueError(f"duplicate household ids: {', '.join(dupes)}")
        object.__setattr__(self, "households", hh)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(h.id for h in self.households)

    def __len__(self) -> int:
        return len(self.households)

    def by_id(self) -> dict[str, HouseholdDay]:
        return {h.id: h for h in self.households}

    def members_of(self, mask: int) -> tuple[str, ...]:
        """Ids for a bitmask where bit k is the k-th household in id order."""
        return tuple(h.id for k, h in enumerate(self.households) if mask >> k & 1)

    def mask_of(self, members: Iterable[str]) -> int:
        index = {h.id: k for k, h in enumerate(self.households)}
        mask = 0
        for m in members:
            mask |= 1 << index[str(m)]
        return mask


def aggregate(c: CommunityDay, members: Iterable[str]) -> CoalitionView:
    wanted = {str(m) for m in members}
    if not wanted:
        raise ValueError("cannot aggregate an empty coalition")
    known = set(c.ids)
    unknown = sorted(wanted - known, key=id_sort_key)
    if unknown:
        raise KeyError(f"unknown household id(s): {', '.join(unknown)}")
    chosen: Sequence[HouseholdDay] = [h for h in c.households if h.id in wanted]
    X = Y = B = cap = 0.0
    for h in chosen:
        X += h.X
        Y += h.Y
        B += h.B
        cap += h.capital
    return CoalitionView(tuple(h.id for h in chosen), X, Y, B, cap)


def grand_coalition(c: CommunityDay) -> CoalitionView:
    return aggregate(c, c.ids)


def singleton(h: HouseholdDay) -> CoalitionView:
    return CoalitionView((h.id,), h.X, h.Y, h.B, h.capital)


def community_from_dict(data: dict) -> CommunityDay:
    """``{"date": "2016-03-18" | null, "households": [{"id", "X", "Y", "B", "lambda_b"}]}``"""
    day = data.get("date")
    rows = data.get("households")
    if not isinstance(rows, list):
        raise ValueError("community JSON needs a 'households' list")
    households = []
    for k, row in enumerate(rows):
        try:
            households.append(HouseholdDay(str(row["id"]), row["X"], row["Y"], row["B"], row.get("lambda_b", 0.0)))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"household entry {k}: {exc!r}") from None
    return CommunityDay(Date.fromisoformat(day) if day else None, tuple(households))


def community_to_dict(c: CommunityDay) -> dict:
    return {
        "date": c.date.isoformat() if c.date else None,
        "households": [
            {"id": h.id, "X": h.X, "Y": h.Y, "B": h.B, "lambda_b": h.lambda_b} for h in c.households
        ],
    }
