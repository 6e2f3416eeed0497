"""The cost-sharing game over a community day.

The grand coalition cost J(N) is split by a closed-form allocation ``xi``.
Everything else here is verification: subadditivity on random disjoint
pairs and core membership by enumerating every coalition.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from .costs import coalition_cost, coalition_cost_batch, cost_net_metering
from .model import CommunityDay, aggregate, grand_coalition
from .tariff import Tariff
from .tolerance import leq, tol

DEFAULT_ENUM_CAP = 20


class Regime(str, Enum):
    # X_N >= B_N: storage cannot cover community peak demand; P2P clears at lambda_h
    DEFICIT = "X_N>=B_N"
    # X_N < B_N: pooled storage exceeds peak demand; P2P clears at mu_h
    SURPLUS = "X_N<B_N"


def regime_of(X_N: float, B_N: float) -> Regime:
    return Regime.DEFICIT if X_N >= B_N else Regime.SURPLUS


def community_regime(c: CommunityDay) -> Regime:
    v = grand_coalition(c)
    return regime_of(v.X_S, v.B_S)


@dataclass(frozen=True)
class Allocation:
    shares: dict[str, float]
    grand_cost: float
    regime: Regime

    def to_dict(self) -> dict[str, Any]:
        return {"shares": dict(self.shares), "grand_cost": self.grand_cost, "regime": self.regime.value}


@dataclass
class PropertyReport:
    name: str
    checked: int = 0
    violations: list[dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "checked": self.checked,
            "passed": self.passed,
            "violations": self.violations,
        }


@dataclass
class CoreReport:
    instance: dict[str, Any]
    num_coalitions_checked: int
    violations: list[tuple[tuple[str, ...], float]]
    max_excess: float
    gap_violations: list[tuple[tuple[str, ...], float]] = field(default_factory=list)
    max_gap_error: float = 0.0

    @property
    def in_core(self) -> bool:
        return not self.violations

    @property
    def passed(self) -> bool:
        return not self.violations and not self.gap_violations

    def to_dict(self) -> dict[str, Any]:
        return {
            "instance": self.instance,
            "num_coalitions_checked": self.num_coalitions_checked,
            "in_core": self.in_core,
            "max_excess": self.max_excess,
            "violations": [{"coalition": list(m), "excess": e} for m, e in self.violations],
            "max_gap_error": self.max_gap_error,
            "gap_violations": [{"coalition": list(m), "error": e} for m, e in self.gap_violations],
        }


def _require_households(c: CommunityDay) -> None:
    if len(c) == 0:
        raise ValueError("community has no households")


def allocate(c: CommunityDay, t: Tariff) -> Allocation:
    _require_households(c)
    grand = grand_coalition(c)
    regime = regime_of(grand.X_S, grand.B_S)
    shares = {}
    for h in c.households:
        if regime is Regime.DEFICIT:
            # every kWh of peak shortfall or surplus valued at lambda_h
            peak = t.lambda_h * (h.X - h.B)
        else:
            peak = -t.mu_h * (h.B - h.X)
        shares[h.id] = h.capital + peak + t.lambda_l * (h.Y + h.B)
    return Allocation(shares, coalition_cost(grand, t).total, regime)


def individual_savings(c: CommunityDay, t: Tariff) -> dict[str, float]:
    """G_i = J(i) - xi_i, in closed form.

    Only the side that is scarce in the community gains: sellers when the
    community is short of storage, buyers when it has storage to spare.
    """
    _require_households(c)
    regime = community_regime(c)
    if regime is Regime.DEFICIT:
        return {h.id: t.spread * h.excess for h in c.households}
    return {h.id: t.spread * h.deficit for h in c.households}


def individual_costs(c: CommunityDay, t: Tariff) -> dict[str, float]:
    """J(i) for every household."""
    return {h.id: cost_net_metering(h, t).total for h in c.households}


def _subadditivity_case(XS, BS, XT, BT) -> str:
    s_short, t_short = XS >= BS, XT >= BT
    if s_short and t_short:
        return "i"
    if not s_short and not t_short:
        return "iv"
    return "ii" if XS + XT >= BS + BT else "iii"


def check_subadditivity(
    c: CommunityDay, t: Tariff, trials: int = 1000, seed: int | None = None
) -> PropertyReport:
    """Draw random disjoint non-empty S, T and check J(S u T) <= J(S) + J(T)."""
    n = len(c)
    if n < 2:
        raise ValueError("subadditivity needs at least two households")
    rng = random.Random(seed)
    ids = c.ids
    report = PropertyReport("subadditivity")
    for _ in range(trials):
        first, second = rng.sample(range(n), 2)
        labels = [rng.randrange(3) for _ in range(n)]
        labels[first], labels[second] = 1, 2
        S = [ids[k] for k in range(n) if labels[k] == 1]
        T = [ids[k] for k in range(n) if labels[k] == 2]
        vs, vt = aggregate(c, S), aggregate(c, T)
        j_s, j_t = coalition_cost(vs, t).total, coalition_cost(vt, t).total
        j_st = coalition_cost(aggregate(c, S + T), t).total
        report.checked += 1
        if not leq(j_st, j_s + j_t, j_s, j_t):
            report.violations.append(
                {
                    "S": S,
                    "T": T,
                    "J_union": j_st,
                    "J_S_plus_J_T": j_s + j_t,
                    "case": _subadditivity_case(vs.X_S, vs.B_S, vt.X_S, vt.B_S),
                }
            )
    return report


class EnumerationCapError(ValueError):
    pass


def _subset_sums(values: np.ndarray) -> np.ndarray:
    """Sums over all 2^n subsets, indexed by bitmask.

    Built by doubling: the block for masks with top bit k is the previous
    block plus values[k], so each subset costs one addition and members are
    summed in ascending index order.
    """
    out = np.zeros(1 << len(values))
    for k, v in enumerate(values):
        half = 1 << k
        out[half : 2 * half] = out[:half] + v
    return out


def check_core(
    c: CommunityDay,
    t: Tariff,
    *,
    enum_cap: int = DEFAULT_ENUM_CAP,
    samples: int | None = None,
    seed: int | None = None,
    allocation: Allocation | None = None,
) -> CoreReport:
    """Check xi_S <= J(S) for every coalition S, plus the closed-form gap.

    Exhaustive over all 2^N - 1 coalitions when N <= ``enum_cap``. Larger
    communities need ``samples``: that many random coalitions are checked in
    addition to every singleton and the grand coalition.
    """
    _require_households(c)
    alloc = allocation or allocate(c, t)
    hh = c.households
    n = len(hh)
    X = np.array([h.X for h in hh])
    Y = np.array([h.Y for h in hh])
    B = np.array([h.B for h in hh])
    cap = np.array([h.capital for h in hh])
    xi = np.array([alloc.shares[h.id] for h in hh])

    if samples is None:
        if n > enum_cap:
            raise EnumerationCapError(
                f"{n} households exceeds the enumeration cap of {enum_cap}; "
                "use sampled mode (samples=...) or raise the cap"
            )
        mode = "exhaustive"
        XS, YS, BS, capS, xiS = (_subset_sums(a)[1:] for a in (X, Y, B, cap, xi))
        masks = np.arange(1, 1 << n, dtype=np.int64)

        def members(k: int) -> tuple[str, ...]:
            return c.members_of(int(masks[k]))

    else:
        mode = "sampled"
        rng = np.random.default_rng(seed)
        drawn = rng.random((samples, n)) < 0.5
        picks = np.vstack([np.eye(n, dtype=bool), np.ones((1, n), dtype=bool), drawn])
        picks = picks[picks.any(axis=1)]
        XS, YS, BS, capS, xiS = (picks @ a for a in (X, Y, B, cap, xi))

        def members(k: int) -> tuple[str, ...]:
            return tuple(h.id for h, on in zip(hh, picks[k]) if on)

    J = coalition_cost_batch(XS, YS, BS, capS, t)
    excess = xiS - J
    scale = np.maximum(np.abs(J), np.abs(xiS))
    tolerance = np.maximum(1e-9 * scale, 1e-12)
    bad = np.flatnonzero(excess > tolerance)

    if alloc.regime is Regime.DEFICIT:
        expected_gap = t.spread * np.maximum(BS - XS, 0.0)
    else:
        expected_gap = t.spread * np.maximum(XS - BS, 0.0)
    gap_err = np.abs((J - xiS) - expected_gap)
    bad_gap = np.flatnonzero(gap_err > tolerance)

    return CoreReport(
        instance={
            "date": c.date.isoformat() if c.date else None,
            "households": n,
            "regime": alloc.regime.value,
            "mode": mode,
        },
        num_coalitions_checked=int(len(J)),
        violations=[(members(int(k)), float(excess[k])) for k in bad],
        max_excess=float(excess.max()),
        gap_violations=[(members(int(k)), float(gap_err[k])) for k in bad_gap],
        max_gap_error=float(gap_err.max()),
    )


def check_imputation(c: CommunityDay, t: Tariff, alloc: Allocation | None = None) -> PropertyReport:
    """Budget balance and individual rationality of the allocation."""
    alloc = alloc or allocate(c, t)
    report = PropertyReport("imputation")
    total = sum(alloc.shares.values())
    report.checked += 1
    scale = max(abs(v) for v in alloc.shares.values())
    if abs(total - alloc.grand_cost) > tol(total, alloc.grand_cost, scale):
        report.violations.append({"check": "budget_balance", "sum_xi": total, "J_N": alloc.grand_cost})
    for hid, j_i in individual_costs(c, t).items():
        report.checked += 1
        if not leq(alloc.shares[hid], j_i):
            report.violations.append({"check": "individual_rationality", "id": hid, "xi": alloc.shares[hid], "J_i": j_i})
    return report
