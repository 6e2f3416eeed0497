"""Random instance generators and independent reference evaluators.

The oracles here are written from the formulas directly, with explicit
branches and math.fsum, and share no code with the package.
"""
from __future__ import annotations

import math
import random

from storage_sharing import CommunityDay, HouseholdDay, Tariff


def random_tariff(rng: random.Random) -> Tariff:
    """Valid tariff: lambda_h >= mu_h >= lambda_l >= mu_l >= 0, ties included."""
    if rng.random() < 0.1:
        v = round(rng.uniform(0, 1), 2)
        prices = [v, v, v, v]
    else:
        prices = sorted((rng.uniform(0.0, 1.0) for _ in range(4)), reverse=True)
    lam_h, mu_h, lam_l, mu_l = prices
    return Tariff(lambda_h=lam_h, lambda_l=lam_l, mu_h=mu_h, mu_l=mu_l)


def random_household(rng: random.Random, hid) -> HouseholdDay:
    B = 0.0 if rng.random() < 0.1 else rng.uniform(0, 100)
    roll = rng.random()
    if roll < 0.1:
        X = B  # exact boundary
    elif roll < 0.15:
        X = 0.0
    else:
        X = rng.uniform(0, 120)
    return HouseholdDay(str(hid), X, rng.uniform(0, 60), B, rng.uniform(0, 0.15))


def random_community(rng: random.Random, n: int) -> CommunityDay:
    return CommunityDay(None, tuple(random_household(rng, k + 1) for k in range(n)))


def oracle_aggregate(households):
    hs = list(households)
    return (
        math.fsum(h.X for h in hs),
        math.fsum(h.Y for h in hs),
        math.fsum(h.B for h in hs),
        math.fsum(h.lambda_b * h.B for h in hs),
    )


def oracle_coalition_cost(households, t: Tariff) -> float:
    X, Y, B, cap = oracle_aggregate(households)
    if X >= B:
        return cap + t.lambda_h * (X - B) + t.lambda_l * (Y + B)
    return cap - t.mu_h * (B - X) + t.lambda_l * (Y + B)


def rel_close(a: float, b: float, *scale: float, rel: float = 1e-9, abs_tol: float = 1e-12) -> bool:
    m = max([abs(a), abs(b), *map(abs, scale)])
    return abs(a - b) <= max(rel * m, abs_tol)


# PASS/FAIL lines from the acceptance suite, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []
