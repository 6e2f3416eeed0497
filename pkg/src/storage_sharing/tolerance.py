"""Absolute-plus-relative tolerance used by every game inequality."""
from __future__ import annotations

REL_TOL = 1e-9
ABS_TOL = 1e-12


def tol(*values: float, rel: float = REL_TOL, abs_floor: float = ABS_TOL) -> float:
    scale = max((abs(v) for v in values), default=0.0)
    return max(rel * scale, abs_floor)


def close(a: float, b: float, *scale: float) -> bool:
    return abs(a - b) <= tol(a, b, *scale)


def leq(a: float, b: float, *scale: float) -> bool:
    """a <= b up to tolerance."""
    return a <= b + tol(a, b, *scale)
