"""Two-period time-of-use tariff with net-metering sell prices."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path


class Violation(str, Enum):
    NON_FINITE = "non_finite_price"
    NEGATIVE = "negative_price"
    PEAK_BUY_BELOW_PEAK_SELL = "lambda_h>=mu_h"
    OFFPEAK_BUY_BELOW_OFFPEAK_SELL = "lambda_l>=mu_l"
    PEAK_SELL_BELOW_OFFPEAK_BUY = "mu_h>=lambda_l"


@dataclass(frozen=True)
class Tariff:
    """Grid prices in currency per kWh (0.54, not 54 cents).

    ``mu_l`` enters no cost formula; it is kept so the full ordering
    ``lambda_h >= mu_h >= lambda_l >= mu_l`` can be validated.
    """

    lambda_h: float
    lambda_l: float
    mu_h: float
    mu_l: float

    @property
    def spread(self) -> float:
        """Peak buy/sell spread, the per-kWh value of a P2P trade."""
        return self.lambda_h - self.mu_h

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


TARIFF_KEYS = ("lambda_h", "lambda_l", "mu_h", "mu_l")

# Austin case-study prices: 54/22 c buy, 30/13 c sell.
CASE_STUDY_TARIFF = Tariff(lambda_h=0.54, lambda_l=0.22, mu_h=0.30, mu_l=0.13)


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v.value for v in self.violations]}


def validate_tariff(t: Tariff) -> ValidationResult:
    prices = [t.lambda_h, t.lambda_l, t.mu_h, t.mu_l]
    found: list[Violation] = []
    if not all(math.isfinite(p) for p in prices):
        # ordering comparisons are meaningless with NaN/inf
        return ValidationResult((Violation.NON_FINITE,))
    if any(p < 0 for p in prices):
        found.append(Violation.NEGATIVE)
    if t.lambda_h < t.mu_h:
        found.append(Violation.PEAK_BUY_BELOW_PEAK_SELL)
    if t.lambda_l < t.mu_l:
        found.append(Violation.OFFPEAK_BUY_BELOW_OFFPEAK_SELL)
    if t.mu_h < t.lambda_l:
        found.append(Violation.PEAK_SELL_BELOW_OFFPEAK_BUY)
    return ValidationResult(tuple(found))


class TariffError(ValueError):
    """Tariff config could not be parsed or failed validation."""


def tariff_from_dict(data: dict) -> Tariff:
    if not isinstance(data, dict):
        raise TariffError("tariff config must be a JSON object")
    keys = set(data)
    unknown = sorted(keys - set(TARIFF_KEYS))
    missing = [k for k in TARIFF_KEYS if k not in keys]
    if unknown:
        raise TariffError(f"unknown tariff keys: {', '.join(unknown)}")
    if missing:
        raise TariffError(f"missing tariff keys: {', '.join(missing)}")
    values = {}
    for k in TARIFF_KEYS:
        v = data[k]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise TariffError(f"{k} must be a number, got {v!r}")
        values[k] = float(v)
    return Tariff(**values)


def load_tariff(path: str | Path) -> Tariff:
    """Read a tariff JSON file. Parsing only; call validate_tariff separately."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise TariffError(f"{path}: invalid JSON ({exc})") from exc
    return tariff_from_dict(data)
