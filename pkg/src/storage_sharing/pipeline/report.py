"""Write an AnnualReport as CSV files and a JSON bundle."""
from __future__ import annotations

import csv
import json
from pathlib import Path

from ..settlement import LEDGER_CSV_HEADER, write_ledger_csv
from .simulate import AnnualReport

SUMMARY_FILE = "summary.csv"
HOUSEHOLDS_FILE = "households.csv"
DAYS_FILE = "days.csv"
LEDGER_FILE = "ledger.csv"
BUNDLE_FILE = "report.json"

HOUSEHOLD_HEADER = ["id", "cost_without_storage", "cost_with_storage", "cost_with_sharing",
                    "savings", "percent_savings"]
DAY_HEADER = ["date", "regime", "X_N", "B_N", "total_excess", "total_deficit", "p2p_kwh",
              "grid_kwh", "savings", "grand_cost", "sum_individual_costs"]


def _f(x: float) -> str:
    return f"{x:.6f}"


def summary_table(report: AnnualReport) -> list[list[str]]:
    return [[name, _f(value)] for name, value in report.summary_rows()]


def household_table(report: AnnualReport) -> list[list[str]]:
    return [
        [h.id] + [_f(v) for v in (h.without_storage, h.with_storage, h.with_sharing,
                                  h.savings, h.percent_savings)]
        for h in report.households
    ]


def day_table(report: AnnualReport) -> list[list[str]]:
    return [
        [d.date.isoformat(), d.regime.value]
        + [_f(v) for v in (d.X_N, d.B_N, d.total_excess, d.total_deficit, d.p2p_kwh,
                           d.grid_kwh, d.savings, d.grand_cost, d.sum_individual_costs)]
        for d in report.days
    ]


_TEXT_COLUMNS = {"id", "date", "regime", "metric"}


def _records(header: list[str], rows: list[list[str]]) -> list[dict]:
    # numbers in the bundle are the CSV's 6-decimal values, parsed back
    return [{k: v if k in _TEXT_COLUMNS else float(v) for k, v in zip(header, r)} for r in rows]


def _write(path: Path, header: list[str], rows: list[list[str]]) -> Path:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def emit_report(report: AnnualReport, out_dir: str | Path, formats=("csv", "json")) -> list[Path]:
    """Write the report into ``out_dir``; returns the paths written.

    The summary has one row per headline figure (without storage, with
    storage, with sharing, savings, percent savings). Floats are printed
    with six decimals; the JSON bundle carries the same rounded values.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create report directory {out}: {exc}") from exc
    written: list[Path] = []
    summary, households, days = summary_table(report), household_table(report), day_table(report)
    if "csv" in formats:
        written.append(_write(out / SUMMARY_FILE, ["metric", "value"], summary))
        written.append(_write(out / HOUSEHOLDS_FILE, HOUSEHOLD_HEADER, households))
        written.append(_write(out / DAYS_FILE, DAY_HEADER, days))
        with (out / LEDGER_FILE).open("w", newline="") as fh:
            write_ledger_csv(report.ledgers, fh)
        written.append(out / LEDGER_FILE)
    if "json" in formats:
        ledger_rows = [row for ledger in report.ledgers for row in ledger.csv_rows()]
        bundle = {
            "summary": {name: float(value) for name, value in summary},
            "households": _records(HOUSEHOLD_HEADER, households),
            "days": _records(DAY_HEADER, days),
            "ledger": _records(LEDGER_CSV_HEADER, ledger_rows),
            "violations": report.violations,
        }
        path = out / BUNDLE_FILE
        path.write_text(json.dumps(bundle, indent=1, default=str) + "\n")
        written.append(path)
    return written
