"""Command-line entry point.

Exit codes: 0 success, 1 tariff validation failure, 2 data error,
3 an invariant was violated (allocation outside the core, ledger mismatch...).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import date as Date
from pathlib import Path

from .game import EnumerationCapError, allocate, check_core, individual_costs
from .model import community_from_dict
from .pipeline.loads import (
    DataError,
    LoadTable,
    ingest_csv,
    parse_peak_window,
    read_capacities_csv,
    write_capacities_csv,
    write_loads_csv,
)
from .pipeline.report import emit_report
from .pipeline.simulate import SimulationConfig, community_days, simulate
from .pipeline.synthetic import DEFAULT_START, generate_synthetic
from .settlement import check_ledger, ledger_csv, savings_consistency, settle_day
from .tariff import CASE_STUDY_TARIFF, TariffError, load_tariff, validate_tariff

EXIT_OK, EXIT_INVALID, EXIT_DATA, EXIT_VIOLATION = 0, 1, 2, 3

log = logging.getLogger("storage_sharing")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, default=str))


def _tariff(args):
    try:
        t = load_tariff(args.tariff)
    except (OSError, TariffError) as exc:
        raise CliError(str(exc), EXIT_INVALID) from exc
    result = validate_tariff(t)
    if not result:
        raise CliError(f"invalid tariff {args.tariff}: {', '.join(v.value for v in result.violations)}",
                       EXIT_INVALID)
    return t


def _config(args, tariff, storage, **extra) -> SimulationConfig:
    return SimulationConfig(
        tariff=tariff,
        households=storage,
        peak_window=args.peak_window,
        enum_cap=args.enum_cap,
        seed=args.seed,
        fill_missing=args.fill_missing,
        **extra,
    )


def _load_inputs(args):
    if not args.loads or not args.capacities:
        raise CliError("--loads and --capacities are required", EXIT_DATA)
    try:
        records = ingest_csv(args.loads)
        storage = read_capacities_csv(args.capacities)
    except OSError as exc:
        raise CliError(str(exc), EXIT_DATA) from exc
    return records, storage


def _community(args, tariff):
    """The day to examine: from --community JSON, or --date within --loads."""
    if args.community:
        try:
            return community_from_dict(json.loads(Path(args.community).read_text()))
        except (OSError, ValueError) as exc:
            raise CliError(f"{args.community}: {exc}", EXIT_DATA) from exc
    if not args.date:
        raise CliError("give either --community or --date with --loads/--capacities", EXIT_DATA)
    records, storage = _load_inputs(args)
    day = Date.fromisoformat(args.date)
    config = _config(args, tariff, storage, start=day, end=day)
    return next(iter(community_days(LoadTable.from_records(records), config)))


def cmd_validate_tariff(args) -> int:
    try:
        t = load_tariff(args.tariff)
    except (OSError, TariffError) as exc:
        _emit({"ok": False, "error": str(exc)})
        return EXIT_INVALID
    result = validate_tariff(t)
    _emit({"tariff": t.to_dict(), **result.to_dict()})
    return EXIT_OK if result.ok else EXIT_INVALID


def cmd_gen_data(args) -> int:
    if not args.out:
        raise CliError("--out is required", EXIT_DATA)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    data = generate_synthetic(args.households, args.days, args.seed,
                              Date.fromisoformat(args.start), args.peak_window)
    write_loads_csv(data.records, out / "loads.csv")
    write_capacities_csv(data.storage, out / "capacities.csv")
    (out / "tariff.json").write_text(json.dumps(CASE_STUDY_TARIFF.to_dict(), indent=2) + "\n")
    _emit({"loads": str(out / "loads.csv"), "capacities": str(out / "capacities.csv"),
           "tariff": str(out / "tariff.json"), "rows": len(data.records)})
    return EXIT_OK


def cmd_simulate(args) -> int:
    tariff = _tariff(args)
    records, storage = _load_inputs(args)
    config = _config(
        args, tariff, storage,
        start=Date.fromisoformat(args.start) if args.start else None,
        end=Date.fromisoformat(args.end) if args.end else None,
    )
    report = simulate(records, config, verify=not args.no_verify)
    if args.out:
        for path in emit_report(report, args.out):
            log.info("wrote %s", path)
    _emit({name: round(value, 6) for name, value in report.summary_rows()}
          | {"days": len(report.days), "violations": len(report.violations)})
    return EXIT_VIOLATION if report.violations else EXIT_OK


def cmd_core_check(args) -> int:
    tariff = _tariff(args)
    c = _community(args, tariff)
    try:
        report = check_core(c, tariff, enum_cap=args.enum_cap, samples=args.samples, seed=args.seed)
    except EnumerationCapError as exc:
        raise CliError(f"{exc} (pass --samples N)", EXIT_DATA) from exc
    payload = report.to_dict()
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        (Path(args.out) / "core_report.json").write_text(json.dumps(payload, indent=2) + "\n")
    _emit(payload)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_settle_day(args) -> int:
    tariff = _tariff(args)
    c = _community(args, tariff)
    ledger = settle_day(c, tariff)
    checks = [check_ledger(ledger, c, tariff),
              savings_consistency(ledger, allocate(c, tariff), individual_costs(c, tariff))]
    payload = ledger.to_dict() | {"checks": [r.to_dict() for r in checks]}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "ledger.json").write_text(json.dumps(payload, indent=2, default=str) + "\n")
        (out / "ledger.csv").write_text(ledger_csv(ledger))
    _emit(payload)
    return EXIT_OK if all(r.passed for r in checks) else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tariff", type=Path, help="tariff JSON (lambda_h, lambda_l, mu_h, mu_l)")
    common.add_argument("--loads", type=Path, help="hourly loads CSV: household_id,timestamp,kwh")
    common.add_argument("--capacities", type=Path, help="storage CSV: household_id,capacity_kwh,lambda_b")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--peak-window", type=parse_peak_window, default=(8, 22), metavar="START:END")
    common.add_argument("--enum-cap", type=int, default=20, help="max households for exhaustive core checks")
    common.add_argument("--fill-missing", action="store_true", help="treat missing hours as 0 kWh")
    common.add_argument("-v", "--verbose", action="store_true")

    day = argparse.ArgumentParser(add_help=False)
    day.add_argument("--community", type=Path, help="community-day JSON instead of --loads/--date")
    day.add_argument("--date", help="ISO date to pick from --loads")

    parser = argparse.ArgumentParser(prog="storage-sharing", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-tariff", parents=[common], help="check tariff ordering conditions")
    p.set_defaults(func=cmd_validate_tariff)

    p = sub.add_parser("gen-data", parents=[common], help="write a synthetic loads/capacities/tariff set")
    p.add_argument("--households", type=int, default=80)
    p.add_argument("--days", type=int, default=365)
    p.add_argument("--start", default=DEFAULT_START.isoformat())
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("simulate", parents=[common], help="run the daily cycle over all dates")
    p.add_argument("--start", help="first date (inclusive)")
    p.add_argument("--end", help="last date (inclusive)")
    p.add_argument("--no-verify", action="store_true", help="skip per-day invariant checks")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("core-check", parents=[common, day], help="verify the allocation is in the core")
    p.add_argument("--samples", type=int, help="random coalitions to check instead of enumerating")
    p.set_defaults(func=cmd_core_check)

    p = sub.add_parser("settle-day", parents=[common, day], help="P2P ledger for one day")
    p.set_defaults(func=cmd_settle_day)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command != "gen-data" and args.tariff is None:
        parser.error("--tariff is required")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except TariffError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (DataError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
