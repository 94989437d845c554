"""Command-line pipeline over multi-station sensor CSV data.

Stages communicate only through files in the output directory, so each stage
can be re-run independently:

    aircast simulate  -> <out>/simulated_readings.csv (synthetic fixture data)
    aircast ingest    -> <out>/series/<station>_{hourly,daily}.csv + report
    aircast trend     -> <out>/trend/* plot-ready statistics per station
    aircast forecast  -> <out>/forecast/* forecast tracks and model JSONs
    aircast evaluate  -> <out>/evaluation/* rolling comparison table

All randomness flows from --seed, fanned out deterministically per station
and model, so identical invocations produce bitwise-identical outputs.
Exit codes: 0 ok, 1 I/O failure, 2 schema/validation failure, 3 no usable
data, 4 no model succeeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import ann, arima, gp, trends
from .errors import (
    AircastError,
    EmptySeriesError,
    NonStationaryError,
    SchemaError,
)
from .evaluation import (
    AnnAdapter,
    ArimaAdapter,
    EvalReport,
    GpAdapter,
    comparison_table,
    compare_models,
)
from .ingest import (
    ColumnMapping,
    Pollutant,
    STATION_ROSTER,
    Station,
    build_station_series,
    parse_readings_path,
)
from .series import (
    Granularity,
    LOCAL_TZ,
    SplitSpec,
    TimeSeries,
    estimate_step_seconds,
    interpolate_gaps,
    resample_mean,
    split_holdout,
)

EXIT_OK = 0
EXIT_IO = 1
EXIT_SCHEMA = 2
EXIT_EMPTY = 3
EXIT_NO_MODEL = 4

DEFAULT_MODELS = ("arima", "ann", "gp")
# CLI-level order-search bounds; the library's select_order default is wider
# but a 9-station run needs to stay interactive.
DEFAULT_ARIMA_GRID = (2, 1, 2)
DEFAULT_MIN_COVERAGE = 0.75
MAX_GAP_HOURLY = 6
MAX_GAP_DAILY = 3
DEFAULT_SIM_DAYS = 540


@dataclass(frozen=True)
class SimParams:
    alpha: float
    beta: tuple[float, ...]
    theta: tuple[float, ...]
    sigma: float


#: Default ARMA parameterization per roster station (stationary means near
#: 40 µg/m³ so synthetic concentrations stay realistic and positive).
#: Gitega is the designated pure AR(1) station with unit innovation variance.
STATION_SIM_PARAMS: dict[str, SimParams] = {
    "Gitega": SimParams(12.0, (0.7,), (), 1.0),
    "Rusororo": SimParams(18.0, (0.6,), (0.3,), 4.0),
    "Gacuriro": SimParams(13.5, (0.5, 0.2), (), 3.0),
    "Kiyovu": SimParams(44.0, (), (0.5,), 5.0),
    "Rebero": SimParams(8.0, (0.8,), (), 2.0),
    "Mount Kigali": SimParams(38.0, (), (), 6.0),
    "Kimihurura": SimParams(22.0, (0.5,), (), 3.0),
    "Gikondo Mburabuturo": SimParams(13.0, (0.4, 0.3), (-0.2,), 2.0),
    "Gikomero": SimParams(15.0, (0.65,), (), 5.0),
}

_FALLBACK_SIM = SimParams(12.0, (0.7,), (), 3.0)


def derive_seed(master: int, *labels: object) -> int:
    """Deterministic per-station/per-model seed derived from the master seed."""
    h = master & 0xFFFFFFFF
    for label in labels:
        h = zlib.crc32(str(label).lower().encode("utf-8"), h)
    return int(h)


def station_slug(name: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in name.strip().lower())


def _iso_local(epoch: int) -> str:
    return datetime.fromtimestamp(int(epoch), tz=LOCAL_TZ).isoformat()


def _local_date(epoch: int) -> str:
    return datetime.fromtimestamp(int(epoch), tz=LOCAL_TZ).date().isoformat()


# ---------------------------------------------------------------------------
# File helpers (all outputs: UTF-8, comma, '.' decimals, '\n' line endings)

def write_json(path: Path, payload: object) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def write_table(path: Path, header: Sequence[str], rows: Iterable[Sequence], fmt: str) -> Path:
    """Write rows as CSV or as a JSON list of row objects; returns the path used."""
    path = path.with_suffix(".json" if fmt == "json" else ".csv")
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        payload = [dict(zip(header, row)) for row in rows]
        write_json(path, payload)
        return path
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def write_series_csv(path: Path, series: TimeSeries) -> None:
    rows = [
        [_iso_local(t), v] for t, v in zip(series.at.tolist(), series.values.tolist())
    ]
    write_table(path, ["timestamp", "value"], rows, "csv")


def load_series_csv(path: Path, granularity: Granularity) -> TimeSeries | None:
    """Read a series file written by the ingest stage; None if absent/empty."""
    if not path.exists():
        return None
    pairs: list[tuple[int, float]] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader, None)
        for row in reader:
            if len(row) < 2:
                continue
            stamp = datetime.fromisoformat(row[0])
            pairs.append((int(stamp.timestamp()), float(row[1])))
    if not pairs:
        return None
    return TimeSeries.from_pairs(granularity, pairs)


def series_path(out: Path, station: str, granularity: Granularity) -> Path:
    return out / "series" / f"{station_slug(station)}_{granularity.value}.csv"


# ---------------------------------------------------------------------------
# Argument plumbing

def _parse_holdout(text: str) -> SplitSpec:
    try:
        return SplitSpec(count=int(text))
    except ValueError:
        pass
    return SplitSpec(fraction=float(text))


def _parse_models(text: str) -> list[str]:
    models = [m.strip().lower() for m in text.split(",") if m.strip()]
    unknown = [m for m in models if m not in DEFAULT_MODELS]
    if unknown:
        raise ValueError(f"unknown models: {', '.join(unknown)} (choose from {DEFAULT_MODELS})")
    if not models:
        raise ValueError("at least one model required")
    return models


def _parse_grid(text: str) -> tuple[int, int, int]:
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError("grid must be 'p_max,d_max,q_max'")
    return parts[0], parts[1], parts[2]


def _parse_coeffs(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(p) for p in text.split(","))


def _station_names(out: Path, requested: Sequence[str]) -> list[str]:
    """Stations to process: the requested filter, or every ingested station."""
    report_path = out / "ingest_report.json"
    known: list[str] = []
    if report_path.exists():
        with open(report_path, encoding="utf-8") as fh:
            known = json.load(fh).get("stations_seen", [])
    if requested:
        known_by_key = {name.casefold(): name for name in known}
        return [known_by_key.get(name.casefold(), name) for name in requested]
    return sorted(known)


def _load_station_series(
    out: Path, station: str, granularity: Granularity
) -> TimeSeries | None:
    return load_series_csv(series_path(out, station, granularity), granularity)


def _build_adapters(
    models: Sequence[str], seed: int, station: str, arima_grid: tuple[int, int, int]
):
    adapters = []
    for name in models:
        if name == "arima":
            adapters.append(
                ArimaAdapter(p_max=arima_grid[0], d_max=arima_grid[1], q_max=arima_grid[2])
            )
        elif name == "ann":
            adapters.append(
                AnnAdapter(config=ann.TrainConfig(seed=derive_seed(seed, station, "ann")))
            )
        elif name == "gp":
            adapters.append(GpAdapter())
    return adapters


def _run_pool(worker: Callable, tasks: Sequence, workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [worker(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(worker, tasks))


# ---------------------------------------------------------------------------
# simulate

def cmd_simulate(args: argparse.Namespace) -> int:
    out = Path(args.out)
    stations = args.station or [s.name for s in STATION_ROSTER]
    override = None
    if args.beta is not None or args.theta is not None or args.sigma is not None or args.alpha is not None:
        override = SimParams(
            alpha=args.alpha if args.alpha is not None else _FALLBACK_SIM.alpha,
            beta=_parse_coeffs(args.beta) if args.beta is not None else _FALLBACK_SIM.beta,
            theta=_parse_coeffs(args.theta) if args.theta is not None else _FALLBACK_SIM.theta,
            sigma=args.sigma if args.sigma is not None else _FALLBACK_SIM.sigma,
        )

    rows = []
    try:
        for name in stations:
            params = override or STATION_SIM_PARAMS.get(name, _FALLBACK_SIM)
            series = arima.simulate_arma(
                params.alpha,
                params.beta,
                params.theta,
                params.sigma,
                args.n_days,
                derive_seed(args.seed, name, "sim"),
            )
            for t, v in zip(series.at.tolist(), series.values.tolist()):
                rows.append([name, _iso_local(t), "PM25", v])
    except (NonStationaryError, ValueError) as exc:
        print(f"simulate: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_SCHEMA

    path = out / "simulated_readings.csv"
    write_table(path, ["station", "timestamp", "pollutant", "value"], rows, "csv")
    print(f"wrote {path} ({len(rows)} rows, {len(stations)} stations)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# ingest

def cmd_ingest(args: argparse.Namespace) -> int:
    out = Path(args.out)
    if not args.input:
        print("ingest: at least one --input file required", file=sys.stderr)
        return EXIT_SCHEMA
    mapping = ColumnMapping(
        station=args.station_column,
        timestamp=args.timestamp_column,
        pollutant=args.pollutant_column,
        value=args.value_column,
    )

    readings = []
    file_reports: dict[str, dict] = {}
    totals = {"rows_read": 0, "rows_accepted": 0}
    stations_seen: set[Station] = set()
    for raw_path in args.input:
        path = Path(raw_path)
        try:
            file_readings, report = parse_readings_path(path, mapping)
        except OSError as exc:
            print(f"ingest: cannot read {path}: {exc}", file=sys.stderr)
            return EXIT_IO
        except SchemaError as exc:
            print(f"ingest: {path}: {exc}", file=sys.stderr)
            return EXIT_SCHEMA
        readings.extend(file_readings)
        file_reports[str(path)] = report.to_dict()
        totals["rows_read"] += report.rows_read
        totals["rows_accepted"] += report.rows_accepted
        stations_seen.update(report.stations_seen)

    report_payload = {
        "files": file_reports,
        "rows_read": totals["rows_read"],
        "rows_accepted": totals["rows_accepted"],
        "stations_seen": sorted(s.name for s in stations_seen),
    }
    write_json(out / "ingest_report.json", report_payload)

    if totals["rows_accepted"] == 0:
        print("ingest: no rows accepted", file=sys.stderr)
        return EXIT_EMPTY

    pollutant = Pollutant(args.pollutant.upper())
    wanted = (
        [Station(s) for s in args.station] if args.station else sorted(stations_seen, key=lambda s: s.name)
    )
    written = 0
    for station in wanted:
        try:
            raw = build_station_series(readings, station, pollutant)
        except EmptySeriesError:
            print(f"ingest: no data for station {station.name!r}", file=sys.stderr)
            continue
        for granularity, max_gap in (
            (Granularity.HOURLY, MAX_GAP_HOURLY),
            (Granularity.DAILY, MAX_GAP_DAILY),
        ):
            try:
                cleaned = interpolate_gaps(
                    resample_mean(raw, granularity, args.min_coverage), max_gap
                )
            except EmptySeriesError:
                print(
                    f"ingest: {station.name}: no {granularity.value} bucket met coverage",
                    file=sys.stderr,
                )
                continue
            write_series_csv(series_path(out, station.name, granularity), cleaned)
            written += 1
    if written == 0:
        print("ingest: no station series written", file=sys.stderr)
        return EXIT_EMPTY
    print(f"ingest: accepted {totals['rows_accepted']}/{totals['rows_read']} rows; "
          f"wrote {written} series files under {out / 'series'}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# trend

def _trend_station(task: tuple) -> dict:
    out_dir, station, threshold, fmt = task
    out = Path(out_dir)
    result: dict = {"station": station, "files": [], "error": None}

    hourly = _load_station_series(out, station, Granularity.HOURLY)
    daily = _load_station_series(out, station, Granularity.DAILY)
    if hourly is None and daily is None:
        result["error"] = "no ingested series found"
        return result

    trend_dir = out / "trend"
    slug = station_slug(station)
    if hourly is not None:
        profile = trends.hour_of_day_profile(hourly)
        header, rows = trends.hour_profile_rows(profile)
        result["files"].append(
            str(write_table(trend_dir / f"{slug}_hour_profile", header, rows, fmt))
        )
        result["median_hourly"] = float(np.median(hourly.values))
    if daily is not None:
        weekday = trends.day_of_week_profile(daily)
        header, rows = trends.weekday_profile_rows(weekday)
        result["files"].append(
            str(write_table(trend_dir / f"{slug}_weekday_profile", header, rows, fmt))
        )
        grid = trends.calendar_daily_means(daily)
        header, rows = trends.calendar_rows(grid)
        result["files"].append(
            str(write_table(trend_dir / f"{slug}_calendar", header, rows, fmt))
        )
        header, rows = trends.seasonal_rows(trends.seasonal_means(daily))
        result["files"].append(
            str(write_table(trend_dir / f"{slug}_seasonal", header, rows, fmt))
        )
        exceedance = trends.who_exceedance(grid, threshold)
        header, rows = trends.exceedance_rows(exceedance)
        result["files"].append(
            str(write_table(trend_dir / f"{slug}_who_exceedance", header, rows, fmt))
        )
        result["exceedance_fraction"] = exceedance.fraction
        medians = [s.median for s in weekday if s is not None]
        if medians:
            peak = max(
                (i for i, s in enumerate(weekday) if s is not None),
                key=lambda i: weekday[i].median,
            )
            result["peak_weekday"] = trends.WEEKDAY_NAMES[peak]
    return result


def cmd_trend(args: argparse.Namespace) -> int:
    out = Path(args.out)
    stations = _station_names(out, args.station)
    if not stations:
        print("trend: no stations to process (run ingest first?)", file=sys.stderr)
        return EXIT_EMPTY

    tasks = [(str(out), station, args.who_threshold, args.format) for station in stations]
    results = _run_pool(_trend_station, tasks, args.workers)

    processed = [r for r in results if r["error"] is None]
    if not processed:
        for r in results:
            print(f"trend: {r['station']}: {r['error']}", file=sys.stderr)
        return EXIT_EMPTY

    ranking = sorted(
        (r for r in processed if "median_hourly" in r),
        key=lambda r: -r["median_hourly"],
    )
    summary = {
        "station_ranking_by_median_hourly": [
            {"station": r["station"], "median_hourly": r["median_hourly"]} for r in ranking
        ],
        "who_threshold": args.who_threshold,
        "stations": {
            r["station"]: {
                "exceedance_fraction": r.get("exceedance_fraction"),
                "peak_weekday": r.get("peak_weekday"),
                "files": r["files"],
            }
            for r in processed
        },
    }
    write_json(out / "trend" / "summary.json", summary)
    for r in results:
        if r["error"]:
            print(f"trend: {r['station']}: {r['error']}", file=sys.stderr)
    print(f"trend: wrote analyses for {len(processed)} stations under {out / 'trend'}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# forecast

def _forecast_station(task: tuple) -> dict:
    (out_dir, station, granularity_name, holdout, horizon, models, seed, grid, fmt) = task
    out = Path(out_dir)
    granularity = Granularity(granularity_name)
    result: dict = {"station": station, "models": {}, "errors": {}}

    series = _load_station_series(out, station, granularity)
    if series is None:
        result["errors"]["*"] = "no ingested series found"
        return result
    try:
        train, _ = split_holdout(series, _parse_holdout(holdout))
    except AircastError as exc:
        result["errors"]["*"] = str(exc)
        return result

    step = estimate_step_seconds(train)
    future_at = [int(train.at[-1]) + step * (k + 1) for k in range(horizon)]
    actual_by_at = dict(zip(series.at.tolist(), series.values.tolist()))

    forecast_dir = out / "forecast"
    slug = station_slug(station)
    tracks: dict[str, np.ndarray] = {}
    gp_var: np.ndarray | None = None
    for name in models:
        try:
            if name == "arima":
                _, model = arima.select_order(train, *grid)
                tracks[name] = arima.forecast(model, train, horizon)
                payload = model.to_dict()
            elif name == "ann":
                cfg = ann.TrainConfig(seed=derive_seed(seed, station, "ann"))
                net = ann.train(train, 7, (16,), ann.Activation.TANH, cfg)
                tracks[name] = ann.forecast_recursive(net, train, horizon)
                payload = net.to_dict()
            else:
                fc = gp.forecast_series(train, horizon)
                tracks[name] = fc.means
                gp_var = fc.variances
                payload = fc.model.to_summary_dict()
            write_json(forecast_dir / f"{slug}_{name}_model.json", payload)
        except AircastError as exc:
            result["errors"][name] = str(exc)
    if not tracks:
        return result

    header = ["date", "actual"] + list(tracks)
    if gp_var is not None:
        header.append("gp_variance")
    rows = []
    for k, at in enumerate(future_at):
        row: list = [_local_date(at) if granularity is Granularity.DAILY else _iso_local(at)]
        actual = actual_by_at.get(at)
        row.append(actual if actual is not None else "")
        row.extend(float(tracks[name][k]) for name in tracks)
        if gp_var is not None:
            row.append(float(gp_var[k]))
        rows.append(row)
    result["file"] = str(write_table(forecast_dir / f"{slug}_forecast", header, rows, fmt))
    result["models"] = {name: len(track) for name, track in tracks.items()}
    return result


def cmd_forecast(args: argparse.Namespace) -> int:
    out = Path(args.out)
    if args.horizon < 1:
        print("forecast: horizon must be >= 1", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        models = _parse_models(args.models)
        _parse_holdout(args.holdout)
    except ValueError as exc:
        print(f"forecast: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    stations = _station_names(out, args.station)
    if not stations:
        print("forecast: no stations to process (run ingest first?)", file=sys.stderr)
        return EXIT_EMPTY

    tasks = [
        (
            str(out),
            station,
            args.granularity,
            args.holdout,
            args.horizon,
            tuple(models),
            args.seed,
            _parse_grid(args.arima_grid),
            args.format,
        )
        for station in stations
    ]
    results = _run_pool(_forecast_station, tasks, args.workers)

    succeeded = 0
    for result in results:
        for scope, message in result["errors"].items():
            print(f"forecast: {result['station']} [{scope}]: {message}", file=sys.stderr)
        succeeded += len(result["models"])
    if succeeded == 0:
        print("forecast: no model produced a forecast", file=sys.stderr)
        return EXIT_NO_MODEL
    print(f"forecast: wrote forecasts for {sum(1 for r in results if r['models'])} "
          f"stations under {out / 'forecast'}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# evaluate

def _evaluate_station(task: tuple) -> EvalReport:
    (out_dir, station, granularity_name, holdout, models, seed, grid) = task
    out = Path(out_dir)
    series = _load_station_series(out, station, Granularity(granularity_name))
    report = EvalReport(station=station, split="")
    if series is None:
        report.errors["*"] = "no ingested series found"
        return report
    adapters = _build_adapters(models, seed, station, grid)
    try:
        return compare_models(series, _parse_holdout(holdout), adapters, station=station)
    except AircastError as exc:
        report.errors["*"] = str(exc)
        return report


def cmd_evaluate(args: argparse.Namespace) -> int:
    out = Path(args.out)
    try:
        models = _parse_models(args.models)
        _parse_holdout(args.holdout)
    except ValueError as exc:
        print(f"evaluate: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    stations = _station_names(out, args.station)
    if not stations:
        print("evaluate: no stations to process (run ingest first?)", file=sys.stderr)
        return EXIT_EMPTY

    tasks = [
        (
            str(out),
            station,
            args.granularity,
            args.holdout,
            tuple(models),
            args.seed,
            _parse_grid(args.arima_grid),
        )
        for station in stations
    ]
    reports = _run_pool(_evaluate_station, tasks, args.workers)

    for report in reports:
        for scope, message in report.errors.items():
            print(f"evaluate: {report.station} [{scope}]: {message}", file=sys.stderr)
    if all(not report.models for report in reports):
        print("evaluate: no model succeeded on any station", file=sys.stderr)
        return EXIT_NO_MODEL

    eval_dir = out / "evaluation"
    header, rows = comparison_table(reports, models)
    write_table(eval_dir / "comparison", header, rows, args.format)
    write_json(
        eval_dir / "evaluation_report.json",
        {
            "seed": args.seed,
            "models": models,
            "holdout": args.holdout,
            "protocol": "rolling one-step, parameters frozen after one fit on train",
            "stations": [report.to_dict() for report in reports],
        },
    )
    print(f"evaluate: wrote comparison for {len(reports)} stations under {eval_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--out",
        default=os.environ.get("AIRCAST_OUT", "aircast_out"),
        help="output directory (default: $AIRCAST_OUT or ./aircast_out)",
    )
    parser.add_argument(
        "--station",
        action="append",
        default=[],
        help="station filter; repeatable (default: all stations)",
    )


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--models", default=",".join(DEFAULT_MODELS),
                        help="comma-separated subset of arima,ann,gp")
    parser.add_argument("--holdout", default="0.2",
                        help="trailing holdout: fraction in (0,1) or integer count")
    parser.add_argument("--seed", type=int, default=0, help="master random seed")
    parser.add_argument("--granularity", choices=["hourly", "daily"], default="daily",
                        help="which cleaned series to model")
    parser.add_argument("--arima-grid", default=",".join(map(str, DEFAULT_ARIMA_GRID)),
                        help="ARIMA order-selection bounds 'p_max,d_max,q_max'")
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                        help="station worker pool size")
    parser.add_argument("--format", choices=["csv", "json"], default="csv",
                        help="output format for data files")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aircast",
        description="Trend analysis and forecasting for PM2.5 sensor networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="write a synthetic multi-station CSV fixture")
    _add_common(p_sim)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--n-days", type=int, default=DEFAULT_SIM_DAYS)
    p_sim.add_argument("--alpha", type=float, default=None, help="override intercept for all stations")
    p_sim.add_argument("--beta", default=None, help="override AR coefficients, comma-separated")
    p_sim.add_argument("--theta", default=None, help="override MA coefficients, comma-separated")
    p_sim.add_argument("--sigma", type=float, default=None, help="override innovation std dev")
    p_sim.set_defaults(func=cmd_simulate)

    p_ing = sub.add_parser("ingest", help="parse sensor CSVs into cleaned per-station series")
    _add_common(p_ing)
    p_ing.add_argument("--input", action="append", default=[], required=True,
                       help="input CSV path (.gz accepted); repeatable")
    p_ing.add_argument("--pollutant", default="PM25",
                       choices=[p.value for p in Pollutant])
    p_ing.add_argument("--min-coverage", type=float, default=DEFAULT_MIN_COVERAGE,
                       help="minimum bucket coverage fraction for resampled means")
    p_ing.add_argument("--station-column", default="station")
    p_ing.add_argument("--timestamp-column", default="timestamp")
    p_ing.add_argument("--pollutant-column", default="pollutant")
    p_ing.add_argument("--value-column", default="value")
    p_ing.set_defaults(func=cmd_ingest)

    p_trend = sub.add_parser("trend", help="descriptive statistics per station")
    _add_common(p_trend)
    p_trend.add_argument("--who-threshold", type=float, default=trends.WHO_DAILY_GUIDELINE,
                         help="daily-mean exceedance threshold, µg/m³")
    p_trend.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p_trend.add_argument("--format", choices=["csv", "json"], default="csv")
    p_trend.set_defaults(func=cmd_trend)

    p_fc = sub.add_parser("forecast", help="fit models on the train split and forecast ahead")
    _add_common(p_fc)
    _add_model_flags(p_fc)
    p_fc.add_argument("--horizon", type=int, default=14, help="steps to forecast")
    p_fc.set_defaults(func=cmd_forecast)

    p_eval = sub.add_parser("evaluate", help="rolling one-step comparison on the holdout")
    _add_common(p_eval)
    _add_model_flags(p_eval)
    p_eval.set_defaults(func=cmd_evaluate)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"aircast: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
