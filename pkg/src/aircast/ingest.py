"""CSV ingestion for multi-station sensor exports.

Canonical input schema: a UTF-8 CSV with header columns
``station,timestamp,pollutant,value`` where timestamps are ISO-8601 with an
explicit UTC offset. Alternative headers are handled through a column
mapping. Parsing is total: malformed rows are rejected with a per-row reason
and never abort the file.
"""

from __future__ import annotations

import csv
import gzip
import io
import math
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import BinaryIO, Iterable, Sequence

import numpy as np

from .errors import EmptySeriesError, SchemaError
from .series import Granularity, TimeSeries


class Pollutant(Enum):
    PM25 = "PM25"
    PM10 = "PM10"
    SO2 = "SO2"
    NO2 = "NO2"
    CO = "CO"


@dataclass(frozen=True)
class Station:
    """Station identity; equality and hashing are case-insensitive."""

    name: str

    def __post_init__(self) -> None:
        if not self.name or not self.name.strip():
            raise ValueError("station name must be non-empty")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Station):
            return NotImplemented
        return self.name.casefold() == other.name.casefold()

    def __hash__(self) -> int:
        return hash(self.name.casefold())


#: Deployment roster of the Kigali monitoring network.
STATION_ROSTER: tuple[Station, ...] = (
    Station("Gitega"),
    Station("Rusororo"),
    Station("Gacuriro"),
    Station("Kiyovu"),
    Station("Rebero"),
    Station("Mount Kigali"),
    Station("Kimihurura"),
    Station("Gikondo Mburabuturo"),
    Station("Gikomero"),
)


@dataclass(frozen=True)
class RawReading:
    station: Station
    at: int
    pollutant: Pollutant
    value: float


@dataclass
class ColumnMapping:
    """Maps the canonical column roles onto the actual header names."""

    station: str = "station"
    timestamp: str = "timestamp"
    pollutant: str = "pollutant"
    value: str = "value"

    def required(self) -> tuple[str, str, str, str]:
        return (self.station, self.timestamp, self.pollutant, self.value)


@dataclass
class IngestReport:
    rows_read: int = 0
    rows_accepted: int = 0
    rejects: list[tuple[int, str]] = field(default_factory=list)
    stations_seen: set[Station] = field(default_factory=set)

    def to_dict(self) -> dict:
        return {
            "rows_read": self.rows_read,
            "rows_accepted": self.rows_accepted,
            "rejects": [{"line": line, "reason": reason} for line, reason in self.rejects],
            "stations_seen": sorted(s.name for s in self.stations_seen),
        }


def _parse_timestamp(text: str) -> int:
    """ISO-8601 with explicit offset -> epoch seconds. Raises ValueError."""
    cleaned = text.strip()
    if cleaned.endswith(("Z", "z")):
        cleaned = cleaned[:-1] + "+00:00"
    dt = datetime.fromisoformat(cleaned)
    if dt.tzinfo is None:
        raise ValueError("timestamp lacks a UTC offset")
    return int(math.floor(dt.timestamp()))


def _parse_pollutant(text: str) -> Pollutant:
    token = text.strip().upper().replace(".", "").replace(" ", "")
    return Pollutant(token)


def parse_readings(
    stream: BinaryIO | Iterable[str],
    mapping: ColumnMapping | None = None,
) -> tuple[list[RawReading], IngestReport]:
    """Parse a CSV stream into validated readings plus a quality report.

    Rejected rows (bad timestamp, non-finite or negative value, unknown
    pollutant, missing fields) are recorded with their 1-based physical line
    number (the header is line 1). Raises SchemaError if a required column is
    absent from the header; IO failures propagate as OSError.
    """
    mapping = mapping or ColumnMapping()
    if isinstance(stream, (io.RawIOBase, io.BufferedIOBase)) or hasattr(stream, "read"):
        text = io.TextIOWrapper(stream, encoding="utf-8", errors="replace", newline="")
    else:
        text = stream  # already decoded lines

    reader = csv.reader(text)
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("input has no header row")
    except csv.Error as exc:
        raise SchemaError(f"unreadable header row: {exc}")
    header_index = {name.strip(): i for i, name in enumerate(header)}
    missing = [col for col in mapping.required() if col not in header_index]
    if missing:
        raise SchemaError(f"header is missing required columns: {', '.join(missing)}")
    idx = {role: header_index[col] for role, col in (
        ("station", mapping.station),
        ("timestamp", mapping.timestamp),
        ("pollutant", mapping.pollutant),
        ("value", mapping.value),
    )}

    readings: list[RawReading] = []
    report = IngestReport()
    while True:
        try:
            row = next(reader)
        except StopIteration:
            break
        except csv.Error:
            report.rows_read += 1
            report.rejects.append((reader.line_num, "malformed csv"))
            continue
        line_no = reader.line_num
        if not row:
            continue  # blank line, not a data row
        report.rows_read += 1
        if len(row) <= max(idx.values()):
            report.rejects.append((line_no, "missing fields"))
            continue
        station_name = row[idx["station"]].strip()
        if not station_name:
            report.rejects.append((line_no, "empty station"))
            continue
        try:
            at = _parse_timestamp(row[idx["timestamp"]])
        except (ValueError, OverflowError, OSError):
            report.rejects.append((line_no, "bad timestamp"))
            continue
        try:
            pollutant = _parse_pollutant(row[idx["pollutant"]])
        except ValueError:
            report.rejects.append((line_no, "unknown pollutant"))
            continue
        try:
            value = float(row[idx["value"]])
        except ValueError:
            report.rejects.append((line_no, "unparseable value"))
            continue
        if not math.isfinite(value):
            report.rejects.append((line_no, "non-finite value"))
            continue
        if value < 0:
            report.rejects.append((line_no, "negative value"))
            continue
        station = Station(station_name)
        readings.append(RawReading(station, at, pollutant, value))
        report.rows_accepted += 1
        report.stations_seen.add(station)
    return readings, report


def parse_readings_path(
    path: str | Path, mapping: ColumnMapping | None = None
) -> tuple[list[RawReading], IngestReport]:
    """Open a CSV file (gzip-compressed when the name ends ``.gz``) and parse it."""
    path = Path(path)
    opener = gzip.open if path.name.endswith(".gz") else open
    with opener(path, "rb") as handle:
        return parse_readings(handle, mapping)


def build_station_series(
    readings: Sequence[RawReading],
    station: Station,
    pollutant: Pollutant = Pollutant.PM25,
) -> TimeSeries:
    """Per-station raw series: filtered, time-sorted, duplicates mean-collapsed."""
    by_instant: dict[int, list[float]] = {}
    for reading in readings:
        if reading.station == station and reading.pollutant is pollutant:
            by_instant.setdefault(reading.at, []).append(reading.value)
    if not by_instant:
        raise EmptySeriesError(
            f"no {pollutant.value} readings for station {station.name!r}"
        )
    instants = sorted(by_instant)
    values = [float(np.mean(by_instant[t])) for t in instants]
    return TimeSeries(
        Granularity.RAW,
        np.array(instants, dtype=np.int64),
        np.array(values, dtype=np.float64),
    )
