"""Station-data pipeline: read annual-maxima series, align years, analyze pairs.

Input is a CSV of per-station annual maxima (header
``station_id,station_name,year,value``). Alignment keeps the years every
station observed (or fails on gaps, by policy) and produces a raw-margin
panel with one row per retained year and one column per station. Analysis is
rank-based throughout: pre-transforming each column to a standard Frechet
scale and estimating on powered ranks are the same computation, and the rank
route never has to evaluate -1/log(1).

Stations are carried on synthetic lattice coordinates (column index, 0);
their real positions are display metadata, not inputs to any computation.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .core import RAW, DependenceQuery, Location, MadogramGrid, Panel, Region
from .estimators import LambdaSlice, empirical_margin_estimate, lambda_slice

ALIGN_POLICIES = ("complete-years", "fail-on-missing")
STATION_CSV_HEADER = ["station_id", "station_name", "year", "value"]


@dataclass(frozen=True)
class StationSeries:
    """Annual maxima of one station: (year, value) records, years strictly increasing."""

    station_id: str
    name: str
    records: Tuple[Tuple[int, float], ...]

    def __post_init__(self) -> None:
        if not self.records:
            raise ValueError(f"station {self.station_id}: no records")
        years = [year for year, _ in self.records]
        if any(b <= a for a, b in zip(years, years[1:])):
            raise ValueError(f"station {self.station_id}: years must be strictly increasing")
        if any(value <= 0 for _, value in self.records):
            raise ValueError(f"station {self.station_id}: values must be positive")

    @property
    def years(self) -> Tuple[int, ...]:
        return tuple(year for year, _ in self.records)

    def value_by_year(self) -> Dict[int, float]:
        return dict(self.records)


def load_station_csv(path) -> List[StationSeries]:
    """Parse a station CSV into one series per station, in first-appearance order.

    Rejects malformed rows, non-positive values and duplicate (station, year)
    pairs, naming the offending line.
    """
    order: List[str] = []
    names: Dict[str, str] = {}
    records: Dict[str, Dict[int, float]] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected header {STATION_CSV_HEADER}")
        if [h.strip() for h in header] != STATION_CSV_HEADER:
            raise ValueError(
                f"{path}: bad header {header!r}, expected {STATION_CSV_HEADER}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            station_id, name, year_text, value_text = (f.strip() for f in row)
            if not station_id:
                raise ValueError(f"{path}:{lineno}: empty station_id")
            try:
                year = int(year_text)
                value = float(value_text)
            except ValueError:
                raise ValueError(
                    f"{path}:{lineno}: year/value not numeric: {year_text!r}, {value_text!r}"
                ) from None
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{path}:{lineno}: value must be a positive real, got {value}")
            if station_id not in records:
                order.append(station_id)
                names[station_id] = name
                records[station_id] = {}
            if year in records[station_id]:
                raise ValueError(
                    f"{path}:{lineno}: duplicate record for station {station_id}, year {year}"
                )
            records[station_id][year] = value
    if not order:
        raise ValueError(f"{path}: no data rows")
    return [
        StationSeries(
            station_id=sid,
            name=names[sid],
            records=tuple(sorted(records[sid].items())),
        )
        for sid in order
    ]


@dataclass(frozen=True, eq=False)
class AlignedDataset:
    """Stations on a common year axis, ready for estimation.

    ``panel`` has one row per retained year and one raw-margin column per
    station; ``dropped_years`` records what alignment removed and why.
    """

    stations: Tuple[str, ...]
    years: Tuple[int, ...]
    panel: Panel
    dropped_years: Tuple[Tuple[int, str], ...]

    def location_of(self, station_id: str) -> Location:
        try:
            return self.panel.locations[self.stations.index(station_id)]
        except ValueError:
            raise ValueError(f"unknown station id {station_id!r}") from None

    def region_of(self, station_ids: Sequence[str]) -> Region:
        ids = list(station_ids)
        if not ids:
            raise ValueError("a station region needs at least one station id")
        return Region([self.location_of(s) for s in ids], label=",".join(ids))


def align(series: Sequence[StationSeries], policy: str = "complete-years") -> AlignedDataset:
    """Put the series on a common year axis.

    ``complete-years`` keeps exactly the years observed at every station and
    records each dropped year with the stations that miss it;
    ``fail-on-missing`` raises instead of dropping.
    """
    if policy not in ALIGN_POLICIES:
        raise ValueError(f"policy must be one of {ALIGN_POLICIES}, got {policy!r}")
    if not series:
        raise ValueError("need at least one station series")
    ids = [s.station_id for s in series]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate station ids across series")
    by_station = {s.station_id: s.value_by_year() for s in series}
    all_years = sorted(set().union(*(s.years for s in series)))
    kept: List[int] = []
    dropped: List[Tuple[int, str]] = []
    for year in all_years:
        missing = [sid for sid in ids if year not in by_station[sid]]
        if not missing:
            kept.append(year)
        else:
            reason = f"missing at {', '.join(missing)}"
            if policy == "fail-on-missing":
                raise ValueError(f"year {year} {reason}")
            dropped.append((year, reason))
    if not kept:
        raise ValueError("no year is observed at every station")
    rows = np.array([[by_station[sid][year] for sid in ids] for year in kept])
    locations = [Location(c, 0) for c in range(len(ids))]
    panel = Panel(locations, rows, margin=RAW)
    return AlignedDataset(
        stations=tuple(ids),
        years=tuple(kept),
        panel=panel,
        dropped_years=tuple(dropped),
    )


def analyze_pair(
    dataset: AlignedDataset,
    x: Sequence[str],
    y: Sequence[str],
    alphas: Sequence[float],
    betas: Sequence[float],
) -> MadogramGrid:
    """Rank-based madogram estimates for two disjoint station groups, per grid cell."""
    shared = set(x) & set(y)
    if shared:
        raise ValueError(f"station groups must be disjoint; shared: {sorted(shared)}")
    region_x = dataset.region_of(x)
    region_y = dataset.region_of(y)
    alphas = np.asarray(alphas, dtype=float)
    betas = np.asarray(betas, dtype=float)
    values = np.empty((alphas.size, betas.size))
    for a, alpha in enumerate(alphas):
        for b, beta in enumerate(betas):
            values[a, b] = empirical_margin_estimate(
                dataset.panel, region_x, region_y, DependenceQuery(alpha, beta)
            ).nu_hat
    return MadogramGrid(
        alphas=alphas,
        betas=betas,
        values=values,
        kind="estimated-empirical-margins",
        region_x=region_x,
        region_y=region_y,
        T=dataset.panel.T,
    )


def slice_pair(
    dataset: AlignedDataset,
    x: Sequence[str],
    y: Sequence[str],
    lambdas: Sequence[float],
    convention: str = "per-location",
) -> LambdaSlice:
    """Lambda-path madogram estimates for two disjoint station groups."""
    shared = set(x) & set(y)
    if shared:
        raise ValueError(f"station groups must be disjoint; shared: {sorted(shared)}")
    return lambda_slice(
        dataset.panel,
        dataset.region_of(x),
        dataset.region_of(y),
        lambdas,
        convention=convention,
    )


def grid_to_dict(grid: MadogramGrid) -> dict:
    return {
        "kind": grid.kind,
        "region_x": {
            "label": grid.region_x.label,
            "locations": [[loc.i, loc.j] for loc in grid.region_x.locations],
        },
        "region_y": {
            "label": grid.region_y.label,
            "locations": [[loc.i, loc.j] for loc in grid.region_y.locations],
        },
        "seed": grid.seed,
        "T": grid.T,
        "alphas": grid.alphas.tolist(),
        "betas": grid.betas.tolist(),
        "values": grid.values.tolist(),
    }


def grid_from_dict(doc: dict) -> MadogramGrid:
    try:
        rx = Region(
            [Location(i, j) for i, j in doc["region_x"]["locations"]],
            label=doc["region_x"]["label"],
        )
        ry = Region(
            [Location(i, j) for i, j in doc["region_y"]["locations"]],
            label=doc["region_y"]["label"],
        )
        return MadogramGrid(
            alphas=np.array(doc["alphas"], dtype=float),
            betas=np.array(doc["betas"], dtype=float),
            values=np.array(doc["values"], dtype=float),
            kind=doc["kind"],
            region_x=rx,
            region_y=ry,
            seed=doc["seed"],
            T=doc["T"],
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed grid document: {exc}") from exc


def export_grid(grid: MadogramGrid, path, format: str = "csv") -> None:
    """Write a grid to disk.

    JSON keeps every field and round-trips losslessly through
    ``import_grid``; CSV is the plot-ready cell table (alpha, beta, value),
    matching the study report's wide layout.
    """
    if format == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(grid_to_dict(grid), fh, indent=2)
    elif format == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["alpha", "beta", "value"])
            for a, alpha in enumerate(grid.alphas):
                for b, beta in enumerate(grid.betas):
                    writer.writerow([repr(float(alpha)), repr(float(beta)), repr(float(grid.values[a, b]))])
    else:
        raise ValueError(f"format must be 'csv' or 'json', got {format!r}")


def import_grid(path, format: str = "json") -> MadogramGrid:
    """Read a grid back; only JSON restores the full metadata."""
    if format != "json":
        raise ValueError("lossless grid import is JSON-only; CSV drops provenance metadata")
    with open(path, "r", encoding="utf-8") as fh:
        return grid_from_dict(json.load(fh))
