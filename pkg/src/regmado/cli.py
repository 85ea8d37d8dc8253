"""Command-line front end: simulate | analytic | estimate | study | analyze.

All commands are deterministic given their flags (seed included). Data goes
to files only; diagnostics go to stderr. Exit codes: 0 on success, 2 for
usage errors, 3 for data errors (unreadable/malformed inputs, unknown
locations or stations, overlapping regions).
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import ingest, study
from .core import RAW, UNIT_FRECHET, DependenceQuery, Location, Panel, Region
from .estimators import (
    LAMBDA_CONVENTIONS,
    LambdaSlice,
    empirical_margin_estimate,
    known_margin_estimate,
    lambda_query,
    lambda_slice,
)
from .ingest import export_grid
from .m4 import M4Spec, load_spec_json, simulate_m4

USAGE_ERROR = 2
DATA_ERROR = 3

# the conventional default grid: 0.2, 0.4, ..., 20.0
DEFAULT_GRID = "0.2:20:0.2"


def parse_grid(text: str) -> np.ndarray:
    """Parse '--alphas' style grids: 'start:stop:step' or a comma list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"bad grid range {text!r}")
        n = int(round((stop - start) / step))
        values = start + step * np.arange(n + 1)
        values = values[values <= stop + 1e-9 * max(1.0, abs(stop))]
    else:
        values = np.array([float(p) for p in text.split(",") if p.strip()])
    if values.size == 0 or np.any(values <= 0):
        raise ValueError(f"grid values must be positive, got {text!r}")
    return values


def parse_lattice_region(text: str, label: Optional[str] = None) -> Region:
    """Parse '(2,1);(2,2)' into a Region of lattice locations."""
    locs = []
    for chunk in text.split(";"):
        chunk = chunk.strip().strip("()")
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise ValueError(f"bad lattice location {chunk!r} in {text!r}")
        try:
            locs.append(Location(int(parts[0]), int(parts[1])))
        except ValueError:
            raise ValueError(f"bad lattice location {chunk!r} in {text!r}") from None
    if not locs:
        raise ValueError(f"empty region spec {text!r}")
    return Region(locs, label=label)


def parse_station_region(text: str) -> List[str]:
    ids = [s.strip() for s in text.split(",") if s.strip()]
    if not ids:
        raise ValueError(f"empty station list {text!r}")
    return ids


def write_panel_csv(panel: Panel, path) -> None:
    """Panel as CSV: one column per location, one row per replication."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([str(loc) for loc in panel.locations])
        for row in panel.rows:
            writer.writerow([repr(float(v)) for v in row])


def read_panel_csv(path, margin: str) -> Panel:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty panel file") from None
        locations = [parse_lattice_region(cell).locations[0] for cell in header]
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric panel entry") from None
    return Panel(locations, np.array(rows), margin=margin)


def write_slice(slc: LambdaSlice, path, format: str) -> None:
    if format == "json":
        doc = {
            "convention": slc.convention,
            "k": slc.k,
            "s": slc.s,
            "lambdas": slc.lambdas.tolist(),
            "values": slc.values.tolist(),
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["lambda", "alpha", "beta", "value"])
            for lam, value in zip(slc.lambdas, slc.values):
                q = lambda_query(float(lam), slc.k, slc.s, slc.convention)
                writer.writerow(
                    [repr(float(lam)), repr(q.alpha), repr(q.beta), repr(float(value))]
                )


def _out_path(args, suffix: str = "") -> str:
    return args.out + suffix


def cmd_simulate(args) -> int:
    spec = load_spec_json(args.spec_file)
    region = parse_lattice_region(args.locations)
    panel = simulate_m4(spec, region.locations, args.T, args.seed)
    write_panel_csv(panel, args.out)
    print(f"wrote {panel.T} replications at {len(panel.locations)} locations to {args.out}",
          file=sys.stderr)
    return 0


def cmd_analytic(args) -> int:
    from .m4 import analytic_grid

    spec = load_spec_json(args.spec_file)
    x = parse_lattice_region(args.region_x)
    y = parse_lattice_region(args.region_y)
    grid = analytic_grid(spec, x, y, parse_grid(args.alphas), parse_grid(args.betas))
    export_grid(grid, args.out, format=args.format)
    print(f"wrote {grid.values.size} analytic cells to {args.out}", file=sys.stderr)
    return 0


def cmd_estimate(args) -> int:
    panel = read_panel_csv(args.panel_file, margin=args.margin)
    x = parse_lattice_region(args.region_x)
    y = parse_lattice_region(args.region_y)
    if args.lambdas is not None:
        lams = parse_lambdas(args.lambdas)
        slc = lambda_slice(panel, x, y, lams, convention=args.convention)
        write_slice(slc, args.out, args.format)
        print(f"wrote {slc.values.size} lambda estimates to {args.out}", file=sys.stderr)
        return 0
    alphas = parse_grid(args.alphas)
    betas = parse_grid(args.betas)
    estimate = (
        known_margin_estimate if args.estimator == "known-margins" else empirical_margin_estimate
    )
    values = np.empty((alphas.size, betas.size))
    for a, alpha in enumerate(alphas):
        for b, beta in enumerate(betas):
            values[a, b] = estimate(panel, x, y, DependenceQuery(alpha, beta)).nu_hat
    from .core import MadogramGrid

    grid = MadogramGrid(
        alphas=alphas,
        betas=betas,
        values=values,
        kind=f"estimated-{args.estimator}",
        region_x=x,
        region_y=y,
        T=panel.T,
    )
    export_grid(grid, args.out, format=args.format)
    print(f"wrote {grid.values.size} estimated cells to {args.out}", file=sys.stderr)
    return 0


def parse_lambdas(text: str) -> np.ndarray:
    values = parse_grid(text)
    if np.any(values >= 1.0):
        raise ValueError("lambda values must lie strictly inside (0, 1)")
    return values


def load_study_config(path) -> study.StudyConfig:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        if "spec_file" in doc:
            spec = load_spec_json(doc["spec_file"])
        else:
            spec = M4Spec.from_dict(doc["spec"])
        x = Region([Location(int(i), int(j)) for i, j in doc["region_x"]])
        y = Region([Location(int(i), int(j)) for i, j in doc["region_y"]])
        alphas = doc["alphas"]
        betas = doc["betas"]
        alphas = parse_grid(alphas) if isinstance(alphas, str) else np.asarray(alphas, float)
        betas = parse_grid(betas) if isinstance(betas, str) else np.asarray(betas, float)
        return study.StudyConfig(
            spec=spec,
            x=x,
            y=y,
            T=int(doc["T"]),
            R=int(doc["R"]),
            alphas=alphas,
            betas=betas,
            seed=int(doc["seed"]),
            estimator=doc.get("estimator", "empirical-margins"),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: malformed study config: {exc}") from exc


def cmd_study(args) -> int:
    config = load_study_config(args.config)
    report = study.run_study(config, threads=args.threads)
    json_path = _out_path(args, ".json")
    csv_path = _out_path(args, ".csv")
    study.write_report_json(report, json_path)
    study.write_report_csv(report, csv_path)
    print(
        f"study done in {report.runtime_seconds:.1f}s: "
        f"max |bias|={np.abs(report.bias).max():.2e}, max mse={report.mse.max():.2e}; "
        f"wrote {json_path} and {csv_path}",
        file=sys.stderr,
    )
    return 0


def cmd_analyze(args) -> int:
    series = ingest.load_station_csv(args.data)
    dataset = ingest.align(series, policy=args.policy)
    for year, reason in dataset.dropped_years:
        print(f"dropped year {year}: {reason}", file=sys.stderr)
    x = parse_station_region(args.region_x)
    y = parse_station_region(args.region_y)
    if args.lambdas is not None:
        lams = parse_lambdas(args.lambdas)
        slc = ingest.slice_pair(dataset, x, y, lams, convention=args.convention)
        write_slice(slc, args.out, args.format)
        print(f"wrote {slc.values.size} lambda estimates to {args.out}", file=sys.stderr)
        return 0
    grid = ingest.analyze_pair(dataset, x, y, parse_grid(args.alphas), parse_grid(args.betas))
    export_grid(grid, args.out, format=args.format)
    print(
        f"analyzed {len(dataset.stations)} stations over {len(dataset.years)} years; "
        f"wrote {grid.values.size} cells to {args.out}",
        file=sys.stderr,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regmado",
        description="Generalized madogram: dependence between maxima over two regions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=False):
        p.add_argument("--out", required=True, help="output file path")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--threads", type=int, default=1, help="worker cap for replication runs")
        if seed:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("simulate", help="draw a moving-maxima panel")
    p.add_argument("--spec-file", required=True, help="field spec JSON")
    p.add_argument("--locations", required=True, help='e.g. "(2,1);(2,2);(3,3)"')
    p.add_argument("--T", type=int, required=True, help="number of field draws")
    common(p, seed=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analytic", help="closed-form madogram over a grid")
    p.add_argument("--spec-file", required=True)
    p.add_argument("--region-x", required=True, help='e.g. "(2,1);(2,2)"')
    p.add_argument("--region-y", required=True)
    p.add_argument("--alphas", default=DEFAULT_GRID, help="start:stop:step or comma list")
    p.add_argument("--betas", default=DEFAULT_GRID)
    common(p)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("estimate", help="estimate from a panel file")
    p.add_argument("--panel-file", required=True)
    p.add_argument("--region-x", required=True)
    p.add_argument("--region-y", required=True)
    p.add_argument("--margin", choices=[UNIT_FRECHET, RAW], default=UNIT_FRECHET,
                   help="margin scale of the panel file")
    p.add_argument("--estimator", choices=list(study.ESTIMATORS), default="empirical-margins")
    p.add_argument("--alphas", default=DEFAULT_GRID)
    p.add_argument("--betas", default=DEFAULT_GRID)
    p.add_argument("--lambdas", default=None,
                   help="lambda grid; switches output to a lambda slice")
    p.add_argument("--convention", choices=list(LAMBDA_CONVENTIONS), default="per-location")
    common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("study", help="replication study from a config file")
    p.add_argument("--config", required=True, help="study config JSON")
    common(p)
    p.set_defaults(func=cmd_study)

    p = sub.add_parser("analyze", help="station-data pipeline")
    p.add_argument("--data", required=True, help="station CSV (station_id,station_name,year,value)")
    p.add_argument("--region-x", required=True, help='station ids, e.g. "FAJAO,LCOMP"')
    p.add_argument("--region-y", required=True)
    p.add_argument("--policy", choices=list(ingest.ALIGN_POLICIES), default="complete-years")
    p.add_argument("--alphas", default=DEFAULT_GRID)
    p.add_argument("--betas", default=DEFAULT_GRID)
    p.add_argument("--lambdas", default=None)
    p.add_argument("--convention", choices=list(LAMBDA_CONVENTIONS), default="per-location")
    common(p)
    p.set_defaults(func=cmd_analyze)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
