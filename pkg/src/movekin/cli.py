"""Operator command line: ingest, export, synth, serve.

Exit codes: 0 success, 1 environment/IO error, 2 data-quality failure
under --strict. Export subcommands write a CSV and, unless --no-figure,
a PNG rendering of the same analytic next to it.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from datetime import timedelta

from . import archive, ingest, relatedness, synthgen
from .model import Role, TimeWindow, iso_utc, time_of


def _load_species_config(path: str | None) -> dict[str, Role]:
    """Species role config: a JSON object mapping species name -> role."""
    if path is None:
        return {}
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return {name: Role(role) for name, role in raw.items()}


def _figure_path(out_path: str) -> str:
    return os.path.splitext(out_path)[0] + ".png"


def cmd_ingest(args) -> int:
    roles = _load_species_config(args.species_config)
    with open(args.csv, "rb") as fh:
        dataset, rep, errors = ingest.build_dataset(
            fh,
            roles=roles,
            step=timedelta(hours=args.step_hours),
            max_speed=args.max_speed,
        )
    archive.save_dataset(dataset, args.out)
    for line in rep.summary_lines():
        print(line)
    print(f"animals:              {len(dataset.tracks)}")
    print(f"grid slots:           {dataset.grid.slot_count}")
    print(f"arena M:              {dataset.M:.1f} m")
    print(f"archive written:      {args.out}")
    for err in errors[:20]:
        print(f"  line {err.line}: {err.message}", file=sys.stderr)
    if len(errors) > 20:
        print(f"  ... and {len(errors) - 20} more row errors", file=sys.stderr)
    if args.strict and rep.rows_malformed > 0:
        print(f"strict mode: {rep.rows_malformed} malformed rows", file=sys.stderr)
        return 2
    return 0


def _window_args(dataset, args) -> TimeWindow:
    n = dataset.grid.slot_count
    lo = args.from_slot if args.from_slot is not None else 0
    hi = args.to_slot if args.to_slot is not None else n - 1
    return dataset.check_window(TimeWindow(lo, hi))


def cmd_export(args) -> int:
    from . import report  # local import: keeps matplotlib off the other commands

    dataset = archive.load_dataset(args.data)
    window = _window_args(dataset, args)
    rows_written = 0
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if args.what == "matrix":
            subset = None
            if args.species:
                wanted = set(args.species.split(","))
                subset = [a for a in dataset.animal_ids
                          if dataset.tracks[a].species.name in wanted]
            matrix = relatedness.relatedness_matrix(dataset, window, subset)
            writer.writerow(["i", "j", "mean_relatedness_m", "coverage", "intensity"])
            for (i, j), entry in matrix.entries.items():
                writer.writerow([
                    i, j,
                    f"{entry.mean:.3f}" if entry.mean is not None else "",
                    f"{entry.coverage:.6f}",
                    f"{matrix.intensity(i, j):.6f}",
                ])
                rows_written += 1
            if not args.no_figure:
                report.render_matrix(matrix, _figure_path(args.out))
        elif args.what == "pair":
            series = relatedness.pairwise_series(dataset, args.i, args.j, window)
            writer.writerow(["slot", "time", "relatedness_m", "provenance"])
            for s in series.samples:
                writer.writerow([
                    s.slot,
                    iso_utc(time_of(s.slot, dataset.grid)),
                    f"{s.value:.3f}" if s.value is not None else "",
                    s.provenance.value,
                ])
                rows_written += 1
            if not args.no_figure:
                report.render_pair_series(dataset, series, _figure_path(args.out))
        elif args.what == "episodes":
            threshold = args.threshold
            if threshold is None:
                threshold = dataset.M - args.threshold_below_max
            found = relatedness.detect_stable_episodes(
                dataset, args.i, args.j, threshold, args.min_len, args.max_dip)
            writer.writerow(["i", "j", "start_slot", "end_slot", "start_time",
                             "end_time", "length_slots", "mean_relatedness_m"])
            pair = sorted([args.i, args.j])
            for ep in found:
                writer.writerow([
                    pair[0], pair[1], ep.start_slot, ep.end_slot,
                    iso_utc(time_of(ep.start_slot, dataset.grid)),
                    iso_utc(time_of(ep.end_slot, dataset.grid)),
                    ep.length, f"{ep.mean_relatedness:.3f}",
                ])
                rows_written += 1
            if not args.no_figure:
                series = relatedness.pairwise_series(dataset, args.i, args.j, window)
                report.render_episodes(dataset, series, found, threshold,
                                       _figure_path(args.out))
        elif args.what == "travel":
            animals = args.animal or dataset.animal_ids
            writer.writerow(["animal", "start_slot", "end_slot",
                             "path_length_m", "displacement_m"])
            metrics = []
            for a in animals:
                try:
                    m = relatedness.travel_metrics(dataset, a, window)
                except ValueError:
                    continue  # no positioned slots in window: no row
                metrics.append(m)
                writer.writerow([a, window.start_slot, window.end_slot,
                                 f"{m.path_length:.3f}", f"{m.displacement:.3f}"])
                rows_written += 1
            if not args.no_figure and metrics:
                report.render_travel(dataset, metrics, _figure_path(args.out))
    print(f"{rows_written} data rows -> {args.out}")
    if not args.no_figure and rows_written:
        print(f"figure -> {_figure_path(args.out)}")
    return 0


def cmd_synth(args) -> int:
    if args.paper_shape:
        config = synthgen.default_paper_shape(seed=args.seed)
    else:
        with open(args.config, encoding="utf-8") as fh:
            config = synthgen.config_from_json(fh.read())
        if args.seed is not None:
            config.seed = args.seed
    csv_text, truth = synthgen.generate(config)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(csv_text)
    truth_path = args.truth or os.path.splitext(args.out)[0] + ".truth.json"
    with open(truth_path, "w", encoding="utf-8") as fh:
        fh.write(truth.to_json())
    print(f"fixes -> {args.out}")
    print(f"ground truth -> {truth_path}")
    return 0


def cmd_serve(args) -> int:
    from . import service

    dataset = archive.load_dataset(args.data)
    if args.species_config:
        archive.apply_roles(dataset, _load_species_config(args.species_config))
    print(f"serving {len(dataset.tracks)} animals x {dataset.grid.slot_count} slots "
          f"on http://{args.bind}")
    service.serve(dataset, bind=args.bind, views_path=args.views_store)
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # exit 2 is reserved for data-quality failures under --strict
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="movekin",
        description="Movement relatedness analytics for multi-species GPS collar data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="parse a collar CSV into a dataset archive")
    p_ingest.add_argument("csv", help="input CSV: animal_id,species,timestamp,lat,lon")
    p_ingest.add_argument("--out", required=True, help="output dataset archive (JSON)")
    p_ingest.add_argument("--species-config", default=None,
                          help="JSON file mapping species name -> role "
                               "(predator/herbivore/other); built-in defaults cover "
                               "lion, wildebeest, zebra")
    p_ingest.add_argument("--step-hours", type=float, default=2.0,
                          help="grid step in hours (default 2)")
    p_ingest.add_argument("--max-speed", type=float, default=ingest.DEFAULT_MAX_SPEED,
                          help="speed screen threshold in m/s (default 8)")
    p_ingest.add_argument("--strict", action="store_true",
                          help="exit 2 when any row is malformed")
    p_ingest.set_defaults(func=cmd_ingest)

    p_export = sub.add_parser(
        "export",
        help="write one analytic as CSV plus a PNG figure",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "output columns by analytic (distances in meters, times ISO-8601 UTC):\n"
            "  matrix    i, j, mean_relatedness_m, coverage [0..1],\n"
            "            intensity [0..1] (mean / arena M; blank mean = no overlap)\n"
            "  pair      slot, time, relatedness_m (blank = undefined),\n"
            "            provenance (both-measured | some-interpolated | undefined)\n"
            "  episodes  i, j, start_slot, end_slot, start_time, end_time,\n"
            "            length_slots, mean_relatedness_m\n"
            "  travel    animal, start_slot, end_slot, path_length_m, displacement_m\n"
        ),
    )
    p_export.add_argument("what", choices=["matrix", "pair", "episodes", "travel"])
    p_export.add_argument("--data", required=True, help="dataset archive from `ingest`")
    p_export.add_argument("--out", required=True, help="output CSV path")
    p_export.add_argument("--from", dest="from_slot", type=int, default=None,
                          help="window start slot (default 0)")
    p_export.add_argument("--to", dest="to_slot", type=int, default=None,
                          help="window end slot, inclusive (default last)")
    p_export.add_argument("--i", help="first animal of the pair (pair/episodes)")
    p_export.add_argument("--j", help="second animal of the pair (pair/episodes)")
    p_export.add_argument("--species", default=None,
                          help="comma-separated species filter (matrix)")
    p_export.add_argument("--animal", action="append", default=None,
                          help="animal id for travel; repeatable (default: all)")
    p_export.add_argument("--threshold", type=float, default=None,
                          help="episode threshold in meters of relatedness")
    p_export.add_argument("--threshold-below-max", type=float, default=1000.0,
                          help="episode threshold as M minus this many meters "
                               "(used when --threshold is absent; default 1000)")
    p_export.add_argument("--min-len", type=int, default=12,
                          help="minimum episode length in slots (default 12)")
    p_export.add_argument("--max-dip", type=int, default=0,
                          help="tolerated interior dip length in slots (default 0)")
    p_export.add_argument("--no-figure", action="store_true",
                          help="skip the PNG figure")
    p_export.set_defaults(func=cmd_export)

    p_synth = sub.add_parser("synth", help="generate synthetic collar data with ground truth")
    group = p_synth.add_mutually_exclusive_group(required=True)
    group.add_argument("--paper-shape", action="store_true",
                       help="5 lions + 10 wildebeests + 10 zebras, 30 months at 2 h")
    group.add_argument("--config", help="generator config JSON (see README)")
    p_synth.add_argument("--seed", type=int, default=None, help="RNG seed")
    p_synth.add_argument("--out", required=True, help="output CSV path")
    p_synth.add_argument("--truth", default=None,
                         help="ground-truth JSON path (default: <out>.truth.json)")
    p_synth.set_defaults(func=cmd_synth)

    p_serve = sub.add_parser("serve", help="serve the HTTP JSON API over one dataset")
    p_serve.add_argument("--data", required=True, help="dataset archive from `ingest`")
    p_serve.add_argument("--bind", default="127.0.0.1:8000", help="host:port")
    p_serve.add_argument("--views-store", default=None,
                         help="JSON file persisting saved view configs")
    p_serve.add_argument("--species-config", default=None,
                         help="JSON role mapping overriding the archive's roles")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "synth" and args.paper_shape and args.seed is None:
        args.seed = 0
    if args.command == "export" and args.what in ("pair", "episodes"):
        if not args.i or not args.j:
            parser.error(f"export {args.what} requires --i and --j")
    try:
        return args.func(args)
    except (FileNotFoundError, PermissionError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (archive.ArchiveError, ingest.IngestError, synthgen.SynthConfigError,
            json.JSONDecodeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
