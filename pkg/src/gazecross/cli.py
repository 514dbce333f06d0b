"""Command line front end.

Subcommands:
  geometry   capacity table for a character size / distance / item count
  simulate   run synthetic blocks and write the full artifact set
  stats      summarize one or more trial-record CSV files
  serve      run the interactive session service

simulate writes, per block, the raw sample CSV and the event log (one
JSON object per line, same encoding the service uses on the wire), plus
a combined trial-record CSV and a summary CSV.  Identical flags produce
byte-identical files.
"""

from __future__ import annotations

import argparse
import io
import os
import sys

from gazecross.engine import EngineConfig, GazeSample
from gazecross.experiment import ALPHABET, make_search_select_script, \
    make_selection_script, parse_records_csv, records_to_csv, summarize, \
    summary_to_csv
from gazecross.geometry import GeometryConfig, capacity_report
from gazecross.layout import CapacityError, build_circular_layout, \
    build_grid_layout
from gazecross.service import SessionServer, event_to_json
from gazecross.simulator import AgentProfile, run_agent

SAMPLE_CSV_HEADER = "t_ms,x_cm,y_cm,valid"

# blinks land roughly every five seconds when enabled
NATURAL_BLINK_RATE_HZ = 0.2


def samples_to_csv(samples) -> str:
    """Sample CSV with repr floats, so parsing gives back the exact values."""
    out = io.StringIO()
    out.write(SAMPLE_CSV_HEADER + "\n")
    for s in samples:
        out.write(f"{s.t_ms!r},{s.x_cm!r},{s.y_cm!r},{int(s.valid)}\n")
    return out.getvalue()


def parse_samples_csv(text: str) -> list[GazeSample]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != SAMPLE_CSV_HEADER:
        raise ValueError("not a sample CSV: bad or missing header")
    samples = []
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise ValueError(f"line {i}: expected 4 fields, got {len(parts)}")
        try:
            samples.append(GazeSample(float(parts[0]), float(parts[1]),
                                      float(parts[2]), parts[3] == "1"))
        except ValueError as exc:
            raise ValueError(f"line {i}: {exc}") from None
    return samples


# ---------------------------------------------------------------------------
# geometry

def _fmt(value: float) -> str:
    return f"{value:.4f}"


def cmd_geometry(args) -> int:
    try:
        config = GeometryConfig(char_size_cm=args.char_size,
                                viewing_distance_cm=args.distance,
                                tracker_uncertainty_deg=args.uncertainty)
        row = capacity_report(config, args.items)
    except (ValueError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.csv:
        print("items,vision_angle_deg,obj_size_cm,crossing_radius_cm,"
              "max_slices,grid_width_cm,grid_height_cm,grid_capacity,usable")
        print(",".join([str(args.items), _fmt(row.vision_angle_deg),
                        _fmt(row.obj_size_cm), _fmt(row.crossing_radius_cm),
                        str(row.max_slices), _fmt(row.grid_width_cm),
                        _fmt(row.grid_height_cm), str(row.grid_capacity),
                        str(int(row.usable))]))
    else:
        print(f"items                {args.items}")
        print(f"vision angle (deg)   {_fmt(row.vision_angle_deg)}")
        print(f"object size (cm)     {_fmt(row.obj_size_cm)}")
        print(f"crossing radius (cm) {_fmt(row.crossing_radius_cm)}")
        print(f"max slices           {row.max_slices}")
        print(f"grid (cm)            {_fmt(row.grid_width_cm)}"
              f" x {_fmt(row.grid_height_cm)}")
        print(f"grid capacity        {row.grid_capacity}")
        print(f"usable               {'yes' if row.usable else 'no'}")
    return 0


# ---------------------------------------------------------------------------
# simulate

def cmd_simulate(args) -> int:
    geometry = GeometryConfig()
    if args.menu == "crossing":
        layout = build_circular_layout(list(ALPHABET), geometry)
    else:
        layout = build_grid_layout(list(ALPHABET), geometry)
    engine_config = EngineConfig(dwell_ms=args.dwell_ms,
                                 blink_filter_enabled=args.filter == "on")
    blink_rate = NATURAL_BLINK_RATE_HZ if args.blinks == "on" else 0.0

    os.makedirs(args.out, exist_ok=True)
    all_records = []
    for block in range(1, args.blocks + 1):
        if args.task == "search-select":
            script = make_search_select_script(args.seed, args.menu,
                                               block=block)
        else:
            script = make_selection_script(args.menu, block=block)
        # each block gets its own agent rng; timestamps restart at zero
        prof_seed = args.seed * 1009 + block
        if args.profile == "perfect":
            profile = AgentProfile.perfect(rng_seed=prof_seed,
                                           blink_rate_hz=blink_rate)
        else:
            profile = AgentProfile(rng_seed=prof_seed,
                                   blink_rate_hz=blink_rate)
        stream, events, records = run_agent(script, layout, profile,
                                            engine_config, user=args.user)
        all_records.extend(records)
        _write(args.out, f"samples_block{block}.csv",
               samples_to_csv(stream.samples))
        _write(args.out, f"events_block{block}.jsonl",
               "".join(event_to_json(e) + "\n" for e in events))
        errors = sum(r.error for r in records)
        print(f"block {block}: {len(records)} trials, {errors} errors")

    _write(args.out, "trials.csv", records_to_csv(all_records))
    stats = summarize(all_records)
    _write(args.out, "summary.csv", summary_to_csv(stats))
    for warning in stats.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(f"wrote {args.out}/trials.csv and {args.out}/summary.csv")
    return 0


def _write(out_dir: str, name: str, text: str) -> None:
    with open(os.path.join(out_dir, name), "w", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# stats

def cmd_stats(args) -> int:
    records = []
    for path in args.files:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            print(f"error: {path}: {exc.strerror}", file=sys.stderr)
            return 2
        try:
            records.extend(parse_records_csv(text))
        except ValueError as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            return 2
    if not records:
        print("warning: no records", file=sys.stderr)
    stats = summarize(records)
    sys.stdout.write(summary_to_csv(stats))
    for warning in stats.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# serve

def cmd_serve(args) -> int:
    with SessionServer(args.host, args.port) as server:
        # --port 0 asks the OS for a free port; report the real one
        print(f"listening on {args.host}:{server.port}",
              file=sys.stderr, flush=True)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gazecross",
        description="dwell and crossing gaze menus: capacity, simulation, "
                    "statistics, and a live session service")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("geometry", help="print the capacity table")
    p.add_argument("--items", type=int, default=26)
    p.add_argument("--distance", type=float, default=55.0, metavar="CM")
    p.add_argument("--char-size", type=float, default=0.45, metavar="CM")
    p.add_argument("--uncertainty", type=float, default=1.3, metavar="DEG")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("simulate", help="run synthetic blocks")
    p.add_argument("--menu", choices=("dwell", "crossing"), required=True)
    p.add_argument("--task", choices=("search-select", "selection"),
                   default="search-select")
    p.add_argument("--blocks", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--blinks", choices=("on", "off"), default="off")
    p.add_argument("--filter", choices=("on", "off"), default="off")
    p.add_argument("--profile", choices=("default", "perfect"),
                   default="default")
    p.add_argument("--dwell-ms", type=float, default=500.0)
    p.add_argument("--user", default="sim")
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("stats", help="summarize trial-record CSV files")
    p.add_argument("files", nargs="+", metavar="FILE")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("serve", help="run the session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "simulate" and args.blocks < 1:
        print("error: --blocks must be >= 1", file=sys.stderr)
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
