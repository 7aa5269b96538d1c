"""Command line front end for rendering planner CSVs into charts.

Usage:

    relayplot --kind tradeoff --in tradeoff.csv --out chart.png
    relayplot --kind timeseries --in per_slot.csv --out power.png
    relayplot --kind profiles --in per_slot.csv --out inputs.png --series arrival_bs_per_s

Exit codes: 0 on success, 2 for any input problem (missing file, empty
CSV, absent column, bad series selection).
"""

from __future__ import annotations

import argparse
import sys

from relayplots.render import CHART_KINDS, ChartSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relayplot",
        description="Render a planner CSV into a chart image plus a sidecar JSON of the plotted series.",
    )
    parser.add_argument("--kind", required=True, choices=CHART_KINDS, help="chart kind")
    parser.add_argument("--in", dest="input_csv", required=True, metavar="CSV", help="input CSV file")
    parser.add_argument(
        "--out",
        required=True,
        metavar="IMAGE",
        help="output image path; the sidecar JSON lands at IMAGE.json",
    )
    parser.add_argument(
        "--series",
        metavar="NAMES",
        help="comma-separated series to plot instead of the defaults (timeseries and profiles only)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    series: tuple[str, ...] = ()
    if args.series is not None:
        series = tuple(name.strip() for name in args.series.split(",") if name.strip())
    try:
        spec = ChartSpec(kind=args.kind, input_csv=args.input_csv, output_image=args.out, series=series)
        image, sidecar = render(spec)
    except FileNotFoundError as exc:
        print(f"error: input not found: {exc.filename}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # covers EmptyInputError, MissingColumnError, bad series, bad cells
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {image} and {sidecar}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
