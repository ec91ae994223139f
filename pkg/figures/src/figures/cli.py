"""Command-line entry point.

    figures render <manifest> --kind <kind> --out <dir>

`<manifest>` is a run manifest.json (or its directory) for the per-run
kinds, and a sweep directory (or its summary.csv) for the sweep kinds.
Exit codes: 0 success, 2 bad job, 3 malformed input files.
"""

from __future__ import annotations

import argparse
import sys

from .errors import FigureInputError, JobError
from .render import KINDS, FigureJob, render

EXIT_OK = 0
EXIT_JOB = 2
EXIT_INPUT = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render figures from simulator run and sweep outputs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    render_p = sub.add_parser("render", help="render one figure kind from a manifest")
    render_p.add_argument("manifest", help="manifest.json, run dir, or sweep dir")
    render_p.add_argument("--kind", required=True, choices=KINDS)
    render_p.add_argument("--out", required=True, help="output directory for images")
    render_p.add_argument("--cmap", default="RdBu_r", help="diverging colormap name")
    render_p.add_argument(
        "--snapshot", action="append", type=float, default=[], metavar="T",
        help="restrict heatmap-row to the snapshot at time T (repeatable)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = FigureJob(
            manifest=args.manifest,
            kind=args.kind,
            out_dir=args.out,
            cmap=args.cmap,
            snapshot_times=tuple(args.snapshot),
        )
        written = render(job)
    except JobError as exc:
        print(f"bad job: {exc}", file=sys.stderr)
        return EXIT_JOB
    except FigureInputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for path in written:
        print(f"wrote {path}")
    if not written:
        print("nothing rendered")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
