#!/usr/bin/env python3
"""Volume/error comparison across encodings for a synthetic field.

One row per encoding variant: stored bytes, MAE against the original
values, max error, and compression ratio vs raw float32.  Video variants
run only when their external tool is available; absent tools show up as
explicit rows.

Example:
    python scripts/run_encoding_comparison.py --dims 8x24x64x64 --seed 12 --csv report.csv
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from volvid.cli import parse_dims  # noqa: E402
from volvid.codec import available_presets  # noqa: E402
from volvid.ingest import synthesize_field  # noqa: E402
from volvid.metrics import PNG_FRAMES, QUANTIZED_8BIT, RAW_F32, VIDEO_PREFIX, build_report  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dims", default="8x24x64x64", help="TxZxYxX")
    parser.add_argument("--seed", type=int, default=12)
    parser.add_argument("--blobs", type=int, default=4)
    parser.add_argument("--fps", type=float, default=10)
    parser.add_argument("--csv", help="also write the report as CSV")
    parser.add_argument(
        "--videos",
        default=None,
        help="comma-separated codec presets; default: every available lossy preset",
    )
    args = parser.parse_args()

    dims = parse_dims(args.dims)
    field = synthesize_field(seed=args.seed, dims=dims, blobs=args.blobs)
    print(f"field {args.dims} seed={args.seed}: value range "
          f"[{field.values.min():.4g}, {field.values.max():.4g}]")

    if args.videos is None:
        names = [n for n in available_presets() if n != "stub"]
    else:
        names = [n.strip() for n in args.videos.split(",") if n.strip()]
    variants = [RAW_F32, QUANTIZED_8BIT, PNG_FRAMES] + [VIDEO_PREFIX + n for n in names]

    report = build_report(field, variants, fps=args.fps)
    print()
    print(report.to_text())
    if args.csv:
        Path(args.csv).write_text(report.to_csv(), encoding="utf-8")
        print(f"csv written to {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
