#!/usr/bin/env python3
"""Export cross-implementation fixtures consumed by the browser viewer tests.

Writes, under --out (default frontend/tests/fixtures):

* mappings.json — exactly 1000 voxel->pixel mappings across several mosaic
  layouts, so the viewer's coordinate arithmetic can be checked against the
  encoder's;
* dataset/ — a small debug-counter encode (manifest + PNG frames) used by
  the playback tests.
"""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from volvid.container import encode_dataset  # noqa: E402
from volvid.core import compute_layout, voxel_to_pixel  # noqa: E402
from volvid.ingest import SplitMix64, synthesize_field  # noqa: E402

LAYOUT_DIMS = [(24, 64, 64), (7, 5, 7), (6, 16, 16), (10, 8, 8)]
TOTAL_MAPPINGS = 1000

DATASET_SEED = 77
DATASET_DIMS = (6, 6, 16, 16)


def layout_block(dims, count, rng):
    z, y, x = dims
    layout = compute_layout(z, y, x)
    mappings = []
    for _ in range(count):
        zi = int(rng.uniform(0, z))
        yi = int(rng.uniform(0, y))
        xi = int(rng.uniform(0, x))
        channel, px, py = voxel_to_pixel(zi, yi, xi, layout)
        mappings.append({"zi": zi, "yi": yi, "xi": xi, "channel": channel, "px": px, "py": py})
    return {
        "dims": {"z": z, "y": y, "x": x},
        "layout": {
            "slicesPerChannel": layout.slices_per_channel,
            "gridCols": layout.grid_cols,
            "gridRows": layout.grid_rows,
            "frameWidth": layout.frame_width,
            "frameHeight": layout.frame_height,
            "fillCode": layout.fill_code,
        },
        "mappings": mappings,
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    default_out = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"
    parser.add_argument("--out", default=str(default_out))
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rng = SplitMix64(2015)
    per_layout = TOTAL_MAPPINGS // len(LAYOUT_DIMS)
    blocks = [layout_block(dims, per_layout, rng) for dims in LAYOUT_DIMS]
    total = sum(len(b["mappings"]) for b in blocks)
    assert total == TOTAL_MAPPINGS, total
    (out / "mappings.json").write_text(json.dumps({"layouts": blocks}, indent=1) + "\n")
    print(f"wrote {total} mappings across {len(blocks)} layouts -> {out / 'mappings.json'}")

    field = synthesize_field(seed=DATASET_SEED, dims=DATASET_DIMS, blobs=3)
    manifest = encode_dataset(field, out / "dataset", debug_frame_counter=True)
    print(f"wrote debug-counter dataset ({len(manifest.media.files)} frames) -> {out / 'dataset'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
