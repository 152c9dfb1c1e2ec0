"""Operator entry point: synth / encode / decode / metrics / serve.

Exit codes: 0 success, 1 usage error, 2 data error, 3 missing external tool.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from pathlib import Path

from . import codec, metrics
from .container import (
    DEFAULT_FPS,
    MANIFEST_FILENAME,
    decode_dataset,
    encode_dataset,
    encode_dataset_video,
)
from .errors import DataError, EnvironmentToolError
from .ingest import DATA_FILENAME, HEADER_FILENAME, read_raw_volume, synthesize_field, write_raw_volume
from .server import make_server

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ENVIRONMENT = 3

_DIMS_PATTERN = re.compile(r"^(\d+)x(\d+)x(\d+)x(\d+)$")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    # argparse defaults to exit code 2; the CLI contract reserves 2 for data
    # errors and uses 1 for usage problems
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def parse_dims(text: str):
    match = _DIMS_PATTERN.match(text)
    if not match:
        raise UsageError(f"--dims must look like TxZxYxX (e.g. 8x24x64x64), got {text!r}")
    dims = tuple(int(g) for g in match.groups())
    if min(dims) < 1:
        raise UsageError(f"--dims components must all be >= 1, got {text!r}")
    return dims


def _raw_paths(directory: Path):
    return directory / HEADER_FILENAME, directory / DATA_FILENAME


def cmd_synth(args) -> int:
    dims = parse_dims(args.dims)
    field = synthesize_field(seed=args.seed, dims=dims, blobs=args.blobs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    header_path, data_path = _raw_paths(out)
    write_raw_volume(field, header_path, data_path)
    print(
        f"synthesized {field.t}x{field.z}x{field.y}x{field.x} field "
        f"(seed={args.seed}, blobs={args.blobs}) range "
        f"[{field.values.min():.6g}, {field.values.max():.6g}] -> {out}"
    )
    return EXIT_OK


def cmd_encode(args) -> int:
    header_path, data_path = _raw_paths(Path(args.in_dir))
    field = read_raw_volume(header_path, data_path)
    out = Path(args.out)
    if args.video is not None:
        try:
            preset = codec.resolve_preset(args.video)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from exc
        manifest = encode_dataset_video(
            field, out, preset, fps=args.fps, debug_frame_counter=args.debug_frame_counter
        )
        encoded = (out / manifest.media.file).stat().st_size
        label = f"video:{preset.name}"
    else:
        manifest = encode_dataset(
            field, out, fps=args.fps, debug_frame_counter=args.debug_frame_counter
        )
        encoded = sum((out / name).stat().st_size for name in manifest.media.files)
        label = "png-frames"
    raw = field.values.nbytes
    print(
        f"{label}: {field.t} frames {manifest.layout.frame_width}x"
        f"{manifest.layout.frame_height}, {encoded} bytes, "
        f"{raw / encoded:.3g}:1 vs raw-f32 -> {out / MANIFEST_FILENAME}"
    )
    return EXIT_OK


def cmd_decode(args) -> int:
    field = decode_dataset(args.manifest)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    header_path, data_path = _raw_paths(out)
    write_raw_volume(field, header_path, data_path)
    print(f"decoded {field.t}x{field.z}x{field.y}x{field.x} field -> {out}")
    return EXIT_OK


def _validate_variants(text: str):
    variants = [v.strip() for v in text.split(",") if v.strip()]
    if not variants:
        raise UsageError("--variants must list at least one variant")
    known = {metrics.RAW_F32, metrics.QUANTIZED_8BIT, metrics.PNG_FRAMES}
    for variant in variants:
        if variant in known:
            continue
        if variant.startswith(metrics.VIDEO_PREFIX):
            try:
                codec.resolve_preset(variant[len(metrics.VIDEO_PREFIX):])
            except KeyError as exc:
                raise UsageError(str(exc.args[0])) from exc
            continue
        raise UsageError(
            f"unknown variant {variant!r}; expected raw-f32, quantized-8bit, "
            f"png-frames, or video:<preset>"
        )
    return variants


def cmd_metrics(args) -> int:
    variants = _validate_variants(args.variants)
    header_path, data_path = _raw_paths(Path(args.in_dir))
    field = read_raw_volume(header_path, data_path)
    report = metrics.build_report(field, variants, fps=args.fps)
    sys.stdout.write(report.to_text())
    if args.csv:
        Path(args.csv).write_text(report.to_csv(), encoding="utf-8")
        print(f"csv -> {args.csv}")
    return EXIT_OK


def cmd_serve(args) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    try:
        httpd = make_server(args.root, args.listen)
    except (NotADirectoryError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    host, port = httpd.server_address[:2]
    print(f"serving datasets from {args.root} on http://{host}:{port}/datasets", flush=True)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
    return EXIT_OK


def build_parser() -> Parser:
    parser = Parser(prog="volvid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="generate a deterministic synthetic field")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--dims", required=True, help="TxZxYxX, e.g. 8x24x64x64")
    synth.add_argument("--blobs", type=int, default=4)
    synth.add_argument("--out", required=True)
    synth.set_defaults(func=cmd_synth)

    encode = sub.add_parser("encode", help="encode a raw volume directory to a dataset")
    encode.add_argument("--in", dest="in_dir", required=True)
    encode.add_argument("--out", required=True)
    encode.add_argument("--fps", type=float, default=DEFAULT_FPS)
    encode.add_argument("--video", metavar="SPEC_LABEL", help="encode via a codec preset instead of PNG frames")
    encode.add_argument(
        "--debug-frame-counter",
        action="store_true",
        help="stamp the frame index into the bottom-right pixel of each frame",
    )
    encode.set_defaults(func=cmd_encode)

    decode = sub.add_parser("decode", help="decode a dataset back to a raw volume")
    decode.add_argument("--manifest", required=True)
    decode.add_argument("--out", required=True)
    decode.set_defaults(func=cmd_decode)

    metrics_cmd = sub.add_parser("metrics", help="byte volume / error report per encoding variant")
    metrics_cmd.add_argument("--in", dest="in_dir", required=True)
    metrics_cmd.add_argument(
        "--variants",
        default=",".join([metrics.RAW_F32, metrics.QUANTIZED_8BIT, metrics.PNG_FRAMES]),
    )
    metrics_cmd.add_argument("--csv", help="also write the report as CSV to this path")
    metrics_cmd.add_argument("--fps", type=float, default=DEFAULT_FPS)
    metrics_cmd.set_defaults(func=cmd_metrics)

    serve = sub.add_parser("serve", help="serve encoded datasets over HTTP")
    serve.add_argument("--root", required=True)
    serve.add_argument("--listen", default="127.0.0.1:8000", help="HOST:PORT")
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"volvid: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EnvironmentToolError as exc:
        print(f"volvid: environment error: {exc}", file=sys.stderr)
        return EXIT_ENVIRONMENT
    except DataError as exc:
        print(f"volvid: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"volvid: i/o error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
