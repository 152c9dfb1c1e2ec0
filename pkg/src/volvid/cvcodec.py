"""External video tool backed by OpenCV's bundled FFmpeg.

Speaks the same wire contract as any other encoder preset: packed RGB24 on
standard input for ``encode``, packed RGB24 on standard output for
``decode``.  Useful on hosts without an ffmpeg binary; requires the
``opencv-python-headless`` extra.
"""

import argparse
import sys

import numpy as np

CODEC_FOURCC = {
    "vp9": "VP90",
    "mp4v": "mp4v",
    "mjpg": "MJPG",
}


def _parse_size(text: str):
    try:
        width, height = (int(part) for part in text.split("x"))
    except ValueError:
        sys.exit(f"--size must look like WIDTHxHEIGHT, got {text!r}")
    if width < 2 or height < 2 or width % 2 or height % 2:
        sys.exit(f"--size must be even and at least 2x2, got {text!r}")
    return width, height


def _encode(args) -> int:
    import cv2

    width, height = _parse_size(args.size)
    fourcc = cv2.VideoWriter_fourcc(*CODEC_FOURCC[args.codec])
    writer = cv2.VideoWriter(args.out, fourcc, float(args.fps), (width, height))
    if not writer.isOpened():
        sys.exit(f"OpenCV cannot open a {args.codec} encoder for {args.out}")
    frame_bytes = width * height * 3
    stdin = sys.stdin.buffer
    while True:
        payload = stdin.read(frame_bytes)
        if not payload:
            break
        if len(payload) != frame_bytes:
            writer.release()
            sys.exit(f"partial frame on stdin: got {len(payload)} of {frame_bytes} bytes")
        rgb = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)
        writer.write(rgb[:, :, ::-1])  # VideoWriter expects BGR
    writer.release()
    return 0


def _decode(args) -> int:
    import cv2

    capture = cv2.VideoCapture(args.input)
    if not capture.isOpened():
        sys.exit(f"OpenCV cannot open {args.input}")
    stdout = sys.stdout.buffer
    while True:
        ok, bgr = capture.read()
        if not ok:
            break
        stdout.write(np.ascontiguousarray(bgr[:, :, ::-1]).tobytes())
    capture.release()
    stdout.flush()
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="volvid-cvcodec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode")
    enc.add_argument("--codec", choices=sorted(CODEC_FOURCC), required=True)
    enc.add_argument("--size", required=True)
    enc.add_argument("--fps", required=True)
    enc.add_argument("--out", required=True)

    dec = sub.add_parser("decode")
    dec.add_argument("--in", dest="input", required=True)

    args = parser.parse_args(argv)
    try:
        import cv2  # noqa: F401
    except ImportError:
        sys.exit("cvcodec requires opencv-python (install volvid[video])")
    if args.command == "encode":
        return _encode(args)
    return _decode(args)


if __name__ == "__main__":
    sys.exit(main())
