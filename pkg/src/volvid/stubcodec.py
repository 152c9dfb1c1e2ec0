"""Lossless pass-through codec used as a deterministic test double.

``encode`` copies standard input verbatim to the output file; ``decode``
copies the file verbatim to standard output.  The --size/--fps flags exist
only to exercise the full command-template contract; the byte stream is
untouched.
"""

import argparse
import shutil
import sys


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="volvid-stubcodec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode")
    enc.add_argument("--size")
    enc.add_argument("--fps")
    enc.add_argument("--out", required=True)

    dec = sub.add_parser("decode")
    dec.add_argument("--in", dest="input", required=True)

    args = parser.parse_args(argv)
    if args.command == "encode":
        with open(args.out, "wb") as out:
            shutil.copyfileobj(sys.stdin.buffer, out)
    else:
        with open(args.input, "rb") as inp:
            shutil.copyfileobj(inp, sys.stdout.buffer)
        sys.stdout.buffer.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
