"""Pipe mosaic frames through external video encoders/decoders.

The wire contract is the simplest one every mainstream tool accepts: packed
24-bit RGB, row-major, frame-sequential, no padding, over the child's
standard input (encode) or standard output (decode).  Command templates
carry ``{width} {height} {fps} {output}`` / ``{input}`` placeholders that
are substituted token-wise, so paths containing spaces survive.

A small registry of presets backs the CLI: a lossless pass-through stub
(always available, used by the tests), ffmpeg templates for the usual
codecs, and an OpenCV-backed tool for hosts without an ffmpeg binary.
"""

from __future__ import annotations

import importlib.util
import os
import shlex
import shutil
import subprocess
import sys
import threading
from dataclasses import dataclass
from itertools import chain

import numpy as np

from .errors import (
    CodecSpecError,
    DecoderFailedError,
    EncoderAbortedError,
    EncoderFailedError,
    StreamAccountingError,
    ToolUnavailableError,
    TruncatedStreamError,
)

ENCODER_PLACEHOLDERS = ("{width}", "{height}", "{fps}", "{output}")
_READ_CHUNK = 1 << 20


def _validate_template(template: str, required, optional=()):
    for placeholder in required:
        count = template.count(placeholder)
        if count != 1:
            raise CodecSpecError(
                f"command template must contain {placeholder} exactly once, "
                f"found {count}: {template!r}"
            )
    for placeholder in optional:
        if template.count(placeholder) > 1:
            raise CodecSpecError(
                f"command template may contain {placeholder} at most once: {template!r}"
            )


@dataclass(frozen=True)
class EncoderSpec:
    """Template for an external encoder reading RGB24 from stdin."""

    command_template: str
    label: str
    extension: str

    def __post_init__(self):
        _validate_template(self.command_template, ENCODER_PLACEHOLDERS)


@dataclass(frozen=True)
class DecoderSpec:
    """Template for an external decoder writing RGB24 to stdout."""

    command_template: str

    def __post_init__(self):
        _validate_template(
            self.command_template, ("{input}",), optional=("{width}", "{height}", "{fps}")
        )


def _build_argv(template: str, substitutions: dict) -> list[str]:
    argv = []
    for token in shlex.split(template):
        for key, value in substitutions.items():
            token = token.replace(key, str(value))
        argv.append(token)
    return argv


def _format_fps(fps) -> str:
    if float(fps) <= 0:
        raise ValueError(f"fps must be positive, got {fps}")
    return str(int(fps)) if float(fps) == int(fps) else str(float(fps))


def _check_frame(frame, expect=None) -> np.ndarray:
    frame = np.asarray(frame)
    if frame.dtype != np.uint8 or frame.ndim != 3 or frame.shape[2] != 3:
        raise ValueError("frames must be uint8 arrays of shape (height, width, 3)")
    height, width = frame.shape[:2]
    if height % 2 or width % 2:
        raise ValueError(f"frame dimensions must be even, got {width}x{height}")
    if expect is not None and (height, width) != expect:
        raise ValueError(
            f"frame is {width}x{height} but the sequence started at "
            f"{expect[1]}x{expect[0]}"
        )
    return frame


def _drain(stream, sink: list):
    sink.append(stream.read())


def _stderr_text(chunks: list) -> str:
    return b"".join(chunks).decode("utf-8", "replace").strip()


def encode_video(frames, spec: EncoderSpec, fps, out_path) -> int:
    """Stream frames into the encoder command; returns the output file size.

    Frames may be any iterable of RGB frames; they are validated (shared
    even dimensions) and written one at a time, so the child's pipe
    provides natural backpressure.
    """
    iterator = iter(frames)
    try:
        first = next(iterator)
    except StopIteration:
        raise ValueError("cannot encode an empty frame sequence") from None
    first = _check_frame(first)
    height, width = first.shape[:2]
    argv = _build_argv(
        spec.command_template,
        {
            "{width}": width,
            "{height}": height,
            "{fps}": _format_fps(fps),
            "{output}": os.fspath(out_path),
        },
    )
    try:
        proc = subprocess.Popen(
            argv, stdin=subprocess.PIPE, stdout=subprocess.DEVNULL, stderr=subprocess.PIPE
        )
    except FileNotFoundError as exc:
        raise ToolUnavailableError(
            f"encoder command {argv[0]!r} was not found; install the tool, put it on "
            f"PATH, or select an available preset (see `volvid encode --video`)"
        ) from exc
    stderr_chunks: list = []
    drainer = threading.Thread(target=_drain, args=(proc.stderr, stderr_chunks), daemon=True)
    drainer.start()
    try:
        try:
            for frame in chain([first], iterator):
                frame = _check_frame(frame, expect=(height, width))
                proc.stdin.write(np.ascontiguousarray(frame).tobytes())
            proc.stdin.close()
        except BrokenPipeError:
            proc.wait()
            drainer.join()
            raise EncoderAbortedError(
                f"encoder {argv[0]!r} stopped reading frames: {_stderr_text(stderr_chunks)}"
            ) from None
        returncode = proc.wait()
        drainer.join()
    except Exception:
        if proc.poll() is None:
            proc.kill()
            proc.wait()
        raise
    if returncode != 0:
        raise EncoderFailedError(
            f"encoder {argv[0]!r} exited with {returncode}: {_stderr_text(stderr_chunks)}"
        )
    return os.path.getsize(out_path)


def decode_video(in_path, spec: DecoderSpec, width: int, height: int, frame_count: int, fps=None):
    """Run the decoder command and collect exactly frame_count RGB frames.

    Byte accounting is strict: a short stream raises TruncatedStreamError
    naming the complete frames received, surplus bytes raise
    StreamAccountingError (dimension mismatch is the usual cause).
    """
    if frame_count < 0:
        raise ValueError(f"frame_count must be >= 0, got {frame_count}")
    if frame_count == 0:
        return []
    substitutions = {"{input}": os.fspath(in_path)}
    if "{width}" in spec.command_template:
        substitutions["{width}"] = width
    if "{height}" in spec.command_template:
        substitutions["{height}"] = height
    if "{fps}" in spec.command_template:
        if fps is None:
            raise CodecSpecError("decoder template uses {fps} but no fps was provided")
        substitutions["{fps}"] = _format_fps(fps)
    argv = _build_argv(spec.command_template, substitutions)
    try:
        proc = subprocess.Popen(
            argv, stdin=subprocess.DEVNULL, stdout=subprocess.PIPE, stderr=subprocess.PIPE
        )
    except FileNotFoundError as exc:
        raise ToolUnavailableError(
            f"decoder command {argv[0]!r} was not found; install the tool or put it on PATH"
        ) from exc
    stderr_chunks: list = []
    drainer = threading.Thread(target=_drain, args=(proc.stderr, stderr_chunks), daemon=True)
    drainer.start()

    frame_bytes = width * height * 3
    expected = frame_bytes * frame_count
    buffer = bytearray()
    extra = 0
    try:
        while len(buffer) < expected:
            chunk = proc.stdout.read(min(_READ_CHUNK, expected - len(buffer)))
            if not chunk:
                break
            buffer.extend(chunk)
        while True:  # drain any surplus so the child can exit
            chunk = proc.stdout.read(_READ_CHUNK)
            if not chunk:
                break
            extra += len(chunk)
        returncode = proc.wait()
        drainer.join()
    except Exception:
        if proc.poll() is None:
            proc.kill()
            proc.wait()
        raise
    if returncode != 0:
        raise DecoderFailedError(
            f"decoder {argv[0]!r} exited with {returncode}: {_stderr_text(stderr_chunks)}"
        )
    if len(buffer) < expected:
        raise TruncatedStreamError(
            f"decoder stream ended after {len(buffer) // frame_bytes} complete frames "
            f"({len(buffer)} bytes); expected {frame_count} frames ({expected} bytes)"
        )
    if extra:
        raise StreamAccountingError(
            f"decoder produced {extra} bytes beyond the expected {frame_count} frames "
            f"of {width}x{height}; frame dimensions likely disagree"
        )
    frames = np.frombuffer(bytes(buffer), dtype=np.uint8).reshape(frame_count, height, width, 3)
    return [frames[i] for i in range(frame_count)]


@dataclass(frozen=True)
class CodecPreset:
    """A named encoder/decoder pair the CLI and metrics can refer to."""

    name: str
    encoder: EncoderSpec
    decoder: DecoderSpec
    description: str
    tool: str  # "builtin" | "ffmpeg" | "opencv"
    quality_rank: int = 0  # within a tool family, lower = smaller files


def find_ffmpeg():
    """ffmpeg binary from $VOLVID_FFMPEG or PATH, or None."""
    override = os.environ.get("VOLVID_FFMPEG")
    if override:
        return override
    return shutil.which("ffmpeg")


def builtin_presets() -> dict:
    """Construct the preset registry against the current environment."""
    py = shlex.quote(sys.executable)
    ff = shlex.quote(find_ffmpeg() or "ffmpeg")
    ff_decode = DecoderSpec(f"{ff} -hide_banner -loglevel error -i {{input}} -f rawvideo -pix_fmt rgb24 -")

    def ffmpeg_encoder(args: str, label: str, extension: str) -> EncoderSpec:
        return EncoderSpec(
            f"{ff} -hide_banner -loglevel error -f rawvideo -pix_fmt rgb24 "
            f"-s {{width}}x{{height}} -r {{fps}} -i - -an {args} -y {{output}}",
            label=label,
            extension=extension,
        )

    cv = f"{py} -m volvid.cvcodec"
    presets = [
        CodecPreset(
            name="stub",
            encoder=EncoderSpec(
                f"{py} -m volvid.stubcodec encode --size {{width}}x{{height}} "
                f"--fps {{fps}} --out {{output}}",
                label="stub",
                extension=".rgb24",
            ),
            decoder=DecoderSpec(f"{py} -m volvid.stubcodec decode --in {{input}}"),
            description="lossless pass-through test double (verbatim RGB24 file)",
            tool="builtin",
        ),
        CodecPreset(
            name="theora-q2",
            encoder=ffmpeg_encoder("-c:v libtheora -q:v 2", "theora-q2", ".ogv"),
            decoder=ff_decode,
            description="Theora at quality 2 via ffmpeg (small files, visible loss)",
            tool="ffmpeg",
            quality_rank=0,
        ),
        CodecPreset(
            name="theora-q10",
            encoder=ffmpeg_encoder("-c:v libtheora -q:v 10", "theora-q10", ".ogv"),
            decoder=ff_decode,
            description="Theora at quality 10 via ffmpeg",
            tool="ffmpeg",
            quality_rank=1,
        ),
        CodecPreset(
            name="x264",
            encoder=ffmpeg_encoder("-c:v libx264 -pix_fmt yuv420p -crf 23", "x264", ".mp4"),
            decoder=ff_decode,
            description="H.264 in MP4 via ffmpeg",
            tool="ffmpeg",
            quality_rank=1,
        ),
        CodecPreset(
            name="cv-vp9",
            encoder=EncoderSpec(
                f"{cv} encode --codec vp9 --size {{width}}x{{height}} --fps {{fps}} --out {{output}}",
                label="cv-vp9",
                extension=".webm",
            ),
            decoder=DecoderSpec(f"{cv} decode --in {{input}}"),
            description="VP9 in WebM via OpenCV's bundled FFmpeg",
            tool="opencv",
            quality_rank=0,
        ),
        CodecPreset(
            name="cv-mp4v",
            encoder=EncoderSpec(
                f"{cv} encode --codec mp4v --size {{width}}x{{height}} --fps {{fps}} --out {{output}}",
                label="cv-mp4v",
                extension=".mp4",
            ),
            decoder=DecoderSpec(f"{cv} decode --in {{input}}"),
            description="MPEG-4 part 2 via OpenCV's bundled FFmpeg",
            tool="opencv",
            quality_rank=1,
        ),
    ]
    return {p.name: p for p in presets}


def preset_available(preset: CodecPreset) -> bool:
    if preset.tool == "builtin":
        return True
    if preset.tool == "ffmpeg":
        return find_ffmpeg() is not None
    if preset.tool == "opencv":
        return importlib.util.find_spec("cv2") is not None
    return False


def available_presets() -> dict:
    return {name: p for name, p in builtin_presets().items() if preset_available(p)}


def resolve_preset(name: str) -> CodecPreset:
    presets = builtin_presets()
    if name not in presets:
        known = ", ".join(sorted(presets))
        raise KeyError(f"unknown codec preset {name!r}; known presets: {known}")
    return presets[name]


# Lossy presets in preference order for "just compress it" callers; the
# first entry of each tool family is its low-quality member.
_LOSSY_PREFERENCE = ("theora-q2", "cv-vp9", "cv-mp4v")


def default_lossy_preset():
    """The preferred available low-quality lossy preset, or None."""
    presets = builtin_presets()
    for name in _LOSSY_PREFERENCE:
        if preset_available(presets[name]):
            return presets[name]
    return None
