"""Dataset-level encode/decode: a manifest plus per-time-step frame media.

A dataset directory holds ``manifest.json`` next to its media: either one
lossless 8-bit RGB PNG per time step (``frame_000000.png`` ...) or a single
video file produced by an external encoder.  The manifest carries
everything a remote client needs to invert the quantization and tiling; the
original field is never required for decoding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from . import codec
from .core import (
    Field4D,
    MosaicLayout,
    Quantizer,
    compute_layout,
    dequantize,
    make_quantizer,
    pack_frame,
    quantize,
    unpack_frame,
)
from .errors import (
    CorruptMediaError,
    FrameDimensionError,
    ManifestError,
    MissingMediaError,
    UnsupportedImageError,
)

MANIFEST_FILENAME = "manifest.json"
FRAME_PATTERN = "frame_{:06d}.png"
PNG_COMPRESS_LEVEL = 6  # DEFLATE level recorded for the PNG variant
DEFAULT_FPS = 10

MEDIA_FRAMES = "frames"
MEDIA_VIDEO = "video"

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


@dataclass(frozen=True)
class FramesMedia:
    files: tuple

    kind = MEDIA_FRAMES


@dataclass(frozen=True)
class VideoMedia:
    file: str
    codec_label: str

    kind = MEDIA_VIDEO


@dataclass(frozen=True)
class DatasetManifest:
    """Self-describing metadata bundle for one encoded dataset."""

    name: str
    dims: tuple  # (t, z, y, x)
    vmin: float
    vmax: float
    layout: MosaicLayout
    fps: float
    media: object  # FramesMedia | VideoMedia
    nan_count: int = 0
    version: int = 1

    @property
    def media_files(self) -> tuple:
        if isinstance(self.media, FramesMedia):
            return self.media.files
        return (self.media.file,)

    def to_dict(self) -> dict:
        t, z, y, x = self.dims
        if isinstance(self.media, FramesMedia):
            media = {"kind": MEDIA_FRAMES, "files": list(self.media.files)}
        else:
            media = {
                "kind": MEDIA_VIDEO,
                "file": self.media.file,
                "codecLabel": self.media.codec_label,
            }
        return {
            "version": self.version,
            "name": self.name,
            "dims": {"t": t, "z": z, "y": y, "x": x},
            "vmin": self.vmin,
            "vmax": self.vmax,
            "layout": {
                "slicesPerChannel": self.layout.slices_per_channel,
                "gridCols": self.layout.grid_cols,
                "gridRows": self.layout.grid_rows,
                "frameWidth": self.layout.frame_width,
                "frameHeight": self.layout.frame_height,
                "fillCode": self.layout.fill_code,
            },
            "fps": self.fps,
            "media": media,
            "nanCount": self.nan_count,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "DatasetManifest":
        try:
            version = int(doc["version"])
            if version != 1:
                raise ManifestError(f"unsupported manifest version {version}")
            dims = tuple(int(doc["dims"][k]) for k in ("t", "z", "y", "x"))
            if min(dims) < 1:
                raise ManifestError(f"dims must all be >= 1, got {dims}")
            vmin, vmax = float(doc["vmin"]), float(doc["vmax"])
            if vmin > vmax:
                raise ManifestError(f"vmin {vmin} exceeds vmax {vmax}")
            fps = float(doc["fps"])
            if fps <= 0:
                raise ManifestError(f"fps must be positive, got {fps}")
            nan_count = int(doc.get("nanCount", 0))
            if nan_count < 0:
                raise ManifestError(f"nanCount must be >= 0, got {nan_count}")

            echo = doc["layout"]
            layout = compute_layout(dims[1], dims[2], dims[3], fill_code=int(echo["fillCode"]))
            expected = {
                "slicesPerChannel": layout.slices_per_channel,
                "gridCols": layout.grid_cols,
                "gridRows": layout.grid_rows,
                "frameWidth": layout.frame_width,
                "frameHeight": layout.frame_height,
                "fillCode": layout.fill_code,
            }
            for key, value in expected.items():
                if int(echo[key]) != value:
                    raise ManifestError(
                        f"layout field {key}={echo[key]} disagrees with the value "
                        f"{value} recomputed from dims {dims}"
                    )

            media_doc = doc["media"]
            kind = media_doc["kind"]
            if kind == MEDIA_FRAMES:
                files = tuple(str(f) for f in media_doc["files"])
                if len(files) != dims[0]:
                    raise ManifestError(
                        f"manifest lists {len(files)} frame files for t={dims[0]}"
                    )
                media = FramesMedia(files)
            elif kind == MEDIA_VIDEO:
                media = VideoMedia(str(media_doc["file"]), str(media_doc["codecLabel"]))
            else:
                raise ManifestError(f"unknown media kind {kind!r}")

            return cls(
                name=str(doc["name"]),
                dims=dims,
                vmin=vmin,
                vmax=vmax,
                layout=layout,
                fps=fps,
                media=media,
                nan_count=nan_count,
                version=version,
            )
        except ManifestError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ManifestError(f"malformed manifest: {exc!r}") from exc


def write_manifest(manifest: DatasetManifest, path) -> None:
    Path(path).write_text(json.dumps(manifest.to_dict(), indent=2) + "\n", encoding="utf-8")


def load_manifest(path) -> DatasetManifest:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest {path} is not valid JSON: {exc}") from exc
    return DatasetManifest.from_dict(doc)


def write_frame_pixels(frame: np.ndarray, path) -> None:
    """Write one RGB frame as an 8-bit, non-interlaced PNG (DEFLATE level 6)."""
    frame = np.ascontiguousarray(frame)
    if frame.dtype != np.uint8 or frame.ndim != 3 or frame.shape[2] != 3:
        raise ValueError("frame must be a uint8 array of shape (height, width, 3)")
    if frame.shape[0] % 2 or frame.shape[1] % 2:
        raise ValueError(f"frame dimensions must be even, got {frame.shape[1]}x{frame.shape[0]}")
    Image.fromarray(frame, mode="RGB").save(path, format="PNG", compress_level=PNG_COMPRESS_LEVEL)


def read_frame_pixels(path) -> np.ndarray:
    """Read a frame PNG back as a uint8 (height, width, 3) array.

    Only the format we write is accepted: 8-bit/channel truecolor RGB,
    no alpha, no interlacing.
    """
    path = Path(path)
    try:
        with path.open("rb") as handle:
            head = handle.read(33)
    except OSError as exc:
        raise CorruptMediaError(f"cannot read {path}: {exc}") from exc
    if not head.startswith(_PNG_SIGNATURE) or len(head) < 33 or head[12:16] != b"IHDR":
        raise CorruptMediaError(f"{path} is not a PNG file")
    bit_depth, color_type, interlace = head[24], head[25], head[28]
    if bit_depth != 8:
        raise UnsupportedImageError(f"{path}: bit depth {bit_depth}; only 8-bit RGB is supported")
    if color_type != 2:
        raise UnsupportedImageError(
            f"{path}: PNG color type {color_type}; only truecolor RGB (type 2) is supported"
        )
    if interlace != 0:
        raise UnsupportedImageError(f"{path}: interlaced PNGs are not supported")
    try:
        with Image.open(path) as image:
            image.load()
            pixels = np.asarray(image, dtype=np.uint8)
    except CorruptMediaError:
        raise
    except Exception as exc:
        raise CorruptMediaError(f"cannot decode {path}: {exc}") from exc
    if pixels.ndim != 3 or pixels.shape[2] != 3:
        raise UnsupportedImageError(f"{path}: decoded to shape {pixels.shape}, expected RGB")
    return pixels


def stamp_frame_counter(frame: np.ndarray, index: int) -> None:
    """Debug overlay: bottom-right pixel holds the frame index, RGB little-endian.

    May overwrite one voxel's codes when that pixel is not padding; debug
    encodes are for playback verification, not fidelity measurements.
    """
    frame[-1, -1] = (index & 0xFF, (index >> 8) & 0xFF, (index >> 16) & 0xFF)


def read_frame_counter(frame: np.ndarray) -> int:
    r, g, b = (int(v) for v in frame[-1, -1])
    return r | (g << 8) | (b << 16)


def _mosaic_frames(field: Field4D, q: Quantizer, layout: MosaicLayout, debug_frame_counter: bool):
    for ti in range(field.t):
        frame = pack_frame(quantize(field.values[ti], q), layout)
        if debug_frame_counter:
            stamp_frame_counter(frame, ti)
        yield frame


def encode_dataset(
    field: Field4D, out_dir, fps: float = DEFAULT_FPS, debug_frame_counter: bool = False
) -> DatasetManifest:
    """Quantize, tile, and store a field as PNG frames plus manifest.

    Frame i is derived from time step i; the manifest is written last so a
    complete manifest implies complete media.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    q = make_quantizer(field)
    layout = compute_layout(field.z, field.y, field.x)
    files = []
    for ti, frame in enumerate(_mosaic_frames(field, q, layout, debug_frame_counter)):
        name = FRAME_PATTERN.format(ti)
        write_frame_pixels(frame, out_dir / name)
        files.append(name)
    manifest = DatasetManifest(
        name=field.name,
        dims=field.dims,
        vmin=q.vmin,
        vmax=q.vmax,
        layout=layout,
        fps=fps,
        media=FramesMedia(tuple(files)),
        nan_count=field.nan_count,
    )
    write_manifest(manifest, out_dir / MANIFEST_FILENAME)
    return manifest


def encode_dataset_video(
    field: Field4D,
    out_dir,
    preset: codec.CodecPreset,
    fps: float = DEFAULT_FPS,
    debug_frame_counter: bool = False,
) -> DatasetManifest:
    """Quantize, tile, and pipe the mosaic frames through a video encoder."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    q = make_quantizer(field)
    layout = compute_layout(field.z, field.y, field.x)
    filename = "video" + preset.encoder.extension
    codec.encode_video(
        _mosaic_frames(field, q, layout, debug_frame_counter),
        preset.encoder,
        fps,
        out_dir / filename,
    )
    manifest = DatasetManifest(
        name=field.name,
        dims=field.dims,
        vmin=q.vmin,
        vmax=q.vmax,
        layout=layout,
        fps=fps,
        media=VideoMedia(filename, preset.encoder.label),
        nan_count=field.nan_count,
    )
    write_manifest(manifest, out_dir / MANIFEST_FILENAME)
    return manifest


def _resolve_decoder(codec_label: str) -> codec.DecoderSpec:
    for preset in codec.builtin_presets().values():
        if preset.name == codec_label or preset.encoder.label == codec_label:
            return preset.decoder
    raise ManifestError(
        f"no decoder known for codec label {codec_label!r}; pass an explicit DecoderSpec"
    )


def decode_dataset_codes(manifest_path, decoder: codec.DecoderSpec | None = None):
    """Decode a dataset back to its quantized codes.

    Returns (manifest, codes) with codes shaped (t, z, y, x).  Uses only the
    manifest and its media files.
    """
    manifest_path = Path(manifest_path)
    manifest = load_manifest(manifest_path)
    base = manifest_path.parent
    layout = manifest.layout
    t = manifest.dims[0]
    codes = np.empty((t, layout.z, layout.y, layout.x), dtype=np.uint8)

    if isinstance(manifest.media, FramesMedia):
        for ti, name in enumerate(manifest.media.files):
            path = base / name
            if not path.exists():
                raise MissingMediaError(f"frame file {name!r} listed in manifest is missing from {base}")
            frame = read_frame_pixels(path)
            if frame.shape != (layout.frame_height, layout.frame_width, 3):
                raise FrameDimensionError(
                    f"{name}: frame is {frame.shape[1]}x{frame.shape[0]}, manifest "
                    f"layout says {layout.frame_width}x{layout.frame_height}"
                )
            codes[ti] = unpack_frame(frame, layout)
    else:
        path = base / manifest.media.file
        if not path.exists():
            raise MissingMediaError(
                f"video file {manifest.media.file!r} listed in manifest is missing from {base}"
            )
        if decoder is None:
            decoder = _resolve_decoder(manifest.media.codec_label)
        frames = codec.decode_video(
            path, decoder, layout.frame_width, layout.frame_height, t, fps=manifest.fps
        )
        for ti, frame in enumerate(frames):
            codes[ti] = unpack_frame(frame, layout)
    return manifest, codes


def decode_dataset(manifest_path, decoder: codec.DecoderSpec | None = None) -> Field4D:
    """Decode a dataset to physical values (dequantized float32)."""
    manifest, codes = decode_dataset_codes(manifest_path, decoder)
    q = Quantizer(manifest.vmin, manifest.vmax)
    values = dequantize(codes, q).astype(np.float32)
    return Field4D(values, name=manifest.name, nan_count=manifest.nan_count)
