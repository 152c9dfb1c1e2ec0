"""Error and volume measurement across encoding variants.

A report compares, for one field, the stored byte volume and the decoded
error of each requested variant: the raw float32 array, the bare 8-bit code
array, the PNG frame set, and any number of video encodings.  Errors are
mean and maximum absolute error in the field's physical units, measured
over all voxels against the original values.
"""

from __future__ import annotations

import tempfile
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path

import numpy as np

from . import codec
from .container import decode_dataset_codes, encode_dataset, encode_dataset_video
from .core import Field4D, dequantize, make_quantizer, quantize
from .errors import ToolUnavailableError

RAW_F32 = "raw-f32"
QUANTIZED_8BIT = "quantized-8bit"
PNG_FRAMES = "png-frames"
VIDEO_PREFIX = "video:"

CSV_HEADER = "label,byteVolume,mae,maxAbsError,ratioVsRaw"

TOOL_UNAVAILABLE_NOTE = "tool unavailable"


def mae(a, b) -> float:
    """Mean absolute error between two equal-length value sequences."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise ValueError("sequences must contain at least one value")
    return float(np.abs(a - b).mean())


def max_abs_error(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise ValueError("sequences must contain at least one value")
    return float(np.abs(a - b).max())


def compression_ratio(original_bytes: int, encoded_bytes: int) -> float:
    if encoded_bytes <= 0:
        raise ValueError(f"encoded byte count must be positive, got {encoded_bytes}")
    return original_bytes / encoded_bytes


@dataclass(frozen=True)
class EncodingRow:
    label: str
    byte_volume: int
    mae_vs_original: float
    max_abs_error: float
    ratio_vs_raw: float
    note: str = ""

    @property
    def skipped(self) -> bool:
        return bool(self.note)


@dataclass
class EncodingReport:
    rows: list = dataclass_field(default_factory=list)

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for row in self.rows:
            if row.skipped:
                lines.append(f"{row.label} ({row.note}),,,,")
            else:
                lines.append(
                    f"{row.label},{row.byte_volume},{row.mae_vs_original!r},"
                    f"{row.max_abs_error!r},{row.ratio_vs_raw!r}"
                )
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        headers = ("label", "byteVolume", "mae", "maxAbsError", "ratioVsRaw")
        cells = [headers]
        for row in self.rows:
            if row.skipped:
                cells.append((row.label, row.note, "-", "-", "-"))
            else:
                cells.append(
                    (
                        row.label,
                        f"{row.byte_volume}",
                        f"{row.mae_vs_original:.6g}",
                        f"{row.max_abs_error:.6g}",
                        f"{row.ratio_vs_raw:.4g}",
                    )
                )
        widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
        lines = []
        for irow, row in enumerate(cells):
            lines.append(
                "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
            )
            if irow == 0:
                lines.append("  ".join("-" * w for w in widths))
        return "\n".join(lines) + "\n"


def _reconstruction(field: Field4D, codes: np.ndarray, q) -> np.ndarray:
    # every variant reconstructs through the same dequantize path so that
    # identical codes produce bit-identical errors
    return dequantize(codes, q).astype(np.float32)


def _dir_bytes(paths) -> int:
    return sum(Path(p).stat().st_size for p in paths)


def build_report(field: Field4D, variants, work_dir=None, fps=10) -> EncodingReport:
    """Measure byte volume and decode error for each requested variant.

    ``variants`` is an ordered list drawn from ``raw-f32``,
    ``quantized-8bit``, ``png-frames``, and ``video:<preset>``.  Video
    variants whose external tool is absent produce an explicit
    "tool unavailable" row instead of failing the whole report.
    Artifacts are written under ``work_dir`` (a temporary directory when
    omitted).
    """
    q = make_quantizer(field)
    raw_bytes = field.values.nbytes
    original = field.values

    tempdir = None
    if work_dir is None:
        tempdir = tempfile.TemporaryDirectory(prefix="volvid-metrics-")
        work_dir = tempdir.name
    work_dir = Path(work_dir)

    rows = []
    try:
        for label in variants:
            if label == RAW_F32:
                rows.append(
                    EncodingRow(label, raw_bytes, 0.0, 0.0, compression_ratio(raw_bytes, raw_bytes))
                )
            elif label == QUANTIZED_8BIT:
                codes = quantize(original, q)
                recon = _reconstruction(field, codes, q)
                rows.append(
                    EncodingRow(
                        label,
                        codes.nbytes,
                        mae(original, recon),
                        max_abs_error(original, recon),
                        compression_ratio(raw_bytes, codes.nbytes),
                    )
                )
            elif label == PNG_FRAMES:
                out = work_dir / "png-frames"
                manifest = encode_dataset(field, out, fps=fps)
                byte_volume = _dir_bytes(out / name for name in manifest.media.files)
                _, codes = decode_dataset_codes(out / "manifest.json")
                recon = _reconstruction(field, codes, q)
                rows.append(
                    EncodingRow(
                        label,
                        byte_volume,
                        mae(original, recon),
                        max_abs_error(original, recon),
                        compression_ratio(raw_bytes, byte_volume),
                    )
                )
            elif label.startswith(VIDEO_PREFIX):
                preset_name = label[len(VIDEO_PREFIX):]
                preset = codec.resolve_preset(preset_name)
                if not codec.preset_available(preset):
                    rows.append(EncodingRow(label, 0, 0.0, 0.0, 0.0, note=TOOL_UNAVAILABLE_NOTE))
                    continue
                out = work_dir / f"video-{preset_name}"
                try:
                    manifest = encode_dataset_video(field, out, preset, fps=fps)
                except ToolUnavailableError:
                    rows.append(EncodingRow(label, 0, 0.0, 0.0, 0.0, note=TOOL_UNAVAILABLE_NOTE))
                    continue
                byte_volume = (out / manifest.media.file).stat().st_size
                _, codes = decode_dataset_codes(out / "manifest.json")
                recon = _reconstruction(field, codes, q)
                rows.append(
                    EncodingRow(
                        label,
                        byte_volume,
                        mae(original, recon),
                        max_abs_error(original, recon),
                        compression_ratio(raw_bytes, byte_volume),
                    )
                )
            else:
                known = ", ".join([RAW_F32, QUANTIZED_8BIT, PNG_FRAMES, VIDEO_PREFIX + "<preset>"])
                raise ValueError(f"unknown variant {label!r}; expected one of: {known}")
    finally:
        if tempdir is not None:
            tempdir.cleanup()
    return EncodingReport(rows)
