"""Quantization and mosaic-frame math for time-dependent 3D scalar fields.

One time step of a (z, y, x) volume becomes a single RGB image: the z slices
are split into three groups of ``ceil(z / 3)`` (red holds the first group,
green the second, blue the last) and each group is tiled onto a near-square
grid of (y, x) tiles.  Frame width/height are rounded up to even numbers so
the frames are acceptable to mainstream video encoders.

Array conventions used throughout the package:

* a *code volume* is a ``uint8`` array of shape ``(z, y, x)``;
* an *RGB frame* is a ``uint8`` array of shape ``(height, width, 3)``,
  row-major, even dimensions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import LayoutOversizeError

CHANNELS = 3

# Largest frame (bytes of packed RGB24) common image/video tooling can be
# trusted to address with 32-bit arithmetic.
MAX_FRAME_BYTES = 2**31 - 1


@dataclass(frozen=True)
class Field4D:
    """Scalar samples on a (t, z, y, x) grid, x varying fastest.

    ``values`` is kept as float32, matching the on-disk interchange format.
    ``nan_count`` records how many non-finite inputs were replaced at ingest.
    """

    values: np.ndarray
    name: str = "field"
    units: str = ""
    nan_count: int = 0

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float32)
        if arr.ndim != 4:
            raise ValueError(f"field must be 4-dimensional (t,z,y,x), got shape {arr.shape}")
        if min(arr.shape) < 1:
            raise ValueError(f"all dimensions must be >= 1, got {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("field contains non-finite values; replace them at ingest")
        object.__setattr__(self, "values", arr)

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return self.values.shape

    @property
    def t(self) -> int:
        return self.values.shape[0]

    @property
    def z(self) -> int:
        return self.values.shape[1]

    @property
    def y(self) -> int:
        return self.values.shape[2]

    @property
    def x(self) -> int:
        return self.values.shape[3]


@dataclass(frozen=True)
class Quantizer:
    """Affine map between physical values and 8-bit codes."""

    vmin: float
    vmax: float

    def __post_init__(self):
        if not (math.isfinite(self.vmin) and math.isfinite(self.vmax)):
            raise ValueError("quantizer bounds must be finite")
        if self.vmin > self.vmax:
            raise ValueError(f"vmin {self.vmin} exceeds vmax {self.vmax}")

    @property
    def degenerate(self) -> bool:
        """Constant field: every value quantizes to 0 and decodes to vmin."""
        return self.vmin == self.vmax


def make_quantizer(field: Field4D) -> Quantizer:
    """Global (vmin, vmax) over every voxel of every time step.

    One scale per dataset keeps consecutive frames comparable, which is what
    lets video codecs exploit temporal coherence.
    """
    return Quantizer(float(field.values.min()), float(field.values.max()))


def quantize(values, q: Quantizer):
    """Map value(s) to codes: clamp(round_half_away((v - vmin) * 255 / (vmax - vmin))).

    Accepts a scalar or any ndarray; returns an int for scalar input, else a
    uint8 array of the same shape.  Out-of-range values clamp to 0 or 255.
    """
    arr = np.asarray(values, dtype=np.float64)
    if q.degenerate:
        codes = np.zeros(arr.shape, dtype=np.uint8)
    else:
        scaled = (arr - q.vmin) * 255.0 / (q.vmax - q.vmin)
        # round half away from zero: deterministic and platform-independent
        rounded = np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)
        codes = np.clip(rounded, 0.0, 255.0).astype(np.uint8)
    if codes.ndim == 0:
        return int(codes[()])
    return codes


def dequantize(codes, q: Quantizer):
    """Inverse map: vmin + code * (vmax - vmin) / 255.

    Accepts a scalar or ndarray of codes in [0, 255]; returns float64.
    A degenerate quantizer decodes every code to vmin.
    """
    arr = np.asarray(codes)
    if arr.dtype != np.uint8:
        check = np.asarray(arr, dtype=np.float64)
        if check.size and (check.min() < 0 or check.max() > 255):
            raise ValueError("codes must lie in [0, 255]")
    if q.degenerate:
        out = np.full(arr.shape, q.vmin, dtype=np.float64)
    else:
        out = q.vmin + arr.astype(np.float64) * ((q.vmax - q.vmin) / 255.0)
    if out.ndim == 0:
        return float(out[()])
    return out


@dataclass(frozen=True)
class MosaicLayout:
    """Deterministic bijection voxel(z,y,x) <-> (channel, px, py) for one frame."""

    z: int
    y: int
    x: int
    slices_per_channel: int
    grid_cols: int
    grid_rows: int
    frame_width: int
    frame_height: int
    fill_code: int = 0
    channels: int = CHANNELS


def _round_up_even(n: int) -> int:
    return n + (n & 1)


def compute_layout(z: int, y: int, x: int, fill_code: int = 0) -> MosaicLayout:
    """Derive the mosaic layout for a (z, y, x) volume.

    slices_per_channel = ceil(z/3); the tile grid is near-square
    (cols = ceil(sqrt(slices)), rows = ceil(slices/cols)); frame dimensions
    are grid extents rounded up to even pixel counts.
    """
    if min(z, y, x) < 1:
        raise ValueError(f"dimensions must be >= 1, got z={z} y={y} x={x}")
    if not 0 <= fill_code <= 255:
        raise ValueError(f"fill_code must be an 8-bit value, got {fill_code}")
    slices = -(-z // CHANNELS)
    root = math.isqrt(slices)
    grid_cols = root if root * root == slices else root + 1
    grid_rows = -(-slices // grid_cols)
    frame_width = _round_up_even(grid_cols * x)
    frame_height = _round_up_even(grid_rows * y)
    if frame_width * frame_height * CHANNELS > MAX_FRAME_BYTES:
        raise LayoutOversizeError(
            f"mosaic frame {frame_width}x{frame_height} for volume "
            f"z={z} y={y} x={x} exceeds the addressable frame size"
        )
    return MosaicLayout(
        z=z,
        y=y,
        x=x,
        slices_per_channel=slices,
        grid_cols=grid_cols,
        grid_rows=grid_rows,
        frame_width=frame_width,
        frame_height=frame_height,
        fill_code=fill_code,
    )


def voxel_to_pixel(zi: int, yi: int, xi: int, layout: MosaicLayout) -> tuple[int, int, int]:
    """Map a voxel index to its (channel, px, py) position in the frame.

    Channel R=0 holds slices [0, S), G=1 holds [S, 2S), B=2 holds [2S, 3S)
    with S = slices_per_channel; within a channel, slice s occupies tile
    (s % grid_cols, s // grid_cols).
    """
    if not (0 <= zi < layout.z and 0 <= yi < layout.y and 0 <= xi < layout.x):
        raise IndexError(
            f"voxel ({zi},{yi},{xi}) outside volume z={layout.z} y={layout.y} x={layout.x}"
        )
    channel, s = divmod(zi, layout.slices_per_channel)
    tile_row, tile_col = divmod(s, layout.grid_cols)
    return channel, tile_col * layout.x + xi, tile_row * layout.y + yi


def pixel_to_voxel(channel: int, px: int, py: int, layout: MosaicLayout):
    """Invert :func:`voxel_to_pixel`; returns (zi, yi, xi) or None for padding.

    None marks pixels outside the tile grid (even-dimension padding), in
    unused tile cells, and in tile slots beyond the last real slice.
    """
    if not (0 <= channel < CHANNELS):
        raise IndexError(f"channel {channel} outside [0, {CHANNELS})")
    if not (0 <= px < layout.frame_width and 0 <= py < layout.frame_height):
        raise IndexError(
            f"pixel ({px},{py}) outside frame {layout.frame_width}x{layout.frame_height}"
        )
    if px >= layout.grid_cols * layout.x or py >= layout.grid_rows * layout.y:
        return None
    tile_col, xi = divmod(px, layout.x)
    tile_row, yi = divmod(py, layout.y)
    s = tile_row * layout.grid_cols + tile_col
    if s >= layout.slices_per_channel:
        return None
    zi = channel * layout.slices_per_channel + s
    if zi >= layout.z:
        return None
    return zi, yi, xi


def _require_code_volume(codes: np.ndarray, layout: MosaicLayout) -> np.ndarray:
    codes = np.asarray(codes)
    if codes.dtype != np.uint8:
        raise ValueError(f"code volume must be uint8, got {codes.dtype}")
    if codes.shape != (layout.z, layout.y, layout.x):
        raise ValueError(
            f"code volume shape {codes.shape} does not match layout "
            f"({layout.z}, {layout.y}, {layout.x})"
        )
    return codes


def _require_frame(frame: np.ndarray, layout: MosaicLayout) -> np.ndarray:
    frame = np.asarray(frame)
    if frame.dtype != np.uint8:
        raise ValueError(f"frame must be uint8, got {frame.dtype}")
    if frame.shape != (layout.frame_height, layout.frame_width, CHANNELS):
        raise ValueError(
            f"frame shape {frame.shape} does not match layout "
            f"({layout.frame_height}, {layout.frame_width}, {CHANNELS})"
        )
    return frame


def pack_frame(codes: np.ndarray, layout: MosaicLayout) -> np.ndarray:
    """Tile a (z, y, x) code volume into one (H, W, 3) RGB frame.

    Every (channel, px, py) position not backed by a voxel is fill_code.
    """
    codes = _require_code_volume(codes, layout)
    frame = np.full(
        (layout.frame_height, layout.frame_width, CHANNELS), layout.fill_code, dtype=np.uint8
    )
    for s in range(layout.slices_per_channel):
        tile_row, tile_col = divmod(s, layout.grid_cols)
        y0 = tile_row * layout.y
        x0 = tile_col * layout.x
        for channel in range(CHANNELS):
            zi = channel * layout.slices_per_channel + s
            if zi < layout.z:
                frame[y0 : y0 + layout.y, x0 : x0 + layout.x, channel] = codes[zi]
    return frame


def unpack_frame(frame: np.ndarray, layout: MosaicLayout) -> np.ndarray:
    """Exact inverse of :func:`pack_frame`; padding pixels are ignored."""
    frame = _require_frame(frame, layout)
    codes = np.empty((layout.z, layout.y, layout.x), dtype=np.uint8)
    for zi in range(layout.z):
        channel, s = divmod(zi, layout.slices_per_channel)
        tile_row, tile_col = divmod(s, layout.grid_cols)
        y0 = tile_row * layout.y
        x0 = tile_col * layout.x
        codes[zi] = frame[y0 : y0 + layout.y, x0 : x0 + layout.x, channel]
    return codes
