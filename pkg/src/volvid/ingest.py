"""Raw 4D field interchange format and deterministic synthetic test fields.

The interchange format is deliberately minimal: a JSON header describing the
dimensions next to a flat little-endian float32 payload (x fastest, then y,
z, t).  Converters from operational formats are expected to live outside
this package.

Synthetic fields are sums of 3D Gaussian blobs whose centers drift linearly
in time, so they carry the spatial and temporal coherence that makes the
compression experiments meaningful.  All randomness comes from a 64-bit
splitmix generator with a fixed draw order, so a (seed, dims, blobs) triple
produces the same field on every platform.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import Field4D
from .errors import CorruptInputError, UnsupportedFormatError

DTYPE_TOKEN = "f32le"
ORDER_TOKEN = "tzyx"

HEADER_FILENAME = "header.json"
DATA_FILENAME = "data.f32"


@dataclass(frozen=True)
class RawVolumeHeader:
    t: int
    z: int
    y: int
    x: int
    name: str = "field"
    units: str = ""
    dtype: str = DTYPE_TOKEN
    order: str = ORDER_TOKEN

    def __post_init__(self):
        if self.dtype != DTYPE_TOKEN:
            raise UnsupportedFormatError(f"unsupported dtype token {self.dtype!r}, expected {DTYPE_TOKEN!r}")
        if self.order != ORDER_TOKEN:
            raise UnsupportedFormatError(f"unsupported order token {self.order!r}, expected {ORDER_TOKEN!r}")
        if min(self.t, self.z, self.y, self.x) < 1:
            raise CorruptInputError(
                f"dims must all be >= 1, got t={self.t} z={self.z} y={self.y} x={self.x}"
            )

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (self.t, self.z, self.y, self.x)

    def to_dict(self) -> dict:
        return {
            "dims": {"t": self.t, "z": self.z, "y": self.y, "x": self.x},
            "dtype": self.dtype,
            "order": self.order,
            "name": self.name,
            "units": self.units,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "RawVolumeHeader":
        # unknown fields are ignored on purpose
        try:
            dims = doc["dims"]
            return cls(
                t=int(dims["t"]),
                z=int(dims["z"]),
                y=int(dims["y"]),
                x=int(dims["x"]),
                name=str(doc.get("name", "field")),
                units=str(doc.get("units", "")),
                dtype=str(doc.get("dtype", "")),
                order=str(doc.get("order", "")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptInputError(f"malformed raw volume header: {exc}") from exc


def write_raw_volume(field: Field4D, header_path, data_path) -> None:
    """Write header JSON and flat little-endian float32 payload.

    Output is byte-exact deterministic for a given field.
    """
    header = RawVolumeHeader(
        t=field.t, z=field.z, y=field.y, x=field.x, name=field.name, units=field.units
    )
    header_path, data_path = Path(header_path), Path(data_path)
    try:
        header_path.write_text(json.dumps(header.to_dict(), indent=2) + "\n", encoding="utf-8")
        data_path.write_bytes(field.values.astype("<f4", copy=False).tobytes())
    except OSError as exc:
        raise OSError(f"writing raw volume to {header_path} / {data_path}: {exc}") from exc


def read_raw_volume(header_path, data_path) -> Field4D:
    """Read a raw volume pair back into a Field4D.

    Non-finite payload values are replaced by 0.0; the count is attached to
    the returned field and reported as a warning.
    """
    header_path, data_path = Path(header_path), Path(data_path)
    try:
        doc = json.loads(header_path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise CorruptInputError(f"cannot read header {header_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CorruptInputError(f"header {header_path} is not valid JSON: {exc}") from exc
    header = RawVolumeHeader.from_dict(doc)

    try:
        payload = data_path.read_bytes()
    except OSError as exc:
        raise CorruptInputError(f"cannot read data {data_path}: {exc}") from exc
    expected = header.t * header.z * header.y * header.x * 4
    if len(payload) != expected:
        raise CorruptInputError(
            f"{data_path}: expected {expected} bytes for dims "
            f"{header.dims}, found {len(payload)}"
        )
    values = np.frombuffer(payload, dtype="<f4").reshape(header.dims).copy()
    bad = ~np.isfinite(values)
    nan_count = int(bad.sum())
    if nan_count:
        values[bad] = 0.0
        warnings.warn(f"{data_path}: replaced {nan_count} non-finite values with 0.0")
    return Field4D(values, name=header.name, units=header.units, nan_count=nan_count)


_MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64 with the standard constants; documented so decoded fields
    can be regenerated independently of this package."""

    GAMMA = 0x9E3779B97F4A7C15
    MIX1 = 0xBF58476D1CE4E5B9
    MIX2 = 0x94D049BB133111EB

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + self.GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * self.MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * self.MIX2) & _MASK64
        return z ^ (z >> 31)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        # top 53 bits give a dyadic rational in [0, 1)
        u = (self.next_u64() >> 11) * 2.0**-53
        return lo + (hi - lo) * u


# Blob parameter ranges, in fractions of the grid (centers), voxels per step
# (drift) and fractions of the smallest spatial extent (width).
_CENTER_LO, _CENTER_HI = 0.15, 0.85
_DRIFT_MAX = 0.5
_SIGMA_LO, _SIGMA_HI = 0.15, 0.30
_AMP_LO, _AMP_HI = 0.5, 1.0


def synthesize_field(seed: int, dims: tuple[int, int, int, int], blobs: int = 4) -> Field4D:
    """Deterministic cloud-like test field: drifting Gaussian blobs in [0, 1].

    Per blob the generator draws, in order: center (z, y, x fractions),
    drift velocity (z, y, x voxels/step), width (fraction of the smallest
    spatial extent), amplitude.  Values are clamped to [0, 1].
    """
    t, z, y, x = dims
    if min(dims) < 1:
        raise ValueError(f"dims must all be >= 1, got {dims}")
    if blobs < 1:
        raise ValueError(f"blobs must be >= 1, got {blobs}")

    rng = SplitMix64(seed)
    params = []
    m = min(z, y, x)
    for _ in range(blobs):
        center = tuple(
            rng.uniform(_CENTER_LO, _CENTER_HI) * (n - 1) for n in (z, y, x)
        )
        drift = tuple(rng.uniform(-_DRIFT_MAX, _DRIFT_MAX) for _ in range(3))
        sigma = rng.uniform(_SIGMA_LO, _SIGMA_HI) * m
        amp = rng.uniform(_AMP_LO, _AMP_HI)
        params.append((center, drift, sigma, amp))

    iz = np.arange(z, dtype=np.float64)
    iy = np.arange(y, dtype=np.float64)
    ix = np.arange(x, dtype=np.float64)
    values = np.zeros((t, z, y, x), dtype=np.float64)
    for ti in range(t):
        for (cz, cy, cx), (dz, dy, dx), sigma, amp in params:
            denom = 2.0 * sigma * sigma
            gz = np.exp(-((iz - (cz + dz * ti)) ** 2) / denom)
            gy = np.exp(-((iy - (cy + dy * ti)) ** 2) / denom)
            gx = np.exp(-((ix - (cx + dx * ti)) ** 2) / denom)
            values[ti] += amp * gz[:, None, None] * gy[None, :, None] * gx[None, None, :]
    np.clip(values, 0.0, 1.0, out=values)
    return Field4D(
        values.astype(np.float32),
        name=f"synthetic-blobs-seed{seed}",
        units="1",
    )


def blob_parameters(seed: int, blobs: int, dims: tuple[int, int, int, int]):
    """Replay the parameter draws of :func:`synthesize_field` (test hook)."""
    t, z, y, x = dims
    rng = SplitMix64(seed)
    m = min(z, y, x)
    out = []
    for _ in range(blobs):
        center = tuple(rng.uniform(_CENTER_LO, _CENTER_HI) * (n - 1) for n in (z, y, x))
        drift = tuple(rng.uniform(-_DRIFT_MAX, _DRIFT_MAX) for _ in range(3))
        sigma = rng.uniform(_SIGMA_LO, _SIGMA_HI) * m
        amp = rng.uniform(_AMP_LO, _AMP_HI)
        out.append({"center": center, "drift": drift, "sigma": sigma, "amp": amp})
    return out
