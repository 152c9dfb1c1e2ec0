"""volvid: time-dependent 3D scalar fields as streamable video mosaics."""

from .container import (
    DatasetManifest,
    decode_dataset,
    decode_dataset_codes,
    encode_dataset,
    encode_dataset_video,
    load_manifest,
)
from .core import (
    CHANNELS,
    Field4D,
    MosaicLayout,
    Quantizer,
    compute_layout,
    dequantize,
    make_quantizer,
    pack_frame,
    pixel_to_voxel,
    quantize,
    unpack_frame,
    voxel_to_pixel,
)
from .ingest import read_raw_volume, synthesize_field, write_raw_volume
from .metrics import build_report, compression_ratio, mae, max_abs_error

__version__ = "0.1.0"

__all__ = [
    "CHANNELS",
    "DatasetManifest",
    "Field4D",
    "MosaicLayout",
    "Quantizer",
    "build_report",
    "compression_ratio",
    "compute_layout",
    "decode_dataset",
    "decode_dataset_codes",
    "dequantize",
    "encode_dataset",
    "encode_dataset_video",
    "load_manifest",
    "mae",
    "make_quantizer",
    "max_abs_error",
    "pack_frame",
    "pixel_to_voxel",
    "quantize",
    "read_raw_volume",
    "synthesize_field",
    "unpack_frame",
    "voxel_to_pixel",
    "write_raw_volume",
    "__version__",
]
