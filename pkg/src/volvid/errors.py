"""Exception hierarchy shared across the pipeline.

Grouped so the CLI can map failures onto its exit-code contract:
``DataError`` subclasses exit with 2, ``EnvironmentToolError`` with 3,
usage problems (argparse, bad labels) with 1.
"""


class VolvidError(Exception):
    """Base class for all volvid failures."""


class DataError(VolvidError):
    """Input data, media, or manifest is wrong or inconsistent."""


class CorruptInputError(DataError):
    """Raw volume data does not match its header (size, encoding)."""


class UnsupportedFormatError(DataError):
    """Header declares a dtype/order token this reader does not handle."""


class ManifestError(DataError):
    """Dataset manifest is missing, malformed, or violates its invariants."""


class MissingMediaError(DataError):
    """A media file listed in the manifest is absent on disk."""


class FrameDimensionError(DataError):
    """A decoded frame's dimensions disagree with the manifest layout."""


class CorruptMediaError(DataError):
    """A media file exists but cannot be decoded."""


class UnsupportedImageError(DataError):
    """Image file is not the 8-bit RGB non-interlaced PNG we produce."""


class LayoutOversizeError(DataError):
    """Requested mosaic frame exceeds the addressable frame size."""


class CodecSpecError(DataError):
    """Encoder/decoder command template fails placeholder validation."""


class EncoderFailedError(DataError):
    """External encoder exited nonzero; carries its diagnostic output."""


class EncoderAbortedError(DataError):
    """External encoder closed its input pipe before we finished writing."""


class DecoderFailedError(DataError):
    """External decoder exited nonzero; carries its diagnostic output."""


class TruncatedStreamError(DataError):
    """Decoder produced fewer bytes than the expected frame count needs."""


class StreamAccountingError(DataError):
    """Decoder produced more bytes than the expected frames account for."""


class EnvironmentToolError(VolvidError):
    """The runtime environment lacks a required external tool."""


class ToolUnavailableError(EnvironmentToolError):
    """The configured external encoder/decoder command cannot be found."""
