"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes by class: configuration problems,
I/O failures, malformed data, and internal consistency violations each
get their own nonzero code (see :mod:`qe.cli`).
"""


class QeError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(QeError):
    """Invalid or incomplete job configuration (missing flag, bad combination)."""


class TruncationError(QeError):
    """A file or bitstream ended before the requested data."""


class FormatError(QeError):
    """Base class for malformed input data."""


class RangeError(FormatError):
    """A numeric value is outside its legal range (sample, QP, index)."""


class ParseError(FormatError):
    """A text sidecar or CSV line could not be parsed."""


class TilingError(FormatError):
    """CU rectangles do not tile the frame exactly."""


class AssemblyError(FormatError):
    """Prediction block missing or not matching its CU geometry."""


class ShapeError(FormatError):
    """Array dimensions incompatible with the requested operation."""


class WeightFormatError(FormatError):
    """Weight file rejected: bad magic, version, manifest, or payload."""


class SignalFormatError(FormatError):
    """Signaling stream rejected: bad magic, nonzero padding, trailing data."""


class MetricError(FormatError):
    """RD curve unusable for the requested metric."""


class ConsistencyError(QeError):
    """Two structures that must agree (result vs grid, signal vs geometry) do not."""
