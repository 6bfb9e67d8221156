"""Post-processing quality enhancement for block-coded video.

A prediction-aware CNN filter over decoded 10-bit luma, with per-CTB
rate-distortion model selection, a bit-exact signaling side channel,
and BD-rate evaluation tools. See the README for the file formats and
the `qe` command-line entry point.
"""

from .errors import (
    AssemblyError,
    ConfigError,
    ConsistencyError,
    FormatError,
    MetricError,
    ParseError,
    QeError,
    RangeError,
    ShapeError,
    SignalFormatError,
    TilingError,
    TruncationError,
    WeightFormatError,
)
from .frame import BIT_DEPTH, MAX_SAMPLE, CodingMode, FrameBundle, Plane, QpMapPlane
from .layout import CtbGrid, CtbRect, CuLayout, CuRect, load_cu_layout
from .models import ModelId, ModelRegistry, load_registry, load_weights, save_weights
from .nn import InputSet, QeNetwork, forward_qe, random_network
from .selection import RdInput, SelectionResult, compute_lambda, select_frame
from .signaling import decode_signals, encode_signals

__version__ = "0.1.0"

__all__ = [
    "AssemblyError",
    "BIT_DEPTH",
    "CodingMode",
    "ConfigError",
    "ConsistencyError",
    "CtbGrid",
    "CtbRect",
    "CuLayout",
    "CuRect",
    "FormatError",
    "FrameBundle",
    "InputSet",
    "MAX_SAMPLE",
    "MetricError",
    "ModelId",
    "ModelRegistry",
    "ParseError",
    "Plane",
    "QeError",
    "QeNetwork",
    "QpMapPlane",
    "RangeError",
    "RdInput",
    "SelectionResult",
    "ShapeError",
    "SignalFormatError",
    "TilingError",
    "TruncationError",
    "WeightFormatError",
    "compute_lambda",
    "decode_signals",
    "encode_signals",
    "forward_qe",
    "load_cu_layout",
    "load_registry",
    "load_weights",
    "random_network",
    "save_weights",
    "select_frame",
    "__version__",
]
