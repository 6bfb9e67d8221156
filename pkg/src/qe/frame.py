"""Core pixel data model: planes, QP-map planes, and per-frame bundles.

All pixel math in this package runs on 10-bit luma samples held in
immutable row-major arrays.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import RangeError, ShapeError

BIT_DEPTH = 10
MAX_SAMPLE = (1 << BIT_DEPTH) - 1  # 1023


class CodingMode(enum.Enum):
    """Coding type of a frame or CU."""

    INTRA = "intra"
    INTER = "inter"


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Plane:
    """A single-component 2-D array of 10-bit integer samples.

    ``samples`` is a read-only (height, width) uint16 array; every value
    must lie in [0, 1023].
    """

    samples: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.samples)
        if arr.ndim != 2 or arr.size == 0:
            raise ShapeError(f"plane needs a non-empty 2-D sample array, got shape {arr.shape}")
        if not np.issubdtype(arr.dtype, np.integer):
            if not np.all(arr == np.floor(arr)):
                raise RangeError("plane samples must be integers")
        lo, hi = int(arr.min()), int(arr.max())
        if lo < 0 or hi > MAX_SAMPLE:
            bad = int(np.flatnonzero((arr < 0) | (arr > MAX_SAMPLE))[0])
            raise RangeError(
                f"sample at flat index {bad} is {int(arr.flat[bad])}, outside [0, {MAX_SAMPLE}]"
            )
        object.__setattr__(self, "samples", _freeze(arr.astype(np.uint16)))

    @property
    def width(self) -> int:
        return self.samples.shape[1]

    @property
    def height(self) -> int:
        return self.samples.shape[0]

    @property
    def bit_depth(self) -> int:
        return BIT_DEPTH


@dataclass(frozen=True, eq=False)
class QpMapPlane:
    """Normalized per-pixel QP plane: real values in [0, 1], piecewise
    constant over CUs (or constant for the whole frame)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2 or arr.size == 0:
            raise ShapeError(f"QP map needs a non-empty 2-D array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0:
            raise RangeError("QP map values must lie in [0, 1]")
        object.__setattr__(self, "values", _freeze(arr))

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class FrameBundle:
    """Everything known about one decoded picture.

    ``prediction`` may be None for jobs that only run models without a
    prediction channel; assembling a 3-channel input then fails loudly.
    ``original`` is present only on the encoder side.
    """

    reconstruction: Plane
    qp_map: QpMapPlane
    coding_type: CodingMode
    prediction: Plane | None = None
    original: Plane | None = None
    poc: int = 0

    def __post_init__(self) -> None:
        w, h = self.reconstruction.width, self.reconstruction.height
        for name, plane in (
            ("qp_map", self.qp_map),
            ("prediction", self.prediction),
            ("original", self.original),
        ):
            if plane is None:
                continue
            if (plane.width, plane.height) != (w, h):
                raise ShapeError(
                    f"{name} is {plane.width}x{plane.height}, "
                    f"reconstruction is {w}x{h}"
                )

    @property
    def width(self) -> int:
        return self.reconstruction.width

    @property
    def height(self) -> int:
        return self.reconstruction.height
