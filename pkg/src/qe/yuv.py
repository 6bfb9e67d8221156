"""Raw 4:2:0 10-bit planar YUV I/O.

Samples are stored as 16-bit little-endian words, luma plane first, then
the two chroma planes. Only the luma plane ever enters the pipeline;
chroma is copied through untouched when rewriting files.
"""
from __future__ import annotations

import os
from typing import Iterable, Sequence

import numpy as np

from .errors import RangeError, TruncationError
from .frame import MAX_SAMPLE, Plane

BYTES_PER_SAMPLE = 2
NEUTRAL_CHROMA = 512  # mid-gray for synthesized chroma planes


def luma_samples(width: int, height: int) -> int:
    return width * height


def chroma_samples(width: int, height: int) -> int:
    return ((width + 1) // 2) * ((height + 1) // 2)


def frame_bytes(width: int, height: int) -> int:
    return (luma_samples(width, height) + 2 * chroma_samples(width, height)) * BYTES_PER_SAMPLE


def count_frames(path: str, width: int, height: int) -> int:
    return os.path.getsize(path) // frame_bytes(width, height)


def _read_exact(fh, n: int, offset: int, what: str) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise TruncationError(
            f"{what}: needed {n} bytes at offset {offset}, file ends at {offset + len(data)}"
        )
    return data


def load_yuv_luma(path: str, width: int, height: int, frame_index: int) -> Plane:
    """Read the luma plane of one frame; chroma bytes are never touched."""
    if frame_index < 0:
        raise RangeError(f"frame index {frame_index} is negative")
    offset = frame_index * frame_bytes(width, height)
    nbytes = luma_samples(width, height) * BYTES_PER_SAMPLE
    with open(path, "rb") as fh:
        fh.seek(offset)
        data = _read_exact(fh, nbytes, offset, f"{path} frame {frame_index} luma")
    samples = np.frombuffer(data, dtype="<u2").reshape(height, width)
    if samples.max(initial=0) > MAX_SAMPLE:
        bad = int(np.flatnonzero(samples > MAX_SAMPLE)[0])
        raise RangeError(
            f"{path} frame {frame_index}: sample {int(samples.flat[bad])} "
            f"at flat index {bad} exceeds {MAX_SAMPLE}"
        )
    return Plane(samples)


def load_frame_raw(path: str, width: int, height: int, frame_index: int) -> bytes:
    """Read one complete frame (luma + chroma) as raw bytes."""
    fb = frame_bytes(width, height)
    offset = frame_index * fb
    with open(path, "rb") as fh:
        fh.seek(offset)
        return _read_exact(fh, fb, offset, f"{path} frame {frame_index}")


def replace_luma(frame: bytes, plane: Plane) -> bytes:
    """Splice a luma plane into a raw frame, keeping chroma bytes as is."""
    nbytes = luma_samples(plane.width, plane.height) * BYTES_PER_SAMPLE
    if len(frame) < nbytes:
        raise TruncationError(f"frame buffer of {len(frame)} bytes too short for luma {nbytes}")
    return plane.samples.astype("<u2").tobytes() + frame[nbytes:]


def write_yuv_luma(path: str, planes: Iterable[Plane] | Sequence[Plane]) -> None:
    """Write frames with the given luma planes and neutral chroma."""
    with open(path, "wb") as fh:
        for plane in planes:
            fh.write(plane.samples.astype("<u2").tobytes())
            n = chroma_samples(plane.width, plane.height)
            fh.write(np.full(2 * n, NEUTRAL_CHROMA, dtype="<u2").tobytes())
