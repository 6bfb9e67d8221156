"""Bitstream syntax for the model-selection side channel.

Per frame, one flag bit f1. When f1 is 1, each CTB in raster order
contributes two bits: the coding-mode bit (0 intra, 1 inter) then the
input-set bit (0 cq, 1 cqp). Bits pack MSB first; the final byte is
zero padded. Geometry (per-frame CTB counts) travels out of band.

A signal file prefixes the payload with a magic and a version word:

    bytes 0..7   magic "QESIGNAL"
    u32 LE       format version (1)
    ...          packed payload bits
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Protocol, Sequence

from .errors import ConsistencyError, RangeError, SignalFormatError, TruncationError
from .models import ModelId

SIGNAL_MAGIC = b"QESIGNAL"
SIGNAL_VERSION = 1


class BitWriter:
    """MSB-first bit packer."""

    def __init__(self) -> None:
        self._out = bytearray()
        self._acc = 0
        self._nbits = 0

    def write_bit(self, bit: int) -> None:
        if bit not in (0, 1):
            raise RangeError(f"bit must be 0 or 1, got {bit!r}")
        self._acc = (self._acc << 1) | bit
        self._nbits += 1
        if self._nbits == 8:
            self._out.append(self._acc)
            self._acc = 0
            self._nbits = 0

    @property
    def bit_length(self) -> int:
        return len(self._out) * 8 + self._nbits

    def getvalue(self) -> bytes:
        """Packed bytes, final partial byte zero padded."""
        out = bytes(self._out)
        if self._nbits:
            out += bytes([self._acc << (8 - self._nbits)])
        return out


class BitReader:
    """MSB-first bit unpacker over a byte string."""

    def __init__(self, data: bytes) -> None:
        self._data = data
        self._pos = 0  # in bits

    def read_bit(self) -> int:
        if self._pos >= len(self._data) * 8:
            raise TruncationError(f"bitstream ends at bit {self._pos}")
        byte = self._data[self._pos >> 3]
        bit = (byte >> (7 - (self._pos & 7))) & 1
        self._pos += 1
        return bit

    @property
    def bits_read(self) -> int:
        return self._pos

    @property
    def bits_left(self) -> int:
        return len(self._data) * 8 - self._pos


class FrameChoice(Protocol):
    """What the encoder needs from a per-frame decision."""

    @property
    def f1(self) -> int: ...

    @property
    def models(self) -> Sequence[ModelId]: ...


@dataclass(frozen=True)
class DecodedSelection:
    """One frame's decoded decision; ``models`` is None when f1 is 0."""

    f1: int
    models: tuple[ModelId, ...] | None


def _norm_counts(ctb_counts: int | Sequence[int], num_frames: int) -> list[int]:
    if isinstance(ctb_counts, int):
        counts = [ctb_counts] * num_frames
    else:
        counts = list(ctb_counts)
    if len(counts) != num_frames:
        raise ConsistencyError(f"{len(counts)} CTB counts for {num_frames} frames")
    if any(c <= 0 for c in counts):
        raise RangeError("CTB count must be positive")
    return counts


def signal_bits(results: Sequence[FrameChoice], ctb_counts: int | Sequence[int]) -> int:
    """Exact payload size in bits: 1 + (f1 ? 2*ctb_count : 0) per frame."""
    counts = _norm_counts(ctb_counts, len(results))
    return sum(1 + (2 * n if sel.f1 else 0) for sel, n in zip(results, counts))


def encode_signals(results: Sequence[FrameChoice], ctb_counts: int | Sequence[int]) -> bytes:
    """Pack per-frame decisions into payload bytes."""
    counts = _norm_counts(ctb_counts, len(results))
    w = BitWriter()
    for n, (sel, count) in enumerate(zip(results, counts)):
        if sel.f1 not in (0, 1):
            raise RangeError(f"frame {n}: flag must be 0 or 1, got {sel.f1!r}")
        w.write_bit(sel.f1)
        if not sel.f1:
            continue
        if len(sel.models) != count:
            raise ConsistencyError(
                f"frame {n}: {len(sel.models)} CTB choices, grid has {count}"
            )
        for mid in sel.models:
            mode_bit, input_bit = mid.bits
            w.write_bit(mode_bit)
            w.write_bit(input_bit)
    return w.getvalue()


def decode_signals(
    payload: bytes, ctb_counts: Sequence[int] | int, num_frames: int | None = None
) -> list[DecodedSelection]:
    """Unpack payload bytes; strict about padding and trailing data."""
    if num_frames is None:
        if isinstance(ctb_counts, int):
            raise ConsistencyError("scalar CTB count needs an explicit frame count")
        num_frames = len(ctb_counts)
    counts = _norm_counts(ctb_counts, num_frames)
    r = BitReader(payload)
    out: list[DecodedSelection] = []
    for count in counts:
        f1 = r.read_bit()
        models = None
        if f1:
            models = tuple(
                ModelId.from_bits(r.read_bit(), r.read_bit()) for _ in range(count)
            )
        out.append(DecodedSelection(f1, models))
    if r.bits_left >= 8:
        raise SignalFormatError(f"{r.bits_left} unread bits: trailing data after last frame")
    while r.bits_left:
        if r.read_bit():
            raise SignalFormatError("padding bits after last frame are not zero")
    return out


def write_signal_file(
    path: str, results: Sequence[FrameChoice], ctb_counts: int | Sequence[int]
) -> None:
    with open(path, "wb") as fh:
        fh.write(SIGNAL_MAGIC)
        fh.write(struct.pack("<I", SIGNAL_VERSION))
        fh.write(encode_signals(results, ctb_counts))


def read_signal_file(
    path: str, ctb_counts: Sequence[int] | int, num_frames: int | None = None
) -> list[DecodedSelection]:
    with open(path, "rb") as fh:
        header = fh.read(len(SIGNAL_MAGIC) + 4)
        if len(header) < len(SIGNAL_MAGIC) + 4:
            raise TruncationError(f"{path}: file shorter than the signal header")
        if header[: len(SIGNAL_MAGIC)] != SIGNAL_MAGIC:
            raise SignalFormatError(f"{path}: bad magic {header[:len(SIGNAL_MAGIC)]!r}")
        (version,) = struct.unpack("<I", header[len(SIGNAL_MAGIC) :])
        if version != SIGNAL_VERSION:
            raise SignalFormatError(f"{path}: unsupported signal version {version}")
        payload = fh.read()
    return decode_signals(payload, ctb_counts, num_frames)
