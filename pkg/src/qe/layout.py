"""CU layouts, prediction-signal assembly, and the CTB grid.

The CU sidecar is whitespace-delimited text, one CU per line:
``x y w h qp mode`` with mode I (intra) or P (inter). Rectangles must
tile the frame exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import AssemblyError, ParseError, RangeError, TilingError
from .frame import CodingMode, Plane

QP_MIN = 0
QP_MAX = 63

DEFAULT_CTB_SIZE = 128

_MODE_CODES = {"I": CodingMode.INTRA, "P": CodingMode.INTER}
_MODE_NAMES = {v: k for k, v in _MODE_CODES.items()}


@dataclass(frozen=True)
class CuRect:
    """One coding unit: rectangle, QP, and prediction mode."""

    x: int
    y: int
    w: int
    h: int
    qp: int
    mode: CodingMode

    def __post_init__(self) -> None:
        if self.x < 0 or self.y < 0 or self.w <= 0 or self.h <= 0:
            raise RangeError(f"CU rectangle ({self.x},{self.y},{self.w},{self.h}) is degenerate")
        if not QP_MIN <= self.qp <= QP_MAX:
            raise RangeError(f"CU qp {self.qp} outside [{QP_MIN}, {QP_MAX}]")


class CuLayout:
    """A list of CUs that tiles a frame exactly: disjoint, full coverage.

    Frame size is the bounding box of the rectangles; construction fails
    with the first uncovered or doubly covered pixel otherwise.
    """

    def __init__(self, cus: Sequence[CuRect]):
        if not cus:
            raise TilingError("layout has no CUs")
        self.cus: tuple[CuRect, ...] = tuple(cus)
        self.width = max(cu.x + cu.w for cu in self.cus)
        self.height = max(cu.y + cu.h for cu in self.cus)
        cover = np.zeros((self.height, self.width), dtype=np.int32)
        for cu in self.cus:
            cover[cu.y : cu.y + cu.h, cu.x : cu.x + cu.w] += 1
        bad = np.flatnonzero(cover != 1)
        if bad.size:
            y, x = divmod(int(bad[0]), self.width)
            count = int(cover[y, x])
            kind = "uncovered" if count == 0 else f"covered {count} times"
            raise TilingError(f"pixel ({x},{y}) is {kind}")

    def __len__(self) -> int:
        return len(self.cus)

    def __iter__(self) -> Iterator[CuRect]:
        return iter(self.cus)

    def __getitem__(self, i: int) -> CuRect:
        return self.cus[i]

    @property
    def coding_type(self) -> CodingMode:
        """Intra iff every CU is intra coded, otherwise inter."""
        if all(cu.mode is CodingMode.INTRA for cu in self.cus):
            return CodingMode.INTRA
        return CodingMode.INTER

    def area_weighted_qp(self) -> int:
        """Frame-level QP: area-weighted mean of CU QPs, rounded half-up."""
        total = sum(cu.qp * cu.w * cu.h for cu in self.cus)
        area = self.width * self.height
        return int(math.floor(total / area + 0.5))


def load_cu_layout(path: str) -> CuLayout:
    """Parse a CU sidecar file. Blank lines and ``#`` comments are skipped."""
    cus = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if len(fields) != 6:
                raise ParseError(f"{path}:{lineno}: expected 'x y w h qp mode', got {line!r}")
            try:
                x, y, w, h, qp = (int(v) for v in fields[:5])
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: non-integer field: {exc}") from None
            mode = _MODE_CODES.get(fields[5])
            if mode is None:
                raise ParseError(f"{path}:{lineno}: mode must be I or P, got {fields[5]!r}")
            cus.append(CuRect(x, y, w, h, qp, mode))
    return CuLayout(cus)


def write_cu_layout(path: str, layout: CuLayout) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for cu in layout:
            fh.write(f"{cu.x} {cu.y} {cu.w} {cu.h} {cu.qp} {_MODE_NAMES[cu.mode]}\n")


def assemble_prediction(layout: CuLayout, blocks: Mapping[int, np.ndarray]) -> Plane:
    """Compose per-CU prediction blocks into a frame-sized plane.

    ``blocks`` maps CU index (position in the layout) to a (h, w) integer
    block matching that CU's geometry.
    """
    canvas = np.zeros((layout.height, layout.width), dtype=np.int64)
    for i, cu in enumerate(layout):
        block = blocks.get(i)
        if block is None:
            raise AssemblyError(f"CU {i} at ({cu.x},{cu.y}): no prediction block supplied")
        block = np.asarray(block)
        if block.shape != (cu.h, cu.w):
            raise AssemblyError(
                f"CU {i} at ({cu.x},{cu.y}): block shape {block.shape} != ({cu.h}, {cu.w})"
            )
        canvas[cu.y : cu.y + cu.h, cu.x : cu.x + cu.w] = block
    return Plane(canvas)


@dataclass(frozen=True)
class CtbRect:
    """One CTB window, clipped to the frame."""

    index: int
    x: int
    y: int
    w: int
    h: int

    @property
    def area(self) -> int:
        return self.w * self.h


class CtbGrid:
    """Raster-scan CTB partition of a frame.

    Boundary CTBs are clipped, so every pixel belongs to exactly one CTB;
    the CTB count still counts clipped CTBs as full grid cells.
    """

    def __init__(self, width: int, height: int, ctb_size: int = DEFAULT_CTB_SIZE):
        if width <= 0 or height <= 0 or ctb_size <= 0:
            raise RangeError(f"bad grid geometry {width}x{height}, ctb {ctb_size}")
        self.width = width
        self.height = height
        self.ctb_size = ctb_size
        self.cols = -(-width // ctb_size)
        self.rows = -(-height // ctb_size)
        self.count = self.cols * self.rows

    def __len__(self) -> int:
        return self.count

    def __getitem__(self, index: int) -> CtbRect:
        if not 0 <= index < self.count:
            raise IndexError(index)
        row, col = divmod(index, self.cols)
        x = col * self.ctb_size
        y = row * self.ctb_size
        return CtbRect(
            index=index,
            x=x,
            y=y,
            w=min(self.ctb_size, self.width - x),
            h=min(self.ctb_size, self.height - y),
        )

    def __iter__(self) -> Iterator[CtbRect]:
        for i in range(self.count):
            yield self[i]
