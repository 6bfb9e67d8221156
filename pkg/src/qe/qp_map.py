"""Normalized per-pixel QP maps.

Each pixel carries its CU's quantization parameter divided by the
codec maximum (63), giving a map in [0, 1] that the network takes as an
input channel alongside the reconstruction.
"""
from __future__ import annotations

import numpy as np

from .errors import RangeError, TilingError
from .frame import QpMapPlane
from .layout import QP_MAX, QP_MIN, CuLayout


def build_qp_map(layout: CuLayout, width: int | None = None, height: int | None = None) -> QpMapPlane:
    """Rasterize a CU layout into a normalized QP map.

    When ``width``/``height`` are given, the layout must tile exactly
    that frame size.
    """
    if width is None:
        width = layout.width
    if height is None:
        height = layout.height
    if (layout.width, layout.height) != (width, height):
        raise TilingError(
            f"layout tiles {layout.width}x{layout.height}, frame is {width}x{height}"
        )
    qmap = np.empty((height, width), dtype=np.float64)
    for cu in layout:
        qmap[cu.y : cu.y + cu.h, cu.x : cu.x + cu.w] = cu.qp / QP_MAX
    return QpMapPlane(qmap)


def build_constant_qp_map(qp: int, width: int, height: int) -> QpMapPlane:
    """Constant QP map for streams coded with a single frame-level QP."""
    if not QP_MIN <= qp <= QP_MAX:
        raise RangeError(f"qp {qp} outside [{QP_MIN}, {QP_MAX}]")
    if width <= 0 or height <= 0:
        raise RangeError(f"bad map size {width}x{height}")
    qmap = np.full((height, width), qp / QP_MAX, dtype=np.float64)
    return QpMapPlane(qmap)
