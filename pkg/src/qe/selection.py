"""Rate-distortion driven model choice per CTB and per frame.

Every candidate model enhances the whole frame (the conv receptive
field crosses block edges), then each CTB picks the model whose output
matches the source best. A frame-level flag weighs that per-block
mosaic against the default model: signaling the mosaic costs two bits
per CTB plus the flag itself, so it is kept only when the Lagrangian
cost J = D + lambda * R actually drops.

Distortion unit throughout is the summed squared error over 10-bit
sample values, so CTB terms add up to frame terms exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ConfigError, ConsistencyError, RangeError, ShapeError
from .frame import FrameBundle, Plane
from .layout import QP_MAX, QP_MIN, CtbGrid, CtbRect
from .models import MODEL_ORDER, ModelId, ModelRegistry, default_model, enhance_frame

LAMBDA_COEF = 0.0324
FLAG_BITS = 1  # frame-level flag
CTB_BITS = 2  # mode bit + input-set bit per CTB


def compute_lambda(qp: int) -> float:
    """Lagrange multiplier for a frame-level QP: 0.0324 * 2^((qp-12)/3)."""
    if not QP_MIN <= qp <= QP_MAX:
        raise RangeError(f"qp {qp} outside [{QP_MIN}, {QP_MAX}]")
    return LAMBDA_COEF * 2.0 ** ((qp - 12) / 3.0)


def sse(a: np.ndarray, b: np.ndarray) -> int:
    """Summed squared error between two integer sample arrays."""
    if a.shape != b.shape:
        raise ShapeError(f"sse over mismatched shapes {a.shape} and {b.shape}")
    diff = a.astype(np.int64) - b.astype(np.int64)
    return int(np.sum(diff * diff, dtype=np.int64))


@dataclass(frozen=True)
class RdInput:
    """Frame-level rate/distortion context for the signaling decision.

    ``r_def`` is the frame's rate before any selection signaling; it is
    added to both branches and cancels in the comparison, so 0 is a
    valid stand-in. ``d_def`` is the distortion of the default-enhanced
    frame; left as None it is measured internally.
    """

    lam: float
    r_def: int = 0
    d_def: float | None = None

    def __post_init__(self) -> None:
        if self.lam < 0.0:
            raise RangeError(f"lambda {self.lam} is negative")
        if self.r_def < 0:
            raise RangeError(f"default rate {self.r_def} is negative")
        if self.d_def is not None and self.d_def < 0.0:
            raise RangeError(f"default distortion {self.d_def} is negative")


@dataclass(frozen=True)
class CtbDecision:
    """Winning model for one CTB, with its achieved distortion."""

    ctb_index: int
    model: ModelId
    sse: int
    area: int

    @property
    def mse(self) -> float:
        return self.sse / self.area


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of the per-frame decision.

    ``decisions`` holds the per-CTB argmin in raster order; it is kept
    even when the frame flag ends up 0 (only signaled when f1 is 1).
    Rates are in bits, distortions in summed squared error.
    """

    f1: int
    decisions: tuple[CtbDecision, ...]
    default_model: ModelId
    lam: float
    d_f1_0: float
    d_f1_1: float
    r_f1_0: int
    r_f1_1: int

    @property
    def j_f1_0(self) -> float:
        return self.d_f1_0 + self.lam * self.r_f1_0

    @property
    def j_f1_1(self) -> float:
        return self.d_f1_1 + self.lam * self.r_f1_1

    @property
    def models(self) -> tuple[ModelId, ...]:
        """Per-CTB choices as signaled when f1 is 1."""
        return tuple(d.model for d in self.decisions)

    def effective_models(self) -> tuple[ModelId, ...]:
        """Per-CTB models the decoder will actually apply."""
        if self.f1:
            return self.models
        return tuple(self.default_model for _ in self.decisions)


def enhance_all(
    bundle: FrameBundle,
    registry: ModelRegistry,
    models: Sequence[ModelId] = MODEL_ORDER,
) -> dict[ModelId, Plane]:
    """Full-frame enhancement with each requested model, computed once."""
    out: dict[ModelId, Plane] = {}
    for mid in models:
        if mid not in out:
            out[mid] = enhance_frame(bundle, mid, registry)
    return out


def select_ctb_model(
    bundle: FrameBundle,
    ctb: CtbRect,
    enhanced: Mapping[ModelId, Plane],
) -> CtbDecision:
    """Pick the model with the lowest squared error over one CTB.

    Ties break to the earliest model in the fixed id order, so results
    do not depend on iteration details.
    """
    if bundle.original is None:
        raise ConfigError("model selection needs the original plane")
    ref = _cut(bundle.original.samples, ctb)
    best_mid = None
    best_sse = None
    for mid in MODEL_ORDER:
        err = sse(_cut(enhanced[mid].samples, ctb), ref)
        if best_sse is None or err < best_sse:
            best_sse = err
            best_mid = mid
    return CtbDecision(ctb_index=ctb.index, model=best_mid, sse=best_sse, area=ctb.area)


def select_frame(
    bundle: FrameBundle,
    registry: ModelRegistry,
    grid: CtbGrid,
    rd: RdInput,
    enhanced: Mapping[ModelId, Plane] | None = None,
) -> SelectionResult:
    """Frame-level arbitration between default model and per-CTB choice.

    Rate terms: the no-signaling branch costs the frame flag alone, the
    signaling branch adds two bits for every CTB in the grid (clipped
    boundary blocks count as whole CTBs). The flag is set only when the
    signaling branch strictly lowers J. ``enhanced`` may carry
    precomputed full-frame outputs keyed by model id.
    """
    if bundle.original is None:
        raise ConfigError("model selection needs the original plane")
    if enhanced is None:
        enhanced = enhance_all(bundle, registry)

    fallback = default_model(bundle.coding_type)
    decisions = []
    d_best = 0
    d_default = 0.0
    need_default = rd.d_def is None
    for ctb in grid:
        decision = select_ctb_model(bundle, ctb, enhanced)
        decisions.append(decision)
        d_best += decision.sse
        if need_default:
            d_default += sse(
                _cut(enhanced[fallback].samples, ctb),
                _cut(bundle.original.samples, ctb),
            )
    if not need_default:
        d_default = rd.d_def

    r0 = rd.r_def + FLAG_BITS
    r1 = rd.r_def + FLAG_BITS + CTB_BITS * grid.count
    j0 = d_default + rd.lam * r0
    j1 = d_best + rd.lam * r1
    return SelectionResult(
        f1=1 if j1 < j0 else 0,
        decisions=tuple(decisions),
        default_model=fallback,
        lam=rd.lam,
        d_f1_0=d_default,
        d_f1_1=d_best,
        r_f1_0=r0,
        r_f1_1=r1,
    )


def apply_ctb_models(
    bundle: FrameBundle,
    models: Sequence[ModelId],
    registry: ModelRegistry,
    grid: CtbGrid,
    enhanced: Mapping[ModelId, Plane] | None = None,
) -> Plane:
    """Assemble the output frame from per-CTB model choices.

    Each distinct model runs over the full frame once; every CTB is then
    copied from its chosen model's output.
    """
    if len(models) != grid.count:
        raise ConsistencyError(f"{len(models)} CTB choices for a grid of {grid.count}")
    if enhanced is None:
        enhanced = enhance_all(bundle, registry, tuple(dict.fromkeys(models)))
    canvas = np.empty(
        (bundle.reconstruction.height, bundle.reconstruction.width), dtype=np.uint16
    )
    for ctb, mid in zip(grid, models):
        canvas[ctb.y : ctb.y + ctb.h, ctb.x : ctb.x + ctb.w] = _cut(
            enhanced[mid].samples, ctb
        )
    return Plane(canvas)


def apply_selection(
    bundle: FrameBundle,
    result,
    registry: ModelRegistry,
    grid: CtbGrid,
    enhanced: Mapping[ModelId, Plane] | None = None,
) -> Plane:
    """Build the output frame a decoder would produce for ``result``.

    ``result`` needs only ``f1`` plus, when the flag is set, the
    per-CTB ``models``; a full encoder-side result or a decoded
    skeleton both work. Never reads the original plane.
    """
    if result.f1:
        return apply_ctb_models(bundle, result.models, registry, grid, enhanced)
    fallback = getattr(result, "default_model", None)
    if fallback is None:
        fallback = default_model(bundle.coding_type)
    if enhanced is not None and fallback in enhanced:
        return enhanced[fallback]
    return enhance_frame(bundle, fallback, registry)


def _cut(samples: np.ndarray, ctb: CtbRect) -> np.ndarray:
    return samples[ctb.y : ctb.y + ctb.h, ctb.x : ctb.x + ctb.w]
