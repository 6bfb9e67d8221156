"""Synthetic training data: degraded frames, co-located patches, augmentation.

Real training corpora are encoder reconstructions of large frame sets;
at desk scale we stand in synthetic degradations: a box blur plus
QP-scaled quantization noise yields the reconstruction, a heavier blur
yields the prediction signal. What matters downstream is the procedure:
co-located crops of all four planes, joint geometric augmentation, and
normalized channel stacks in the engine's order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from .errors import ConfigError, DataError

MAX_SAMPLE = 1023
QP_MAX = 63


# ------------------------------------------------------------ yuv plumbing

def write_yuv(path: str, lumas, rng=None) -> None:
    """Raw 4:2:0 10-bit file; chroma is neutral (or random when rng given)."""
    with open(path, "wb") as fh:
        for luma in lumas:
            luma = np.asarray(luma)
            h, w = luma.shape
            fh.write(luma.astype("<u2").tobytes())
            n = ((w + 1) // 2) * ((h + 1) // 2)
            if rng is None:
                chroma = np.full(2 * n, 512, dtype="<u2")
            else:
                chroma = rng.integers(0, MAX_SAMPLE + 1, size=2 * n).astype("<u2")
            fh.write(chroma.tobytes())


def load_yuv_luma(path: str, width: int, height: int, index: int) -> np.ndarray:
    luma_bytes = width * height * 2
    chroma_bytes = 2 * (((width + 1) // 2) * ((height + 1) // 2)) * 2
    offset = index * (luma_bytes + chroma_bytes)
    with open(path, "rb") as fh:
        fh.seek(offset)
        raw = fh.read(luma_bytes)
    if len(raw) != luma_bytes:
        raise DataError(f"{path}: frame {index} is incomplete")
    return np.frombuffer(raw, dtype="<u2").reshape(height, width).astype(np.int64)


# ------------------------------------------------------- synthetic frames

def _box_blur(plane: np.ndarray) -> np.ndarray:
    padded = np.pad(plane.astype(np.float64), 1, mode="edge")
    acc = np.zeros_like(plane, dtype=np.float64)
    h, w = plane.shape
    for dy in range(3):
        for dx in range(3):
            acc += padded[dy : dy + h, dx : dx + w]
    return acc / 9.0


def synth_original(rng: np.random.Generator, height: int, width: int) -> np.ndarray:
    """Structured 10-bit content: smooth field plus a few flat rectangles."""
    coarse = rng.uniform(0, MAX_SAMPLE, size=(height // 8 + 2, width // 8 + 2))
    field = np.kron(coarse, np.ones((8, 8)))[:height, :width]
    field = _box_blur(_box_blur(field))
    for _ in range(int(rng.integers(2, 5))):
        x = int(rng.integers(0, max(1, width - 4)))
        y = int(rng.integers(0, max(1, height - 4)))
        w = int(rng.integers(3, max(4, width // 3)))
        h = int(rng.integers(3, max(4, height // 3)))
        field[y : y + h, x : x + w] = rng.uniform(0, MAX_SAMPLE)
    return np.clip(np.floor(field + 0.5), 0, MAX_SAMPLE).astype(np.int64)


def degrade(original: np.ndarray, qp: int, rng: np.random.Generator):
    """(reconstruction, prediction) for one frame at the given QP."""
    if not 0 <= qp <= QP_MAX:
        raise ConfigError(f"qp {qp} outside [0, {QP_MAX}]")
    amp = max(1.0, 2.0 ** ((qp - 12) / 6.0))
    blurred = _box_blur(original)
    noise = rng.uniform(-amp, amp, size=original.shape)
    recon = np.clip(np.floor(blurred + noise + 0.5), 0, MAX_SAMPLE).astype(np.int64)
    pred_noise = rng.uniform(-2.0, 2.0, size=original.shape)
    pred = np.clip(np.floor(_box_blur(blurred) + pred_noise + 0.5), 0, MAX_SAMPLE)
    return recon, pred.astype(np.int64)


@dataclass(frozen=True)
class FrameData:
    """One training frame: all planes share geometry; qp is frame-wide."""

    reconstruction: np.ndarray
    prediction: np.ndarray
    original: np.ndarray
    qp: int
    mode: str  # "intra" or "inter"

    def __post_init__(self):
        shapes = {
            self.reconstruction.shape,
            self.prediction.shape,
            self.original.shape,
        }
        if len(shapes) != 1:
            raise DataError(f"plane shapes differ: {sorted(shapes)}")
        if self.mode not in ("intra", "inter"):
            raise DataError(f"mode must be intra or inter, got {self.mode!r}")


def make_frames(
    rng: np.random.Generator,
    count: int,
    height: int,
    width: int,
    mode: str,
    qp_range=(22, 42),
) -> list[FrameData]:
    frames = []
    for _ in range(count):
        original = synth_original(rng, height, width)
        qp = int(rng.integers(qp_range[0], qp_range[1] + 1))
        recon, pred = degrade(original, qp, rng)
        frames.append(FrameData(recon, pred, original, qp, mode))
    return frames


# --------------------------------------------------------------- sampling

@dataclass(frozen=True)
class TrainSample:
    """Co-located normalized patches cropped from one frame."""

    reconstruction: np.ndarray
    qp_map: np.ndarray
    prediction: np.ndarray
    original: np.ndarray


class PatchDataset:
    """Random co-located crops from a fixed frame list."""

    def __init__(self, frames, patch_size: int):
        if not frames:
            raise ConfigError("dataset holds no frames")
        if patch_size < 1:
            raise ConfigError(f"patch size must be positive, got {patch_size}")
        for frame in frames:
            h, w = frame.original.shape
            if patch_size > h or patch_size > w:
                raise ConfigError(
                    f"patch {patch_size} does not fit a {w}x{h} training frame"
                )
        self.frames = list(frames)
        self.patch_size = patch_size

    def __len__(self) -> int:
        return len(self.frames)

    def sample(self, rng: np.random.Generator) -> TrainSample:
        frame = self.frames[int(rng.integers(len(self.frames)))]
        h, w = frame.original.shape
        p = self.patch_size
        y = int(rng.integers(0, h - p + 1))
        x = int(rng.integers(0, w - p + 1))
        cut = lambda plane: plane[y : y + p, x : x + p].astype(np.float32)
        return TrainSample(
            reconstruction=cut(frame.reconstruction) / MAX_SAMPLE,
            qp_map=np.full((p, p), frame.qp / QP_MAX, dtype=np.float32),
            prediction=cut(frame.prediction) / MAX_SAMPLE,
            original=cut(frame.original) / MAX_SAMPLE,
        )


def augment(sample: TrainSample, rng: np.random.Generator) -> TrainSample:
    """Random 90-degree rotation and flip, identical across all patches."""
    k = int(rng.integers(4))
    flip = bool(rng.integers(2))

    def move(plane):
        plane = np.rot90(plane, k)
        if flip:
            plane = np.flip(plane, axis=1)
        return np.ascontiguousarray(plane)

    return TrainSample(
        reconstruction=move(sample.reconstruction),
        qp_map=move(sample.qp_map),
        prediction=move(sample.prediction),
        original=move(sample.original),
    )


def batch_tensors(samples, input_channels: int, dtype=torch.float32):
    """Samples -> (input stack, target) tensors in the engine's channel order."""
    stacks = []
    targets = []
    for s in samples:
        parts = [s.reconstruction, s.qp_map]
        if input_channels == 3:
            parts.append(s.prediction)
        stacks.append(np.stack(parts, axis=0))
        targets.append(s.original[None, :, :])
    x = torch.as_tensor(np.stack(stacks, axis=0), dtype=dtype)
    y = torch.as_tensor(np.stack(targets, axis=0), dtype=dtype)
    return x, y
