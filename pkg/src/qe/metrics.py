"""Distortion metrics and rate-distortion curve comparison.

PSNR is computed against the 10-bit peak (1023). Curve comparison is
the usual piecewise-cubic average bitrate difference: fit a monotone
cubic through (psnr, log10 rate) for anchor and test, integrate both
over the shared PSNR span, and convert the mean log offset back to a
percentage.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import MetricError, ShapeError
from .frame import MAX_SAMPLE

MIN_CURVE_POINTS = 4


def _pair(a: np.ndarray, b: np.ndarray, what: str) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ShapeError(f"{what} over mismatched shapes {a.shape} and {b.shape}")
    return a.astype(np.float64), b.astype(np.float64)


def mse(a: np.ndarray, b: np.ndarray) -> float:
    """Mean squared error between two integer sample arrays."""
    a, b = _pair(a, b, "mse")
    diff = a - b
    return float(np.mean(diff * diff))


def sse(a: np.ndarray, b: np.ndarray) -> float:
    """Summed squared error between two integer sample arrays."""
    a, b = _pair(a, b, "sse")
    diff = a - b
    return float(np.sum(diff * diff))


def l1(a: np.ndarray, b: np.ndarray) -> float:
    """Mean absolute difference between two sample arrays."""
    a, b = _pair(a, b, "l1")
    return float(np.mean(np.abs(a - b)))


def psnr_from_mse(err: float) -> float:
    """PSNR in dB for a 10-bit signal; infinite when the error is zero."""
    if err < 0.0:
        raise MetricError(f"negative mse {err}")
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(MAX_SAMPLE * MAX_SAMPLE / err)


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    return psnr_from_mse(mse(a, b))


def sequence_psnr(pairs: Sequence[tuple[np.ndarray, np.ndarray]]) -> float:
    """PSNR of a frame sequence from the pooled per-pixel error."""
    if not pairs:
        raise MetricError("sequence psnr needs at least one frame")
    total = 0.0
    count = 0
    for a, b in pairs:
        total += mse(a, b) * a.size
        count += a.size
    return psnr_from_mse(total / count)


@dataclass(frozen=True)
class RdPoint:
    """One operating point: bitrate (any positive unit) and PSNR in dB."""

    rate: float
    psnr: float


def _validate_curve(points: Sequence[RdPoint], label: str) -> tuple[np.ndarray, np.ndarray]:
    if len(points) < MIN_CURVE_POINTS:
        raise MetricError(f"{label} curve has {len(points)} points, need {MIN_CURVE_POINTS}")
    pts = sorted(points, key=lambda p: p.rate)
    rate = np.array([p.rate for p in pts], dtype=np.float64)
    quality = np.array([p.psnr for p in pts], dtype=np.float64)
    if np.any(rate <= 0.0):
        raise MetricError(f"{label} curve has a non-positive rate")
    if not np.all(np.isfinite(quality)):
        raise MetricError(f"{label} curve has a non-finite psnr")
    if np.any(np.diff(rate) <= 0.0):
        raise MetricError(f"{label} curve has duplicate rates")
    if np.any(np.diff(quality) <= 0.0):
        raise MetricError(f"{label} curve is not monotone: psnr must rise with rate")
    return rate, quality


def bd_rate(anchor: Sequence[RdPoint], test: Sequence[RdPoint]) -> float:
    """Average bitrate difference of ``test`` against ``anchor``, percent.

    Negative means the test curve reaches the same quality with fewer
    bits. Comparing a curve against itself gives exactly 0.0.
    """
    rate_a, psnr_a = _validate_curve(anchor, "anchor")
    rate_t, psnr_t = _validate_curve(test, "test")

    lo = max(psnr_a[0], psnr_t[0])
    hi = min(psnr_a[-1], psnr_t[-1])
    if hi <= lo:
        raise MetricError(f"curves share no psnr range ({lo:.3f} .. {hi:.3f})")

    fit_a = PchipInterpolator(psnr_a, np.log10(rate_a))
    fit_t = PchipInterpolator(psnr_t, np.log10(rate_t))
    span = hi - lo
    avg_log_diff = (fit_t.integrate(lo, hi) - fit_a.integrate(lo, hi)) / span
    return float(100.0 * (10.0 ** avg_log_diff - 1.0))
