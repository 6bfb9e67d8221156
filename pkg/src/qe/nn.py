"""Inference engine for the quality-enhancement network.

The network is a fixed residual CNN: a 3x3 conv head (ReLU), N residual
blocks (conv+ReLU, conv, skip add), a conv and batch-norm body joined to
the head output by a long skip, two conv+ReLU tail layers, and a single
channel conv+ReLU output. All convolutions are 3x3, stride 1, zero
padded by 1, so spatial size is preserved end to end.

Determinism contract: parameters are stored as float32, arithmetic runs
in float64, and accumulation order is fixed (input channel, then kernel
row, then kernel column), so identical inputs give bit-identical outputs
on any platform. No BLAS-backed reductions are used in the conv path.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from .errors import ConfigError, RangeError, ShapeError
from .frame import MAX_SAMPLE, FrameBundle, Plane, _freeze

KERNEL = 3
DEFAULT_WIDTH = 256
DEFAULT_RES_BLOCKS = 16


class InputSet(enum.Enum):
    """Which channels feed the network."""

    CQ = "cq"  # reconstruction + qp map
    CQP = "cqp"  # reconstruction + qp map + prediction

    @property
    def channels(self) -> int:
        return 2 if self is InputSet.CQ else 3


def _as_param(arr: np.ndarray, what: str, shape: tuple[int, ...]) -> np.ndarray:
    a = np.asarray(arr, dtype=np.float32)
    if a.shape != shape:
        raise ShapeError(f"{what}: expected shape {shape}, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise RangeError(f"{what}: non-finite parameter")
    return _freeze(a)


@dataclass(frozen=True)
class ConvLayer:
    """3x3 convolution with bias, optionally followed by ReLU."""

    weight: np.ndarray  # (out, in, 3, 3) float32
    bias: np.ndarray  # (out,) float32
    relu: bool

    def __post_init__(self) -> None:
        w = np.asarray(self.weight)
        if w.ndim != 4 or w.shape[2] != KERNEL or w.shape[3] != KERNEL:
            raise ShapeError(f"conv weight must be (out, in, {KERNEL}, {KERNEL}), got {w.shape}")
        object.__setattr__(self, "weight", _as_param(w, "conv weight", w.shape))
        object.__setattr__(self, "bias", _as_param(self.bias, "conv bias", (w.shape[0],)))

    @property
    def out_channels(self) -> int:
        return self.weight.shape[0]

    @property
    def in_channels(self) -> int:
        return self.weight.shape[1]

    def apply(self, x: np.ndarray) -> np.ndarray:
        return conv2d(x, self)


@dataclass(frozen=True)
class BatchNormLayer:
    """Per-channel affine normalization with frozen statistics."""

    gamma: np.ndarray
    beta: np.ndarray
    mean: np.ndarray
    var: np.ndarray
    epsilon: float = 1e-5

    def __post_init__(self) -> None:
        g = np.asarray(self.gamma)
        if g.ndim != 1 or g.size == 0:
            raise ShapeError(f"batch-norm gamma must be 1-D, got shape {g.shape}")
        n = (g.shape[0],)
        object.__setattr__(self, "gamma", _as_param(g, "bn gamma", n))
        object.__setattr__(self, "beta", _as_param(self.beta, "bn beta", n))
        object.__setattr__(self, "mean", _as_param(self.mean, "bn mean", n))
        object.__setattr__(self, "var", _as_param(self.var, "bn var", n))
        object.__setattr__(self, "epsilon", float(self.epsilon))
        if self.epsilon < 0.0:
            raise RangeError(f"bn epsilon {self.epsilon} is negative")
        denom = self.var.astype(np.float64) + self.epsilon
        if np.any(denom <= 0.0):
            ch = int(np.flatnonzero(denom <= 0.0)[0])
            raise RangeError(f"bn channel {ch}: var + epsilon = {denom[ch]} is not positive")

    @property
    def channels(self) -> int:
        return self.gamma.shape[0]

    def apply(self, x: np.ndarray) -> np.ndarray:
        g = self.gamma.astype(np.float64)
        b = self.beta.astype(np.float64)
        m = self.mean.astype(np.float64)
        v = self.var.astype(np.float64)
        scale = g / np.sqrt(v + self.epsilon)
        return scale[:, None, None] * (x - m[:, None, None]) + b[:, None, None]


Layer = Union[ConvLayer, BatchNormLayer]


def conv2d(x: np.ndarray, layer: ConvLayer) -> np.ndarray:
    """Deterministic 3x3 convolution, zero padding 1, stride 1.

    ``x`` is (cin, H, W) float64; returns (cout, H, W) float64 with the
    layer's activation applied. The accumulation loop runs in a fixed
    (channel, ky, kx) order.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 3:
        raise ShapeError(f"conv input must be (c, h, w), got shape {x.shape}")
    weight = layer.weight.astype(np.float64)
    bias = layer.bias.astype(np.float64)
    cout, cin, kh, kw = weight.shape
    if x.shape[0] != cin:
        raise ShapeError(f"conv input has {x.shape[0]} channels, weight expects {cin}")
    h, w = x.shape[1], x.shape[2]
    padded = np.zeros((cin, h + 2, w + 2), dtype=np.float64)
    padded[:, 1:-1, 1:-1] = x
    acc = np.empty((cout, h, w), dtype=np.float64)
    acc[:] = bias[:, None, None]
    for c in range(cin):
        for ky in range(kh):
            for kx in range(kw):
                acc += weight[:, c, ky, kx][:, None, None] * padded[c, ky : ky + h, kx : kx + w]
    if layer.relu:
        np.maximum(acc, 0.0, out=acc)
    return acc


def batch_norm_infer(x: np.ndarray, layer: BatchNormLayer) -> np.ndarray:
    """Inference-mode batch normalization over a (c, h, w) array."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 3 or x.shape[0] != layer.channels:
        raise ShapeError(
            f"batch-norm input shape {x.shape} does not match {layer.channels} channels"
        )
    return layer.apply(x)


def concat_channels(parts: Sequence[np.ndarray]) -> np.ndarray:
    """Stack (c, h, w) arrays along the channel axis, argument order kept."""
    if not parts:
        raise ShapeError("nothing to concatenate")
    arrays = [np.asarray(p, dtype=np.float64) for p in parts]
    hw = arrays[0].shape[-2:]
    for i, a in enumerate(arrays):
        if a.ndim not in (2, 3):
            raise ShapeError(f"part {i} has rank {a.ndim}, expected 2 or 3")
        if a.shape[-2:] != hw:
            raise ShapeError(f"part {i} is {a.shape[-2:]}, first part is {hw}")
    return np.concatenate([a if a.ndim == 3 else a[None] for a in arrays], axis=0)


@dataclass(frozen=True)
class ResidualBlock:
    """conv+ReLU, conv, then add the block input."""

    conv_a: ConvLayer
    conv_b: ConvLayer

    def __post_init__(self) -> None:
        if not self.conv_a.relu or self.conv_b.relu:
            raise ShapeError("residual block needs conv_a with ReLU and conv_b without")
        if self.conv_a.in_channels != self.conv_b.out_channels:
            raise ShapeError("residual block must preserve channel count")

    def apply(self, x: np.ndarray) -> np.ndarray:
        return x + self.conv_b.apply(self.conv_a.apply(x))


@dataclass(frozen=True)
class QeNetwork:
    """The full enhancement network, parameters included.

    Layer order is fixed; see module docstring. ``blocks`` holds the N
    residual blocks in application order.
    """

    head: ConvLayer
    blocks: tuple[ResidualBlock, ...]
    body_conv: ConvLayer
    body_norm: BatchNormLayer
    tail_a: ConvLayer
    tail_b: ConvLayer
    out: ConvLayer

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(self.blocks))
        w = self.head.out_channels
        if not self.head.relu:
            raise ShapeError("head conv must apply ReLU")
        for i, blk in enumerate(self.blocks):
            if blk.conv_a.in_channels != w or blk.conv_b.out_channels != w:
                raise ShapeError(f"residual block {i} width mismatch")
        chain = [
            ("body conv", self.body_conv.in_channels, self.body_conv.out_channels),
            ("tail a", self.tail_a.in_channels, self.tail_a.out_channels),
            ("tail b", self.tail_b.in_channels, self.tail_b.out_channels),
        ]
        for name, cin, cout in chain:
            if cin != w or cout != w:
                raise ShapeError(f"{name} must be {w}->{w}, got {cin}->{cout}")
        if self.body_conv.relu or not (self.tail_a.relu and self.tail_b.relu and self.out.relu):
            raise ShapeError("ReLU placement is wrong for the fixed architecture")
        if self.body_norm.channels != w:
            raise ShapeError(f"batch norm has {self.body_norm.channels} channels, expected {w}")
        if self.out.in_channels != w or self.out.out_channels != 1:
            raise ShapeError(f"output conv must be {w}->1")

    @property
    def input_channels(self) -> int:
        return self.head.in_channels

    @property
    def width(self) -> int:
        return self.head.out_channels

    @property
    def num_res_blocks(self) -> int:
        return len(self.blocks)

    @property
    def input_set(self) -> InputSet:
        if self.input_channels == 2:
            return InputSet.CQ
        if self.input_channels == 3:
            return InputSet.CQP
        raise ShapeError(f"network takes {self.input_channels} channels, expected 2 or 3")

    def named_layers(self) -> Iterator[tuple[str, Layer]]:
        """Serialization order: every parameterized layer, in data-flow order."""
        yield "head", self.head
        for i, blk in enumerate(self.blocks):
            yield f"res{i}.a", blk.conv_a
            yield f"res{i}.b", blk.conv_b
        yield "body_conv", self.body_conv
        yield "body_norm", self.body_norm
        yield "tail_a", self.tail_a
        yield "tail_b", self.tail_b
        yield "out", self.out

    def forward_raw(self, stack: np.ndarray) -> np.ndarray:
        """Run the network on a (c, H, W) float64 stack.

        Returns the (H, W) float64 output in the normalized [0, 1]
        domain, before quantization.
        """
        stack = np.asarray(stack, dtype=np.float64)
        if stack.ndim != 3 or stack.shape[0] != self.input_channels:
            raise ShapeError(
                f"input stack shape {stack.shape} does not match "
                f"({self.input_channels}, h, w)"
            )
        feat = self.head.apply(stack)
        skip = feat
        for blk in self.blocks:
            feat = blk.apply(feat)
        feat = self.body_conv.apply(feat)
        feat = self.body_norm.apply(feat)
        feat = feat + skip
        feat = self.tail_a.apply(feat)
        feat = self.tail_b.apply(feat)
        feat = self.out.apply(feat)
        return feat[0]

    def enhance(self, stack: np.ndarray) -> Plane:
        """Forward pass plus quantization back to 10-bit samples."""
        return Plane(quantize(self.forward_raw(stack)))


def random_network(
    input_channels: int,
    num_res_blocks: int = DEFAULT_RES_BLOCKS,
    width: int = DEFAULT_WIDTH,
    rng: np.random.Generator | None = None,
) -> QeNetwork:
    """Randomly initialized network, mostly for tests and smoke runs.

    Conv weights are fan-in scaled Gaussians; batch-norm starts as the
    identity transform.
    """
    if rng is None:
        rng = np.random.default_rng()

    def conv(cin: int, cout: int, relu: bool) -> ConvLayer:
        std = np.sqrt(2.0 / (cin * KERNEL * KERNEL))
        w = rng.normal(0.0, std, size=(cout, cin, KERNEL, KERNEL))
        b = np.zeros(cout)
        return ConvLayer(w, b, relu)

    blocks = tuple(
        ResidualBlock(conv(width, width, True), conv(width, width, False))
        for _ in range(num_res_blocks)
    )
    norm = BatchNormLayer(
        gamma=np.ones(width),
        beta=np.zeros(width),
        mean=np.zeros(width),
        var=np.ones(width),
        epsilon=1e-5,
    )
    return QeNetwork(
        head=conv(input_channels, width, True),
        blocks=blocks,
        body_conv=conv(width, width, False),
        body_norm=norm,
        tail_a=conv(width, width, True),
        tail_b=conv(width, width, True),
        out=conv(width, 1, True),
    )


def assemble_input(bundle: FrameBundle, input_set: InputSet) -> np.ndarray:
    """Stack the network input channels for one frame.

    Channel order is reconstruction, QP map, then (for CQP) prediction.
    Sample channels are normalized by the 10-bit maximum; the QP map is
    already normalized.
    """
    recon = bundle.reconstruction.samples.astype(np.float64) / MAX_SAMPLE
    qmap = bundle.qp_map.values
    if input_set is InputSet.CQ:
        return np.stack([recon, qmap])
    if bundle.prediction is None:
        raise ConfigError("input set cqp needs a prediction plane, none was supplied")
    pred = bundle.prediction.samples.astype(np.float64) / MAX_SAMPLE
    return np.stack([recon, qmap, pred])


def quantize(values: np.ndarray) -> np.ndarray:
    """Normalized float output back to 10-bit integers.

    Scales by 1023, rounds half away from zero upward (floor(x + 0.5)),
    and clamps to [0, 1023]. Returns uint16.
    """
    scaled = np.floor(np.asarray(values, dtype=np.float64) * MAX_SAMPLE + 0.5)
    return np.clip(scaled, 0, MAX_SAMPLE).astype(np.uint16)


def forward_qe_raw(stack: np.ndarray, net: QeNetwork) -> np.ndarray:
    """Full forward pass, returning the normalized (H, W) float output."""
    return net.forward_raw(stack)


def forward_qe(stack: np.ndarray, net: QeNetwork) -> Plane:
    """Full forward pass plus quantization back to a 10-bit plane."""
    return net.enhance(stack)
