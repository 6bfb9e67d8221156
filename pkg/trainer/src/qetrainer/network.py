"""Torch implementation of the enhancement network.

Mirrors the inference engine's architecture exactly: 3x3 conv head with
ReLU, a stack of two-conv residual blocks, a body conv feeding a batch
norm, a long skip from the head output, two conv+ReLU tails, and a
single-channel conv+ReLU output. Convolutions use zero padding 1 and
stride 1 throughout. Batch-norm running statistics are what the weight
file exports; inference (here and in the engine) always uses them.
"""
from __future__ import annotations

import torch
from torch import nn

from .errors import ConfigError

KERNEL = 3
QP_MAX = 63
MAX_SAMPLE = 1023

# model name -> (input channels, coding mode)
MODEL_TABLE = {
    "intra_cq": (2, "intra"),
    "intra_cqp": (3, "intra"),
    "inter_cq": (2, "inter"),
    "inter_cqp": (3, "inter"),
}


def model_channels(model_name: str) -> int:
    try:
        return MODEL_TABLE[model_name][0]
    except KeyError:
        names = ", ".join(sorted(MODEL_TABLE))
        raise ConfigError(f"unknown model {model_name!r}, expected one of {names}") from None


def model_mode(model_name: str) -> str:
    return MODEL_TABLE[model_name][1]


class ResBlock(nn.Module):
    """conv+ReLU, conv, then the block input added back."""

    def __init__(self, width: int):
        super().__init__()
        self.conv_a = nn.Conv2d(width, width, KERNEL, padding=1)
        self.conv_b = nn.Conv2d(width, width, KERNEL, padding=1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return x + self.conv_b(torch.relu(self.conv_a(x)))


class QeNet(nn.Module):
    """The full enhancement network over a normalized channel stack."""

    def __init__(self, input_channels: int, num_res_blocks: int, width: int):
        super().__init__()
        if input_channels not in (2, 3):
            raise ConfigError(f"input channels must be 2 or 3, got {input_channels}")
        if num_res_blocks < 1 or width < 1:
            raise ConfigError(
                f"need positive depth and width, got {num_res_blocks} blocks, width {width}"
            )
        self.input_channels = input_channels
        self.num_res_blocks = num_res_blocks
        self.width = width
        self.head = nn.Conv2d(input_channels, width, KERNEL, padding=1)
        self.blocks = nn.ModuleList(ResBlock(width) for _ in range(num_res_blocks))
        self.body_conv = nn.Conv2d(width, width, KERNEL, padding=1)
        self.body_norm = nn.BatchNorm2d(width)
        self.tail_a = nn.Conv2d(width, width, KERNEL, padding=1)
        self.tail_b = nn.Conv2d(width, width, KERNEL, padding=1)
        self.out = nn.Conv2d(width, 1, KERNEL, padding=1)
        self._init_parameters()

    def _init_parameters(self) -> None:
        # Small weights with a positive bias keep every ReLU stage live at
        # init; torch's default fan-in init can zero the whole output, and a
        # dead final ReLU gives identically zero gradients.
        for module in self.modules():
            if isinstance(module, nn.Conv2d):
                nn.init.normal_(module.weight, std=0.05)
                nn.init.constant_(module.bias, 0.1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        """(batch, channels, h, w) -> (batch, 1, h, w), normalized units."""
        head = torch.relu(self.head(x))
        t = head
        for block in self.blocks:
            t = block(t)
        t = self.body_norm(self.body_conv(t))
        t = t + head
        t = torch.relu(self.tail_a(t))
        t = torch.relu(self.tail_b(t))
        return torch.relu(self.out(t))


def build_model(model_name: str, num_res_blocks: int = 16, width: int = 256) -> QeNet:
    return QeNet(model_channels(model_name), num_res_blocks, width)


def assemble_stack(recon, qp_map, prediction=None):
    """Stack normalized channels in the engine's order: recon, qp[, pred].

    Inputs are float arrays already normalized to [0, 1] sample units and
    qp/63 units respectively.
    """
    parts = [torch.as_tensor(recon), torch.as_tensor(qp_map)]
    if prediction is not None:
        parts.append(torch.as_tensor(prediction))
    if any(p.shape != parts[0].shape for p in parts):
        raise ConfigError(f"channel shapes differ: {[tuple(p.shape) for p in parts]}")
    return torch.stack(parts, dim=0)


def quantize_plane(values: torch.Tensor) -> torch.Tensor:
    """Normalized values -> 10-bit integers, floor(x*1023 + 0.5), clipped."""
    scaled = torch.floor(values.to(torch.float64) * MAX_SAMPLE + 0.5)
    return torch.clamp(scaled, 0, MAX_SAMPLE).to(torch.int64)
