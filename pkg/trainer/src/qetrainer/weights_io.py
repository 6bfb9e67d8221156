"""Portable weight files for the inference engine.

The engine consumes a self-describing container; this module writes and
reads it without sharing any code with the engine, so the byte format is
the only contract between the two packages:

    bytes 0..7   magic "QENETWTS"
    u32 LE       format version (1)
    u32 LE       manifest length in bytes
    ...          JSON manifest: input_channels, num_res_blocks, width,
                 ordered layer list
    ...          float32 LE parameter arrays in manifest order

Conv layers store weight (out, in, 3, 3) then bias (out,); the batch
norm stores gamma, beta, running mean, running variance. Exporting
freezes the running statistics: the engine never updates them.
"""
from __future__ import annotations

import json
import struct

import numpy as np
import torch

from .errors import ConfigError, DataError
from .network import KERNEL, QeNet

WEIGHTS_MAGIC = b"QENETWTS"
WEIGHTS_VERSION = 1


def _layer_plan(net: QeNet) -> list[tuple[str, str, object]]:
    """(name, kind, module) in serialization order, with conv relu flags."""
    plan: list[tuple[str, str, object]] = [("head", "conv_relu", net.head)]
    for i, block in enumerate(net.blocks):
        plan.append((f"res{i}.a", "conv_relu", block.conv_a))
        plan.append((f"res{i}.b", "conv", block.conv_b))
    plan.append(("body_conv", "conv", net.body_conv))
    plan.append(("body_norm", "batch_norm", net.body_norm))
    plan.append(("tail_a", "conv_relu", net.tail_a))
    plan.append(("tail_b", "conv_relu", net.tail_b))
    plan.append(("out", "conv_relu", net.out))
    return plan


def _conv_entry(name: str, conv, relu: bool) -> dict:
    return {
        "name": name,
        "kind": "conv",
        "in": conv.in_channels,
        "out": conv.out_channels,
        "relu": relu,
    }


def _f32(tensor: torch.Tensor) -> np.ndarray:
    return tensor.detach().cpu().to(torch.float32).numpy()


def write_weights(net: QeNet, path: str) -> None:
    entries = []
    arrays: list[np.ndarray] = []
    for name, kind, module in _layer_plan(net):
        if kind == "batch_norm":
            entries.append(
                {
                    "name": name,
                    "kind": "batch_norm",
                    "channels": module.num_features,
                    "epsilon": module.eps,
                }
            )
            arrays += [
                _f32(module.weight),
                _f32(module.bias),
                _f32(module.running_mean),
                _f32(module.running_var),
            ]
        else:
            entries.append(_conv_entry(name, module, kind == "conv_relu"))
            arrays += [_f32(module.weight), _f32(module.bias)]
    manifest = {
        "input_channels": net.input_channels,
        "num_res_blocks": net.num_res_blocks,
        "width": net.width,
        "layers": entries,
    }
    blob = json.dumps(manifest, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(WEIGHTS_MAGIC)
        fh.write(struct.pack("<II", WEIGHTS_VERSION, len(blob)))
        fh.write(blob)
        for arr in arrays:
            fh.write(np.ascontiguousarray(arr, dtype="<f4").tobytes())


def _read_exact(fh, n: int, what: str) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise DataError(f"weight file ends inside {what}")
    return data


def _read_tensor(fh, shape: tuple[int, ...], what: str) -> torch.Tensor:
    count = int(np.prod(shape))
    raw = _read_exact(fh, count * 4, what)
    arr = np.frombuffer(raw, dtype="<f4").reshape(shape).copy()
    return torch.from_numpy(arr)


def load_weights(path: str) -> QeNet:
    """Rebuild a torch network from a weight file (round-trip partner)."""
    with open(path, "rb") as fh:
        if _read_exact(fh, len(WEIGHTS_MAGIC), "magic") != WEIGHTS_MAGIC:
            raise DataError(f"{path}: not a weight file")
        version, manifest_len = struct.unpack("<II", _read_exact(fh, 8, "header"))
        if version != WEIGHTS_VERSION:
            raise DataError(f"{path}: unsupported version {version}")
        raw = _read_exact(fh, manifest_len, "manifest")
        try:
            manifest = json.loads(raw)
            net = QeNet(
                int(manifest["input_channels"]),
                int(manifest["num_res_blocks"]),
                int(manifest["width"]),
            )
        except (ValueError, KeyError, TypeError, ConfigError) as exc:
            raise DataError(f"{path}: bad manifest: {exc}") from None
        plan = {name: (kind, module) for name, kind, module in _layer_plan(net)}
        with torch.no_grad():
            for entry in manifest["layers"]:
                try:
                    kind, module = plan[entry["name"]]
                except KeyError:
                    raise DataError(f"{path}: unknown layer {entry!r}") from None
                if entry["kind"] == "batch_norm":
                    ch = module.num_features
                    module.eps = float(entry["epsilon"])
                    module.weight.copy_(_read_tensor(fh, (ch,), "gamma"))
                    module.bias.copy_(_read_tensor(fh, (ch,), "beta"))
                    module.running_mean.copy_(_read_tensor(fh, (ch,), "mean"))
                    module.running_var.copy_(_read_tensor(fh, (ch,), "var"))
                else:
                    shape = (entry["out"], entry["in"], KERNEL, KERNEL)
                    module.weight.copy_(_read_tensor(fh, shape, "weight"))
                    module.bias.copy_(_read_tensor(fh, (entry["out"],), "bias"))
        if fh.read(1):
            raise DataError(f"{path}: trailing bytes after parameter arrays")
    return net
