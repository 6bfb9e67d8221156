"""Shared helpers for the trainer test suite.

The weight-file reader here is written from the byte layout alone
(struct + json + frombuffer), independent of qetrainer.weights_io, so
format tests compare two separate implementations.
"""
import json
import struct

import numpy as np
import torch

MAGIC = b"QENETWTS"
HEADER = struct.Struct("<II")


def read_weight_file(path):
    """(manifest, {layer_name: [arrays]}, trailing_byte_count)."""
    blob = open(path, "rb").read()
    assert blob[:8] == MAGIC, blob[:8]
    version, manifest_len = HEADER.unpack_from(blob, 8)
    assert version == 1, version
    manifest = json.loads(blob[16 : 16 + manifest_len].decode("utf-8"))
    offset = 16 + manifest_len
    arrays = {}
    for layer in manifest["layers"]:
        if layer["kind"] == "conv":
            shapes = [(layer["out"], layer["in"], 3, 3), (layer["out"],)]
        else:
            shapes = [(layer["channels"],)] * 4
        parts = []
        for shape in shapes:
            n = int(np.prod(shape)) * 4
            parts.append(
                np.frombuffer(blob[offset : offset + n], dtype="<f4").reshape(shape)
            )
            offset += n
        arrays[layer["name"]] = parts
    return manifest, arrays, len(blob) - offset


def constant_frame(height, width, recon, qp, mode, original=None, pred=None):
    """FrameData with constant planes, for controlled loss surfaces."""
    from qetrainer.data import FrameData

    if original is None:
        original = recon
    if pred is None:
        pred = recon
    full = lambda v: np.full((height, width), v, dtype=np.int64)
    return FrameData(full(recon), full(pred), full(original), qp, mode)


def ramp_frame(height, width, qp, mode):
    """All planes equal a unique-per-pixel ramp; exposes crop alignment."""
    from qetrainer.data import FrameData

    ramp = (np.arange(height * width, dtype=np.int64).reshape(height, width)) % 1024
    return FrameData(ramp.copy(), ramp.copy(), ramp.copy(), qp, mode)


def net_l1(net, stack, target):
    """Eval-mode float64 L1 of one (C,H,W) stack against (H,W) target."""
    net = net.double().eval()
    with torch.no_grad():
        out = net(torch.as_tensor(stack, dtype=torch.float64)[None])
    return float(torch.mean(torch.abs(out[0, 0] - torch.as_tensor(target, dtype=torch.float64))))
