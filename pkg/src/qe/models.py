"""The four-model table, weight files, and the default-model rule.

One network is trained per (coding mode, input set) pair: intra/inter
crossed with reconstruction+QP (cq) and reconstruction+QP+prediction
(cqp). When no per-block choice is signaled, a frame falls back to the
cqp model matching its coding type.

Weight file layout (all integers little endian):

    bytes 0..7   magic "QENETWTS"
    u32          format version (1)
    u32          manifest length in bytes
    ...          JSON manifest: architecture and layer list
    ...          parameter arrays, float32, in manifest order

Conv layers store weight (out, in, 3, 3) then bias (out,); batch-norm
layers store gamma, beta, mean, var. Parameters are float32 on disk and
in memory, so save followed by load reproduces the exact bits.
"""
from __future__ import annotations

import enum
import json
import struct
from typing import BinaryIO, Iterator, Mapping

import numpy as np

from .errors import ConfigError, RangeError, ShapeError, TruncationError, WeightFormatError
from .frame import CodingMode, FrameBundle, Plane
from .nn import (
    KERNEL,
    BatchNormLayer,
    ConvLayer,
    InputSet,
    Layer,
    QeNetwork,
    ResidualBlock,
    assemble_input,
)

WEIGHTS_MAGIC = b"QENETWTS"
WEIGHTS_VERSION = 1
WEIGHTS_SUFFIX = ".qew"


class ModelId(enum.Enum):
    """Identity of one trained model; the value is its canonical name."""

    INTRA_CQ = "intra_cq"
    INTRA_CQP = "intra_cqp"
    INTER_CQ = "inter_cq"
    INTER_CQP = "inter_cqp"

    @property
    def coding_mode(self) -> CodingMode:
        return CodingMode.INTRA if self in (ModelId.INTRA_CQ, ModelId.INTRA_CQP) else CodingMode.INTER

    @property
    def input_set(self) -> InputSet:
        return InputSet.CQ if self in (ModelId.INTRA_CQ, ModelId.INTER_CQ) else InputSet.CQP

    @property
    def bits(self) -> tuple[int, int]:
        """(mode bit, input-set bit): intra=0/inter=1, cq=0/cqp=1."""
        return (
            0 if self.coding_mode is CodingMode.INTRA else 1,
            0 if self.input_set is InputSet.CQ else 1,
        )

    @classmethod
    def from_bits(cls, mode_bit: int, input_bit: int) -> "ModelId":
        return _BY_BITS[(mode_bit, input_bit)]


_BY_BITS = {m.bits: m for m in ModelId}

# Candidate enumeration order; ties in selection resolve to the earliest.
MODEL_ORDER: tuple[ModelId, ...] = tuple(ModelId)


def default_model(coding_type: CodingMode) -> ModelId:
    """Model used when no explicit choice is signaled for a block."""
    return ModelId.INTRA_CQP if coding_type is CodingMode.INTRA else ModelId.INTER_CQP


class ModelRegistry:
    """All four networks, keyed by model id."""

    def __init__(self, networks: Mapping[ModelId, QeNetwork]):
        missing = [m.value for m in MODEL_ORDER if m not in networks]
        if missing:
            raise ConfigError(f"registry is missing models: {', '.join(missing)}")
        for mid, net in networks.items():
            want = mid.input_set.channels
            if net.input_channels != want:
                raise ConfigError(
                    f"model {mid.value} expects {want} input channels, "
                    f"weights have {net.input_channels}"
                )
        self._networks = {m: networks[m] for m in MODEL_ORDER}

    def get(self, model_id: ModelId) -> QeNetwork:
        return self._networks[model_id]

    def __iter__(self) -> Iterator[ModelId]:
        return iter(MODEL_ORDER)


def enhance_frame(bundle: FrameBundle, model_id: ModelId, registry: ModelRegistry) -> Plane:
    """Enhance one frame with one model; pure function of its inputs."""
    net = registry.get(model_id)
    return net.enhance(assemble_input(bundle, model_id.input_set))


def registry_paths(directory: str) -> dict[ModelId, str]:
    import os

    return {m: os.path.join(directory, m.value + WEIGHTS_SUFFIX) for m in MODEL_ORDER}


def load_registry(directory: str) -> ModelRegistry:
    """Load ``<model>.qew`` for all four models from one directory."""
    return ModelRegistry({m: load_weights(p) for m, p in registry_paths(directory).items()})


def _layer_entry(name: str, layer: Layer) -> dict:
    if isinstance(layer, ConvLayer):
        return {
            "name": name,
            "kind": "conv",
            "in": layer.in_channels,
            "out": layer.out_channels,
            "relu": layer.relu,
        }
    return {
        "name": name,
        "kind": "batch_norm",
        "channels": layer.channels,
        "epsilon": layer.epsilon,
    }


def _layer_arrays(layer: Layer) -> tuple[np.ndarray, ...]:
    if isinstance(layer, ConvLayer):
        return (layer.weight, layer.bias)
    return (layer.gamma, layer.beta, layer.mean, layer.var)


def save_weights(network: QeNetwork, path: str) -> None:
    manifest = {
        "input_channels": network.input_channels,
        "num_res_blocks": network.num_res_blocks,
        "width": network.width,
        "layers": [_layer_entry(name, layer) for name, layer in network.named_layers()],
    }
    blob = json.dumps(manifest, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(WEIGHTS_MAGIC)
        fh.write(struct.pack("<II", WEIGHTS_VERSION, len(blob)))
        fh.write(blob)
        for _, layer in network.named_layers():
            for arr in _layer_arrays(layer):
                fh.write(np.ascontiguousarray(arr, dtype="<f4").tobytes())


def _read_exact(fh: BinaryIO, n: int, what: str) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise TruncationError(f"weights file ends inside {what}: wanted {n} bytes, got {len(data)}")
    return data


def _read_array(fh: BinaryIO, shape: tuple[int, ...], what: str) -> np.ndarray:
    n = int(np.prod(shape))
    data = _read_exact(fh, n * 4, what)
    return np.frombuffer(data, dtype="<f4").reshape(shape)


def _expected_manifest(input_channels: int, num_res_blocks: int, width: int) -> list[dict]:
    conv = lambda name, cin, cout, relu: {
        "name": name, "kind": "conv", "in": cin, "out": cout, "relu": relu,
    }
    layers = [conv("head", input_channels, width, True)]
    for i in range(num_res_blocks):
        layers.append(conv(f"res{i}.a", width, width, True))
        layers.append(conv(f"res{i}.b", width, width, False))
    layers.append(conv("body_conv", width, width, False))
    layers.append({"name": "body_norm", "kind": "batch_norm", "channels": width})
    layers.append(conv("tail_a", width, width, True))
    layers.append(conv("tail_b", width, width, True))
    layers.append(conv("out", width, 1, True))
    return layers


def load_weights(path: str) -> QeNetwork:
    with open(path, "rb") as fh:
        magic = _read_exact(fh, len(WEIGHTS_MAGIC), "magic")
        if magic != WEIGHTS_MAGIC:
            raise WeightFormatError(f"{path}: bad magic {magic!r}")
        version, manifest_len = struct.unpack("<II", _read_exact(fh, 8, "header"))
        if version != WEIGHTS_VERSION:
            raise WeightFormatError(f"{path}: unsupported format version {version}")
        try:
            manifest = json.loads(_read_exact(fh, manifest_len, "manifest"))
        except ValueError as exc:
            raise WeightFormatError(f"{path}: manifest is not valid JSON: {exc}") from None
        try:
            input_channels = int(manifest["input_channels"])
            num_res_blocks = int(manifest["num_res_blocks"])
            width = int(manifest["width"])
            entries = manifest["layers"]
        except (KeyError, TypeError) as exc:
            raise WeightFormatError(f"{path}: manifest missing field: {exc}") from None
        expected = _expected_manifest(input_channels, num_res_blocks, width)
        if len(entries) != len(expected):
            raise WeightFormatError(
                f"{path}: manifest lists {len(entries)} layers, architecture needs {len(expected)}"
            )

        parsed: dict[str, Layer] = {}
        for entry, want in zip(entries, expected):
            name = entry.get("name") if isinstance(entry, dict) else None
            if name != want["name"] or entry.get("kind") != want["kind"]:
                raise WeightFormatError(
                    f"{path}: expected layer {want['name']} ({want['kind']}), got {entry!r}"
                )
            try:
                if want["kind"] == "conv":
                    for key in ("in", "out", "relu"):
                        if entry.get(key) != want[key]:
                            raise WeightFormatError(
                                f"{key}={entry.get(key)!r}, expected {want[key]!r}"
                            )
                    w = _read_array(
                        fh, (want["out"], want["in"], KERNEL, KERNEL), f"layer {name} weight"
                    )
                    b = _read_array(fh, (want["out"],), f"layer {name} bias")
                    parsed[name] = ConvLayer(w, b, want["relu"])
                else:
                    eps = entry.get("epsilon")
                    if not isinstance(eps, (int, float)):
                        raise WeightFormatError(f"bad epsilon {eps!r}")
                    arrs = [
                        _read_array(fh, (width,), f"layer {name} {part}")
                        for part in ("gamma", "beta", "mean", "var")
                    ]
                    parsed[name] = BatchNormLayer(*arrs, epsilon=float(eps))
            except (RangeError, ShapeError, WeightFormatError) as exc:
                raise WeightFormatError(f"{path}: layer {name}: {exc}") from None
        if fh.read(1):
            raise WeightFormatError(f"{path}: trailing data after parameter arrays")

    blocks = tuple(
        ResidualBlock(parsed[f"res{i}.a"], parsed[f"res{i}.b"]) for i in range(num_res_blocks)
    )
    return QeNetwork(
        head=parsed["head"],
        blocks=blocks,
        body_conv=parsed["body_conv"],
        body_norm=parsed["body_norm"],
        tail_a=parsed["tail_a"],
        tail_b=parsed["tail_b"],
        out=parsed["out"],
    )
