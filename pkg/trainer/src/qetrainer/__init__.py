"""Training toolkit for the quality-enhancement network weight format."""

from .data import FrameData, PatchDataset, TrainSample, augment, batch_tensors, make_frames
from .errors import ConfigError, DataError, TrainerError
from .gradcheck import GradCheckResult, finite_difference_check
from .network import MODEL_TABLE, QeNet, assemble_stack, build_model, quantize_plane
from .train import TrainConfig, TrainResult, learning_rate, train_model
from .weights_io import load_weights, write_weights

__all__ = [
    "ConfigError",
    "DataError",
    "FrameData",
    "GradCheckResult",
    "MODEL_TABLE",
    "PatchDataset",
    "QeNet",
    "TrainConfig",
    "TrainResult",
    "TrainSample",
    "TrainerError",
    "assemble_stack",
    "augment",
    "batch_tensors",
    "build_model",
    "finite_difference_check",
    "learning_rate",
    "load_weights",
    "make_frames",
    "quantize_plane",
    "train_model",
    "write_weights",
]
