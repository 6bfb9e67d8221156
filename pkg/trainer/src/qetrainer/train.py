"""L1 training loop with step-decayed Adam, one model per run."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import torch

from .data import PatchDataset, augment, batch_tensors
from .errors import ConfigError
from .network import QeNet, model_channels, model_mode
from .weights_io import write_weights


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters; defaults follow the full-scale recipe.

    Desk-scale runs shrink epochs, steps, width, and depth; the schedule
    and loss stay the same.
    """

    patch_size: int = 64
    batch_size: int = 16
    initial_lr: float = 1e-5
    lr_decay: float = 0.5
    lr_step_epochs: int = 100
    epochs: int = 500
    steps_per_epoch: int = 100
    num_res_blocks: int = 16
    width: int = 256
    augmentation: bool = True
    seed: int = 0

    def __post_init__(self):
        positives = {
            "patch_size": self.patch_size,
            "batch_size": self.batch_size,
            "initial_lr": self.initial_lr,
            "lr_decay": self.lr_decay,
            "lr_step_epochs": self.lr_step_epochs,
            "epochs": self.epochs,
            "steps_per_epoch": self.steps_per_epoch,
            "num_res_blocks": self.num_res_blocks,
            "width": self.width,
        }
        for name, value in positives.items():
            if value <= 0:
                raise ConfigError(f"{name} must be positive, got {value}")


def learning_rate(config: TrainConfig, epoch: int) -> float:
    """Step decay: initial_lr * decay^(epoch // step_epochs)."""
    return config.initial_lr * config.lr_decay ** (epoch // config.lr_step_epochs)


@dataclass
class TrainResult:
    path: str
    losses: list[float] = field(default_factory=list)
    net: QeNet | None = None


def train_model(
    dataset: PatchDataset,
    config: TrainConfig,
    model_name: str,
    out_path: str,
) -> TrainResult:
    """Minimize mean |original - enhanced| over random augmented patches.

    The dataset must hold frames coded in the model's own mode; exported
    weights are eval-mode snapshots (batch-norm statistics frozen).
    """
    channels = model_channels(model_name)
    mode = model_mode(model_name)
    wrong = [f.mode for f in dataset.frames if f.mode != mode]
    if wrong:
        raise ConfigError(
            f"model {model_name} trains on {mode} frames, dataset has {len(wrong)} others"
        )
    if dataset.patch_size != config.patch_size:
        raise ConfigError(
            f"dataset patch size {dataset.patch_size} != config {config.patch_size}"
        )

    torch.manual_seed(config.seed)
    rng = np.random.default_rng(config.seed)
    net = QeNet(channels, config.num_res_blocks, config.width)
    optimizer = torch.optim.Adam(net.parameters(), lr=config.initial_lr)

    result = TrainResult(path=out_path, net=net)
    net.train()
    for epoch in range(config.epochs):
        lr = learning_rate(config, epoch)
        for group in optimizer.param_groups:
            group["lr"] = lr
        for _ in range(config.steps_per_epoch):
            samples = [dataset.sample(rng) for _ in range(config.batch_size)]
            if config.augmentation:
                samples = [augment(s, rng) for s in samples]
            x, y = batch_tensors(samples, channels)
            out = net(x)
            loss = torch.mean(torch.abs(out - y))
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            result.losses.append(float(loss.detach()))

    net.eval()
    write_weights(net, out_path)
    return result
