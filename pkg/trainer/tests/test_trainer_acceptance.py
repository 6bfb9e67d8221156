"""Acceptance gate for the trainer: one verdict line per guarantee.

The parity check drives the inference engine as an installed command
line tool; nothing here imports the engine package. Tolerances are
pinned: gradient error < 1e-3 (under 60 s), overfit L1 < 0.005 within
2000 steps, cross-component output gap <= 1e-4 per normalized sample.
"""
import subprocess
import sys
import time

import numpy as np
import pytest
import torch

from qetrainer.data import (
    PatchDataset,
    batch_tensors,
    load_yuv_luma,
    make_frames,
    write_yuv,
)
from qetrainer.gradcheck import finite_difference_check
from qetrainer.network import QeNet, assemble_stack, quantize_plane
from qetrainer.train import TrainConfig, train_model
from qetrainer.weights_io import load_weights


@pytest.fixture
def announce(capfd):
    """Print one uncaptured verdict line, then enforce it."""

    def _announce(ok, name, detail):
        with capfd.disabled():
            print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}", flush=True)
        assert ok, f"{name}: {detail}"

    return _announce


def test_gradient_check(announce):
    """FD vs autograd on the reduced network, < 1e-3, < 60 s."""
    torch.manual_seed(1)
    rng = np.random.default_rng(1)
    net = QeNet(input_channels=3, num_res_blocks=2, width=8)
    stack = torch.rand((1, 3, 32, 32), dtype=torch.float64)
    target = torch.rand((1, 1, 32, 32), dtype=torch.float64)

    start = time.perf_counter()
    result = finite_difference_check(net, stack, target, rng, num_weights=100, eps=1e-6)
    elapsed = time.perf_counter() - start

    ok = result.max_rel_error < 1e-3 and result.checked >= 80 and elapsed < 60.0
    announce(
        ok,
        "gradient check",
        f"max rel error {result.max_rel_error:.3e} over {result.checked} weights "
        f"({result.excluded} kink-excluded) in {elapsed:.2f}s",
    )


def test_overfit_smoke(announce, tmp_path):
    """One 64x64 sample memorized to L1 < 0.005 within 2000 steps."""
    rng = np.random.default_rng(20)
    frames = make_frames(rng, count=1, height=64, width=64, mode="inter", qp_range=(18, 18))
    dataset = PatchDataset(frames, patch_size=64)
    config = TrainConfig(
        patch_size=64,
        batch_size=1,
        initial_lr=3e-3,
        epochs=16,
        steps_per_epoch=100,
        lr_step_epochs=4,
        num_res_blocks=2,
        width=8,
        augmentation=False,
        seed=1,
    )
    result = train_model(dataset, config, "inter_cqp", str(tmp_path / "overfit.qew"))
    steps = len(result.losses)

    sample = dataset.sample(np.random.default_rng(0))  # 64x64 crop is unique
    x, y = batch_tensors([sample], input_channels=3, dtype=torch.float64)
    net = result.net.double().eval()
    with torch.no_grad():
        l1 = float(torch.mean(torch.abs(net(x) - y)))

    ok = steps <= 2000 and l1 < 0.005
    announce(
        ok,
        "overfit smoke test",
        f"single-sample L1 {l1:.5f} after {steps} steps "
        f"(first-step loss {result.losses[0]:.3f})",
    )


def test_cross_component_parity(announce, tmp_path):
    """Exported weights drive the engine CLI; outputs match <= 1e-4."""
    rng = np.random.default_rng(42)

    frames = make_frames(rng, count=2, height=48, width=48, mode="inter", qp_range=(25, 35))
    dataset = PatchDataset(frames, patch_size=16)
    config = TrainConfig(
        patch_size=16,
        batch_size=2,
        initial_lr=1e-4,
        epochs=1,
        steps_per_epoch=5,
        num_res_blocks=2,
        width=8,
        seed=7,
    )
    weights = tmp_path / "inter_cqp.qew"
    train_model(dataset, config, "inter_cqp", str(weights))

    height, width, count, qp = 32, 48, 5, 30
    recons = [rng.integers(0, 1024, size=(height, width)) for _ in range(count)]
    preds = [rng.integers(0, 1024, size=(height, width)) for _ in range(count)]
    in_yuv = tmp_path / "in.yuv"
    pred_yuv = tmp_path / "pred.yuv"
    out_yuv = tmp_path / "out.yuv"
    write_yuv(str(in_yuv), recons, rng=rng)
    write_yuv(str(pred_yuv), preds)

    proc = subprocess.run(
        [
            sys.executable, "-m", "qe", "enhance",
            "--input", str(in_yuv),
            "--width", str(width),
            "--height", str(height),
            "--frames", str(count),
            "--qp", str(qp),
            "--coding-type", "inter",
            "--prediction", str(pred_yuv),
            "--model", "inter_cqp",
            "--weights-inter-cqp", str(weights),
            "--output", str(out_yuv),
        ],
        capture_output=True,
        text=True,
        cwd=tmp_path,
    )
    assert proc.returncode == 0, proc.stderr

    net = load_weights(str(weights)).double().eval()
    worst = 0.0
    changed = 0
    for i in range(count):
        engine = load_yuv_luma(str(out_yuv), width, height, i)
        stack = assemble_stack(
            np.asarray(recons[i], dtype=np.float64) / 1023.0,
            np.full((height, width), qp / 63.0),
            np.asarray(preds[i], dtype=np.float64) / 1023.0,
        )
        with torch.no_grad():
            mine = quantize_plane(net(stack.to(torch.float64)[None])[0, 0]).numpy()
        worst = max(worst, float(np.abs(engine - mine).max()) / 1023.0)
        changed += int((engine != np.asarray(recons[i])).sum())

    ok = worst <= 1e-4 and changed > 0
    announce(
        ok,
        "cross-component parity",
        f"max normalized gap {worst:.2e} across {count} frames "
        f"({changed} samples actually rewritten)",
    )
