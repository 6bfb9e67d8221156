"""Command line front end for training and gradient checking.

Training data is synthesized on the fly (smooth fields plus rectangles,
QP-scaled degradation), so the tool runs self-contained. Exit codes:
0 success, 2 bad configuration, 3 file I/O failure, 4 malformed data.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np
import torch

from .data import PatchDataset, batch_tensors, make_frames
from .errors import ConfigError, DataError
from .gradcheck import finite_difference_check
from .network import MODEL_TABLE, QeNet, model_channels, model_mode
from .train import TrainConfig, train_model


def _add_net_flags(sub):
    sub.add_argument("--model", required=True, choices=sorted(MODEL_TABLE))
    sub.add_argument("--num-res-blocks", type=int, default=16)
    sub.add_argument("--net-width", type=int, default=256)
    sub.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qe-train")
    subs = parser.add_subparsers(dest="command", required=True)

    train = subs.add_parser("train", help="train a model on synthetic frames")
    _add_net_flags(train)
    train.add_argument("--output", required=True)
    train.add_argument("--frames", type=int, default=8)
    train.add_argument("--frame-width", type=int, default=192)
    train.add_argument("--frame-height", type=int, default=128)
    train.add_argument("--qp-min", type=int, default=22)
    train.add_argument("--qp-max", type=int, default=42)
    train.add_argument("--patch-size", type=int, default=64)
    train.add_argument("--batch-size", type=int, default=16)
    train.add_argument("--lr", type=float, default=1e-5)
    train.add_argument("--epochs", type=int, default=500)
    train.add_argument("--steps-per-epoch", type=int, default=100)
    train.add_argument("--no-augment", action="store_true")

    check = subs.add_parser("gradcheck", help="finite-difference gradient check")
    _add_net_flags(check)
    check.add_argument("--patch-size", type=int, default=32)
    check.add_argument("--num-weights", type=int, default=100)
    check.add_argument("--eps", type=float, default=1e-6)
    return parser


def cmd_train(args) -> int:
    config = TrainConfig(
        patch_size=args.patch_size,
        batch_size=args.batch_size,
        initial_lr=args.lr,
        epochs=args.epochs,
        steps_per_epoch=args.steps_per_epoch,
        num_res_blocks=args.num_res_blocks,
        width=args.net_width,
        augmentation=not args.no_augment,
        seed=args.seed,
    )
    rng = np.random.default_rng(args.seed)
    frames = make_frames(
        rng,
        count=args.frames,
        height=args.frame_height,
        width=args.frame_width,
        mode=model_mode(args.model),
        qp_range=(args.qp_min, args.qp_max),
    )
    dataset = PatchDataset(frames, patch_size=args.patch_size)
    result = train_model(dataset, config, args.model, args.output)
    print(f"model: {args.model}")
    print(f"weights: {result.path}")
    print(f"final loss: {result.losses[-1]:.6f}")
    return 0


def cmd_gradcheck(args) -> int:
    rng = np.random.default_rng(args.seed)
    torch.manual_seed(args.seed)
    channels = model_channels(args.model)
    net = QeNet(channels, args.num_res_blocks, args.net_width)
    size = args.patch_size
    stack = torch.rand((1, channels, size, size), dtype=torch.float64)
    target = torch.rand((1, 1, size, size), dtype=torch.float64)
    result = finite_difference_check(
        net, stack, target, rng, num_weights=args.num_weights, eps=args.eps
    )
    print(f"checked: {result.checked}")
    print(f"excluded: {result.excluded}")
    print(f"max relative error: {result.max_rel_error:.3e}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "train":
            return cmd_train(args)
        return cmd_gradcheck(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
