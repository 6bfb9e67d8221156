"""Finite-difference validation of the L1 training gradient.

Autograd supplies the analytic gradient (|x| has subgradient 0 at 0);
central differences probe ~100 randomly chosen scalar weights in float64.
A probe is excluded when the absolute-value kink interferes with the
finite-difference segment: some residual element changes sign between
the +eps and -eps evaluations, or sits inside the |residual| < 1e-6
neighborhood of the kink. The check runs the network with frozen
batch-norm statistics (the export configuration), so repeated forwards
are side-effect-free.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from .errors import ConfigError

KINK_NEIGHBORHOOD = 1e-6


@dataclass(frozen=True)
class GradCheckResult:
    max_rel_error: float
    checked: int
    excluded: int


def _loss_and_residual(module, stack, target):
    with torch.no_grad():
        residual = module(stack) - target
        return float(torch.mean(torch.abs(residual))), residual


def finite_difference_check(
    module: torch.nn.Module,
    stack,
    target,
    rng: np.random.Generator,
    num_weights: int = 100,
    eps: float = 1e-6,
) -> GradCheckResult:
    """Max relative error between analytic and central-difference gradients."""
    module = module.double().eval()
    stack = torch.as_tensor(stack, dtype=torch.float64)
    target = torch.as_tensor(target, dtype=torch.float64)

    params = [p for p in module.parameters() if p.requires_grad]
    if not params:
        raise ConfigError("module has no trainable parameters")

    module.zero_grad()
    loss = torch.mean(torch.abs(module(stack) - target))
    loss.backward()
    sizes = [p.numel() for p in params]
    total = sum(sizes)
    chosen = rng.choice(total, size=min(num_weights, total), replace=False)

    bounds = np.cumsum(sizes)
    max_rel = 0.0
    checked = 0
    excluded = 0
    for flat in sorted(int(c) for c in chosen):
        pi = int(np.searchsorted(bounds, flat, side="right"))
        local = flat - (0 if pi == 0 else int(bounds[pi - 1]))
        param = params[pi]
        view = param.data.view(-1)
        analytic = float(param.grad.view(-1)[local])

        view[local] += eps
        loss_p, res_p = _loss_and_residual(module, stack, target)
        view[local] -= 2 * eps
        loss_m, res_m = _loss_and_residual(module, stack, target)
        view[local] += eps  # restore

        crossed = bool(torch.any(res_p * res_m < 0))
        near = bool(
            torch.any(torch.abs(res_p) < KINK_NEIGHBORHOOD)
            or torch.any(torch.abs(res_m) < KINK_NEIGHBORHOOD)
        )
        if crossed or near:
            excluded += 1
            continue
        fd = (loss_p - loss_m) / (2 * eps)
        rel = abs(fd - analytic) / max(abs(fd), abs(analytic), 1e-8)
        max_rel = max(max_rel, rel)
        checked += 1
    return GradCheckResult(max_rel_error=max_rel, checked=checked, excluded=excluded)
