"""FLOP budgets for training and inference.

Multiply-accumulates against the weights dominate, giving the familiar
estimates of 6 FLOPs per parameter per token for training (forward plus
backward) and 2 for inference. For expert-routed models the *dense base
model* size is what each token actually touches, so that count, never the
full expert count, feeds these formulas; the pipeline enforces this.
"""

from __future__ import annotations

from dataclasses import dataclass

from .types import ModelError, Phase

TRAINING_FLOPS_PER_PARAM_TOKEN = 6.0
INFERENCE_FLOPS_PER_PARAM_TOKEN = 2.0


@dataclass(frozen=True)
class FlopBudget:
    total_flops: float
    phase: Phase

    @property
    def zettaflops(self) -> float:
        return self.total_flops / 1e21


def training_flops(param_count: float, token_count: float) -> FlopBudget:
    """Total training FLOPs = 6 * P * D.

    Computed as exactly three times the inference product, so the
    training/inference ratio holds bit-for-bit.
    """
    _check(param_count, token_count)
    forward = INFERENCE_FLOPS_PER_PARAM_TOKEN * param_count * token_count
    return FlopBudget(3.0 * forward, Phase.TRAINING)


def inference_flops(param_count: float, token_count: float) -> FlopBudget:
    """Total inference FLOPs = 2 * P * D."""
    _check(param_count, token_count)
    return FlopBudget(INFERENCE_FLOPS_PER_PARAM_TOKEN * param_count * token_count,
                      Phase.INFERENCE)


def _check(param_count: float, token_count: float) -> None:
    if param_count < 0 or token_count < 0:
        raise ModelError("param_count and token_count must be >= 0")
