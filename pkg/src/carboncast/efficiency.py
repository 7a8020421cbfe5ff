"""Parallelism planning and hardware-efficiency estimation.

Hardware efficiency is achieved throughput over peak throughput. It peaks at
one particular device count n (the optimal parallelism setting) and degrades
on either side of it. Three pieces model this:

* :func:`plan_parallelism` builds the optimal (pipeline, tensor, data,
  expert) degrees. Tensor parallelism grows first, in powers of two up to
  the server size z (intra-server links are the cheap ones); pipeline depth
  then grows until the model state fits in device memory; data parallelism
  supplies the remaining global scale. Expert-routed plans fix expert
  parallelism at 64 and data parallelism at 1 to bound all-to-all traffic.

* :func:`optimal_efficiency` predicts the efficiency *at* the optimum from
  an anchor table of published (param_count, efficiency) measurements, via a
  degree-2 polynomial in log10(P), falling back to piecewise-linear
  interpolation when fewer than three anchors exist. Expert-routed models
  reach about 80% of their dense base's optimum (extra host-device swaps).

* :func:`efficiency_at_count` degrades the optimum when the actual fleet
  size differs from n: undersupply scales efficiency by re/n; oversupply
  decays it hyperbolically toward a floor. The oversupply floor gamma2 is
  calibrated to the published 175 B point (10K devices achieving 19.7%
  against a 1.5K-device optimum of 47%).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .catalog import default_anchors
from .types import ModelError, ParallelismPlan

DEFAULT_SERVER_SIZE = 8           # devices per server sharing fast interconnect
DEFAULT_DEVICE_MEMORY_GB = 32.0   # published 175 B optimum assumed 32 GB parts

# Training state per parameter under mixed precision: fp16 weights + grads,
# fp32 master weights + two optimizer moments.
TRAINING_BYTES_PER_PARAM = 16.0
INFERENCE_BYTES_PER_PARAM = 2.0

DEFAULT_EXPERT_PARALLELISM = 64
MOE_EFFICIENCY_DISCOUNT = 0.80

# Devices per parameter at the optimum, anchored at the published
# 175 B -> ~1.5K devices operating point.
_OPTIMAL_DEVICES_PER_PARAM = 1500.0 / 175e9

GAMMA0 = 1.0     # undersupply slope; 1.0 keeps eff continuous at re = n
GAMMA1 = 1.0     # oversupply decay
GAMMA2 = 0.1265  # oversupply floor, calibrated from the 10K-device 175 B point


class EfficiencySource(enum.Enum):
    ANCHOR = "anchor_table"      # interpolated straight from anchors
    REGRESSION = "regression"    # degree-2 fit through >= 3 anchors
    SCALED = "off_optimal"       # degraded for a non-optimal device count
    OVERRIDE = "user_override"


@dataclass(frozen=True)
class EfficiencyEstimate:
    efficiency: float
    at_device_count: int
    source: EfficiencySource

    def __post_init__(self) -> None:
        if not (0.0 < self.efficiency <= 1.0):
            raise ModelError(f"efficiency must lie in (0, 1], got {self.efficiency}")
        if self.at_device_count < 1:
            raise ModelError("at_device_count must be >= 1")


def optimal_device_count(param_count: float) -> int:
    """Device count at the efficiency optimum, scaled from the 175 B anchor."""
    if param_count <= 0:
        raise ModelError("param_count must be positive")
    return max(1, round(param_count * _OPTIMAL_DEVICES_PER_PARAM))


def plan_parallelism(
    param_count: float,
    is_moe: bool = False,
    device_memory_gb: float = DEFAULT_DEVICE_MEMORY_GB,
    server_size: int = DEFAULT_SERVER_SIZE,
    target_device_count: int | None = None,
    bytes_per_param: float = TRAINING_BYTES_PER_PARAM,
    expert_parallelism: int = DEFAULT_EXPERT_PARALLELISM,
    max_model_parallel: int | None = None,
) -> ParallelismPlan:
    """Optimal parallelism degrees for a model of ``param_count`` parameters.

    ``target_device_count`` sets the global scale for dense plans (data
    parallelism absorbs it); when omitted, the published devices-per-param
    optimum is used. ``max_model_parallel`` optionally caps tensor*pipeline;
    a model that cannot fit under the cap raises with the memory it needs.
    """
    if param_count <= 0:
        raise ModelError("param_count must be positive")
    if device_memory_gb <= 0:
        raise ModelError("device_memory_gb must be positive")
    if server_size < 1:
        raise ModelError("server_size must be >= 1")

    mem_bytes = device_memory_gb * 1e9
    state_bytes = bytes_per_param * param_count

    # Tensor parallelism: smallest power of two (capped at z) whose share of
    # the model state fits in one device; z itself when nothing fits.
    tensor = server_size
    t = 1
    while t <= server_size:
        if state_bytes <= t * mem_bytes:
            tensor = t
            break
        t *= 2

    pipeline = max(1, math.ceil(state_bytes / (tensor * mem_bytes)))

    if max_model_parallel is not None and tensor * pipeline > max_model_parallel:
        per_device = state_bytes / max_model_parallel / 1e9
        raise ModelError(
            f"model needs {per_device:.1f} GB per device across "
            f"{max_model_parallel} model-parallel devices; only "
            f"{device_memory_gb:.1f} GB available"
        )

    if is_moe:
        # d pinned to 1: expert all-to-alls already saturate the fabric.
        return ParallelismPlan(pipeline=pipeline, tensor=tensor, data=1,
                               expert=expert_parallelism, is_moe=True)

    target = target_device_count if target_device_count is not None \
        else optimal_device_count(param_count)
    data = max(1, round(target / (tensor * pipeline)))
    return ParallelismPlan(pipeline=pipeline, tensor=tensor, data=data,
                           expert=1, is_moe=False)


def optimal_efficiency(
    param_count: float,
    is_moe: bool = False,
    anchors: list[tuple[float, float]] | None = None,
    moe_discount: float = MOE_EFFICIENCY_DISCOUNT,
    at_device_count: int | None = None,
) -> EfficiencyEstimate:
    """Efficiency at the optimal parallelism setting for this model size.

    ``anchors`` are (param_count, efficiency) pairs; the packaged table is
    used when omitted. Three or more anchors get a degree-2 least-squares
    fit in log10(param_count); one or two fall back to piecewise-linear
    interpolation (flat beyond the ends); zero is an error.
    """
    if param_count <= 0:
        raise ModelError("param_count must be positive")
    if anchors is None:
        anchors = default_anchors()
    if not anchors:
        raise ModelError("efficiency anchor table is empty")

    pts = sorted(anchors)
    x = math.log10(param_count)
    if len(pts) >= 3:
        coeffs = np.polyfit([math.log10(p) for p, _ in pts], [e for _, e in pts], 2)
        eff = float(np.polyval(coeffs, x))
        source = EfficiencySource.REGRESSION
    else:
        eff = float(np.interp(x, [math.log10(p) for p, _ in pts], [e for _, e in pts]))
        source = EfficiencySource.ANCHOR

    if is_moe:
        eff *= moe_discount
    eff = min(1.0, max(1e-6, eff))
    count = at_device_count if at_device_count is not None else optimal_device_count(param_count)
    return EfficiencyEstimate(efficiency=eff, at_device_count=count, source=source)


def efficiency_at_count(
    actual_devices: int,
    optimal_devices: int,
    optimal_eff: float,
    gamma0: float = GAMMA0,
    gamma1: float = GAMMA1,
    gamma2: float = GAMMA2,
) -> EfficiencyEstimate:
    """Efficiency when running on ``actual_devices`` instead of the optimum.

    Below the optimum: gamma0 * (re/n) * eff_n. Above it:
    gamma1 * (n/re) * eff_n + gamma2. At it: eff_n unchanged.
    """
    if actual_devices < 1 or optimal_devices < 1:
        raise ModelError("device counts must be >= 1")
    if not (0.0 < optimal_eff <= 1.0):
        raise ModelError("optimal_eff must lie in (0, 1]")

    re, n = actual_devices, optimal_devices
    if re == n:
        eff = optimal_eff
    elif re < n:
        eff = gamma0 * (re / n) * optimal_eff
    else:
        eff = gamma1 * (n / re) * optimal_eff + gamma2
    eff = min(1.0, max(1e-9, eff))
    return EfficiencyEstimate(efficiency=eff, at_device_count=re,
                              source=EfficiencySource.SCALED)
