"""End-to-end orchestration: architecture in, carbon report out.

The flow mirrors how the component models feed each other: parameter count,
then test loss, then the FLOP budget, then the parallelism plan and hardware
efficiency, then operational energy and carbon, then embodied carbon, and
finally their sum. Any stage can be short-circuited by a measured override
(FLOPs, efficiency, device count, per-device power); supplying the value the
model would have computed changes nothing.

Also here: lifecycle composition (training plus inference, experimentation
and storage shares) and the design-space sweep with Pareto dominance flags.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import units
from .efficiency import (
    DEFAULT_DEVICE_MEMORY_GB,
    DEFAULT_SERVER_SIZE,
    efficiency_at_count,
    optimal_efficiency,
    plan_parallelism,
)
from .embodied import OTHERS_FRACTION, EmbodiedResult, fleet_embodied
from .flops import inference_flops, training_flops
from .operational import (
    StorageWorkload,
    device_time,
    hardware_energy,
    operational_carbon,
    storage_energy,
)
from .params import count_params
from .scaling import test_loss
from .types import (
    CarbonReport,
    DataCenterProfile,
    HardwareFleet,
    LineItem,
    LlmArchitecture,
    ModelError,
    Phase,
    ScalingConstants,
)


@dataclass(frozen=True)
class Overrides:
    """Measured values that replace the corresponding model stage."""

    measured_flops: float | None = None
    efficiency: float | None = None
    device_count: int | None = None
    system_power_watts: float | None = None


@dataclass(frozen=True)
class EstimateRequest:
    """Everything needed to project one phase of one model."""

    arch: LlmArchitecture
    tokens: float
    fleet: HardwareFleet
    data_center: DataCenterProfile
    phase: Phase = Phase.TRAINING
    scaling: ScalingConstants = field(default_factory=ScalingConstants)
    overrides: Overrides = field(default_factory=Overrides)
    storage: StorageWorkload | None = None
    device_memory_gb: float = DEFAULT_DEVICE_MEMORY_GB
    server_size: int = DEFAULT_SERVER_SIZE
    anchors: list[tuple[float, float]] | None = None
    others_fraction: float = OTHERS_FRACTION


@dataclass(frozen=True)
class LifecyclePlan:
    """A training run plus the activity that surrounds it.

    ``inference_share`` and ``experimentation_share`` scale the training
    phase's device time (the fleet stays powered serving those activities);
    storage is its own workload. Published activity ratios vary by operator
    and are inputs here, not defaults.
    """

    training: EstimateRequest
    inference_share: float = 0.0
    experimentation_share: float = 0.0
    storage: StorageWorkload | None = None

    def __post_init__(self) -> None:
        if self.inference_share < 0 or self.experimentation_share < 0:
            raise ModelError("lifecycle shares must be >= 0")


@dataclass(frozen=True)
class SweepPoint:
    name: str
    param_count: int
    tokens: float
    test_loss: float
    training_tco2: float
    dominated: bool = False


def _flop_param_count(arch, full_count: int) -> float:
    """Parameter count that drives FLOPs: the dense base model for MoE."""
    if not arch.is_moe:
        return float(full_count)
    if arch.base_model_param_count is not None:
        return float(arch.base_model_param_count)
    if arch.hidden_size > 0 and arch.layer_count > 0 and arch.vocab_size > 0:
        # Dense counterpart of the expert model.
        return float(12 * arch.layer_count * arch.hidden_size ** 2
                     + arch.vocab_size * arch.hidden_size)
    raise ModelError(
        f"{arch.name}: MoE FLOPs need base_model_param_count "
        "(or h, l, V to derive the dense counterpart)"
    )


def _stage(name: str):
    """Re-raise model errors with the failing pipeline stage named."""
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc_type is not None and issubclass(exc_type, ModelError):
                raise ModelError(f"[{name}] {exc}") from exc
            return False

    return _Ctx()


def estimate(req: EstimateRequest) -> CarbonReport:
    """Project one phase end to end. See module docstring for the flow."""
    if req.phase is Phase.STORAGE:
        return _estimate_storage(req)
    if req.phase not in (Phase.TRAINING, Phase.INFERENCE):
        raise ModelError(f"estimate() handles training/inference/storage, not {req.phase}")

    arch = req.arch
    with _stage("parameter-model"):
        pcount = count_params(arch)

    loss = None
    if req.phase is Phase.TRAINING and req.tokens > 0:
        with _stage("scaling-law"):
            loss = test_loss(pcount.total, req.tokens, req.scaling, moe=arch.is_moe).loss

    with _stage("flop-model"):
        if req.overrides.measured_flops is not None:
            flops = req.overrides.measured_flops
        else:
            p_flops = _flop_param_count(arch, pcount.total)
            budget = (training_flops(p_flops, req.tokens) if req.phase is Phase.TRAINING
                      else inference_flops(p_flops, req.tokens))
            flops = budget.total_flops

    accel = req.fleet.accelerator
    if accel is None:
        raise ModelError("[efficiency-model] fleet has no accelerator entry")

    with _stage("efficiency-model"):
        plan = plan_parallelism(
            pcount.total, is_moe=arch.is_moe,
            device_memory_gb=req.device_memory_gb, server_size=req.server_size,
        )
        actual_devices = (req.overrides.device_count
                          if req.overrides.device_count is not None else accel.count)
        if req.overrides.efficiency is not None:
            eff = req.overrides.efficiency
        else:
            base_for_eff = _flop_param_count(arch, pcount.total) if arch.is_moe else pcount.total
            opt = optimal_efficiency(base_for_eff, is_moe=arch.is_moe, anchors=req.anchors,
                                     at_device_count=plan.device_count)
            if actual_devices == plan.device_count:
                eff = opt.efficiency
            else:
                eff = efficiency_at_count(actual_devices, plan.device_count,
                                          opt.efficiency).efficiency

    fleet = _with_accelerator_count(req.fleet, actual_devices)
    with _stage("operational-carbon"):
        seconds = 0.0 if flops == 0 else device_time(
            flops, actual_devices, accel.unit.peak_tflops, eff)
        # Units without a power figure ride along for embodied accounting
        # only; a measured accelerator system power already covers their
        # draw (host CPU, DRAM, network and so on).
        powered = _powered_subfleet(fleet, req.overrides.system_power_watts)
        energy_mwh, line_items = hardware_energy(
            powered, seconds, eff, power_override_watts=req.overrides.system_power_watts)
        oper = operational_carbon(energy_mwh, req.data_center, device_time_seconds=seconds)

    with _stage("embodied-carbon"):
        emb = fleet_embodied(fleet, seconds, others_fraction=req.others_fraction)

    items = _merge_line_items(line_items, emb)
    return CarbonReport(
        phase=req.phase,
        duration_seconds=seconds,
        hardware_energy_mwh=oper.hardware_energy_mwh,
        operational_energy_mwh=oper.operational_energy_mwh,
        operational_tco2=oper.operational_tco2,
        embodied_tco2=emb.total_tco2,
        total_tco2=oper.operational_tco2 + emb.total_tco2,
        hardware_efficiency=eff,
        test_loss=loss,
        parallelism=plan,
        line_items=items,
    )


def _estimate_storage(req: EstimateRequest) -> CarbonReport:
    if req.storage is None:
        raise ModelError("[operational-carbon] storage phase needs a storage workload")
    energy = storage_energy(req.storage)
    seconds = units.days_to_seconds(req.storage.duration_days)
    oper = operational_carbon(energy.total_mwh, req.data_center, device_time_seconds=seconds)
    return CarbonReport(
        phase=Phase.STORAGE,
        duration_seconds=seconds,
        hardware_energy_mwh=oper.hardware_energy_mwh,
        operational_energy_mwh=oper.operational_energy_mwh,
        operational_tco2=oper.operational_tco2,
        embodied_tco2=0.0,
        total_tco2=oper.operational_tco2,
        line_items=(
            LineItem(unit="storage", count=1, energy_mwh=energy.storage_mwh),
            LineItem(unit="transfer", count=1, energy_mwh=energy.transfer_mwh),
        ),
    )


def estimate_lifecycle(plan: LifecyclePlan) -> CarbonReport:
    """Compose training, inference, experimentation and storage.

    Inference and experimentation are modeled as extra wall-clock on the
    training fleet, scaled by their shares; embodied carbon is attributed
    over the combined wall-clock. With all shares at zero and no storage
    this reduces exactly to the training estimate.
    """
    tr = estimate(plan.training)
    activity = 1.0 + plan.inference_share + plan.experimentation_share
    wall_seconds = tr.duration_seconds * activity

    hardware_mwh = tr.hardware_energy_mwh * activity
    oper = operational_carbon(hardware_mwh, plan.training.data_center,
                              device_time_seconds=wall_seconds)

    fleet = _with_accelerator_count(
        plan.training.fleet,
        plan.training.overrides.device_count
        if plan.training.overrides.device_count is not None
        else (plan.training.fleet.accelerator.count if plan.training.fleet.accelerator else 1),
    )
    emb = fleet_embodied(fleet, wall_seconds,
                         others_fraction=plan.training.others_fraction)

    storage_mwh = 0.0
    items = list(tr.line_items)
    duration = wall_seconds
    if plan.storage is not None:
        s = storage_energy(plan.storage)
        storage_mwh = s.total_mwh
        items.append(LineItem(unit="storage", count=1, energy_mwh=s.total_mwh))
        duration += units.days_to_seconds(plan.storage.duration_days)

    total_hardware = hardware_mwh + storage_mwh
    total_oper_energy = total_hardware * plan.training.data_center.pue
    total_oper_tco2 = total_oper_energy * plan.training.data_center.carbon_intensity
    return CarbonReport(
        phase=Phase.LIFECYCLE,
        duration_seconds=duration,
        hardware_energy_mwh=total_hardware,
        operational_energy_mwh=total_oper_energy,
        operational_tco2=total_oper_tco2,
        embodied_tco2=emb.total_tco2,
        total_tco2=total_oper_tco2 + emb.total_tco2,
        hardware_efficiency=tr.hardware_efficiency,
        test_loss=tr.test_loss,
        parallelism=tr.parallelism,
        line_items=tuple(items),
    )


def sweep(
    grid: list[tuple[LlmArchitecture, float]],
    fleet: HardwareFleet,
    data_center: DataCenterProfile,
    scaling: ScalingConstants | None = None,
    anchors: list[tuple[float, float]] | None = None,
    device_memory_gb: float = DEFAULT_DEVICE_MEMORY_GB,
    server_size: int = DEFAULT_SERVER_SIZE,
) -> tuple[list[SweepPoint], list[tuple[str, str]]]:
    """Evaluate a grid of (architecture, token count) design points.

    Every point runs the full optimal path (no overrides): its own plan,
    optimal efficiency and training carbon. Failing points are returned as
    (name, reason) alongside the successes, never silently dropped. Points
    come back sorted by (loss, carbon) and carry Pareto dominance flags.
    """
    if not grid:
        raise ModelError("sweep grid is empty")
    constants = scaling if scaling is not None else ScalingConstants()

    points: list[SweepPoint] = []
    errors: list[tuple[str, str]] = []
    for arch, tokens in grid:
        try:
            if tokens <= 0:
                raise ModelError("sweep points need a positive token count")
            req = EstimateRequest(
                arch=arch, tokens=tokens, fleet=fleet, data_center=data_center,
                phase=Phase.TRAINING, scaling=constants, anchors=anchors,
                device_memory_gb=device_memory_gb, server_size=server_size,
            )
            report = estimate(req)
            pcount = count_params(arch)
            points.append(SweepPoint(
                name=arch.name, param_count=pcount.total, tokens=tokens,
                test_loss=report.test_loss, training_tco2=report.operational_tco2,
            ))
        except ModelError as exc:
            errors.append((getattr(arch, "name", "<unnamed>"), str(exc)))

    points.sort(key=lambda p: (p.test_loss, p.training_tco2, p.name))
    flagged = [replace(p, dominated=_is_dominated(p, points)) for p in points]
    return flagged, errors


def _is_dominated(point: SweepPoint, points: list[SweepPoint]) -> bool:
    for other in points:
        if other is point:
            continue
        if (other.test_loss <= point.test_loss
                and other.training_tco2 <= point.training_tco2
                and (other.test_loss < point.test_loss
                     or other.training_tco2 < point.training_tco2)):
            return True
    return False


def _powered_subfleet(fleet: HardwareFleet, accel_power_override: float | None) -> HardwareFleet:
    accel = fleet.accelerator
    kept = tuple(
        e for e in fleet.entries
        if e.unit.avg_system_power_watts is not None
        or e.unit.tdp_watts is not None
        or (e is accel and accel_power_override is not None)
    )
    return HardwareFleet(kept)


def _with_accelerator_count(fleet: HardwareFleet, count: int) -> HardwareFleet:
    accel = fleet.accelerator
    if accel is None or accel.count == count:
        return fleet
    entries = tuple(replace(e, count=count) if e is accel else e for e in fleet.entries)
    return HardwareFleet(entries)


def _merge_line_items(energy_items: list[LineItem],
                      emb: EmbodiedResult) -> tuple[LineItem, ...]:
    by_unit = {item.unit: item for item in energy_items}
    merged: dict[str, LineItem] = dict(by_unit)
    for e in emb.per_unit:
        if e.unit in merged:
            merged[e.unit] = replace(merged[e.unit], embodied_tco2=e.attributed_tco2)
        else:
            merged[e.unit] = LineItem(unit=e.unit, count=e.count,
                                      embodied_tco2=e.attributed_tco2)
    merged["others"] = LineItem(unit="others", count=0, embodied_tco2=emb.others_tco2)
    return tuple(merged.values())
