"""Operational energy and carbon: execution time, fleet energy, grid carbon.

The chain is: FLOPs and achieved throughput give per-device execution time;
power draw times time gives hardware energy; PUE uplifts it to facility
energy; grid carbon intensity converts to emissions.

Power accounting per fleet entry follows one of two paths. When a measured
average system power is available it already reflects real utilization, so
it multiplies time directly. Otherwise the chip TDP is derated by the
hardware efficiency. Mixing the two in one fleet is fine.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import units
from .types import DataCenterProfile, HardwareFleet, LineItem, ModelError


@dataclass(frozen=True)
class OperationalResult:
    """Energy and carbon for one phase. Energies in MWh, carbon in tonnes."""

    hardware_energy_mwh: float
    operational_energy_mwh: float
    operational_tco2: float
    device_time_seconds: float | None = None


@dataclass(frozen=True)
class StorageWorkload:
    """Data at rest and in flight over a storage phase.

    Defaults: cloud storage draws 11.3 W per stored TB and intra-datacenter
    transfer capacity 1.48 W per TB, held for the whole phase.
    """

    stored_tb: float
    transferred_tb: float
    duration_days: float
    storage_w_per_tb: float = 11.3
    transfer_w_per_tb: float = 1.48

    def __post_init__(self) -> None:
        for fname in ("stored_tb", "transferred_tb", "duration_days",
                      "storage_w_per_tb", "transfer_w_per_tb"):
            if getattr(self, fname) < 0:
                raise ModelError(f"{fname} must be >= 0")


@dataclass(frozen=True)
class StorageEnergy:
    storage_mwh: float
    transfer_mwh: float

    @property
    def total_mwh(self) -> float:
        return self.storage_mwh + self.transfer_mwh


def device_time(total_flops: float, device_count: int,
                peak_tflops: float, efficiency: float) -> float:
    """Execution time in seconds: FLOPs / (devices * peak * efficiency)."""
    if total_flops < 0:
        raise ModelError("total_flops must be >= 0")
    denom = device_count * peak_tflops * units.TERA * efficiency
    if denom <= 0:
        raise ModelError(
            f"throughput is zero (devices={device_count}, peak={peak_tflops} "
            f"TFLOP/s, efficiency={efficiency})"
        )
    return total_flops / denom


def hardware_energy(
    fleet: HardwareFleet,
    execution_seconds: float,
    efficiency: float,
    power_override_watts: float | None = None,
) -> tuple[float, list[LineItem]]:
    """Fleet energy in MWh plus a per-unit breakdown.

    Each entry contributes power * eff * count * time, where the efficiency
    factor is 1 for measured average system power and ``efficiency`` for the
    TDP path. ``power_override_watts`` substitutes a measured per-device
    power for the accelerator entry.
    """
    if execution_seconds < 0:
        raise ModelError("execution_seconds must be >= 0")
    total_j = 0.0
    items = []
    for entry in fleet.entries:
        unit = entry.unit
        override = power_override_watts if entry is fleet.accelerator else None
        avg = override if override is not None else unit.avg_system_power_watts
        if avg is not None:
            watts, eff = avg, 1.0
        elif unit.tdp_watts is not None:
            watts, eff = unit.tdp_watts, efficiency
        else:
            raise ModelError(
                f"{unit.name}: no power figure (needs avg_system_power_watts or tdp_watts)"
            )
        joules = watts * eff * entry.count * execution_seconds
        total_j += joules
        items.append(LineItem(unit=unit.name, count=entry.count,
                              energy_mwh=units.joules_to_mwh(joules)))
    return units.joules_to_mwh(total_j), items


def operational_carbon(
    hardware_energy_mwh: float,
    data_center: DataCenterProfile,
    device_time_seconds: float | None = None,
) -> OperationalResult:
    """Uplift hardware energy by PUE and convert to tonnes of CO2eq.

    MWh times kg/kWh lands directly in tonnes (1 MWh * 1 kg/kWh = 1 t).
    """
    if hardware_energy_mwh < 0:
        raise ModelError("hardware_energy_mwh must be >= 0")
    oper_mwh = hardware_energy_mwh * data_center.pue
    tco2 = oper_mwh * data_center.carbon_intensity
    return OperationalResult(
        hardware_energy_mwh=hardware_energy_mwh,
        operational_energy_mwh=oper_mwh,
        operational_tco2=tco2,
        device_time_seconds=device_time_seconds,
    )


def inference_latency(param_count: float, batch_tokens: float,
                      device_count: int, peak_tflops: float,
                      efficiency: float) -> float:
    """Latency in seconds for one inference batch: 2*P*D over throughput."""
    if param_count <= 0 or batch_tokens <= 0:
        raise ModelError("param_count and batch_tokens must be positive")
    flops = 2.0 * param_count * batch_tokens
    return device_time(flops, device_count, peak_tflops, efficiency)


def storage_energy(workload: StorageWorkload) -> StorageEnergy:
    """Energy to hold and move data over the phase, split by cause."""
    hours = workload.duration_days * 24.0
    storage_wh = workload.stored_tb * workload.storage_w_per_tb * hours
    transfer_wh = workload.transferred_tb * workload.transfer_w_per_tb * hours
    return StorageEnergy(storage_mwh=storage_wh / 1e6, transfer_mwh=transfer_wh / 1e6)
