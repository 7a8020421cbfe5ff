"""Embodied carbon: manufacturing emissions amortized onto a workload.

A chip's embodied footprint is its die area times the fab's carbon per cm^2
(or capacity times carbon per GB for memory and storage), unless a measured
per-unit figure overrides the pricing. A workload is charged the fraction of
each unit's lifetime it occupies, and the named units are topped up by an
"others" share covering motherboard, chassis, PSU and the like, which is a
fixed fraction of the final total (15% in published teardowns).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import units
from .types import HardwareFleet, HardwareUnit, ModelError

OTHERS_FRACTION = 0.15


@dataclass(frozen=True)
class EmbodiedItem:
    unit: str
    count: int
    chip_kg: float
    attributed_tco2: float


@dataclass(frozen=True)
class EmbodiedResult:
    per_unit: tuple[EmbodiedItem, ...]
    others_tco2: float
    total_tco2: float

    @property
    def named_tco2(self) -> float:
        return sum(item.attributed_tco2 for item in self.per_unit)


def chip_embodied(unit: HardwareUnit) -> float:
    """Manufacturing kgCO2eq for a single unit, by its active pricing basis."""
    basis = unit.embodied_basis
    if basis == "override":
        return float(unit.embodied_kg_override)
    if basis == "area":
        return (unit.die_area_mm2 / 100.0) * unit.cpa  # mm^2 -> cm^2
    if basis == "gb":
        return unit.capacity_gb * unit.cpa
    raise ModelError(f"{unit.name}: no embodied pricing basis")


def fleet_embodied(
    fleet: HardwareFleet,
    execution_seconds: float,
    others_fraction: float = OTHERS_FRACTION,
    utilization: float | None = None,
) -> EmbodiedResult:
    """Embodied carbon a workload of ``execution_seconds`` is charged for.

    Per unit: count * chip_kg * (time / lifetime). ``utilization`` optionally
    divides the attribution (a fleet busy 60% of its life spreads its
    embodied cost over fewer useful seconds); published validations do not
    apply it, so it defaults to off.
    """
    if execution_seconds < 0:
        raise ModelError("execution_seconds must be >= 0")
    if not (0.0 <= others_fraction < 1.0):
        raise ModelError("others_fraction must lie in [0, 1)")
    if utilization is not None and not (0.0 < utilization <= 1.0):
        raise ModelError("utilization must lie in (0, 1]")

    items = []
    for entry in fleet.entries:
        unit = entry.unit
        lifetime_s = units.years_to_seconds(unit.lifetime_years)
        if lifetime_s <= 0:
            raise ModelError(f"{unit.name}: lifetime must be positive")
        share = execution_seconds / lifetime_s
        if utilization is not None:
            share /= utilization
        kg = chip_embodied(unit)
        items.append(EmbodiedItem(
            unit=unit.name, count=entry.count, chip_kg=kg,
            attributed_tco2=entry.count * kg * share / 1000.0,
        ))

    named = sum(item.attributed_tco2 for item in items)
    total = named / (1.0 - others_fraction)
    return EmbodiedResult(per_unit=tuple(items), others_tco2=total - named,
                          total_tco2=total)
