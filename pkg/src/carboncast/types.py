"""Shared domain types for the carbon projection pipeline.

Everything here is an immutable value object: construct it once, share it
freely across threads. Validation is split in two styles. Architectures are
checked by :func:`validate_architecture`, which returns a list of violations
(the CLI wants to show all of them at once). Hardware and data-center types
raise :class:`CatalogError` eagerly, because a broken catalog row should stop
a run immediately.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class CatalogError(ValueError):
    """A hardware unit or data-center profile violates its invariants."""


class ModelError(ValueError):
    """A projection model was handed inputs it cannot work with."""


class ArchKind(enum.Enum):
    """Transformer layout, which selects the parameter-count formula."""

    DENSE_GPT = "dense_gpt"          # one self-attention + one FF block per layer
    DENSE_ENCDEC = "dense_encdec"    # T5-style encoder/decoder pair per layer
    DENSE_DECONLY = "dense_deconly"  # decoder block only (LaMDA, PaLM style)
    MOE = "moe"                      # mixture-of-experts


class HardwareRole(enum.Enum):
    ACCELERATOR = "accelerator"
    CPU = "cpu"
    DRAM = "dram"
    SSD = "ssd"
    OTHER = "other"


class Phase(enum.Enum):
    TRAINING = "training"
    INFERENCE = "inference"
    STORAGE = "storage"
    EXPERIMENTATION = "experimentation"
    LIFECYCLE = "lifecycle"


@dataclass(frozen=True)
class ExpertGroup:
    """A slice of a model's MoE layers sharing one expert count.

    ``layer_fraction`` is the fraction of the MoE layers in this group;
    fractions across all groups must sum to 1. Mixed-expert designs
    (e.g. 64 experts in early layers, 128 in late ones) use several groups.
    """

    layer_fraction: float
    expert_count: int


@dataclass(frozen=True)
class LlmArchitecture:
    """Structural description of a dense or MoE LLM.

    Counts follow the usual transformer symbols: hidden size h, layer count
    l, vocabulary V, attention heads and head dimension, feed-forward width.
    ``moe_fraction`` is the fraction of layers whose FF block is replaced by
    an expert layer. ``ff_stacks`` is the number of expert-replaceable FF
    blocks per counted layer (2 for encoder-decoder layer pairs, 1 otherwise).

    ``explicit_param_count`` bypasses the parameter model entirely.
    ``base_model_param_count`` is the MoE's dense base model size, which
    drives the FLOP model instead of the full expert count.
    """

    name: str
    kind: ArchKind
    hidden_size: int = 0
    layer_count: int = 0
    vocab_size: int = 0
    head_count: int | None = None
    head_dim: int | None = None
    ff_size: int | None = None
    moe_fraction: float | None = None
    expert_groups: tuple[ExpertGroup, ...] = ()
    ff_stacks: int = 1
    explicit_param_count: int | None = None
    base_model_param_count: int | None = None

    @property
    def is_moe(self) -> bool:
        return self.kind is ArchKind.MOE


_FRACTION_SUM_TOL = 1e-9


def validate_architecture(arch: LlmArchitecture) -> list[str]:
    """Check every architecture invariant, returning one message per breach.

    An empty list means the architecture is usable by the parameter model
    (or carries an explicit count). Messages name the offending field so the
    CLI can point at config paths.
    """
    violations: list[str] = []

    if arch.explicit_param_count is not None and arch.explicit_param_count <= 0:
        violations.append("explicit_param_count: must be positive")
    if arch.base_model_param_count is not None and arch.base_model_param_count <= 0:
        violations.append("base_model_param_count: must be positive")

    has_explicit = arch.explicit_param_count is not None and arch.explicit_param_count > 0

    structural = {
        "hidden_size": arch.hidden_size,
        "layer_count": arch.layer_count,
    }
    if arch.kind is not ArchKind.MOE:
        # Vocabulary embeddings enter the dense formulas only; MoE sizing
        # needs just h, l and the expert data.
        structural["vocab_size"] = arch.vocab_size
    if not has_explicit:
        for fname, value in structural.items():
            if value <= 0:
                violations.append(f"{fname}: must be a positive integer")

    for fname, value in (("head_count", arch.head_count),
                         ("head_dim", arch.head_dim),
                         ("ff_size", arch.ff_size)):
        if value is not None and value <= 0:
            violations.append(f"{fname}: must be a positive integer when given")

    if arch.ff_stacks < 1:
        violations.append("ff_stacks: must be >= 1")

    if arch.kind is ArchKind.MOE:
        rho = arch.moe_fraction
        if not has_explicit:
            if rho is None:
                violations.append("moe_fraction: required for MoE architectures")
            elif not (0.0 < rho <= 1.0):
                violations.append("moe_fraction: must lie in (0, 1]")
            if not arch.expert_groups:
                violations.append("expert_groups: required for MoE architectures")
        if arch.expert_groups:
            total = sum(g.layer_fraction for g in arch.expert_groups)
            if abs(total - 1.0) > _FRACTION_SUM_TOL:
                violations.append(
                    f"expert_groups: layer fractions sum to {total!r}, expected 1"
                )
            for i, g in enumerate(arch.expert_groups):
                if g.layer_fraction <= 0:
                    violations.append(f"expert_groups[{i}].layer_fraction: must be positive")
                if g.expert_count <= 0:
                    violations.append(f"expert_groups[{i}].expert_count: must be positive")
    else:
        if arch.moe_fraction is not None:
            violations.append("moe_fraction: only valid for MoE architectures")
        if arch.expert_groups:
            violations.append("expert_groups: only valid for MoE architectures")

    return violations


@dataclass(frozen=True)
class HardwareUnit:
    """One kind of hardware in a fleet, with its power and embodied pricing.

    Embodied carbon is priced by exactly one basis, resolved in this order:
    a direct per-unit override in kg, die area (mm^2) times CPA (kg per cm^2),
    or capacity (GB) times CPA (kg per GB).
    """

    name: str
    role: HardwareRole
    peak_tflops: float | None = None
    tdp_watts: float | None = None
    avg_system_power_watts: float | None = None
    die_area_mm2: float | None = None
    cpa: float | None = None
    cpa_basis: str | None = None  # "area" or "gb"
    capacity_gb: float | None = None
    embodied_kg_override: float | None = None
    lifetime_years: float = 5.0

    def __post_init__(self) -> None:
        if self.role is HardwareRole.ACCELERATOR:
            if self.peak_tflops is None or self.peak_tflops <= 0:
                raise CatalogError(f"{self.name}: peak_tflops must be > 0 for accelerators")
        if self.lifetime_years <= 0:
            raise CatalogError(f"{self.name}: lifetime_years must be > 0")
        if self.cpa_basis not in (None, "area", "gb"):
            raise CatalogError(f"{self.name}: cpa_basis must be 'area' or 'gb'")
        if self.cpa_basis == "area" and (self.die_area_mm2 is None or self.cpa is None):
            raise CatalogError(f"{self.name}: area basis needs die_area_mm2 and cpa")
        if self.cpa_basis == "gb" and (self.capacity_gb is None or self.cpa is None):
            raise CatalogError(f"{self.name}: gb basis needs capacity_gb and cpa")
        if self.embodied_basis is None:
            raise CatalogError(
                f"{self.name}: no embodied pricing basis "
                "(need embodied_kg_override, area+cpa, or capacity+cpa)"
            )

    @property
    def embodied_basis(self) -> str | None:
        """Which pricing basis is active: 'override', 'area' or 'gb'."""
        if self.embodied_kg_override is not None:
            return "override"
        if self.cpa_basis == "area" or (
            self.cpa_basis is None and self.die_area_mm2 is not None and self.cpa is not None
        ):
            return "area"
        if self.cpa_basis == "gb" or (
            self.cpa_basis is None and self.capacity_gb is not None and self.cpa is not None
        ):
            return "gb"
        return None


@dataclass(frozen=True)
class FleetEntry:
    unit: HardwareUnit
    count: int

    def __post_init__(self) -> None:
        if self.count <= 0:
            raise CatalogError(f"{self.unit.name}: fleet count must be positive")


@dataclass(frozen=True)
class HardwareFleet:
    """The hardware pool a workload runs on.

    At most one accelerator entry is allowed; it drives the throughput model.
    """

    entries: tuple[FleetEntry, ...]

    def __post_init__(self) -> None:
        accels = [e for e in self.entries if e.unit.role is HardwareRole.ACCELERATOR]
        if len(accels) > 1:
            names = ", ".join(e.unit.name for e in accels)
            raise CatalogError(f"fleet has multiple accelerator entries: {names}")

    @property
    def accelerator(self) -> FleetEntry | None:
        for entry in self.entries:
            if entry.unit.role is HardwareRole.ACCELERATOR:
                return entry
        return None

    @staticmethod
    def of(*pairs: tuple[HardwareUnit, int]) -> "HardwareFleet":
        return HardwareFleet(tuple(FleetEntry(unit, count) for unit, count in pairs))


@dataclass(frozen=True)
class DataCenterProfile:
    """Energy efficiency and grid carbon profile of a data center.

    ``carbon_intensity`` is kgCO2eq per kWh (note: some published tables
    quote g/kWh; the catalog loader normalizes to kg). ``cfe`` is the
    carbon-free-energy fraction, informational only.
    """

    name: str
    pue: float
    carbon_intensity: float
    cfe: float = 0.0

    def __post_init__(self) -> None:
        if self.pue < 1.0:
            raise CatalogError(f"{self.name}: pue must be >= 1.0")
        if self.carbon_intensity < 0.0:
            raise CatalogError(f"{self.name}: carbon_intensity must be >= 0")
        if not (0.0 <= self.cfe <= 1.0):
            raise CatalogError(f"{self.name}: cfe must lie in [0, 1]")


@dataclass(frozen=True)
class ScalingConstants:
    """Fitted constants of the parametric loss law L = A/P^alpha + B/D^beta + E.

    Defaults are the published Chinchilla fit (Hoffmann et al., 2022).
    """

    A: float = 406.4
    B: float = 410.7
    alpha: float = 0.34
    beta: float = 0.28
    E: float = 1.69

    def __post_init__(self) -> None:
        for fname in ("A", "B", "alpha", "beta", "E"):
            if getattr(self, fname) <= 0:
                raise ModelError(f"scaling constant {fname} must be positive")


@dataclass(frozen=True)
class ParallelismPlan:
    """Degrees of pipeline/tensor/data/expert parallelism plus device count."""

    pipeline: int
    tensor: int
    data: int
    expert: int = 1
    is_moe: bool = False

    def __post_init__(self) -> None:
        for fname in ("pipeline", "tensor", "data", "expert"):
            if getattr(self, fname) < 1:
                raise ModelError(f"parallelism degree {fname} must be >= 1")

    @property
    def device_count(self) -> int:
        return self.tensor * self.pipeline * self.data


@dataclass(frozen=True)
class LineItem:
    """Per-hardware-unit slice of a report."""

    unit: str
    count: int
    energy_mwh: float = 0.0
    embodied_tco2: float = 0.0


@dataclass(frozen=True)
class CarbonReport:
    """Final projection for one phase (or a whole lifecycle).

    Invariants: total equals operational plus embodied exactly, and
    operational energy equals hardware energy times PUE.
    """

    phase: Phase
    duration_seconds: float
    hardware_energy_mwh: float
    operational_energy_mwh: float
    operational_tco2: float
    embodied_tco2: float
    total_tco2: float
    hardware_efficiency: float = 1.0
    test_loss: float | None = None
    parallelism: ParallelismPlan | None = None
    line_items: tuple[LineItem, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.total_tco2 != self.operational_tco2 + self.embodied_tco2:
            raise ModelError("total_tco2 must equal operational_tco2 + embodied_tco2")
        for fname in ("duration_seconds", "hardware_energy_mwh", "operational_energy_mwh",
                      "operational_tco2", "embodied_tco2"):
            if getattr(self, fname) < 0:
                raise ModelError(f"{fname} must be >= 0")
