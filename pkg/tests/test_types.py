"""Domain-type invariants and unit conversions."""

import pytest

from carboncast import units
from carboncast.types import (
    ArchKind,
    CarbonReport,
    CatalogError,
    DataCenterProfile,
    ExpertGroup,
    HardwareFleet,
    HardwareRole,
    HardwareUnit,
    LlmArchitecture,
    ModelError,
    Phase,
    validate_architecture,
)


def gpt3_arch():
    return LlmArchitecture(name="gpt3", kind=ArchKind.DENSE_GPT,
                           hidden_size=12288, layer_count=96, vocab_size=51200)


class TestValidateArchitecture:
    def test_gpt3_shape_is_valid(self):
        assert validate_architecture(gpt3_arch()) == []

    def test_moe_fraction_zero_is_flagged(self):
        arch = LlmArchitecture(
            name="bad", kind=ArchKind.MOE, hidden_size=1024, layer_count=24,
            moe_fraction=0.0, expert_groups=(ExpertGroup(1.0, 64),),
        )
        problems = validate_architecture(arch)
        assert len(problems) == 1
        assert "moe_fraction" in problems[0]

    def test_expert_fractions_must_sum_to_one(self):
        arch = LlmArchitecture(
            name="bad", kind=ArchKind.MOE, hidden_size=1024, layer_count=24,
            moe_fraction=0.5,
            expert_groups=(ExpertGroup(0.5, 64), ExpertGroup(0.3, 128)),
        )
        problems = validate_architecture(arch)
        assert len(problems) == 1
        assert "expert_groups" in problems[0]
        assert "sum" in problems[0]

    def test_nonpositive_counts_flagged_per_field(self):
        arch = LlmArchitecture(name="bad", kind=ArchKind.DENSE_GPT,
                               hidden_size=0, layer_count=-1, vocab_size=0)
        problems = validate_architecture(arch)
        assert {p.split(":")[0] for p in problems} == {
            "hidden_size", "layer_count", "vocab_size"}

    def test_explicit_count_waives_structural_fields(self):
        arch = LlmArchitecture(name="opaque", kind=ArchKind.DENSE_GPT,
                               explicit_param_count=175_000_000_000)
        assert validate_architecture(arch) == []

    def test_expert_fields_rejected_on_dense(self):
        arch = LlmArchitecture(name="bad", kind=ArchKind.DENSE_GPT,
                               hidden_size=8, layer_count=2, vocab_size=16,
                               moe_fraction=0.5)
        assert any("moe_fraction" in p for p in validate_architecture(arch))


class TestHardwareUnit:
    def test_accelerator_requires_peak(self):
        with pytest.raises(CatalogError, match="peak_tflops"):
            HardwareUnit(name="gpu", role=HardwareRole.ACCELERATOR,
                         die_area_mm2=815, cpa=1.2, cpa_basis="area")

    def test_some_pricing_basis_required(self):
        with pytest.raises(CatalogError, match="basis"):
            HardwareUnit(name="mystery", role=HardwareRole.OTHER)

    def test_override_wins_as_basis(self):
        u = HardwareUnit(name="ssd", role=HardwareRole.SSD,
                         capacity_gb=32768, cpa=0.4, cpa_basis="gb",
                         embodied_kg_override=576.0)
        assert u.embodied_basis == "override"

    def test_lifetime_must_be_positive(self):
        with pytest.raises(CatalogError, match="lifetime"):
            HardwareUnit(name="x", role=HardwareRole.OTHER,
                         embodied_kg_override=1.0, lifetime_years=0.0)


class TestFleet:
    def test_single_accelerator_only(self):
        v100 = HardwareUnit(name="V100", role=HardwareRole.ACCELERATOR,
                            peak_tflops=125, die_area_mm2=815, cpa=1.2, cpa_basis="area")
        a100 = HardwareUnit(name="A100", role=HardwareRole.ACCELERATOR,
                            peak_tflops=312, die_area_mm2=826, cpa=1.6, cpa_basis="area")
        with pytest.raises(CatalogError, match="multiple accelerator"):
            HardwareFleet.of((v100, 8), (a100, 8))

    def test_counts_positive(self):
        v100 = HardwareUnit(name="V100", role=HardwareRole.ACCELERATOR,
                            peak_tflops=125, die_area_mm2=815, cpa=1.2, cpa_basis="area")
        with pytest.raises(CatalogError, match="count"):
            HardwareFleet.of((v100, 0))


class TestDataCenter:
    def test_pue_below_one_rejected(self):
        with pytest.raises(CatalogError, match="pue"):
            DataCenterProfile(name="dc", pue=0.9, carbon_intensity=0.4)

    def test_negative_intensity_rejected(self):
        with pytest.raises(CatalogError, match="carbon_intensity"):
            DataCenterProfile(name="dc", pue=1.1, carbon_intensity=-0.1)


class TestCarbonReport:
    def test_total_must_be_additive(self):
        with pytest.raises(ModelError, match="total_tco2"):
            CarbonReport(phase=Phase.TRAINING, duration_seconds=1.0,
                         hardware_energy_mwh=1.0, operational_energy_mwh=1.1,
                         operational_tco2=2.0, embodied_tco2=1.0, total_tco2=2.5)


class TestUnits:
    def test_watt_seconds_to_mwh_and_back_is_identity(self):
        for watts, seconds in [(330.0, 1_278_720.0), (1.0, 1.0), (2.5e6, 9.87e5)]:
            mwh = units.watt_seconds_to_mwh(watts, seconds)
            joules = units.mwh_to_joules(mwh)
            assert abs(joules - watts * seconds) <= 1e-12 * watts * seconds

    def test_day_and_year_arithmetic(self):
        assert units.days_to_seconds(1) == 86_400
        assert units.seconds_to_days(units.days_to_seconds(20.4)) == pytest.approx(20.4)
        assert units.years_to_seconds(5) == pytest.approx(5 * 365.25 * 86_400)
