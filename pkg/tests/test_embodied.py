"""Embodied carbon: per-chip pricing and fleet attribution."""

import random

import pytest

from carboncast import units
from carboncast.embodied import chip_embodied, fleet_embodied
from carboncast.types import HardwareFleet, HardwareRole, HardwareUnit, ModelError
from carboncast.validation import XLM_EMBODIED_FLEET, XLM_TRAINING_DAYS


class TestChipEmbodied:
    def test_v100_die_pricing(self):
        v100 = HardwareUnit(name="V100", role=HardwareRole.ACCELERATOR,
                            peak_tflops=125, die_area_mm2=815, cpa=1.2,
                            cpa_basis="area")
        assert chip_embodied(v100) == pytest.approx(9.78)

    def test_cpu_die_pricing(self):
        cpu = HardwareUnit(name="CPU", role=HardwareRole.CPU,
                           die_area_mm2=147, cpa=1.0, cpa_basis="area")
        assert chip_embodied(cpu) == pytest.approx(1.47)

    def test_capacity_pricing(self):
        dram = HardwareUnit(name="DRAM", role=HardwareRole.DRAM,
                            capacity_gb=256, cpa=0.024, cpa_basis="gb")
        assert chip_embodied(dram) == pytest.approx(6.144)

    def test_zero_area_zero_carbon(self):
        chip = HardwareUnit(name="thin", role=HardwareRole.OTHER,
                            die_area_mm2=0.0, cpa=1.2, cpa_basis="area")
        assert chip_embodied(chip) == 0.0

    def test_override_bypasses_pricing(self):
        ssd = HardwareUnit(name="SSD", role=HardwareRole.SSD,
                           capacity_gb=32768, cpa=0.4, cpa_basis="gb",
                           embodied_kg_override=576.0)
        assert chip_embodied(ssd) == 576.0


class TestFleetEmbodied:
    def test_published_xlm_cluster(self):
        result = fleet_embodied(XLM_EMBODIED_FLEET,
                                units.days_to_seconds(XLM_TRAINING_DAYS))
        by_unit = {i.unit: i.attributed_tco2 for i in result.per_unit}
        assert result.total_tco2 == pytest.approx(0.64, abs=0.01)
        assert by_unit["GPU"] == pytest.approx(0.056, abs=0.002)
        assert by_unit["SSD"] == pytest.approx(0.412, abs=0.005)
        assert by_unit["DRAM"] == pytest.approx(0.073, abs=0.002)

    def test_others_share_is_exact(self):
        result = fleet_embodied(XLM_EMBODIED_FLEET,
                                units.days_to_seconds(XLM_TRAINING_DAYS))
        assert result.others_tco2 / result.total_tco2 == pytest.approx(0.15, abs=1e-12)

    def test_lifetime_share_uses_exact_day_arithmetic(self):
        # 20.4 days of a 5-year (1826.25-day) lifetime is 1.117%.
        result = fleet_embodied(XLM_EMBODIED_FLEET,
                                units.days_to_seconds(XLM_TRAINING_DAYS))
        gpu = next(i for i in result.per_unit if i.unit == "GPU")
        share = gpu.attributed_tco2 * 1000.0 / (512 * 9.78)
        assert share == pytest.approx(20.4 / 1826.25, rel=1e-12)

    def test_zero_time_all_zero(self):
        result = fleet_embodied(XLM_EMBODIED_FLEET, 0.0)
        assert result.total_tco2 == 0.0
        assert result.others_tco2 == 0.0
        assert all(i.attributed_tco2 == 0.0 for i in result.per_unit)

    def test_linearity_in_time(self):
        rng = random.Random(43)
        for _ in range(20):
            t = rng.uniform(1, 1e8)
            once = fleet_embodied(XLM_EMBODIED_FLEET, t)
            twice = fleet_embodied(XLM_EMBODIED_FLEET, 2 * t)
            assert twice.total_tco2 == pytest.approx(2 * once.total_tco2, rel=1e-12)
            for a, b in zip(once.per_unit, twice.per_unit):
                assert b.attributed_tco2 == pytest.approx(2 * a.attributed_tco2, rel=1e-12)

    def test_utilization_divisor_is_off_by_default(self):
        plain = fleet_embodied(XLM_EMBODIED_FLEET, 1e6)
        derated = fleet_embodied(XLM_EMBODIED_FLEET, 1e6, utilization=0.6)
        assert derated.total_tco2 == pytest.approx(plain.total_tco2 / 0.6)

    def test_others_fraction_bounds(self):
        with pytest.raises(ModelError, match="others_fraction"):
            fleet_embodied(XLM_EMBODIED_FLEET, 1.0, others_fraction=1.0)

    def test_zero_lifetime_rejected(self):
        # The unit type itself refuses nonpositive lifetimes.
        from carboncast.types import CatalogError
        with pytest.raises(CatalogError, match="lifetime"):
            HardwareFleet.of((HardwareUnit(name="x", role=HardwareRole.OTHER,
                                           embodied_kg_override=1.0,
                                           lifetime_years=0.0), 1))
