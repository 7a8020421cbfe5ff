"""Operational model: execution time, fleet energy, carbon, storage."""

import random

import pytest

from carboncast import units
from carboncast.operational import (
    StorageWorkload,
    device_time,
    hardware_energy,
    inference_latency,
    operational_carbon,
    storage_energy,
)
from carboncast.types import (
    DataCenterProfile,
    HardwareFleet,
    HardwareRole,
    HardwareUnit,
    ModelError,
)


def v100(avg_watts=None):
    return HardwareUnit(name="V100", role=HardwareRole.ACCELERATOR,
                        peak_tflops=125, tdp_watts=300,
                        avg_system_power_watts=avg_watts,
                        die_area_mm2=815, cpa=1.2, cpa_basis="area")


class TestDeviceTime:
    def test_gpt3_published_training_days(self):
        seconds = device_time(314e21, 10000, 125, 0.197)
        assert units.seconds_to_days(seconds) == pytest.approx(14.8, rel=0.02)

    def test_t5_published_training_days(self):
        seconds = device_time(40.5e21, 512, 123, 0.37)
        assert units.seconds_to_days(seconds) == pytest.approx(20.0, rel=0.03)

    def test_unit_case(self):
        assert device_time(125e12, 1, 125, 1.0) == pytest.approx(1.0)

    def test_round_trip_identity(self):
        rng = random.Random(37)
        for _ in range(50):
            flops = 10 ** rng.uniform(15, 24)
            n = rng.randrange(1, 20000)
            peak = rng.uniform(50, 2000)
            eff = rng.uniform(0.01, 1.0)
            t = device_time(flops, n, peak, eff)
            assert t * n * peak * 1e12 * eff == pytest.approx(flops, rel=1e-12)

    def test_zero_throughput_rejected(self):
        with pytest.raises(ModelError, match="throughput"):
            device_time(1e21, 0, 125, 0.2)


class TestHardwareEnergy:
    def test_gpt3_fleet_energy(self):
        fleet = HardwareFleet.of((v100(avg_watts=330), 10000))
        mwh, items = hardware_energy(fleet, units.days_to_seconds(14.8), 0.197)
        assert mwh == pytest.approx(1172.2, rel=1e-3)
        assert items[0].unit == "V100"

    def test_measured_power_ignores_efficiency(self):
        fleet = HardwareFleet.of((v100(avg_watts=330), 100))
        lo, _ = hardware_energy(fleet, 1000.0, 0.1)
        hi, _ = hardware_energy(fleet, 1000.0, 0.9)
        assert lo == hi

    def test_tdp_path_derated_by_efficiency(self):
        fleet = HardwareFleet.of((v100(), 100))
        half, _ = hardware_energy(fleet, 1000.0, 0.5)
        full, _ = hardware_energy(fleet, 1000.0, 1.0)
        assert half == pytest.approx(0.5 * full)

    def test_zero_time_zero_energy(self):
        fleet = HardwareFleet.of((v100(avg_watts=330), 100))
        mwh, _ = hardware_energy(fleet, 0.0, 0.2)
        assert mwh == 0.0

    def test_linearity_in_count(self):
        one = HardwareFleet.of((v100(avg_watts=330), 2000))
        cpu = HardwareUnit(name="CPU", role=HardwareRole.CPU, tdp_watts=200,
                           die_area_mm2=147, cpa=1.0, cpa_basis="area")
        split = HardwareFleet(
            (one.entries[0],
             *HardwareFleet.of((cpu, 64), ).entries)
        )
        merged, _ = hardware_energy(split, 500.0, 0.3)
        base, _ = hardware_energy(HardwareFleet.of((v100(avg_watts=330), 1000)), 500.0, 0.3)
        cpu_only, _ = hardware_energy(HardwareFleet.of((cpu, 64)), 500.0, 0.3)
        assert merged == pytest.approx(2 * base + cpu_only, rel=1e-12)

    def test_powerless_entry_rejected(self):
        ghost = HardwareUnit(name="ghost", role=HardwareRole.OTHER,
                             embodied_kg_override=1.0)
        with pytest.raises(ModelError, match="ghost"):
            hardware_energy(HardwareFleet.of((ghost, 1)), 100.0, 0.5)


class TestOperationalCarbon:
    def test_gpt3_published_footprint(self):
        dc = DataCenterProfile(name="dc", pue=1.1, carbon_intensity=0.429)
        result = operational_carbon(1172.2, dc)
        assert result.operational_energy_mwh == pytest.approx(1172.2 * 1.1)
        assert result.operational_tco2 == pytest.approx(553.87, rel=0.01)

    def test_carbon_free_grid(self):
        dc = DataCenterProfile(name="green", pue=1.5, carbon_intensity=0.0)
        assert operational_carbon(9999.0, dc).operational_tco2 == 0.0

    def test_monotone_in_pue_and_intensity(self):
        rng = random.Random(41)
        for _ in range(50):
            e = rng.uniform(1, 1e4)
            pue_a, pue_b = sorted([rng.uniform(1.0, 2.0), rng.uniform(1.0, 2.0)])
            ci_a, ci_b = sorted([rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)])
            low = operational_carbon(e, DataCenterProfile("a", pue_a, ci_a)).operational_tco2
            high = operational_carbon(e, DataCenterProfile("b", pue_b, ci_b)).operational_tco2
            assert low <= high


class TestInferenceLatency:
    def test_published_batch_latency(self):
        latency = inference_latency(175e9, 32 * 128, 16, 312, 0.0926)
        assert latency == pytest.approx(3.10, abs=0.05)

    def test_prediction_close_to_measured(self):
        latency = inference_latency(175e9, 32 * 128, 16, 312, 0.0926)
        assert (latency - 3.0) / 3.0 <= 0.035

    def test_single_token_single_device(self):
        assert inference_latency(1e12, 1, 1, 1, 1.0) == pytest.approx(2e12 / 1e12)


class TestStorageEnergy:
    def test_published_storage_phase(self):
        # Six-month storage phase: 32.7 TB held, 277.4 TB transferred.
        w = StorageWorkload(stored_tb=32.7, transferred_tb=277.4, duration_days=180)
        got = storage_energy(w)
        assert got.storage_mwh == pytest.approx(1.596, rel=0.005)
        assert got.transfer_mwh == pytest.approx(1.77, rel=0.005)

    def test_zero_data(self):
        w = StorageWorkload(stored_tb=0, transferred_tb=0, duration_days=365)
        got = storage_energy(w)
        assert got.total_mwh == 0.0

    def test_negative_fields_rejected(self):
        with pytest.raises(ModelError):
            StorageWorkload(stored_tb=-1, transferred_tb=0, duration_days=1)
