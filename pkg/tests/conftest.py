import json

import pytest

from pinchpower import RadioConfig, ScenarioConfig, derive_channel_params

# Default deployment used across the suite: 28 GHz, 100 MHz, -174 dBm/Hz,
# 50 m waveguide at 3 m height, five users in a 120 x 20 m region.
DEFAULT_CONFIG_DOC = {
    "carrier_frequency_hz": 28e9,
    "bandwidth_hz": 100e6,
    "noise_psd_dbm_hz": -174.0,
    "waveguide_height_m": 3.0,
    "waveguide_length_m": 50.0,
    "num_users": 5,
    "region_length_m": 120.0,
    "region_width_m": 20.0,
    "uncertainty_radius_m": 3.0,
    "target_rate_bpshz": 3.0,
    "outage_cap": 0.01,
    "master_seed": 42,
}


@pytest.fixture(scope="session")
def params():
    return derive_channel_params(RadioConfig())


@pytest.fixture(scope="session")
def default_scenario():
    return ScenarioConfig(master_seed=42)


@pytest.fixture()
def config_file(tmp_path):
    def _write(doc=None, **overrides):
        payload = dict(DEFAULT_CONFIG_DOC if doc is None else doc)
        payload.update(overrides)
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps(payload))
        return path

    return _write
