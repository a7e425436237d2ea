import json

import numpy as np
import pytest
from scipy import stats

from pinchpower import (
    ConfigError,
    RadioConfig,
    ScenarioConfig,
    UserSpec,
    derive_channel_params,
    generate_users,
    load_config,
    sample_true_location,
)
from pinchpower.scenario import override_master_seed, stream_seed

# Frozen from a 50-digit evaluation of (c0/f)^2 / (16 pi^2) at 28 GHz and of
# 10^((-174 - 30)/10) * 100e6.
ETA_28GHZ = 7.2594817055401154e-07
NOISE_100MHZ_W = 3.9810717055349725e-13


class TestDeriveChannelParams:
    def test_frozen_constants_at_defaults(self):
        p = derive_channel_params(RadioConfig())
        assert p.eta == pytest.approx(ETA_28GHZ, rel=1e-12)
        assert p.noise_power == pytest.approx(NOISE_100MHZ_W, rel=1e-12)
        assert p.d == 3.0
        assert p.L == 50.0

    def test_doubling_frequency_quarters_eta(self):
        base = derive_channel_params(RadioConfig())
        doubled = derive_channel_params(RadioConfig(carrier_frequency=56e9))
        assert doubled.eta == pytest.approx(base.eta / 4.0, rel=1e-15)

    def test_noise_scales_linearly_with_bandwidth(self):
        one = derive_channel_params(RadioConfig(bandwidth=1.0))
        assert one.noise_power == pytest.approx(10.0 ** (-20.4), rel=1e-12)

    def test_pure_function(self):
        cfg = RadioConfig()
        assert derive_channel_params(cfg) == derive_channel_params(cfg)

    @pytest.mark.parametrize(
        "bad",
        [
            RadioConfig(carrier_frequency=0.0),
            RadioConfig(carrier_frequency=-1e9),
            RadioConfig(bandwidth=0.0),
            RadioConfig(waveguide_height=0.0),
            RadioConfig(waveguide_length=-5.0),
        ],
    )
    def test_invalid_config_rejected(self, bad):
        with pytest.raises(ConfigError):
            derive_channel_params(bad)


class TestGenerateUsers:
    def test_identical_seed_identical_population(self):
        cfg = ScenarioConfig(num_users=5)
        assert generate_users(cfg, 42) == generate_users(cfg, 42)

    def test_different_seed_different_population(self):
        cfg = ScenarioConfig(num_users=5)
        assert generate_users(cfg, 42) != generate_users(cfg, 43)

    def test_positions_inside_region(self):
        cfg = ScenarioConfig(num_users=1000)
        users = generate_users(cfg, 7)
        xs = np.array([u.x for u in users])
        ys = np.array([u.y for u in users])
        assert len(users) == 1000
        assert np.all((xs >= 0.0) & (xs <= 120.0))
        assert np.all((ys >= 0.0) & (ys <= 20.0))

    def test_defaults_applied_to_every_user(self):
        for u in generate_users(ScenarioConfig(num_users=5), 3):
            assert (u.r, u.target_rate, u.outage_cap) == (3.0, 3.0, 0.01)

    def test_invalid_scenarios_rejected(self):
        with pytest.raises(ConfigError):
            generate_users(ScenarioConfig(num_users=0), 1)
        with pytest.raises(ConfigError):
            generate_users(ScenarioConfig(region_length=-1.0), 1)
        with pytest.raises(ConfigError):
            generate_users(ScenarioConfig(outage_cap=0.6), 1)


class TestSampleTrueLocation:
    USER = UserSpec(x=30.0, y=10.0, r=3.0, target_rate=3.0, outage_cap=0.01)

    def test_zero_radius_returns_center_exactly(self):
        u = UserSpec(x=5.0, y=2.0, r=0.0, target_rate=3.0, outage_cap=0.01)
        assert sample_true_location(u, np.random.default_rng(0)) == (5.0, 2.0)

    def test_samples_stay_inside_disk(self):
        xs, ys = sample_true_location(self.USER, np.random.default_rng(1), size=100_000)
        assert np.all(np.hypot(xs - 30.0, ys - 10.0) <= 3.0)

    def test_empirical_mean_is_disk_center(self):
        xs, ys = sample_true_location(self.USER, np.random.default_rng(2), size=1_000_000)
        assert abs(xs.mean() - 30.0) < 0.01
        assert abs(ys.mean() - 10.0) < 0.01

    def test_quarter_mass_within_half_radius(self):
        n = 1_000_000
        xs, ys = sample_true_location(self.USER, np.random.default_rng(3), size=n)
        frac = np.mean(np.hypot(xs - 30.0, ys - 10.0) <= 1.5)
        sigma = np.sqrt(0.25 * 0.75 / n)
        assert abs(frac - 0.25) <= 3.0 * sigma

    def test_squared_distance_uniform_ks(self):
        n = 1_000_000
        xs, ys = sample_true_location(self.USER, np.random.default_rng(4), size=n)
        sq = ((xs - 30.0) ** 2 + (ys - 10.0) ** 2) / 9.0
        result = stats.kstest(sq, "uniform")
        assert result.pvalue > 0.01


class TestSeedStreams:
    def test_streams_are_reproducible(self):
        a = np.random.default_rng(stream_seed(42, 3, 0)).random(4)
        b = np.random.default_rng(stream_seed(42, 3, 0)).random(4)
        assert np.array_equal(a, b)

    def test_streams_differ_across_keys(self):
        draws = {
            key: np.random.default_rng(stream_seed(*key)).random()
            for key in [(42, 0, 0), (42, 0, 1), (42, 1, 0), (43, 0, 0)]
        }
        assert len(set(draws.values())) == len(draws)


class TestLoadConfig:
    def test_full_document(self, config_file):
        cfg = load_config(config_file())
        assert cfg.radio.carrier_frequency == 28e9
        assert cfg.scenario.num_users == 5
        assert cfg.scenario.master_seed == 42
        assert cfg.pso_overrides == {}

    def test_pso_overrides_collected(self, config_file):
        cfg = load_config(config_file(pso_swarm_size=10, pso_seed=9))
        assert cfg.pso_overrides == {"pso_swarm_size": 10, "pso_seed": 9}

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "nope.json")

    def test_unknown_key_rejected(self, config_file):
        with pytest.raises(ConfigError, match="unknown config key"):
            load_config(config_file(waveguide_hieght_m=3.0))

    def test_bad_json_rejected(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_invalid_values_rejected(self, config_file):
        with pytest.raises(ConfigError):
            load_config(config_file(outage_cap=0.9))
        with pytest.raises(ConfigError):
            load_config(config_file(carrier_frequency_hz=0))

    def test_master_seed_override(self, config_file):
        cfg = load_config(config_file())
        assert override_master_seed(cfg, None).scenario.master_seed == 42
        assert override_master_seed(cfg, 7).scenario.master_seed == 7

    def test_partial_document_uses_defaults(self, tmp_path):
        path = tmp_path / "partial.json"
        path.write_text(json.dumps({"num_users": 2, "master_seed": 1}))
        cfg = load_config(path)
        assert cfg.scenario.num_users == 2
        assert cfg.radio.carrier_frequency == 28e9
