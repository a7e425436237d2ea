"""Deployment parameters, derived channel constants, and seeded user populations.

The service region is a rectangle in the ground plane with the waveguide along
y = 0; the waveguide itself spans x in [0, L] at height d.  Users are drawn
uniformly in the rectangle, each with a circular uncertainty disk around the
estimated position.  All randomness is funnelled through explicit seeds so
serial and parallel runs produce identical populations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s


class ConfigError(ValueError):
    """Invalid or unusable configuration input."""


@dataclass(frozen=True)
class RadioConfig:
    """Radio-level inputs of one deployment."""

    carrier_frequency: float = 28e9  # Hz
    bandwidth: float = 100e6  # Hz
    noise_psd_dbm_hz: float = -174.0  # dBm/Hz
    waveguide_height: float = 3.0  # d, m above the ground plane
    waveguide_length: float = 50.0  # L, m along the x-axis


@dataclass(frozen=True)
class ChannelParams:
    """Physical constants every allocation step consumes."""

    eta: float  # free-space gain constant lambda^2 / (16 pi^2), m^2
    noise_power: float  # sigma^2, W over the full bandwidth
    d: float  # waveguide height, m
    L: float  # waveguide length, m


@dataclass(frozen=True)
class UserSpec:
    """One user: estimated planar position plus robustness requirements."""

    x: float  # m, estimated coordinate along the waveguide axis
    y: float  # m, estimated offset from the waveguide
    r: float  # m, radius of the uncertainty disk (0 = perfect knowledge)
    target_rate: float  # bps/Hz
    outage_cap: float  # max tolerated outage probability, in (0, 0.5]


@dataclass(frozen=True)
class ScenarioConfig:
    """Population geometry and per-user defaults."""

    num_users: int = 5
    region_length: float = 120.0  # m
    region_width: float = 20.0  # m
    uncertainty_radius: float = 3.0  # m, default r for every user
    target_rate: float = 3.0  # bps/Hz, default per user
    outage_cap: float = 0.01  # default per user
    master_seed: int = 0


@dataclass(frozen=True)
class SystemConfig:
    """Full run configuration: radio plus scenario plus optional overrides."""

    radio: RadioConfig = field(default_factory=RadioConfig)
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    pso_overrides: dict = field(default_factory=dict)


def derive_channel_params(cfg: RadioConfig) -> ChannelParams:
    """Turn radio-level inputs into the constants used by the allocator.

    eta = (c0/f)^2 / (16 pi^2); noise power is the PSD integrated over the
    bandwidth, converted with 10^((dBm - 30)/10) W per dBm.
    """
    if cfg.carrier_frequency <= 0 or cfg.bandwidth <= 0:
        raise ConfigError("carrier frequency and bandwidth must be positive")
    if cfg.waveguide_height <= 0 or cfg.waveguide_length <= 0:
        raise ConfigError("waveguide height and length must be positive")
    wavelength = SPEED_OF_LIGHT / cfg.carrier_frequency
    eta = wavelength * wavelength / (16.0 * np.pi**2)
    noise_power = 10.0 ** ((cfg.noise_psd_dbm_hz - 30.0) / 10.0) * cfg.bandwidth
    return ChannelParams(
        eta=float(eta),
        noise_power=float(noise_power),
        d=cfg.waveguide_height,
        L=cfg.waveguide_length,
    )


def stream_seed(master_seed: int, realization: int, stream: int = 0) -> np.random.SeedSequence:
    """Deterministic child stream keyed by (realization, stream).

    Stream 0 feeds user generation, stream 1 the position optimizer; any run,
    serial or parallel, that asks for the same key gets the same stream.
    """
    return np.random.SeedSequence(master_seed, spawn_key=(realization, stream))


def generate_users(cfg: ScenarioConfig, seed) -> list[UserSpec]:
    """Draw the user population for one realization.

    x ~ U[0, region_length] then y ~ U[0, region_width], each as one array
    draw, so the output is reproducible for a given seed regardless of how
    the caller parallelises.
    """
    _validate_scenario(cfg)
    rng = np.random.default_rng(seed)
    xs = rng.uniform(0.0, cfg.region_length, size=cfg.num_users)
    ys = rng.uniform(0.0, cfg.region_width, size=cfg.num_users)
    return [
        UserSpec(
            x=float(x),
            y=float(y),
            r=cfg.uncertainty_radius,
            target_rate=cfg.target_rate,
            outage_cap=cfg.outage_cap,
        )
        for x, y in zip(xs, ys)
    ]


def sample_true_location(user: UserSpec, rng: np.random.Generator, size: int | None = None):
    """Sample true positions uniformly from the user's uncertainty disk.

    Polar method: radius = r * sqrt(u), angle = 2 pi v, with u drawn before v
    (two separate array draws).  With size=None returns one (x, y) tuple of
    floats; with an integer size returns two arrays.
    """
    if user.r < 0:
        raise ConfigError("uncertainty radius must be >= 0")
    n = 1 if size is None else size
    u = rng.random(n)
    v = rng.random(n)
    rad = user.r * np.sqrt(u)
    ang = 2.0 * np.pi * v
    xs = user.x + rad * np.cos(ang)
    ys = user.y + rad * np.sin(ang)
    if size is None:
        return float(xs[0]), float(ys[0])
    return xs, ys


def _validate_scenario(cfg: ScenarioConfig) -> None:
    if cfg.num_users < 1:
        raise ConfigError("num_users must be >= 1")
    if cfg.region_length <= 0 or cfg.region_width <= 0:
        raise ConfigError("region dimensions must be positive")
    if cfg.uncertainty_radius < 0:
        raise ConfigError("uncertainty_radius must be >= 0")
    if cfg.target_rate < 0:
        raise ConfigError("target_rate must be >= 0")
    if not (0.0 < cfg.outage_cap <= 0.5):
        raise ConfigError("outage_cap must lie in (0, 0.5]")


_CONFIG_KEYS = {
    "carrier_frequency_hz": ("radio", "carrier_frequency"),
    "bandwidth_hz": ("radio", "bandwidth"),
    "noise_psd_dbm_hz": ("radio", "noise_psd_dbm_hz"),
    "waveguide_height_m": ("radio", "waveguide_height"),
    "waveguide_length_m": ("radio", "waveguide_length"),
    "num_users": ("scenario", "num_users"),
    "region_length_m": ("scenario", "region_length"),
    "region_width_m": ("scenario", "region_width"),
    "uncertainty_radius_m": ("scenario", "uncertainty_radius"),
    "target_rate_bpshz": ("scenario", "target_rate"),
    "outage_cap": ("scenario", "outage_cap"),
    "master_seed": ("scenario", "master_seed"),
}

_PSO_KEYS = {
    "pso_swarm_size",
    "pso_max_iters",
    "pso_inertia",
    "pso_cognitive",
    "pso_social",
    "pso_seed",
}


def load_config(path: str | Path) -> SystemConfig:
    """Load a JSON scenario document.

    Recognised keys: the flat radio/scenario keys in _CONFIG_KEYS plus the
    optional pso_* overrides.  Unknown keys are rejected so typos fail loudly.
    """
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {p} is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ConfigError(f"config file {p} must contain a JSON object")
    return config_from_dict(doc)


def config_from_dict(doc: dict) -> SystemConfig:
    """Build a SystemConfig from a flat key/value mapping (see load_config)."""
    radio_kw: dict = {}
    scen_kw: dict = {}
    pso: dict = {}
    for key, value in doc.items():
        if key in _CONFIG_KEYS:
            section, name = _CONFIG_KEYS[key]
            target = radio_kw if section == "radio" else scen_kw
            target[name] = value
        elif key in _PSO_KEYS:
            pso[key] = value
        else:
            raise ConfigError(f"unknown config key: {key!r}")
    if "num_users" in scen_kw:
        scen_kw["num_users"] = int(scen_kw["num_users"])
    if "master_seed" in scen_kw:
        scen_kw["master_seed"] = int(scen_kw["master_seed"])
    cfg = SystemConfig(
        radio=RadioConfig(**radio_kw),
        scenario=ScenarioConfig(**scen_kw),
        pso_overrides=pso,
    )
    derive_channel_params(cfg.radio)  # fail fast on bad radio numbers
    _validate_scenario(cfg.scenario)
    return cfg


def override_master_seed(cfg: SystemConfig, seed: int | None) -> SystemConfig:
    """Return cfg with the master seed replaced (no-op when seed is None)."""
    if seed is None:
        return cfg
    return replace(cfg, scenario=replace(cfg.scenario, master_seed=int(seed)))
