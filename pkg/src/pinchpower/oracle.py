"""Monte Carlo ground truth for areas and outage probabilities.

These estimators never feed the solver; they exist so the closed-form
geometry and the end-to-end power allocation can be checked against sampled
truth.  Sampling is chunked with a fixed chunk size and per-chunk seeds
(chunk j uses SeedSequence(seed, spawn_key=(j,))), and chunk results are
integer counts, so the estimate is identical no matter how the chunks are
scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import CoverageProblem
from .scenario import ChannelParams, UserSpec, sample_true_location

CHUNK = 1_000_000  # samples per RNG chunk; part of the determinism contract


@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo estimate with its binomial standard error."""

    value: float
    std_error: float
    sample_count: int


def _chunk_sizes(n: int):
    full, rem = divmod(n, CHUNK)
    sizes = [CHUNK] * full
    if rem:
        sizes.append(rem)
    return sizes


def mc_outage_area(p: CoverageProblem, n: int, seed: int) -> McEstimate:
    """Estimate the outage area by sampling the user disk uniformly.

    Counts the fraction of samples farther than c from the coverage centre
    (placed at distance b along the x-axis; the setup is rotation invariant)
    and scales by the disk area.
    """
    if n < 1:
        raise ValueError("sample count must be >= 1")
    hits = 0
    c_sq = p.c * p.c
    for j, size in enumerate(_chunk_sizes(n)):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(j,)))
        u = rng.random(size)
        v = rng.random(size)
        rad = p.r * np.sqrt(u)
        ang = 2.0 * np.pi * v
        dx = rad * np.cos(ang) - p.b
        dy = rad * np.sin(ang)
        hits += int(np.count_nonzero(dx * dx + dy * dy > c_sq))
    frac = hits / n
    disk_area = np.pi * p.r * p.r
    std_err = float(np.sqrt(frac * (1.0 - frac) / n) * disk_area)
    return McEstimate(value=float(frac * disk_area), std_error=std_err, sample_count=n)


def empirical_outage(
    user: UserSpec,
    x_pin: float,
    power: float,
    params: ChannelParams,
    n: int,
    seed: int,
) -> McEstimate:
    """Estimate the outage probability at a given transmit power.

    Samples true positions from the uncertainty disk, computes the free-space
    rate log2(1 + eta * P / (dist^2 * sigma^2)) with dist the 3-D distance to
    the antenna at (x_pin, 0, d), and counts rates below the target.
    """
    if n < 1:
        raise ValueError("sample count must be >= 1")
    if power < 0:
        raise ValueError("power must be >= 0")
    hits = 0
    d_sq = params.d * params.d
    for j, size in enumerate(_chunk_sizes(n)):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(j,)))
        xs, ys = sample_true_location(user, rng, size=size)
        dist_sq = (xs - x_pin) ** 2 + ys**2 + d_sq
        rate = np.log2(1.0 + params.eta * power / (dist_sq * params.noise_power))
        hits += int(np.count_nonzero(rate < user.target_rate))
    frac = hits / n
    std_err = float(np.sqrt(frac * (1.0 - frac) / n))
    return McEstimate(value=float(frac), std_error=std_err, sample_count=n)
