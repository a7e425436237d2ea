"""Antenna-position selection along the waveguide.

Three ways to pick the shared position x_pin in [0, L]: a global-best
particle swarm over the scalar position, an exhaustive 1-D grid search that
serves as the optimality certificate, and the conventional fixed antenna at
x = 0.  All of them minimise the same objective, the total transmit power
from the per-user allocation.

The swarm compares fitness values only through order, and ties in the early
stop are judged against a zero-improvement threshold by default, so scaling
every user's rate target rescales the objective without changing the search
trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .allocator import DEFAULT_TOL, Allocation, sum_min_power, user_power_batch
from .scenario import ChannelParams, UserSpec

GRID_ROUND_DECIMALS = 12  # grid points snapped to this many decimals so
#                           decimally nested steps share exact positions


@dataclass(frozen=True)
class PsoConfig:
    """Swarm hyperparameters (constriction-style defaults)."""

    swarm_size: int = 30
    max_iterations: int = 100
    inertia: float = 0.7298
    cognitive: float = 1.49618
    social: float = 1.49618
    velocity_clamp: float | None = None  # m; None = half the waveguide length
    stall_iterations: int = 20
    stall_tolerance: float = 0.0  # W; improvement <= this counts as stalled
    seed: int = 0


@dataclass(frozen=True)
class OptimizationResult:
    """Chosen position plus the allocation it induces."""

    x_pin: float
    allocation: Allocation
    evaluations: int  # objective evaluations performed
    converged_iteration: int  # iteration of the last best improvement (0 for single-pass schemes)
    best_history: np.ndarray = field(default_factory=lambda: np.empty(0))  # best total per iteration, W


def objective(
    users: list[UserSpec],
    x_pin: float,
    params: ChannelParams,
    tol: float = DEFAULT_TOL,
) -> float:
    """Total transmit power at one antenna position (the fitness function)."""
    if not 0.0 <= x_pin <= params.L:
        raise ValueError(f"x_pin={x_pin} outside the waveguide [0, {params.L}]")
    return sum_min_power(users, x_pin, params, tol).total_power


def objective_batch(
    users: list[UserSpec],
    x_pins: np.ndarray,
    params: ChannelParams,
    tol: float = DEFAULT_TOL,
) -> np.ndarray:
    """Totals for many positions in one vectorised pass.

    Accumulates user rows in list order so each column equals the scalar
    objective at that position exactly.
    """
    x = np.asarray(x_pins, dtype=np.float64)
    if np.any(x < 0.0) or np.any(x > params.L):
        raise ValueError("candidate positions must lie within the waveguide")
    powers = user_power_batch(users, x, params, tol)
    totals = np.zeros(x.size, dtype=np.float64)
    for k in range(powers.shape[0]):
        totals = totals + powers[k, :]
    return totals


def pso_optimize(
    users: list[UserSpec],
    params: ChannelParams,
    cfg: PsoConfig = PsoConfig(),
    tol: float = DEFAULT_TOL,
) -> OptimizationResult:
    """Global-best PSO over the scalar antenna position.

    Positions are clamped to [0, L] with the velocity zeroed on clamp; the
    whole swarm is evaluated as one batch per iteration.  Stops early after
    cfg.stall_iterations consecutive iterations whose best improvement does
    not exceed cfg.stall_tolerance.  Fully deterministic for a given seed.
    """
    if cfg.swarm_size < 2:
        raise ValueError("swarm_size must be >= 2")
    if cfg.max_iterations < 1:
        raise ValueError("max_iterations must be >= 1")
    if min(cfg.inertia, cfg.cognitive, cfg.social) <= 0:
        raise ValueError("PSO coefficients must be positive")

    L = params.L
    v_max = 0.5 * L if cfg.velocity_clamp is None else cfg.velocity_clamp
    rng = np.random.default_rng(cfg.seed)

    x = rng.uniform(0.0, L, size=cfg.swarm_size)
    v = np.zeros(cfg.swarm_size)
    fit = objective_batch(users, x, params, tol)
    evaluations = cfg.swarm_size

    pbest_x = x.copy()
    pbest_f = fit.copy()
    g = int(np.argmin(pbest_f))
    gbest_x = float(pbest_x[g])
    gbest_f = float(pbest_f[g])

    history = [gbest_f]
    converged_iteration = 0
    stall = 0
    for it in range(1, cfg.max_iterations + 1):
        r1 = rng.random(cfg.swarm_size)
        r2 = rng.random(cfg.swarm_size)
        v = cfg.inertia * v + cfg.cognitive * r1 * (pbest_x - x) + cfg.social * r2 * (gbest_x - x)
        v = np.clip(v, -v_max, v_max)
        x = x + v
        clamped = (x < 0.0) | (x > L)
        x = np.clip(x, 0.0, L)
        v[clamped] = 0.0

        fit = objective_batch(users, x, params, tol)
        evaluations += cfg.swarm_size
        better = fit < pbest_f
        pbest_x[better] = x[better]
        pbest_f[better] = fit[better]
        g = int(np.argmin(pbest_f))
        improvement = gbest_f - float(pbest_f[g])
        if improvement > 0.0:
            gbest_x = float(pbest_x[g])
            gbest_f = float(pbest_f[g])
        history.append(gbest_f)

        if improvement > cfg.stall_tolerance:
            converged_iteration = it
            stall = 0
        else:
            stall += 1
            if stall >= cfg.stall_iterations:
                break

    return OptimizationResult(
        x_pin=gbest_x,
        allocation=sum_min_power(users, gbest_x, params, tol),
        evaluations=evaluations,
        converged_iteration=converged_iteration,
        best_history=np.asarray(history),
    )


def grid_points(L: float, step: float) -> np.ndarray:
    """The search grid {0, step, 2 step, ...} with L always included.

    Points are rounded to GRID_ROUND_DECIMALS so refining a decimal step
    (0.1 -> 0.01) yields a superset of the coarser grid, floats included.
    """
    if not 0.0 < step <= L:
        raise ValueError("step must satisfy 0 < step <= L")
    count = int(np.floor(L / step + 1e-9))
    pts = np.round(np.arange(count + 1) * step, GRID_ROUND_DECIMALS)
    pts = pts[pts <= L]
    if pts[-1] < L:
        pts = np.append(pts, L)
    return pts


def grid_search(
    users: list[UserSpec],
    params: ChannelParams,
    step: float,
    tol: float = DEFAULT_TOL,
) -> OptimizationResult:
    """Exhaustive 1-D search; ties break on the smallest position."""
    pts = grid_points(params.L, step)
    totals = objective_batch(users, pts, params, tol)
    best = int(np.argmin(totals))  # argmin returns the first minimum
    x_pin = float(pts[best])
    return OptimizationResult(
        x_pin=x_pin,
        allocation=sum_min_power(users, x_pin, params, tol),
        evaluations=pts.size,
        converged_iteration=0,
        best_history=np.asarray([float(totals[best])]),
    )


def fixed_baseline(
    users: list[UserSpec],
    params: ChannelParams,
    tol: float = DEFAULT_TOL,
) -> OptimizationResult:
    """Conventional fixed antenna at x = 0: evaluate, no optimisation."""
    allocation = sum_min_power(users, 0.0, params, tol)
    return OptimizationResult(
        x_pin=0.0,
        allocation=allocation,
        evaluations=1,
        converged_iteration=0,
        best_history=np.asarray([allocation.total_power]),
    )
