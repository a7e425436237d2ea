"""Per-user robust power allocation.

For one user and a fixed antenna position the chain is: ground distance b,
coverage radius c that pins the outage fraction at the cap, 3-D reach
R = sqrt(c^2 + d^2), and the closed-form transmit power that delivers the
target rate at distance R.  The multi-user total is the plain sum because the
time-shared users decouple.

The bisection runs elementwise on arrays so that position sweeps evaluate one
vector pass per iteration.  The scalar entry points wrap the same code, which
keeps scalar and batched results bit-identical.  Per element the bracket
update depends only on that element's own history, and the branch test is a
float comparison of the outage fraction against the cap, so the returned
radius is exactly nonincreasing in the cap and the achieved fraction never
exceeds it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import _outage_area_core, _validate_problem, outage_fraction_arrays, sphere_radius
from .scenario import ChannelParams, UserSpec

DEFAULT_TOL = 1e-6  # m, bisection bracket width at which iteration stops


@dataclass(frozen=True)
class UserSolution:
    """Solved allocation for one user at a fixed antenna position."""

    b: float  # m, ground distance antenna -> disk centre
    c: float  # m, coverage radius meeting the outage cap
    R: float  # m, 3-D reach sqrt(c^2 + d^2)
    power: float  # W
    achieved_outage_fraction: float


@dataclass(frozen=True)
class Allocation:
    """Antenna position plus the per-user powers it induces."""

    x_pin: float  # m
    per_user: list[UserSolution]
    total_power: float  # W


def center_distance(user: UserSpec, x_pin: float) -> float:
    """Ground-plane distance between the antenna foot (x_pin, 0) and the
    user's estimated position."""
    return float(np.hypot(x_pin - user.x, user.y))


def solve_coverage_radius(b, r, outage_cap, tol: float = DEFAULT_TOL):
    """Smallest coverage radius whose outage fraction stays within the cap.

    Bisects the outage fraction, which decreases strictly in c, over the
    bracket [max(b - r, 0), b + r]; the lower endpoint leaves the disk fully
    uncovered and the upper covers it completely, so the root is always
    interior.  If the fraction at the midpoint still exceeds the cap the root
    lies right of it (raise the lower bound), otherwise left (lower the upper
    bound).  Returns the bracket's upper endpoint once the bracket is narrower
    than tol, so the constraint is met conservatively.

    Scalars in, scalar out; arrays broadcast elementwise.
    """
    b_arr, r_arr, cap_arr = np.broadcast_arrays(
        np.asarray(b, dtype=np.float64),
        np.asarray(r, dtype=np.float64),
        np.asarray(outage_cap, dtype=np.float64),
    )
    if np.any(r_arr <= 0):
        raise ValueError("uncertainty radius must be > 0 for the coverage solve")
    if np.any(cap_arr <= 0.0) or np.any(cap_arr > 0.5):
        raise ValueError("outage cap must lie in (0, 0.5]")
    if tol <= 0:
        raise ValueError("tolerance must be positive")

    shape = b_arr.shape
    b_arr = np.ascontiguousarray(np.atleast_1d(b_arr).ravel())
    r_arr = np.ascontiguousarray(np.atleast_1d(r_arr).ravel())
    cap_arr = np.ascontiguousarray(np.atleast_1d(cap_arr).ravel())
    _validate_problem(b_arr, r_arr, b_arr)  # b, r checked once; c = b is in range

    disk_area = np.pi * r_arr * r_arr
    lo = np.maximum(b_arr - r_arr, 0.0)
    hi = b_arr + r_arr
    active = (hi - lo) > tol
    while np.any(active):
        mid = 0.5 * (lo + hi)
        # same elementwise expression as geometry.outage_fraction_arrays
        frac = _outage_area_core(b_arr, r_arr, mid) / disk_area
        go_right = frac > cap_arr
        lo = np.where(active & go_right, mid, lo)
        hi = np.where(active & ~go_right, mid, hi)
        active = (hi - lo) > tol

    out = hi.reshape(shape)
    if shape == ():
        return float(out[()])
    return out


def min_power(target_rate, R, params: ChannelParams):
    """Transmit power delivering target_rate (bps/Hz) at 3-D distance R.

    Closed form (2^rate - 1) * R^2 * sigma^2 / eta; zero rate needs zero
    power.  Accepts scalars or arrays in R.
    """
    gain = 2.0**target_rate - 1.0
    return gain * (R * R) * params.noise_power / params.eta


def optimal_position_single(user: UserSpec, L: float) -> float:
    """Single-user placement rule: align with the estimated x, clamped to the
    waveguide span [0, L]."""
    return float(min(max(user.x, 0.0), L))


def solve_user(
    user: UserSpec,
    x_pin: float,
    params: ChannelParams,
    tol: float = DEFAULT_TOL,
) -> UserSolution:
    """Solve one user at a fixed antenna position.

    With r = 0 the position is known exactly and the coverage radius collapses
    to the centre distance itself (zero outage by construction).
    """
    b = center_distance(user, x_pin)
    if user.r == 0.0:
        c = b
        achieved = 0.0
    else:
        c = solve_coverage_radius(b, user.r, user.outage_cap, tol)
        achieved = float(outage_fraction_arrays(b, user.r, c)[()])
    R = float(sphere_radius(c, params.d))
    power = float(min_power(user.target_rate, R, params))
    return UserSolution(b=b, c=c, R=R, power=power, achieved_outage_fraction=achieved)


def sum_min_power(
    users: list[UserSpec],
    x_pin: float,
    params: ChannelParams,
    tol: float = DEFAULT_TOL,
) -> Allocation:
    """Independent per-user solves at a shared position; total is their sum."""
    per_user = [solve_user(u, x_pin, params, tol) for u in users]
    total = sum(s.power for s in per_user)
    return Allocation(x_pin=float(x_pin), per_user=per_user, total_power=total)


def user_power_batch(
    users: list[UserSpec],
    x_pins: np.ndarray,
    params: ChannelParams,
    tol: float = DEFAULT_TOL,
) -> np.ndarray:
    """Per-user powers for many candidate positions at once.

    Returns an array of shape (num_users, len(x_pins)); row k is evaluated
    with exactly the same elementwise operations as solve_user, so summing a
    column reproduces sum_min_power at that position bit-for-bit.  All users
    with positive uncertainty share one stacked bisection.
    """
    x = np.asarray(x_pins, dtype=np.float64).ravel()
    ux = np.array([[u.x] for u in users])
    uy = np.array([[u.y] for u in users])
    b = np.hypot(x[None, :] - ux, uy)

    c = np.empty_like(b)
    pos = np.array([u.r > 0.0 for u in users])
    if np.any(pos):
        rr = np.array([[u.r] for u in users if u.r > 0.0])
        caps = np.array([[u.outage_cap] for u in users if u.r > 0.0])
        c[pos] = solve_coverage_radius(b[pos], np.broadcast_to(rr, b[pos].shape),
                                       np.broadcast_to(caps, b[pos].shape), tol)
    c[~pos] = b[~pos]

    R = sphere_radius(c, params.d)
    rates = np.array([[u.target_rate] for u in users])
    return min_power(rates, R, params)
