"""Exact 2-D outage geometry for a disk of user positions against a coverage circle.

The radiating point sits at height ``d`` above the ground plane.  All ground
positions whose 3-D distance to it is at most ``R`` lie inside a ground circle
of radius ``c = sqrt(R^2 - d^2)`` centred under the antenna (Pythagoras).  A
user's true position is uniform on a disk of radius ``r`` whose centre is a
ground distance ``b`` from that point.  The outage region is the part of the
user disk left uncovered by the coverage circle; its area ``s4`` drives the
whole power allocation.

Everything here is pure and stateless.  The array helpers accept numpy arrays
of identical (broadcastable) shape and are the single implementation used by
both the scalar public API and the vectorised solver paths, so scalar and
batched evaluations agree bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Tolerance for treating the two circles as concentric: below this the
# law-of-cosines angles degenerate (division by b).
CONCENTRIC_TOL = 1e-12
# arccos arguments may drift past +-1 by rounding near tangency; clamp within
# this margin, reject beyond it.
ACOS_CLAMP_TOL = 1e-12


class GeometryError(ValueError):
    """Invalid geometric configuration (invariant or domain violation)."""


@dataclass(frozen=True)
class CoverageProblem:
    """Reduced 2-D geometry of one user against the coverage circle.

    b: ground distance between disk centre and coverage-circle centre (m)
    r: radius of the user-uncertainty disk (m)
    c: radius of the ground coverage circle (m)
    """

    b: float
    r: float
    c: float


@dataclass(frozen=True)
class OutageGeometry:
    """Area decomposition of the outage region.

    alpha: half-angle of the coverage-circle sector cut off by the
        intersection chord (rad)
    beta: half-angle of the user-disk sector on the covered side (rad)
    s1: coverage-circle sector area (m^2)
    s2: area of the two triangles spanned by the centres and the
        intersection points (m^2)
    s3: covered part of the user-disk sector, s1 - s2 (m^2)
    s4: outage area, the uncovered part of the user disk (m^2)
    """

    alpha: float
    beta: float
    s1: float
    s2: float
    s3: float
    s4: float


def ground_radius(R: float, d: float) -> float:
    """Radius of the ground-plane coverage circle for 3-D reach R at height d.

    Raises GeometryError when R < d: the reach sphere does not touch the
    ground plane.
    """
    if d < 0 or not np.isfinite(R):
        raise GeometryError(f"need R >= d >= 0, got R={R}, d={d}")
    if R < d:
        raise GeometryError(f"sphere of radius {R} does not reach the ground plane (height {d})")
    return float(np.sqrt(max(R * R - d * d, 0.0)))


def sphere_radius(c, d):
    """3-D reach that yields ground coverage radius c at height d (inverse of
    ground_radius).  Accepts scalars or arrays."""
    return np.hypot(c, d)


def _validate_problem(b: np.ndarray, r: np.ndarray, c: np.ndarray) -> None:
    if np.any(~np.isfinite(b)) or np.any(~np.isfinite(r)) or np.any(~np.isfinite(c)):
        raise GeometryError("non-finite coverage problem")
    if np.any(b < 0):
        raise GeometryError("centre distance b must be >= 0")
    if np.any(r <= 0):
        raise GeometryError("uncertainty radius r must be > 0")
    if np.any(c < 0):
        raise GeometryError("coverage radius c must be >= 0")


def _clamped_arccos(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """arccos(num/den) with the argument clamped to [-1, 1] within
    ACOS_CLAMP_TOL; anything further out is a genuine domain error."""
    arg = num / den
    if np.any(arg > 1.0 + ACOS_CLAMP_TOL) or np.any(arg < -1.0 - ACOS_CLAMP_TOL):
        worst = float(np.max(np.abs(arg)))
        raise GeometryError(f"arccos argument {worst} outside [-1, 1] beyond clamp tolerance")
    return np.arccos(np.clip(arg, -1.0, 1.0))


def _case_masks(b, r, c):
    """Boolean masks for the piecewise regimes, mutually exclusive in the
    order returned: covered, uncovered, concentric, enclosed, lens."""
    covered = c >= b + r
    uncovered = ~covered & (b >= r) & (c <= b - r)
    concentric = ~covered & ~uncovered & (b < CONCENTRIC_TOL * np.maximum(r, 1.0))
    enclosed = ~covered & ~uncovered & ~concentric & (b < r) & (b + c <= r)
    lens = ~(covered | uncovered | concentric | enclosed)
    return covered, uncovered, concentric, enclosed, lens


def _outage_area_core(b: np.ndarray, r: np.ndarray, c: np.ndarray) -> np.ndarray:
    """s4 for pre-validated 1-d float64 arrays of equal shape (hot path)."""
    covered, uncovered, concentric, enclosed, lens = _case_masks(b, r, c)

    disk_area = np.pi * r * r
    s4 = np.zeros(b.shape, dtype=np.float64)
    s4[uncovered] = disk_area[uncovered]
    inside = concentric | enclosed
    # concentric with c >= r is already in `covered`; remaining concentric
    # elements behave like `enclosed`
    s4[inside] = disk_area[inside] - np.pi * c[inside] * c[inside]

    if np.any(lens):
        bl, rl, cl = b[lens], r[lens], c[lens]
        alpha = _clamped_arccos(bl * bl + cl * cl - rl * rl, 2.0 * bl * cl)
        beta = _clamped_arccos(bl * bl + rl * rl - cl * cl, 2.0 * bl * rl)
        s = 0.5 * (bl + cl + rl)
        heron = s * (s - bl) * (s - cl) * (s - rl)
        # near-degenerate triangles can round slightly negative
        s2 = 2.0 * np.sqrt(np.maximum(heron, 0.0))
        s3 = alpha * cl * cl - s2
        s4[lens] = (np.pi - beta) * rl * rl - s3

    return np.clip(s4, 0.0, disk_area)


def outage_area_arrays(b: np.ndarray, r: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Outage area s4 for arrays of (b, r, c), elementwise.

    Piecewise: 0 when the disk is fully covered (c >= b + r); the full disk
    area when it is fully outside coverage (c <= b - r); the annulus area when
    the coverage circle sits inside the disk (b + c <= r, including the
    concentric limit b ~ 0); otherwise the disk area minus the two-circle
    lens, assembled from the sector/triangle decomposition.
    """
    b, r, c = np.broadcast_arrays(
        np.asarray(b, dtype=np.float64),
        np.asarray(r, dtype=np.float64),
        np.asarray(c, dtype=np.float64),
    )
    shape = b.shape
    b = np.atleast_1d(b).ravel()
    r = np.atleast_1d(r).ravel()
    c = np.atleast_1d(c).ravel()
    _validate_problem(b, r, c)
    return _outage_area_core(b, r, c).reshape(shape)


def outage_fraction_arrays(b: np.ndarray, r: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Outage area as a fraction of the user-disk area, elementwise in [0, 1]."""
    r_arr = np.asarray(r, dtype=np.float64)
    return outage_area_arrays(b, r, c) / (np.pi * r_arr * r_arr)


def outage_geometry(p: CoverageProblem) -> OutageGeometry:
    """Full area decomposition for one coverage problem.

    Outside the proper-intersection regime the angles and partial areas are
    set to their limiting values so that every field stays within its bounds
    and s4 matches outage_area exactly.
    """
    b = np.asarray([p.b], dtype=np.float64)
    r = np.asarray([p.r], dtype=np.float64)
    c = np.asarray([p.c], dtype=np.float64)
    _validate_problem(b, r, c)
    covered, uncovered, concentric, enclosed, lens = (m[0] for m in _case_masks(b, r, c))
    s4 = float(outage_area_arrays(b, r, c)[0])

    bf, rf, cf = p.b, p.r, p.c
    if lens:
        alpha = float(_clamped_arccos(np.asarray(bf * bf + cf * cf - rf * rf), np.asarray(2.0 * bf * cf)))
        beta = float(_clamped_arccos(np.asarray(bf * bf + rf * rf - cf * cf), np.asarray(2.0 * bf * rf)))
        s = 0.5 * (bf + cf + rf)
        s2 = 2.0 * np.sqrt(max(s * (s - bf) * (s - cf) * (s - rf), 0.0))
        s1 = alpha * cf * cf
        s3 = s1 - s2
    elif covered:
        alpha, beta, s1, s2, s3 = 0.0, np.pi, 0.0, 0.0, 0.0
    elif uncovered:
        alpha, beta, s1, s2, s3 = 0.0, 0.0, 0.0, 0.0, 0.0
    else:  # coverage circle inside the disk (concentric or enclosed)
        alpha, beta = np.pi, 0.0
        s1 = np.pi * cf * cf
        s2, s3 = 0.0, s1
    return OutageGeometry(alpha=alpha, beta=beta, s1=s1, s2=s2, s3=s3, s4=s4)


def outage_area(p: CoverageProblem) -> float:
    """Outage area s4 (m^2) of the user disk, see outage_area_arrays."""
    return float(outage_area_arrays(p.b, p.r, p.c)[()])


def outage_fraction(p: CoverageProblem) -> float:
    """Fraction of the user disk left uncovered, in [0, 1]."""
    return float(outage_fraction_arrays(p.b, p.r, p.c)[()])
