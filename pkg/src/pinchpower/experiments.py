"""Seeded experiment sweeps over random user populations.

One sweep varies a single per-user field (target rate, uncertainty radius, or
outage cap) over a value list and averages the total power of each requested
scheme across independent realizations.  Realization i draws its users from
the stream (master_seed, i, 0) and its swarm seed from (master_seed, i, 1),
independent of the swept value, so every scheme and every value sees the same
populations (common random numbers).  That makes orderings between schemes
and across cap values assertable realization by realization, not just in the
mean.

Realizations are independent jobs; with PINCH_THREADS > 1 they run in a
process pool, and because each job is fully seeded and results are stored by
realization index, the output is identical at any parallelism degree.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .allocator import DEFAULT_TOL
from .optimizer import OptimizationResult, PsoConfig, fixed_baseline, grid_search, pso_optimize
from .scenario import RadioConfig, ScenarioConfig, derive_channel_params, generate_users, stream_seed

SCHEME_ORDER = ("pso", "grid", "fixed")
SWEEP_VARIABLES = ("target_rate", "uncertainty_radius", "outage_cap")

USER_STREAM = 0
PSO_STREAM = 1

CSV_HEADER = "scheme,swept_variable,value,mean_total_power_w,realizations,master_seed"
SUMMARY_HEADER = "swept_variable,value,fixed_over_pso,pso_over_grid"

DEFAULT_SWEEP_VALUES = {
    "target_rate": (1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0),
    "uncertainty_radius": (1.0, 2.0, 3.0, 4.0, 5.0, 6.0),
    "outage_cap": (0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5),
}


@dataclass(frozen=True)
class SweepSpec:
    """One experiment: which field to sweep, over what, with which schemes."""

    swept_variable: str
    values: tuple[float, ...]
    realizations: int = 1000
    radio: RadioConfig = field(default_factory=RadioConfig)
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    schemes: tuple[str, ...] = SCHEME_ORDER
    grid_step: float = 0.01  # m
    pso: PsoConfig = field(default_factory=PsoConfig)
    tol: float = DEFAULT_TOL


@dataclass(frozen=True)
class SweepRecord:
    """One CSV row: a scheme's mean total power at one swept value."""

    scheme: str
    swept_variable: str
    value: float
    mean_total_power: float  # W
    realizations: int
    master_seed: int


@dataclass(frozen=True)
class SweepDetail:
    """Full sweep output: records plus the per-realization arrays behind them.

    totals[scheme] has shape (num_values, realizations); per_user_power adds a
    trailing user axis; x_pins holds the chosen positions.
    """

    spec: SweepSpec
    records: list[SweepRecord]
    totals: dict[str, np.ndarray]
    per_user_power: dict[str, np.ndarray]
    x_pins: dict[str, np.ndarray]


def _validate_spec(spec: SweepSpec) -> None:
    if spec.swept_variable not in SWEEP_VARIABLES:
        raise ValueError(f"swept_variable must be one of {SWEEP_VARIABLES}")
    if len(spec.values) == 0:
        raise ValueError("value list must be non-empty")
    if list(spec.values) != sorted(spec.values):
        raise ValueError("value list must be sorted ascending")
    if spec.realizations < 1:
        raise ValueError("realizations must be >= 1")
    bad = [s for s in spec.schemes if s not in SCHEME_ORDER]
    if bad or not spec.schemes:
        raise ValueError(f"schemes must be a non-empty subset of {SCHEME_ORDER}")
    if spec.swept_variable == "outage_cap" and any(not 0.0 < v <= 0.5 for v in spec.values):
        raise ValueError("outage_cap values must lie in (0, 0.5]")
    if spec.swept_variable == "uncertainty_radius" and any(v < 0 for v in spec.values):
        raise ValueError("uncertainty_radius values must be >= 0")
    if spec.swept_variable == "target_rate" and any(v < 0 for v in spec.values):
        raise ValueError("target_rate values must be >= 0")


def active_schemes(spec: SweepSpec) -> tuple[str, ...]:
    """Requested schemes in canonical (pso, grid, fixed) order."""
    return tuple(s for s in SCHEME_ORDER if s in spec.schemes)


def worker_count() -> int:
    """Worker cap from PINCH_THREADS (0 or unset = one worker per CPU)."""
    raw = os.environ.get("PINCH_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError as e:
        raise ValueError(f"PINCH_THREADS must be an integer, got {raw!r}") from e
    if n < 0:
        raise ValueError("PINCH_THREADS must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


def pso_seed_for(master_seed: int, realization: int) -> int:
    """Swarm seed for one realization, independent of the swept value."""
    return int(stream_seed(master_seed, realization, PSO_STREAM).generate_state(1, np.uint64)[0])


def _override_user(user, variable: str, value: float):
    if variable == "target_rate":
        return replace(user, target_rate=value)
    if variable == "uncertainty_radius":
        return replace(user, r=value)
    return replace(user, outage_cap=value)


def _run_scheme(scheme: str, users, params, spec: SweepSpec, pso_seed: int) -> OptimizationResult:
    if scheme == "pso":
        return pso_optimize(users, params, replace(spec.pso, seed=pso_seed), spec.tol)
    if scheme == "grid":
        return grid_search(users, params, spec.grid_step, spec.tol)
    return fixed_baseline(users, params, spec.tol)


def _realization_job(args: tuple[SweepSpec, int]):
    """Evaluate every (value, scheme) pair for one realization.

    Returns (index, powers, x_pins) with powers shaped
    (num_values, num_schemes, num_users).
    """
    spec, i = args
    schemes = active_schemes(spec)
    params = derive_channel_params(spec.radio)
    master = spec.scenario.master_seed
    base_users = generate_users(spec.scenario, stream_seed(master, i, USER_STREAM))
    pso_seed = pso_seed_for(master, i)

    powers = np.empty((len(spec.values), len(schemes), len(base_users)))
    x_pins = np.empty((len(spec.values), len(schemes)))
    for vi, value in enumerate(spec.values):
        users = [_override_user(u, spec.swept_variable, value) for u in base_users]
        for si, scheme in enumerate(schemes):
            try:
                result = _run_scheme(scheme, users, params, spec, pso_seed)
            except Exception as e:
                raise RuntimeError(
                    f"scheme {scheme!r} failed at realization {i}, "
                    f"{spec.swept_variable}={value}: {e}"
                ) from e
            powers[vi, si, :] = [s.power for s in result.allocation.per_user]
            x_pins[vi, si] = result.x_pin
    return i, powers, x_pins


def run_sweep_detail(spec: SweepSpec, workers: int | None = None) -> SweepDetail:
    """Run the sweep and keep the per-realization arrays alongside the records."""
    _validate_spec(spec)
    schemes = active_schemes(spec)
    n_vals, n_real, n_users = len(spec.values), spec.realizations, spec.scenario.num_users

    all_powers = np.empty((n_vals, len(schemes), n_real, n_users))
    all_xpins = np.empty((n_vals, len(schemes), n_real))
    jobs = [(spec, i) for i in range(n_real)]
    if workers is None:
        workers = worker_count()
    workers = max(1, min(workers, n_real))

    if workers == 1:
        results = map(_realization_job, jobs)
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        results = pool.map(_realization_job, jobs, chunksize=max(1, n_real // (4 * workers)))
    try:
        for i, powers, x_pins in results:
            all_powers[:, :, i, :] = powers
            all_xpins[:, :, i] = x_pins
    finally:
        if workers > 1:
            pool.shutdown()

    totals = {}
    per_user = {}
    xpins = {}
    records = []
    for si, scheme in enumerate(schemes):
        per_user[scheme] = all_powers[:, si, :, :]
        xpins[scheme] = all_xpins[:, si, :]
        scheme_totals = np.empty((n_vals, n_real))
        for vi in range(n_vals):
            for ri in range(n_real):
                # same left-to-right accumulation as the allocator total
                scheme_totals[vi, ri] = sum(all_powers[vi, si, ri, :].tolist())
        totals[scheme] = scheme_totals
        for vi, value in enumerate(spec.values):
            records.append(
                SweepRecord(
                    scheme=scheme,
                    swept_variable=spec.swept_variable,
                    value=float(value),
                    mean_total_power=float(np.mean(scheme_totals[vi])),
                    realizations=n_real,
                    master_seed=spec.scenario.master_seed,
                )
            )
    return SweepDetail(spec=spec, records=records, totals=totals, per_user_power=per_user, x_pins=xpins)


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[SweepRecord]:
    """Run the sweep and return one record per (scheme, value)."""
    return run_sweep_detail(spec, workers=workers).records


def write_records_csv(records: list[SweepRecord], path: str | Path) -> None:
    """Write sweep records as CSV, one record per line, deterministic order."""
    lines = [CSV_HEADER]
    for rec in records:
        lines.append(
            f"{rec.scheme},{rec.swept_variable},{rec.value},"
            f"{rec.mean_total_power},{rec.realizations},{rec.master_seed}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


@dataclass(frozen=True)
class SummaryRow:
    """Per-value scheme comparison; a ratio is None when a side is missing."""

    swept_variable: str
    value: float
    fixed_over_pso: float | None
    pso_over_grid: float | None


def summarize(records: list[SweepRecord]) -> list[SummaryRow]:
    """Per-value power ratios between schemes from one sweep's records.

    All records must come from the same sweep (same swept variable, seed,
    realization count, and value grid) and cover at least two schemes.
    """
    if not records:
        raise ValueError("no records to summarize")
    keys = {(r.swept_variable, r.realizations, r.master_seed) for r in records}
    if len(keys) > 1:
        raise ValueError(f"records mix sweep specs: {sorted(keys)}")
    by_scheme: dict[str, dict[float, float]] = {}
    for r in records:
        by_scheme.setdefault(r.scheme, {})[r.value] = r.mean_total_power
    if len(by_scheme) < 2:
        raise ValueError("need records from at least two schemes")
    value_sets = {scheme: tuple(sorted(vals)) for scheme, vals in by_scheme.items()}
    if len(set(value_sets.values())) > 1:
        raise ValueError("schemes cover different value grids")

    swept = records[0].swept_variable
    rows = []
    for value in next(iter(value_sets.values())):
        fixed_over_pso = None
        pso_over_grid = None
        if "fixed" in by_scheme and "pso" in by_scheme:
            fixed_over_pso = by_scheme["fixed"][value] / by_scheme["pso"][value]
        if "pso" in by_scheme and "grid" in by_scheme:
            pso_over_grid = by_scheme["pso"][value] / by_scheme["grid"][value]
        rows.append(
            SummaryRow(
                swept_variable=swept,
                value=value,
                fixed_over_pso=fixed_over_pso,
                pso_over_grid=pso_over_grid,
            )
        )
    return rows


def write_summary_csv(rows: list[SummaryRow], path: str | Path) -> None:
    """Write the scheme-comparison table as CSV (blank cell = missing pair)."""
    lines = [SUMMARY_HEADER]
    for row in rows:
        f_p = "" if row.fixed_over_pso is None else str(row.fixed_over_pso)
        p_g = "" if row.pso_over_grid is None else str(row.pso_over_grid)
        lines.append(f"{row.swept_variable},{row.value},{f_p},{p_g}")
    Path(path).write_text("\n".join(lines) + "\n")
