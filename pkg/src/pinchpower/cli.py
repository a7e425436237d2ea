"""Command-line front end: solve one scenario, run a sweep, or query the
Monte Carlo oracle.

Exit codes: 0 success, 1 solver failure, 2 configuration/usage problems.
Every output embeds the master seed, and identical invocations produce
byte-identical output at any PINCH_THREADS setting.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import experiments, oracle, report
from .allocator import Allocation
from .optimizer import PsoConfig, fixed_baseline, grid_search, pso_optimize
from .scenario import (
    ConfigError,
    SystemConfig,
    derive_channel_params,
    generate_users,
    load_config,
    override_master_seed,
    stream_seed,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pinchpower",
        description="Robust power minimization for a pinching-antenna downlink "
        "under user-location uncertainty.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve one scenario and emit the allocation as JSON")
    solve.add_argument("--config", required=True, help="scenario JSON file")
    solve.add_argument("--scheme", choices=experiments.SCHEME_ORDER, default="pso")
    solve.add_argument("--out", help="write JSON here instead of stdout")
    solve.add_argument("--seed", type=int, help="override the master seed")
    solve.add_argument("--grid-step", type=float, default=0.01, help="grid scheme step (m)")
    solve.add_argument("-v", "--verbose", action="store_true")

    sweep = sub.add_parser("sweep", help="run an experiment sweep and write CSV")
    sweep.add_argument("--config", required=True, help="scenario JSON file")
    sweep.add_argument("--sweep", required=True, choices=experiments.SWEEP_VARIABLES,
                       dest="swept_variable")
    sweep.add_argument("--out", required=True, help="CSV output path")
    sweep.add_argument("--values", help="comma-separated swept values (default per variable)")
    sweep.add_argument("--realizations", type=int, default=1000)
    sweep.add_argument("--schemes", default="pso,grid,fixed",
                       help="comma-separated subset of pso,grid,fixed")
    sweep.add_argument("--grid-step", type=float, default=0.01)
    sweep.add_argument("--seed", type=int, help="override the master seed")
    sweep.add_argument("--plot", help="also render the sweep figure to this file")
    sweep.add_argument("--summary", help="also write per-value scheme ratios to this CSV")
    sweep.add_argument("-v", "--verbose", action="store_true")

    orc = sub.add_parser("oracle", help="Monte Carlo outage estimate for one user")
    orc.add_argument("--config", required=True, help="scenario JSON file")
    orc.add_argument("--x-pin", type=float, required=True, help="antenna position (m)")
    orc.add_argument("--user-index", type=int, required=True)
    orc.add_argument("--power", type=float, required=True, help="transmit power (W)")
    orc.add_argument("-n", "--samples", type=int, default=1_000_000)
    orc.add_argument("--seed", type=int, help="override the master seed")
    orc.add_argument("-v", "--verbose", action="store_true")

    return parser


def _json_dumps(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _pso_config(cfg: SystemConfig) -> PsoConfig:
    ov = cfg.pso_overrides
    return PsoConfig(
        swarm_size=int(ov.get("pso_swarm_size", PsoConfig.swarm_size)),
        max_iterations=int(ov.get("pso_max_iters", PsoConfig.max_iterations)),
        inertia=float(ov.get("pso_inertia", PsoConfig.inertia)),
        cognitive=float(ov.get("pso_cognitive", PsoConfig.cognitive)),
        social=float(ov.get("pso_social", PsoConfig.social)),
        seed=int(ov.get("pso_seed", PsoConfig.seed)),
    )


def _allocation_payload(cfg: SystemConfig, scheme: str, users, allocation: Allocation) -> dict:
    return {
        "scheme": scheme,
        "master_seed": cfg.scenario.master_seed,
        "x_pin_m": allocation.x_pin,
        "total_power_w": allocation.total_power,
        "users": [
            {
                "x_m": u.x,
                "y_m": u.y,
                "uncertainty_radius_m": u.r,
                "target_rate_bpshz": u.target_rate,
                "outage_cap": u.outage_cap,
                "center_distance_m": s.b,
                "coverage_radius_m": s.c,
                "reach_m": s.R,
                "power_w": s.power,
                "achieved_outage_fraction": s.achieved_outage_fraction,
            }
            for u, s in zip(users, allocation.per_user)
        ],
    }


def _cmd_solve(args) -> int:
    cfg = override_master_seed(load_config(args.config), args.seed)
    params = derive_channel_params(cfg.radio)
    users = generate_users(cfg.scenario, stream_seed(cfg.scenario.master_seed, 0, experiments.USER_STREAM))
    if args.scheme == "pso":
        base = _pso_config(cfg)
        if "pso_seed" not in cfg.pso_overrides:
            base = replace(base, seed=experiments.pso_seed_for(cfg.scenario.master_seed, 0))
        result = pso_optimize(users, params, base)
    elif args.scheme == "grid":
        result = grid_search(users, params, args.grid_step)
    else:
        result = fixed_baseline(users, params)
    if args.verbose:
        print(
            f"scheme={args.scheme} evaluations={result.evaluations} "
            f"x_pin={result.x_pin:.4f} m",
            file=sys.stderr,
        )
    text = _json_dumps(_allocation_payload(cfg, args.scheme, users, result.allocation))
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _parse_values(raw: str | None, variable: str) -> tuple[float, ...]:
    if raw is None:
        return experiments.DEFAULT_SWEEP_VALUES[variable]
    try:
        return tuple(float(v) for v in raw.split(","))
    except ValueError as e:
        raise ConfigError(f"bad --values list {raw!r}: {e}") from e


def _cmd_sweep(args) -> int:
    cfg = override_master_seed(load_config(args.config), args.seed)
    schemes = tuple(s.strip() for s in args.schemes.split(",") if s.strip())
    spec = experiments.SweepSpec(
        swept_variable=args.swept_variable,
        values=_parse_values(args.values, args.swept_variable),
        realizations=args.realizations,
        radio=cfg.radio,
        scenario=cfg.scenario,
        schemes=schemes,
        grid_step=args.grid_step,
        pso=_pso_config(cfg),
    )
    records = experiments.run_sweep(spec)
    experiments.write_records_csv(records, args.out)
    if args.verbose:
        print(f"wrote {len(records)} records to {args.out}", file=sys.stderr)
    if args.summary:
        experiments.write_summary_csv(experiments.summarize(records), args.summary)
    if args.plot:
        report.render_sweep_figure(records, args.plot)
    return 0


def _cmd_oracle(args) -> int:
    cfg = override_master_seed(load_config(args.config), args.seed)
    params = derive_channel_params(cfg.radio)
    users = generate_users(cfg.scenario, stream_seed(cfg.scenario.master_seed, 0, experiments.USER_STREAM))
    if not 0 <= args.user_index < len(users):
        raise ConfigError(f"user index {args.user_index} outside 0..{len(users) - 1}")
    user = users[args.user_index]
    est = oracle.empirical_outage(
        user, args.x_pin, args.power, params, args.samples, cfg.scenario.master_seed
    )
    payload = {
        "master_seed": cfg.scenario.master_seed,
        "user_index": args.user_index,
        "x_pin_m": args.x_pin,
        "power_w": args.power,
        "outage_estimate": est.value,
        "std_error": est.std_error,
        "samples": est.sample_count,
    }
    sys.stdout.write(_json_dumps(payload))
    return 0


def run(argv: list[str] | None = None) -> int:
    """Parse argv and dispatch; returns the process exit status."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"solve": _cmd_solve, "sweep": _cmd_sweep, "oracle": _cmd_oracle}
    try:
        return handlers[args.command](args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # solver/runtime failure
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
