"""Robust power minimization for a pinching-antenna downlink under
user-location uncertainty."""

from .allocator import (
    Allocation,
    UserSolution,
    center_distance,
    min_power,
    optimal_position_single,
    solve_coverage_radius,
    solve_user,
    sum_min_power,
)
from .experiments import (
    SweepRecord,
    SweepSpec,
    run_sweep,
    run_sweep_detail,
    summarize,
)
from .geometry import (
    CoverageProblem,
    GeometryError,
    OutageGeometry,
    ground_radius,
    outage_area,
    outage_fraction,
    outage_geometry,
    sphere_radius,
)
from .optimizer import (
    OptimizationResult,
    PsoConfig,
    fixed_baseline,
    grid_search,
    objective,
    pso_optimize,
)
from .oracle import McEstimate, empirical_outage, mc_outage_area
from .scenario import (
    ChannelParams,
    ConfigError,
    RadioConfig,
    ScenarioConfig,
    SystemConfig,
    UserSpec,
    derive_channel_params,
    generate_users,
    load_config,
    sample_true_location,
)

__version__ = "0.1.0"
