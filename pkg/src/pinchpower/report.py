"""Render sweep results as figure files next to the CSV output.

Uses the object-oriented matplotlib API with an Agg canvas so rendering works
headless and never touches global pyplot state.
"""

from __future__ import annotations

from pathlib import Path

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .experiments import SCHEME_ORDER, SweepRecord

AXIS_LABELS = {
    "target_rate": "Target rate (bps/Hz)",
    "uncertainty_radius": "Uncertainty radius (m)",
    "outage_cap": "Outage probability cap",
}

SCHEME_STYLE = {
    "pso": ("Pinching antenna (PSO)", "o-", "tab:blue"),
    "grid": ("Pinching antenna (exhaustive)", "s--", "tab:green"),
    "fixed": ("Fixed antenna", "^-", "tab:red"),
}


def render_sweep_figure(records: list[SweepRecord], path: str | Path, log_scale: bool = False) -> Path:
    """Plot mean total power versus the swept value, one curve per scheme.

    The output format follows the file extension (png, pdf, svg).  Returns
    the path written.
    """
    if not records:
        raise ValueError("no records to plot")
    swept = {r.swept_variable for r in records}
    if len(swept) > 1:
        raise ValueError(f"records mix swept variables: {sorted(swept)}")
    variable = swept.pop()

    fig = Figure(figsize=(6.4, 4.2))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    for scheme in SCHEME_ORDER:
        pts = sorted((r.value, r.mean_total_power) for r in records if r.scheme == scheme)
        if not pts:
            continue
        label, style, color = SCHEME_STYLE[scheme]
        ax.plot([p[0] for p in pts], [p[1] for p in pts], style, color=color,
                markersize=5, label=label)
    ax.set_xlabel(AXIS_LABELS.get(variable, variable))
    ax.set_ylabel("Mean total transmit power (W)")
    if log_scale:
        ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()

    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=200)
    return out
