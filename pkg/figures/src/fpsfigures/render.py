"""Figure rendering: mean curves with standard-error bands, and power bars."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402 - backend must be set first

from .io import EmptySeriesError, read_power, read_summary

# kind -> (expected sweep axis in the CSV, x label)
FIGURE_KINDS = {
    "se_vs_snr": ("snr_db", "SNR [dB]"),
    "se_vs_nps": ("n_ps", "Number of fixed phase shifters"),
    "se_vs_groups": ("n_groups", "Number of groups"),
    "power_bars": (None, None),
}

SE_LABEL = "Spectral efficiency [bits/s/Hz]"


@dataclass(frozen=True)
class FigureSpec:
    """One figure request: which file, which kind, which series, where to."""

    input_path: str
    kind: str
    output_path: str
    methods: tuple[str, ...] = ()
    sweep_values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(
                f"unknown figure kind {self.kind!r}; "
                f"choose from {sorted(FIGURE_KINDS)}")


def _curve_figure(spec: FigureSpec):
    axis, x_label = FIGURE_KINDS[spec.kind]
    rows = read_summary(spec.input_path)
    axes_in_file = sorted({r["sweep_axis"] for r in rows})
    rows = [r for r in rows if r["sweep_axis"] == axis]
    if not rows:
        raise EmptySeriesError(
            f"{spec.input_path}: no rows with sweep axis {axis!r}; "
            f"file contains axes {axes_in_file}")
    methods_in_file = sorted({r["method"] for r in rows})
    if spec.methods:
        rows = [r for r in rows if r["method"] in spec.methods]
    if spec.sweep_values:
        rows = [r for r in rows if r["sweep_value"] in spec.sweep_values]
    if not rows:
        raise EmptySeriesError(
            f"{spec.input_path}: filters matched nothing; available methods "
            f"{methods_in_file}, values "
            f"{sorted({r['sweep_value'] for r in read_summary(spec.input_path)})}")

    fig, ax = plt.subplots(figsize=(6, 4))
    methods = spec.methods or tuple(methods_in_file)
    for method in methods:
        series = sorted((r for r in rows if r["method"] == method),
                        key=lambda r: r["sweep_value"])
        if not series:
            continue
        x = [r["sweep_value"] for r in series]
        y = [r["mean_se"] for r in series]
        err = [r["stderr_se"] for r in series]
        ax.plot(x, y, marker="o", label=method)
        ax.fill_between(x, [m - e for m, e in zip(y, err)],
                        [m + e for m, e in zip(y, err)], alpha=0.2)
    ax.set_xlabel(x_label)
    ax.set_ylabel(SE_LABEL)
    ax.grid(True, alpha=0.3)
    ax.legend()
    return fig


def _power_figure(spec: FigureSpec):
    rows = read_power(spec.input_path)
    structures_in_file = [r["structure"] for r in rows]
    if spec.methods:
        rows = [r for r in rows if r["structure"] in spec.methods]
    if not rows:
        raise EmptySeriesError(
            f"{spec.input_path}: filters matched nothing; available "
            f"structures {structures_in_file}")
    fig, ax = plt.subplots(figsize=(6, 4))
    labels = [r["structure"] for r in rows]
    heights = [r["power_total_w"] for r in rows]
    ax.bar(range(len(rows)), heights)
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_ylabel("Analog network power [W]")
    ax.grid(True, axis="y", alpha=0.3)
    return fig


def render(spec: FigureSpec) -> Path:
    """Render one figure to ``spec.output_path``; inputs are read-only."""
    if spec.kind == "power_bars":
        fig = _power_figure(spec)
    else:
        fig = _curve_figure(spec)
    out = Path(spec.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, bbox_inches="tight", dpi=150)
    plt.close(fig)
    return out
