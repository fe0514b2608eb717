"""Figure rendering for simulation output.

Occupation curves are drawn with the line-style convention used throughout
the built-in models' documentation: mode 1 solid, mode 2 dotted, mode 3
dashed (cycling for larger registers).  Figures are written straight to
file; no interactive backend is required or touched.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evolution import Strategy, TimeSeries
from .report import ComparisonReport

__all__ = ["apply_style", "plot_timeseries", "plot_comparison"]

_LINE_STYLES = ["-", ":", "--", "-."]


def apply_style() -> None:
    """Light rc tuning for readable single-column figures."""
    plt.rcParams["figure.figsize"] = (6.0, 3.8)
    plt.rcParams["font.size"] = 10
    plt.rcParams["axes.labelsize"] = 10
    plt.rcParams["legend.fontsize"] = 9
    plt.rcParams["lines.linewidth"] = 1.4
    plt.rcParams["savefig.bbox"] = "tight"
    plt.rcParams["savefig.dpi"] = 150


def _draw_series(ax, series: TimeSeries) -> None:
    for k, label in enumerate(series.labels):
        ax.plot(
            series.times,
            series.values[label],
            _LINE_STYLES[k % len(_LINE_STYLES)],
            color="black",
            label=label,
        )
    ax.set_xlabel("t")
    ax.set_ylabel("occupation")
    ax.set_xlim(series.times[0], series.times[-1])


def plot_timeseries(series: TimeSeries, path: str, title: str | None = None) -> None:
    """Render one run's occupation curves to ``path``."""
    apply_style()
    fig, ax = plt.subplots()
    _draw_series(ax, series)
    if title:
        ax.set_title(title)
    ax.legend(loc="best", frameon=False)
    fig.savefig(path)
    plt.close(fig)


def plot_comparison(
    report: ComparisonReport, path: str, title: str | None = None
) -> None:
    """Render the three strategies side by side to ``path``.

    Strategies that failed to produce real means get an annotated empty
    panel instead of curves.
    """
    apply_style()
    fig, axes = plt.subplots(1, len(Strategy), figsize=(11.0, 3.4), sharex=True)
    legend_axis = None
    for ax, findings in zip(axes, report.findings):
        if findings.series is None:
            ax.text(
                0.5,
                0.5,
                "no real-valued means",
                transform=ax.transAxes,
                ha="center",
                va="center",
            )
            ax.set_xlabel("t")
        else:
            _draw_series(ax, findings.series)
            legend_axis = legend_axis or ax
        ax.set_title(findings.strategy.value)
    if legend_axis is not None:
        legend_axis.legend(loc="best", frameon=False)
    if title:
        fig.suptitle(title)
    fig.savefig(path)
    plt.close(fig)
