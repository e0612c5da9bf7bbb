"""Model validity diagnostics as structured point series.

Four series kinds: probability plot (empirical vs fitted cdf at the ordered
sample, plotting positions i/(m+1)), quantile plot (fitted quantiles vs the
ordered sample), return-level curve with confidence band, and an
area-normalized histogram against the fitted density.  Series serialize to
CSV (the stable contract: columns kind,x,y,lower,upper) and to a minimal
standalone SVG, one series per file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .data import as_values
from .gev import GevParams, cdf, pdf, quantile
from .returns import return_level_ci

__all__ = [
    "PlotKind",
    "PlotSeries",
    "density_overlay",
    "probability_plot",
    "quantile_plot",
    "return_curve",
    "series_to_csv",
    "series_to_svg",
]


class PlotKind(Enum):
    PROBABILITY_PLOT = "ProbabilityPlot"
    QUANTILE_PLOT = "QuantilePlot"
    RETURN_LEVEL_CURVE = "ReturnLevelCurve"
    DENSITY_OVERLAY = "DensityOverlay"


@dataclass(frozen=True)
class PlotSeries:
    """Point series with an optional per-point (lower, upper) band.

    Points are ordered in x.  For the density overlay, y is the histogram
    density and the degenerate band lower == upper carries the model density
    at the same x (the overlay curve).
    """

    kind: PlotKind
    points: np.ndarray  # shape (m, 2)
    bands: np.ndarray | None = None  # shape (m, 2)
    reference: str | None = None


def probability_plot(sample, params: GevParams) -> PlotSeries:
    """Points (i/(m+1), fitted cdf of the i-th order statistic); ties keep stable order."""
    values = np.sort(as_values(sample), kind="stable")
    m = values.size
    positions = np.arange(1, m + 1) / (m + 1.0)
    return PlotSeries(
        kind=PlotKind.PROBABILITY_PLOT,
        points=np.column_stack([positions, cdf(params, values)]),
        reference="unit diagonal",
    )


def quantile_plot(sample, params: GevParams) -> PlotSeries:
    """Points (fitted quantile at i/(m+1), i-th order statistic)."""
    values = np.sort(as_values(sample), kind="stable")
    m = values.size
    positions = np.arange(1, m + 1) / (m + 1.0)
    return PlotSeries(
        kind=PlotKind.QUANTILE_PLOT,
        points=np.column_stack([quantile(params, positions), values]),
        reference="unit diagonal",
    )


def return_curve(
    fit,
    periods,
    tau: float = 0.05,
    one_sided: bool = False,
    sigma_corrected: float | None = None,
) -> PlotSeries:
    """Return level against return period (log-scaled axis) with CI band."""
    periods = sorted(float(t) for t in periods)
    if any(t <= 1.0 for t in periods):
        raise ValueError("return periods must exceed 1")
    rows = [
        return_level_ci(fit, 1.0 / t, tau=tau, one_sided=one_sided, sigma_corrected=sigma_corrected)
        for t in periods
    ]
    return PlotSeries(
        kind=PlotKind.RETURN_LEVEL_CURVE,
        points=np.array([[est.period, est.level] for est in rows]),
        bands=np.array([list(est.ci) for est in rows]),
        reference="x: return period (log scale)",
    )


def density_overlay(sample, params: GevParams, bins: int | None = None) -> PlotSeries:
    """Area-normalized histogram with the model density at bin midpoints.

    Default bin count is Sturges' rule.  y holds the histogram density; the
    degenerate band holds the model pdf.
    """
    values = as_values(sample)
    if bins is None:
        bins = max(1, int(math.ceil(math.log2(values.size) + 1)))  # Sturges
    if bins < 1:
        raise ValueError("bins must be at least 1")
    density, edges = np.histogram(values, bins=bins, density=True)
    mids = 0.5 * (edges[:-1] + edges[1:])
    model = pdf(params, mids)
    return PlotSeries(
        kind=PlotKind.DENSITY_OVERLAY,
        points=np.column_stack([mids, density]),
        bands=np.column_stack([model, model]),
        reference=f"{bins} bins on [{edges[0]:.10g}, {edges[-1]:.10g}]",
    )


def series_to_csv(series: PlotSeries) -> str:
    """Render a series as CSV text with columns kind,x,y,lower,upper."""
    lines = ["kind,x,y,lower,upper"]
    for i, (x, y) in enumerate(series.points):
        lo = hi = ""
        if series.bands is not None:
            lo, hi = (f"{v:.10g}" for v in series.bands[i])
        lines.append(f"{series.kind.value},{x:.10g},{y:.10g},{lo},{hi}")
    return "\n".join(lines) + "\n"


_SVG_W, _SVG_H, _MARGIN = 640, 480, 56


def _scale(lo, hi):
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    return lo - 0.05 * span, hi + 0.05 * span


def series_to_svg(series: PlotSeries) -> str:
    """Minimal standalone SVG rendering (fixed 640x480 viewBox)."""
    pts = series.points
    ys = [pts[:, 1]]
    if series.bands is not None:
        ys.extend([series.bands[:, 0], series.bands[:, 1]])
    x_lo, x_hi = _scale(float(pts[:, 0].min()), float(pts[:, 0].max()))
    y_all = np.concatenate(ys)
    y_lo, y_hi = _scale(float(y_all.min()), float(y_all.max()))

    def sx(x):
        return _MARGIN + (x - x_lo) / (x_hi - x_lo) * (_SVG_W - 2 * _MARGIN)

    def sy(y):
        return _SVG_H - _MARGIN - (y - y_lo) / (y_hi - y_lo) * (_SVG_H - 2 * _MARGIN)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{_SVG_W - 2 * _MARGIN}" '
        f'height="{_SVG_H - 2 * _MARGIN}" fill="none" stroke="black"/>',
        f'<text x="{_SVG_W / 2}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{series.kind.value}</text>',
    ]
    if series.kind in (PlotKind.PROBABILITY_PLOT, PlotKind.QUANTILE_PLOT):
        d_lo, d_hi = max(x_lo, y_lo), min(x_hi, y_hi)
        parts.append(
            f'<line x1="{sx(d_lo):.2f}" y1="{sy(d_lo):.2f}" x2="{sx(d_hi):.2f}" '
            f'y2="{sy(d_hi):.2f}" stroke="gray" stroke-dasharray="4 3"/>'
        )
    if series.bands is not None:
        upper = [f"{sx(x):.2f},{sy(u):.2f}" for (x, _), (_, u) in zip(pts, series.bands)]
        lower = [f"{sx(x):.2f},{sy(l):.2f}" for (x, _), (l, _) in zip(pts, series.bands)]
        parts.append(
            f'<polygon points="{" ".join(upper + lower[::-1])}" fill="steelblue" '
            'fill-opacity="0.15" stroke="none"/>'
        )
    if series.kind is PlotKind.DENSITY_OVERLAY:
        for x, y in pts:
            parts.append(
                f'<rect x="{sx(x) - 4:.2f}" y="{sy(y):.2f}" width="8" '
                f'height="{max(sy(0) - sy(y), 0.0):.2f}" fill="lightgray" stroke="gray"/>'
            )
        curve = " ".join(f"{sx(x):.2f},{sy(u):.2f}" for (x, _), (_, u) in zip(pts, series.bands))
        parts.append(f'<polyline points="{curve}" fill="none" stroke="crimson" stroke-width="1.5"/>')
    else:
        path = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        parts.append(f'<polyline points="{path}" fill="none" stroke="steelblue" stroke-width="1.5"/>')
        for x, y in pts:
            parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2" fill="steelblue"/>')
    for val, anchor, xpos, ypos in (
        (x_lo, "start", _MARGIN, _SVG_H - _MARGIN + 16),
        (x_hi, "end", _SVG_W - _MARGIN, _SVG_H - _MARGIN + 16),
    ):
        parts.append(
            f'<text x="{xpos}" y="{ypos}" text-anchor="{anchor}" font-family="sans-serif" '
            f'font-size="11">{val:.6g}</text>'
        )
    for val, ypos in ((y_lo, _SVG_H - _MARGIN), (y_hi, _MARGIN + 4)):
        parts.append(
            f'<text x="{_MARGIN - 6}" y="{ypos}" text-anchor="end" font-family="sans-serif" '
            f'font-size="11">{val:.6g}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
