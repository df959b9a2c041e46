"""Deterministic SVG output: emotion wheels, frame networks, time series, heatmaps.

Every renderer is a pure function of its inputs. Floats are written with a
fixed number of decimals and all collections are emitted in sorted order, so
identical inputs always give byte-identical documents.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from . import _kernels
from .frames import SIGNIFICANCE, EmotionProfile, SemanticFrame
from .graphstats import Partition
from .lexicon import EMOTIONS
from .stats import HeatmapBins

EMOTION_COLORS = {
    "joy": "#f1c40f",
    "trust": "#7fbf3f",
    "fear": "#1e8449",
    "surprise": "#2e9bd6",
    "sadness": "#3b5bdb",
    "disgust": "#8e44ad",
    "anger": "#d62728",
    "anticipation": "#f39c12",
}
NEUTRAL_FILL = "#ffffff"
RING_FILL = "#d0d0d0"
MUTED = "#b4b4b4"
COMMUNITY_COLORS = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)
# heatmap ramp endpoints (light to dark blue), interpolated on log1p(count)
RAMP_LOW = (222, 235, 247)
RAMP_HIGH = (8, 48, 107)

_SVG_HEAD = '<?xml version="1.0" encoding="UTF-8"?>\n'


def _f(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _open_svg(width: float, height: float) -> list:
    return [
        _SVG_HEAD,
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}" font-family="sans-serif">\n',
    ]


def with_metadata(svg: str, meta: Mapping) -> str:
    """Insert a comment with sorted key=value metadata after the XML prolog."""
    body = " ".join(f"{k}={meta[k]}" for k in sorted(meta)).replace("--", "- -")
    head, rest = svg.split("\n", 1)
    return f"{head}\n<!-- {body} -->\n{rest}"


# --------------------------------------------------------------------------
# Plutchik wheel
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WheelSpec:
    size: float = 420.0
    max_z: float = 6.0
    ring_halfwidth: float = SIGNIFICANCE
    palette: Mapping[str, str] = field(default_factory=lambda: dict(EMOTION_COLORS))
    neutral_fill: str = NEUTRAL_FILL
    title: str = ""

    @property
    def center(self) -> float:
        return self.size / 2.0

    @property
    def scale(self) -> float:
        """Pixels per unit of |z|."""
        return (self.size / 2.0 - 60.0) / self.max_z

    def radius_of(self, z: float) -> float:
        return self.scale * min(abs(z), self.max_z)


def petal_angle(k: int) -> float:
    """Direction of petal ``k`` in degrees, clockwise from 12 o'clock."""
    return 45.0 * k


def _polar(cx: float, cy: float, r: float, deg: float) -> tuple:
    a = math.radians(deg - 90.0)
    return cx + r * math.cos(a), cy + r * math.sin(a)


def _petal_path(cx: float, cy: float, length: float, deg: float) -> str:
    if length <= 0.0:
        return f"M {_f(cx)} {_f(cy)} Z"
    tip = _polar(cx, cy, length, deg)
    half = length * 0.5
    spread = math.degrees(math.atan2(length * 0.32, half))
    left = _polar(cx, cy, math.hypot(half, length * 0.32), deg - spread)
    right = _polar(cx, cy, math.hypot(half, length * 0.32), deg + spread)
    return (
        f"M {_f(cx)} {_f(cy)} Q {_f(left[0])} {_f(left[1])} {_f(tip[0])} {_f(tip[1])} "
        f"Q {_f(right[0])} {_f(right[1])} {_f(cx)} {_f(cy)} Z"
    )


def render_wheel(profile: EmotionProfile, spec: Optional[WheelSpec] = None) -> str:
    """Eight petals sized by |z|; colour only where the emotion is significant.

    The grey disc spans |z| <= ring_halfwidth. Negative z petals get a dashed
    outline; undefined z (zero-variance null) is a zero-length petal with a
    hatch mark.
    """
    spec = spec or WheelSpec()
    cx = cy = spec.center
    out = _open_svg(spec.size, spec.size)
    if spec.title:
        out.append(f"<title>{escape(spec.title)}</title>\n")
    out.append(f'<g class="wheel" data-scale="{spec.scale:.6f}" data-max-z="{spec.max_z:.6f}">\n')
    out.append(f'<rect x="0" y="0" width="{_f(spec.size)}" height="{_f(spec.size)}" fill="#ffffff"/>\n')
    ring_r = spec.radius_of(spec.ring_halfwidth)
    out.append(
        f'<circle class="ring" cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(ring_r)}" '
        f'data-z="{spec.ring_halfwidth:.6f}" fill="{RING_FILL}" fill-opacity="0.6" stroke="none"/>\n'
    )
    outer = spec.radius_of(spec.max_z)
    for k in range(len(EMOTIONS)):
        x, y = _polar(cx, cy, outer, petal_angle(k))
        out.append(
            f'<line class="spoke" x1="{_f(cx)}" y1="{_f(cy)}" x2="{_f(x)}" y2="{_f(y)}" '
            f'stroke="#eeeeee" stroke-width="1"/>\n'
        )
    for k, emotion in enumerate(EMOTIONS):
        z = profile.z[k]
        sig = bool(profile.significant[k])
        color = spec.palette[emotion]
        deg = petal_angle(k)
        length = 0.0 if z is None else spec.radius_of(z)
        fill = color if sig else spec.neutral_fill
        dash = ' stroke-dasharray="4 2"' if z is not None and z < 0 else ""
        zattr = "undefined" if z is None else f"{z:.6f}"
        out.append(
            f'<path class="petal" data-emotion="{emotion}" data-z="{zattr}" '
            f'data-length="{length:.6f}" data-significant="{int(sig)}" '
            f'd="{_petal_path(cx, cy, length, deg)}" fill="{fill}" stroke="{color}" stroke-width="1.5"{dash}/>\n'
        )
        if z is None:
            hx, hy = _polar(cx, cy, 12.0, deg)
            ax, ay = _polar(hx, hy, 5.0, deg - 90.0)
            bx, by = _polar(hx, hy, 5.0, deg + 90.0)
            out.append(
                f'<line class="hatch" data-emotion="{emotion}" x1="{_f(ax)}" y1="{_f(ay)}" '
                f'x2="{_f(bx)}" y2="{_f(by)}" stroke="{color}" stroke-width="2"/>\n'
            )
        lx, ly = _polar(cx, cy, outer + 22.0, deg)
        out.append(
            f'<text x="{_f(lx)}" y="{_f(ly)}" font-size="12" text-anchor="middle" '
            f'dominant-baseline="middle" fill="#333333">{emotion}</text>\n'
        )
    out.append("</g>\n</svg>\n")
    return "".join(out)


# --------------------------------------------------------------------------
# network
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LayoutSpec:
    seed: int = 42
    iterations: int = 300
    repulsion: float = 1.0  # multiplies the optimal distance k
    attraction: float = 1.0  # multiplies edge weights
    size: float = 640.0


def layout_positions(stems: Sequence[str], src, dst, w, layout: LayoutSpec) -> np.ndarray:
    """Fruchterman-Reingold positions in the unit square, fixed iteration count."""
    n = len(stems)
    rng = np.random.default_rng(layout.seed)
    pos = rng.random((n, 2))
    if n < 2:
        return np.full((n, 2), 0.5)
    k = layout.repulsion * math.sqrt(1.0 / n)
    weights = np.asarray(w, dtype=np.float64) * layout.attraction
    pos = _kernels.fr_layout(pos, np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64),
                             weights, layout.iterations, k, 0.1, _kernels.LAYOUT_GRID)
    lo = pos.min(axis=0)
    span = pos.max(axis=0) - lo
    span[span == 0] = 1.0
    return (pos - lo) / span


def render_network(frame: SemanticFrame, partition: Partition, layout: Optional[LayoutSpec] = None, title: str = "") -> str:
    layout = layout or LayoutSpec()
    stems = tuple(sorted(set(frame.neighbors) | {frame.target}))
    missing = [s for s in stems if s not in partition.assignment]
    if missing:
        raise ValueError(f"partition does not cover frame nodes: {missing[:5]}")
    index = {s: i for i, s in enumerate(stems)}
    src, dst, w = [], [], []
    for (a, b), (ws, wy) in frame.subgraph.edges.items():
        if a in index and b in index:
            src.append(index[a])
            dst.append(index[b])
            w.append(float(ws + wy))
    pos = layout_positions(stems, src, dst, w, layout)
    margin = 50.0
    inner = layout.size - 2 * margin
    xy = margin + pos * inner

    out = _open_svg(layout.size, layout.size)
    if title:
        out.append(f"<title>{escape(title)}</title>\n")
    out.append(f'<rect x="0" y="0" width="{_f(layout.size)}" height="{_f(layout.size)}" fill="#ffffff"/>\n')
    out.append('<g class="edges">\n')
    for p in range(len(src)):
        a, b = src[p], dst[p]
        width = 0.6 + math.log1p(w[p])
        out.append(
            f'<line x1="{_f(xy[a, 0])}" y1="{_f(xy[a, 1])}" x2="{_f(xy[b, 0])}" y2="{_f(xy[b, 1])}" '
            f'stroke="#999999" stroke-opacity="0.6" stroke-width="{_f(width)}"/>\n'
        )
    out.append("</g>\n<g class=\"nodes\">\n")
    for i, s in enumerate(stems):
        c = partition.assignment[s]
        color = COMMUNITY_COLORS[c % len(COMMUNITY_COLORS)]
        is_target = s == frame.target
        r = 11.0 if is_target else 6.0
        cls = "node target" if is_target else "node"
        stroke = ' stroke="#000000" stroke-width="2.5"' if is_target else ' stroke="#ffffff" stroke-width="1"'
        out.append(
            f'<circle class="{cls}" data-stem={quoteattr(s)} data-community="{c}" cx="{_f(xy[i, 0])}" '
            f'cy="{_f(xy[i, 1])}" r="{_f(r)}" fill="{color}"{stroke}/>\n'
        )
        weight = "bold" if is_target else "normal"
        out.append(
            f'<text x="{_f(xy[i, 0])}" y="{_f(xy[i, 1] - r - 3.0)}" font-size="11" font-weight="{weight}" '
            f'text-anchor="middle" fill="#222222">{escape(s)}</text>\n'
        )
    out.append("</g>\n</svg>\n")
    return "".join(out)


# --------------------------------------------------------------------------
# time series
# --------------------------------------------------------------------------

def render_timeseries(
    series: Sequence[tuple],
    threshold_band: float = SIGNIFICANCE,
    persistent: Optional[Mapping[str, bool]] = None,
    title: str = "",
    width: float = 720.0,
    height: float = 360.0,
    y_label: str = "z-score",
) -> str:
    """Line chart of (name, [(date, value-or-None), ...]) series.

    Persistent series use their palette colour, others are grey. A shaded
    band marks |y| <= threshold_band (skipped when the band is 0).
    """
    persistent = persistent or {}
    left, right, top, bottom = 60.0, 120.0, 30.0, 40.0
    pw, ph = width - left - right, height - top - bottom
    dates = sorted({d for _, pts in series for d, v in pts})
    values = [v for _, pts in series for _, v in pts if v is not None]
    if dates:
        d0, d1 = dates[0].toordinal(), dates[-1].toordinal()
    else:
        d0, d1 = 0, 1
    if d1 == d0:
        d1 = d0 + 1
    if threshold_band > 0:
        ymax = max([abs(v) for v in values] + [threshold_band * 1.5])
        ymin = -ymax
    else:
        ymin = min(values + [0.0])
        ymax = max(values + [1.0])
        if ymax == ymin:
            ymax = ymin + 1.0

    def px(d: dt.date) -> float:
        return left + (d.toordinal() - d0) / (d1 - d0) * pw

    def py(v: float) -> float:
        return top + (ymax - v) / (ymax - ymin) * ph

    out = _open_svg(width, height)
    if title:
        out.append(f"<title>{escape(title)}</title>\n")
    out.append(f'<rect x="0" y="0" width="{_f(width)}" height="{_f(height)}" fill="#ffffff"/>\n')
    if threshold_band > 0:
        out.append(
            f'<rect class="band" x="{_f(left)}" y="{_f(py(threshold_band))}" width="{_f(pw)}" '
            f'height="{_f(py(-threshold_band) - py(threshold_band))}" fill="{RING_FILL}" fill-opacity="0.5"/>\n'
        )
        for b in (threshold_band, -threshold_band):
            out.append(
                f'<line class="threshold" x1="{_f(left)}" y1="{_f(py(b))}" x2="{_f(left + pw)}" y2="{_f(py(b))}" '
                f'stroke="#888888" stroke-dasharray="3 3"/>\n'
            )
    out.append(
        f'<g class="axes" stroke="#333333"><line x1="{_f(left)}" y1="{_f(top + ph)}" x2="{_f(left + pw)}" '
        f'y2="{_f(top + ph)}"/><line x1="{_f(left)}" y1="{_f(top)}" x2="{_f(left)}" y2="{_f(top + ph)}"/></g>\n'
    )
    for v in (ymin, 0.0 if ymin < 0 < ymax else (ymin + ymax) / 2, ymax):
        out.append(
            f'<text x="{_f(left - 6)}" y="{_f(py(v))}" font-size="10" text-anchor="end" '
            f'dominant-baseline="middle">{_f(v)}</text>\n'
        )
    if dates:
        for d in (dates[0], dates[-1]):
            out.append(
                f'<text x="{_f(px(d))}" y="{_f(top + ph + 16)}" font-size="10" text-anchor="middle">{d.isoformat()}</text>\n'
            )
    out.append(
        f'<text x="14" y="{_f(top + ph / 2)}" font-size="11" text-anchor="middle" '
        f'transform="rotate(-90 14 {_f(top + ph / 2)})">{escape(y_label)}</text>\n'
    )
    fallback = 0
    for row, (name, pts) in enumerate(series):
        is_p = bool(persistent.get(name, False))
        if name in EMOTION_COLORS:
            base = EMOTION_COLORS[name]
        else:
            base = COMMUNITY_COLORS[fallback % len(COMMUNITY_COLORS)]
            fallback += 1
        color = base if is_p else MUTED
        segments, cur = [], []
        for d, v in pts:
            if v is None:
                if cur:
                    segments.append(cur)
                cur = []
            else:
                cur.append(f"{_f(px(d))},{_f(py(v))}")
        if cur:
            segments.append(cur)
        out.append(f'<g class="series" data-name={quoteattr(name)} data-persistent="{int(is_p)}" stroke="{color}">\n')
        for seg in segments:
            out.append(f'<polyline fill="none" stroke-width="{"2" if is_p else "1.2"}" points="{" ".join(seg)}"/>\n')
        out.append("</g>\n")
        ly = top + 14.0 * (row + 1)
        out.append(
            f'<text x="{_f(left + pw + 8)}" y="{_f(ly)}" font-size="11" fill="{color}">{escape(name)}</text>\n'
        )
    out.append("</svg>\n")
    return "".join(out)


# --------------------------------------------------------------------------
# heatmap
# --------------------------------------------------------------------------

def ramp_color(count: int, max_count: int) -> str:
    """Linear RGB blend on log1p(count)/log1p(max_count); monotone in count."""
    t = 1.0 if max_count <= 0 else math.log1p(count) / math.log1p(max_count)
    rgb = [round(lo + (hi - lo) * t) for lo, hi in zip(RAMP_LOW, RAMP_HIGH)]
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _edge_label(e: float) -> str:
    return str(int(e)) if float(e).is_integer() else f"{e:g}"


def render_heatmap(bins: HeatmapBins, x_label: str = "x", y_label: str = "y", title: str = "") -> str:
    """Tiles for non-empty bins; x bins left to right, y bins bottom to top."""
    nx, ny = bins.counts.shape
    if len(bins.x_edges) != nx + 1 or len(bins.y_edges) != ny + 1:
        raise ValueError("bin edges do not match the count matrix")
    cell = 28.0
    left, top, bottom, right = 70.0, 30.0, 60.0, 20.0
    width = left + nx * cell + right
    height = top + ny * cell + bottom
    max_count = int(bins.counts.max()) if bins.counts.size else 0
    out = _open_svg(width, height)
    if title:
        out.append(f"<title>{escape(title)}</title>\n")
    out.append(f'<rect x="0" y="0" width="{_f(width)}" height="{_f(height)}" fill="#ffffff"/>\n')
    out.append(
        f'<rect class="frame" x="{_f(left)}" y="{_f(top)}" width="{_f(nx * cell)}" height="{_f(ny * cell)}" '
        f'fill="none" stroke="#cccccc"/>\n'
    )
    for i in range(nx):
        for j in range(ny):
            c = int(bins.counts[i, j])
            if c == 0:
                continue
            x = left + i * cell
            y = top + (ny - 1 - j) * cell
            out.append(
                f'<rect class="tile" data-i="{i}" data-j="{j}" data-count="{c}" x="{_f(x)}" y="{_f(y)}" '
                f'width="{_f(cell)}" height="{_f(cell)}" fill="{ramp_color(c, max_count)}"/>\n'
            )
    for i, e in enumerate(bins.x_edges):
        x = left + i * cell
        out.append(
            f'<text x="{_f(x)}" y="{_f(top + ny * cell + 14)}" font-size="9" text-anchor="middle">{_edge_label(e)}</text>\n'
        )
    for j, e in enumerate(bins.y_edges):
        y = top + (ny - j) * cell
        out.append(
            f'<text x="{_f(left - 5)}" y="{_f(y)}" font-size="9" text-anchor="end" dominant-baseline="middle">{_edge_label(e)}</text>\n'
        )
    out.append(
        f'<text x="{_f(left + nx * cell / 2)}" y="{_f(height - 14)}" font-size="11" text-anchor="middle">{escape(x_label)}</text>\n'
    )
    out.append(
        f'<text x="16" y="{_f(top + ny * cell / 2)}" font-size="11" text-anchor="middle" '
        f'transform="rotate(-90 16 {_f(top + ny * cell / 2)})">{escape(y_label)}</text>\n'
    )
    out.append("</svg>\n")
    return "".join(out)
