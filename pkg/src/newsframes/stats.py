"""Corpus-level statistics: share correlation, log-binned heatmaps,
prevalence curves, moving averages and platform share summaries."""

from __future__ import annotations

import csv
import datetime as dt
import io
import math
import statistics
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats as sps

from .corpus import OUTLET_CLASSES, ArticleSet, match_keyword

PLATFORMS = ("twitter", "facebook")


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    p_two_sided: Optional[float]
    n: int
    method: str = "t"


def pearson(xs: Sequence[float], ys: Sequence[float], method: str = "t", permutations: int = 10_000, seed: int = 0) -> CorrelationResult:
    """Product-moment r with a two-sided p-value.

    ``method="t"`` uses the Student-t reference with n-2 degrees of freedom;
    ``method="permutation"`` shuffles ``ys`` with a seeded generator.
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    n = x.size
    if n < 3:
        raise ValueError("pearson needs at least 3 points")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("zero variance input")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if method == "t":
        if abs(r) == 1.0:
            p = 0.0
        else:
            t = r * math.sqrt((n - 2) / (1.0 - r * r))
            p = float(2.0 * sps.t.sf(abs(t), n - 2))
    elif method == "permutation":
        rng = np.random.default_rng(seed)
        norm = math.sqrt(sxx * syy)
        hits = 0
        for _ in range(permutations):
            rp = float(dx @ rng.permutation(dy)) / norm
            if abs(rp) >= abs(r) - 1e-12:
                hits += 1
        p = (hits + 1) / (permutations + 1)
    else:
        raise ValueError(f"unknown method {method!r}")
    return CorrelationResult(r, min(1.0, p), n, method)


# --------------------------------------------------------------------------
# heatmap
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class HeatmapBins:
    """Bin ``0`` is the underflow bin [0, 1); bin ``k >= 1`` is
    [base**(k-1), base**k)."""

    x_edges: tuple
    y_edges: tuple
    counts: np.ndarray
    base: float

    def total(self) -> int:
        return int(self.counts.sum())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["# base", repr(self.base)])
        w.writerow(["# x_edges"] + [repr(e) for e in self.x_edges])
        w.writerow(["# y_edges"] + [repr(e) for e in self.y_edges])
        for row in self.counts.tolist():
            w.writerow(row)
        return buf.getvalue()


def geometric_edges(max_value: float, base: float) -> tuple:
    edges = [0.0, 1.0]
    while edges[-1] <= max_value:
        edges.append(edges[-1] * base)
    return tuple(edges)


def log_bin_heatmap(pairs, base: float = 2.0) -> HeatmapBins:
    """2-D histogram of non-negative (x, y) counts on geometric bins."""
    if base <= 1.0:
        raise ValueError("base must exceed 1")
    arr = np.asarray(list(pairs), dtype=np.float64).reshape(-1, 2)
    if (arr < 0).any():
        raise ValueError("counts must be non-negative")
    xmax = arr[:, 0].max() if arr.size else 0.0
    ymax = arr[:, 1].max() if arr.size else 0.0
    xe = geometric_edges(xmax, base)
    ye = geometric_edges(ymax, base)
    counts = np.zeros((len(xe) - 1, len(ye) - 1), dtype=np.int64)
    if arr.size:
        ix = np.searchsorted(np.asarray(xe), arr[:, 0], side="right") - 1
        iy = np.searchsorted(np.asarray(ye), arr[:, 1], side="right") - 1
        np.add.at(counts, (ix, iy), 1)
    return HeatmapBins(xe, ye, counts, float(base))


# --------------------------------------------------------------------------
# time series
# --------------------------------------------------------------------------

def moving_average(series: Sequence[tuple], window: int) -> list:
    """Trailing mean over up to ``window`` most recent points.

    Means are computed exactly and rounded once, so a constant series maps to
    itself.
    """
    if window < 1:
        raise ValueError("window must be positive")
    dates = [d for d, _ in series]
    if any(b <= a for a, b in zip(dates, dates[1:])):
        raise ValueError("series dates must be strictly increasing")
    vals = [float(v) for _, v in series]
    out = []
    for k, d in enumerate(dates):
        chunk = vals[max(0, k - window + 1): k + 1]
        out.append((d, float(statistics.mean(chunk))))
    return out


@dataclass(frozen=True)
class PrevalenceSeries:
    target: str
    outlet: Optional[str]
    points: tuple  # ((date, fraction), ...)
    smoothed: tuple
    totals: tuple  # ((date, mentioning, total), ...)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["date", "mentioning", "total", "fraction", "smoothed"])
        for (d, m, t), (_, f), (_, s) in zip(self.totals, self.points, self.smoothed):
            w.writerow([d.isoformat(), m, t, repr(f), repr(s)])
        return buf.getvalue()


def prevalence_series(
    articles: ArticleSet,
    target: str,
    field: str = "either",
    outlet: Optional[str] = None,
    window: int = 7,
    language: str = "italian",
) -> PrevalenceSeries:
    """Daily fraction of (outlet-class) articles mentioning ``target``.

    Days with no articles are gaps, not zeros.
    """
    if not len(articles):
        raise ValueError("empty article set")
    per_day: dict = {}
    for a in articles:
        if outlet is not None and a.outlet_class != outlet:
            continue
        hit = (
            (field in ("title", "either", "both") and match_keyword(a.title, target, language))
            or (field in ("body", "either", "both") and match_keyword(a.body, target, language))
        )
        m, t = per_day.get(a.date, (0, 0))
        per_day[a.date] = (m + int(hit), t + 1)
    days = sorted(per_day)
    points = tuple((d, per_day[d][0] / per_day[d][1]) for d in days)
    smoothed = tuple(moving_average(list(points), window)) if points else ()
    totals = tuple((d, per_day[d][0], per_day[d][1]) for d in days)
    return PrevalenceSeries(target, outlet, points, smoothed, totals)


# --------------------------------------------------------------------------
# share summaries
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ShareSummary:
    totals: dict  # (platform, outlet_class) -> int
    alternative_pct: dict  # platform -> percent of total, None if total is 0
    weekly: tuple  # ((iso_year, iso_week, week_index, platform, outlet_class, total), ...)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["platform", "outlet_class", "total"])
        for (p, c), v in sorted(self.totals.items()):
            w.writerow([p, c, v])
        w.writerow([])
        w.writerow(["platform", "alternative_pct"])
        for p in PLATFORMS:
            v = self.alternative_pct[p]
            w.writerow([p, "" if v is None else repr(v)])
        w.writerow([])
        w.writerow(["iso_year", "iso_week", "week_index", "platform", "outlet_class", "total"])
        for row in self.weekly:
            w.writerow(row)
        return buf.getvalue()


def platform_share_summary(articles: ArticleSet) -> ShareSummary:
    """Share totals per platform and outlet class, plus weekly totals.

    Weeks are keyed by ISO week; ``week_index`` counts weeks from the one
    containing the start of the observation window (1-based).
    """
    totals = {(p, c): 0 for p in PLATFORMS for c in OUTLET_CLASSES}
    weekly: dict = {}
    window = articles.observation_window
    start_monday = None
    if window is not None and window[0] is not None:
        start_monday = window[0] - dt.timedelta(days=window[0].weekday())
    for a in articles:
        iso = a.date.isocalendar()
        monday = a.date - dt.timedelta(days=a.date.weekday())
        idx = (monday - start_monday).days // 7 + 1
        for p, v in (("twitter", a.shares_twitter), ("facebook", a.shares_facebook)):
            totals[(p, a.outlet_class)] += v
            key = (iso[0], iso[1], idx, p, a.outlet_class)
            weekly[key] = weekly.get(key, 0) + v
    pct = {}
    for p in PLATFORMS:
        tot = sum(totals[(p, c)] for c in OUTLET_CLASSES)
        pct[p] = None if tot == 0 else 100.0 * totals[(p, "alternative")] / tot
    rows = tuple(k + (v,) for k, v in sorted(weekly.items()))
    return ShareSummary(totals, pct, rows)
