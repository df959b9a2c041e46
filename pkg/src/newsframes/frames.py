"""Semantic frames and emotion profiles against a random-lexicon null model."""

from __future__ import annotations

import csv
import datetime as dt
import io
import statistics
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from . import _kernels
from .corpus import ArticleSet, filter_articles
from .lexicon import EMOTIONS, EmotionLexicon, SynonymMap, emotions_of
from .netbuild import BuildConfig, NetworkError, Tfmn, add_synonym_layer, build_tfmn, cooccurrence_parse
from .seeding import derive_seed

# Two-sided 5% normal threshold; the only place this number appears.
SIGNIFICANCE = 1.96
DEFAULT_SAMPLE_COUNT = 300


class EmptyFrameError(ValueError):
    """The target has no usable neighbourhood in the selected texts."""


def is_significant(z: Optional[float]) -> bool:
    return z is not None and abs(z) >= SIGNIFICANCE


# --------------------------------------------------------------------------
# frames
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SemanticFrame:
    target: str
    neighbors: frozenset
    subgraph: Tfmn
    radius: int = 1

    @property
    def direct_neighbors(self) -> frozenset:
        adj = self.subgraph.adjacency("combined")
        return frozenset(adj.get(self.target, {}))


def extract_frame(net: Tfmn, target: str, radius: int = 1) -> SemanticFrame:
    """Stems within ``radius`` hops of ``target`` over both layers."""
    if radius < 1:
        raise ValueError("radius must be positive")
    if target not in net.nodes:
        raise EmptyFrameError(f"target {target!r} is not a node of the network")
    adj = net.adjacency("combined")
    seen = {target}
    frontier = [target]
    for _ in range(radius):
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
        if not frontier:
            break
    return SemanticFrame(target, frozenset(seen - {target}), net.induced(seen), radius)


# --------------------------------------------------------------------------
# counting and the null model
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EmotionCounts:
    counts: tuple
    covered_words: int
    frame_size: int

    def __getitem__(self, emotion: str) -> int:
        return self.counts[EMOTIONS.index(emotion)]


def emotion_counts(frame: SemanticFrame, lex: EmotionLexicon) -> EmotionCounts:
    """Neighbours (target excluded) carrying each emotion; one vote per word."""
    counts = [0] * len(EMOTIONS)
    covered = 0
    for s in frame.neighbors:
        if s in lex:
            covered += 1
            for e in emotions_of(lex, s):
                counts[EMOTIONS.index(e)] += 1
    return EmotionCounts(tuple(counts), covered, len(frame.neighbors))


@dataclass(frozen=True)
class NullModel:
    sample_count: int
    sample_size: int
    seed: int
    mu: tuple
    sigma: tuple


def draw_null_samples(vocabulary_size: int, sample_size: int, sample_count: int, seed: int) -> np.ndarray:
    """Row ``i`` is drawn without replacement by a generator spawned as child ``i``
    of ``SeedSequence(seed)``, so samples can be produced in any order."""
    children = np.random.SeedSequence(seed % 2**64).spawn(sample_count)
    out = np.empty((sample_count, sample_size), dtype=np.int64)
    for i, child in enumerate(children):
        out[i] = np.random.default_rng(child).choice(vocabulary_size, size=sample_size, replace=False)
    return out


def build_null_model(lex: EmotionLexicon, sample_size: int, sample_count: int = DEFAULT_SAMPLE_COUNT, seed: int = 0) -> NullModel:
    if sample_size < 1:
        raise ValueError("sample_size must be positive")
    if sample_size > lex.vocabulary_size:
        raise ValueError(
            f"sample_size {sample_size} exceeds lexicon vocabulary of {lex.vocabulary_size}"
        )
    if sample_count < 2:
        raise ValueError("sample_count must be at least 2")
    samples = draw_null_samples(lex.vocabulary_size, sample_size, sample_count, seed)
    counts = _kernels.sample_counts(samples, lex.membership()).astype(np.float64)
    mu = counts.mean(axis=0)
    sigma = counts.std(axis=0)
    return NullModel(sample_count, sample_size, seed, tuple(mu.tolist()), tuple(sigma.tolist()))


@dataclass(frozen=True)
class EmotionProfile:
    counts: tuple
    mu: tuple
    sigma: tuple
    z: tuple  # None where sigma == 0
    significant: tuple
    covered_words: int
    metadata: Mapping = field(default_factory=dict, compare=False)

    def z_of(self, emotion: str) -> Optional[float]:
        return self.z[EMOTIONS.index(emotion)]

    def is_significant(self, emotion: str) -> bool:
        return self.significant[EMOTIONS.index(emotion)]

    def significant_emotions(self) -> tuple:
        return tuple(e for e, s in zip(EMOTIONS, self.significant) if s)

    def to_dict(self) -> dict:
        emotions = {
            e: {
                "count": self.counts[k],
                "mu": self.mu[k],
                "sigma": self.sigma[k],
                "z": self.z[k],
                "significant": self.significant[k],
            }
            for k, e in enumerate(EMOTIONS)
        }
        return {"emotions": emotions, "covered_words": self.covered_words, "metadata": dict(self.metadata)}


def zscores(counts: EmotionCounts, null: NullModel, metadata: Optional[Mapping] = None) -> EmotionProfile:
    if counts.covered_words != null.sample_size:
        raise ValueError(
            f"frame covers {counts.covered_words} lexicon words but null model sample_size is {null.sample_size}"
        )
    z = []
    for c, mu, sd in zip(counts.counts, null.mu, null.sigma):
        z.append(None if sd == 0.0 else (c - mu) / sd)
    sig = tuple(is_significant(v) for v in z)
    meta = {"seed": null.seed, "sample_count": null.sample_count, "sample_size": null.sample_size}
    meta.update(metadata or {})
    return EmotionProfile(tuple(counts.counts), null.mu, null.sigma, tuple(z), sig, counts.covered_words, meta)


# --------------------------------------------------------------------------
# corpus-level profiles
# --------------------------------------------------------------------------

_MENTION_FIELD = {"title": "title", "body": "body", "both": "either"}


def field_documents(articles: ArticleSet, field_: str, config: BuildConfig, parses: Optional[Mapping] = None) -> list:
    """Parsed documents for the chosen field(s); ``both`` yields title and body
    as separate documents so sentences never span the two."""
    if field_ not in _MENTION_FIELD:
        raise ValueError(f"unknown field {field_!r}")
    parts = ("title", "body") if field_ == "both" else (field_,)
    docs = []
    for a in articles:
        for p in parts:
            if config.mode == "dependency":
                if parses is None or (a.id, p) not in parses:
                    raise NetworkError(f"dependency mode needs a CoNLL-U parse for ({a.id!r}, {p!r})")
                docs.append(parses[(a.id, p)])
            else:
                docs.append(cooccurrence_parse(a.text(p), config))
    return docs


def concept_network(
    articles: ArticleSet,
    target: str,
    field_: str,
    config: BuildConfig,
    lex: Optional[EmotionLexicon],
    syn: Optional[SynonymMap],
    parses: Optional[Mapping] = None,
) -> tuple:
    """(mentioning articles, network) for texts mentioning ``target``."""
    mentioning = filter_articles(articles, keyword=target, field=_MENTION_FIELD[field_], language=config.language)
    if not len(mentioning):
        raise EmptyFrameError(f"empty frame: no article mentions {target!r} in {field_}")
    net = build_tfmn(field_documents(mentioning, field_, config, parses), config, lex)
    if syn is not None:
        net = add_synonym_layer(net, syn)
    return mentioning, net


def profile_frame(frame: SemanticFrame, lex: EmotionLexicon, seed: int, sample_count: int = DEFAULT_SAMPLE_COUNT, metadata: Optional[Mapping] = None) -> EmotionProfile:
    counts = emotion_counts(frame, lex)
    if counts.covered_words == 0:
        raise EmptyFrameError(f"empty frame: no neighbour of {frame.target!r} is in the lexicon")
    null = build_null_model(lex, counts.covered_words, sample_count, seed)
    return zscores(counts, null, metadata)


def profile_concept(
    articles: ArticleSet,
    target: str,
    field: str,
    config: BuildConfig,
    lex: EmotionLexicon,
    syn: Optional[SynonymMap],
    seed: int,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
    parses: Optional[Mapping] = None,
) -> EmotionProfile:
    """Radius-1 frame profile of ``target`` over the chosen field of the
    articles mentioning it."""
    _, net = concept_network(articles, target, field, config, lex, syn, parses)
    if target not in net.nodes:
        raise EmptyFrameError(f"empty frame: {target!r} has no neighbours in {field}")
    frame = extract_frame(net, target, 1)
    meta = {"target": target, "field": field}
    return profile_frame(frame, lex, seed, sample_count, meta)


# --------------------------------------------------------------------------
# temporal profiles
# --------------------------------------------------------------------------

def group_key(day: dt.date, grouping: str) -> dt.date:
    if grouping == "day":
        return day
    if grouping == "week":
        return day - dt.timedelta(days=day.weekday())
    raise ValueError(f"unknown grouping {grouping!r}")


def rolling_mean_by_date(points: list, window: int, step: dt.timedelta) -> list:
    """Trailing mean over the last ``window`` calendar groups.

    ``points`` is a date-sorted list of (date, value-or-None); missing groups
    and None values simply do not contribute, and the head is not padded.
    """
    out = []
    for k, (d, _) in enumerate(points):
        lo = d - step * (window - 1)
        vals = [v for (dd, v) in points[: k + 1] if dd >= lo and v is not None]
        out.append(float(statistics.mean(vals)) if vals else None)
    return out


@dataclass(frozen=True)
class TemporalProfile:
    target: str
    grouping: str
    rolling_window: int
    points: tuple  # ((date, EmotionProfile), ...)
    rolled: tuple  # per point, tuple of 8 Optional[float]
    persistent: tuple  # 8 bools

    def series(self, emotion: str, rolled: bool = True) -> list:
        k = EMOTIONS.index(emotion)
        if rolled:
            return [(d, r[k]) for (d, _), r in zip(self.points, self.rolled)]
        return [(d, p.z[k]) for d, p in self.points]

    def is_persistent(self, emotion: str) -> bool:
        return self.persistent[EMOTIONS.index(emotion)]


def persistence_flags(rolled: list) -> tuple:
    flags = []
    for k in range(len(EMOTIONS)):
        vals = [r[k] for r in rolled if r[k] is not None]
        hits = sum(1 for v in vals if is_significant(v))
        flags.append(bool(vals) and 2 * hits >= len(vals))
    return tuple(flags)


def temporal_profiles(
    articles: ArticleSet,
    target: str,
    field: str,
    grouping: str,
    rolling_window: int,
    config: BuildConfig,
    lex: EmotionLexicon,
    syn: Optional[SynonymMap],
    seed: int,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
    parses: Optional[Mapping] = None,
) -> TemporalProfile:
    if rolling_window < 1:
        raise ValueError("rolling_window must be >= 1")
    groups: dict = {}
    for a in articles:
        groups.setdefault(group_key(a.date, grouping), []).append(a)
    points = []
    for key in sorted(groups):
        subset = articles.subset(groups[key])
        try:
            prof = profile_concept(
                subset, target, field, config, lex, syn,
                derive_seed(seed, "temporal", key.isoformat()), sample_count, parses,
            )
        except EmptyFrameError:
            continue
        points.append((key, prof))
    if not points:
        raise EmptyFrameError(f"empty frame: no group mentions {target!r} in {field}")
    step = dt.timedelta(days=1 if grouping == "day" else 7)
    per_emotion = [
        rolling_mean_by_date([(d, p.z[k]) for d, p in points], rolling_window, step)
        for k in range(len(EMOTIONS))
    ]
    rolled = [tuple(per_emotion[k][i] for k in range(len(EMOTIONS))) for i in range(len(points))]
    return TemporalProfile(target, grouping, rolling_window, tuple(points), tuple(rolled), persistence_flags(rolled))


def temporal_to_csv(tp: TemporalProfile) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["date", "emotion", "z_raw", "z_rolled", "significant"])
    for (d, prof), rolled in zip(tp.points, tp.rolled):
        for k, e in enumerate(EMOTIONS):
            zr = prof.z[k]
            zs = rolled[k]
            w.writerow([
                d.isoformat(), e,
                "" if zr is None else repr(float(zr)),
                "" if zs is None else repr(float(zs)),
                int(is_significant(zs)),
            ])
    return buf.getvalue()

