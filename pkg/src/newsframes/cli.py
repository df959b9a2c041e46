"""Command-line entry point.

Every subcommand reads its inputs, writes files under ``--out`` with stable
names, and prints a one-line JSON summary. Settings come from an optional TOML
config file (``--config`` or ``$NEWSFRAMES_CONFIG``) with flags taking
precedence. Exit codes: 0 ok, 1 invalid input or configuration, 2 runtime
failure.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import hashlib
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from . import _kernels
from .corpus import OUTLET_CLASSES, ArticleSet, CorpusError, filter_articles, ingest_articles, stem
from .frames import (
    DEFAULT_SAMPLE_COUNT, EmotionProfile, EmptyFrameError, concept_network, extract_frame,
    profile_frame, temporal_profiles, temporal_to_csv,
)
from .graphstats import Partition, frame_diff, louvain, modularity
from .lexicon import EMOTIONS, LexiconError, bundled_path, load_emotion_lexicon, load_synonyms
from .netbuild import BuildConfig, NetworkError, edges_tsv, nodes_tsv, parse_conllu, tfmn_from_dict, tfmn_to_dict
from .render import LayoutSpec, WheelSpec, render_heatmap, render_network, render_timeseries, render_wheel, with_metadata
from .seeding import derive_seed
from .stats import HeatmapBins, log_bin_heatmap, pearson, platform_share_summary, prevalence_series

CONFIG_ENV = "NEWSFRAMES_CONFIG"
COMMANDS = ("ingest", "build", "frame", "profile", "timeline", "communities", "diff", "correlate", "prevalence", "render", "pipeline")


class ValidationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


@dataclass
class RunConfig:
    corpus: Optional[str] = None
    lexicon: str = field(default_factory=lambda: str(bundled_path("lexicon_it.tsv")))
    synonyms: Optional[str] = field(default_factory=lambda: str(bundled_path("synonyms_it.tsv")))
    mode: str = "cooccurrence"
    max_tree_distance: int = 3
    window: int = 4
    language: str = "italian"
    conllu_dir: Optional[str] = None
    targets: list = field(default_factory=lambda: ["vaccin"])
    split_date: Optional[str] = None
    seed: int = 0
    sample_count: int = DEFAULT_SAMPLE_COUNT
    out: str = "out"

    def build_config(self) -> BuildConfig:
        return BuildConfig(
            mode=self.mode, max_tree_distance=self.max_tree_distance, window=self.window,
            stopwords=self.language, language=self.language,
        )

    def config_hash(self) -> str:
        d = asdict(self)
        d.pop("out")
        blob = json.dumps(d, sort_keys=True, ensure_ascii=False).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()[:16]

    def validate(self, need_corpus: bool = True) -> None:
        paths = [("lexicon", self.lexicon)]
        if self.synonyms:
            paths.append(("synonyms", self.synonyms))
        if need_corpus:
            if not self.corpus:
                raise ValidationError("no corpus given (use --corpus or the config file)")
            paths.append(("corpus", self.corpus))
        if self.mode == "dependency":
            if not self.conllu_dir:
                raise ValidationError("dependency mode needs --conllu-dir")
            paths.append(("conllu_dir", self.conllu_dir))
        for name, p in paths:
            if not Path(p).exists():
                raise ValidationError(f"{name} path does not exist: {p}")
        if self.split_date:
            try:
                dt.date.fromisoformat(self.split_date)
            except ValueError:
                raise ValidationError(f"split date is not ISO-8601: {self.split_date}") from None
        try:
            self.build_config()
        except NetworkError as exc:
            raise ValidationError(str(exc)) from None


_CONFIG_KEYS = {f for f in RunConfig.__dataclass_fields__}


def load_config(args) -> RunConfig:
    cfg = RunConfig()
    path = args.config or os.environ.get(CONFIG_ENV)
    if path:
        if not Path(path).exists():
            raise ValidationError(f"config path does not exist: {path}")
        with open(path, "rb") as fh:
            try:
                data = tomllib.load(fh)
            except tomllib.TOMLDecodeError as exc:
                raise ValidationError(f"config {path}: {exc}") from None
        for k, v in data.items():
            if k not in _CONFIG_KEYS:
                raise ValidationError(f"config {path}: unknown key {k!r}")
            setattr(cfg, k, v)
    for k in _CONFIG_KEYS:
        v = getattr(args, k, None)
        if v is not None:
            setattr(cfg, k, v)
    if isinstance(cfg.targets, str):
        cfg.targets = [cfg.targets]
    return cfg


# --------------------------------------------------------------------------
# shared state for a run
# --------------------------------------------------------------------------

class Run:
    def __init__(self, cfg: RunConfig, command: str):
        self.cfg = cfg
        self.command = command
        self.out = Path(cfg.out)
        self.outputs: list = []
        self.notes: list = []
        self._articles = None
        self._lex = None
        self._syn = None
        self._parses = None

    @property
    def meta(self) -> dict:
        return {"config_hash": self.cfg.config_hash(), "seed": self.cfg.seed}

    @property
    def build(self) -> BuildConfig:
        return self.cfg.build_config()

    @property
    def articles(self) -> ArticleSet:
        if self._articles is None:
            try:
                self._articles = ingest_articles(self.cfg.corpus)
            except CorpusError as exc:
                raise ValidationError(f"corpus {self.cfg.corpus}: {exc}") from None
        return self._articles

    @property
    def lex(self):
        if self._lex is None:
            try:
                self._lex = load_emotion_lexicon(self.cfg.lexicon, self.cfg.language)
            except LexiconError as exc:
                raise ValidationError(f"lexicon {self.cfg.lexicon}: {exc}") from None
        return self._lex

    @property
    def syn(self):
        if self._syn is None and self.cfg.synonyms:
            try:
                self._syn = load_synonyms(self.cfg.synonyms, self.cfg.language)
            except LexiconError as exc:
                raise ValidationError(f"synonyms {self.cfg.synonyms}: {exc}") from None
        return self._syn

    @property
    def parses(self):
        if self.cfg.mode != "dependency":
            return None
        if self._parses is None:
            self._parses = {}
            for a in self.articles:
                for part in ("title", "body"):
                    p = Path(self.cfg.conllu_dir) / f"{a.id}.{part}.conllu"
                    if p.exists():
                        try:
                            self._parses[(a.id, part)] = parse_conllu(p, self.cfg.language)
                        except NetworkError as exc:
                            raise ValidationError(str(exc)) from None
        return self._parses

    def target_stem(self, t: str) -> str:
        return stem(t, self.cfg.language)

    # writers ---------------------------------------------------------------

    def _path(self, name: str) -> Path:
        self.out.mkdir(parents=True, exist_ok=True)
        p = self.out / name
        self.outputs.append(name)
        return p

    def write_json(self, name: str, payload: dict) -> None:
        payload = dict(payload)
        payload["metadata"] = {**payload.get("metadata", {}), **self.meta}
        self._path(name).write_text(json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=1) + "\n", encoding="utf-8")

    def write_text(self, name: str, text: str) -> None:
        header = f"# config_hash={self.meta['config_hash']} seed={self.meta['seed']}\n"
        self._path(name).write_text(header + text, encoding="utf-8")

    def write_svg(self, name: str, svg: str) -> None:
        self._path(name).write_text(with_metadata(svg, self.meta), encoding="utf-8")

    def summary(self, **extra) -> str:
        d = {"command": self.command, "status": "ok", "outputs": self.outputs, **self.meta, **extra}
        if self.notes:
            d["notes"] = self.notes
        return json.dumps(d, ensure_ascii=False, sort_keys=True)


def _tag(*parts) -> str:
    return "_".join(str(p) for p in parts if p not in (None, ""))


def _date_range(args):
    lo = dt.date.fromisoformat(args.since) if getattr(args, "since", None) else None
    hi = dt.date.fromisoformat(args.until) if getattr(args, "until", None) else None
    return (lo, hi) if (lo or hi) else None


def _subset(run: Run, outlet: Optional[str], dates=None) -> ArticleSet:
    return filter_articles(run.articles, outlet=outlet, dates=dates, language=run.cfg.language)


def _frame(run: Run, articles, target: str, field_: str, radius: int = 1):
    _, net = concept_network(articles, target, field_, run.build, run.lex, run.syn, run.parses)
    if target not in net.nodes:
        raise EmptyFrameError(f"empty frame: {target!r} has no neighbours in {field_}")
    return net, extract_frame(net, target, radius)


def _frame_payload(frame, target, field_, outlet) -> dict:
    return {
        "target": target,
        "field": field_,
        "outlet": outlet,
        "radius": frame.radius,
        "neighbors": sorted(frame.neighbors),
        "subgraph": tfmn_to_dict(frame.subgraph),
    }


def _profile_payload(prof: EmotionProfile, outlet) -> dict:
    d = prof.to_dict()
    d["metadata"]["outlet"] = outlet
    return d


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_ingest(run: Run, args) -> dict:
    arts = run.articles
    win = arts.observation_window
    run.write_json("ingest_summary.json", {
        "articles": len(arts),
        "counts": arts.counts_by_outlet(),
        "window": [win[0].isoformat(), win[1].isoformat()] if win else None,
    })
    return {"articles": len(arts)}


def cmd_build(run: Run, args) -> dict:
    arts = _subset(run, args.outlet, _date_range(args))
    if args.target:
        _, net = concept_network(arts, run.target_stem(args.target), args.field, run.build, run.lex, run.syn, run.parses)
    else:
        from .frames import field_documents
        from .netbuild import add_synonym_layer, build_tfmn
        net = build_tfmn(field_documents(arts, args.field, run.build, run.parses), run.build, run.lex)
        if run.syn is not None:
            net = add_synonym_layer(net, run.syn)
    tag = _tag("tfmn", args.target, args.field, args.outlet or "all")
    run.write_json(f"{tag}.json", tfmn_to_dict(net))
    run.write_text(f"{tag}_edges.tsv", edges_tsv(net))
    run.write_text(f"{tag}_nodes.tsv", nodes_tsv(net))
    return {"nodes": len(net.nodes), "edges": len(net.edges)}


def cmd_frame(run: Run, args) -> dict:
    target = run.target_stem(args.target)
    arts = _subset(run, args.outlet, _date_range(args))
    _, frame = _frame(run, arts, target, args.field, args.radius)
    run.write_json(f"{_tag('frame', target, args.field, args.outlet or 'all')}.json",
                   _frame_payload(frame, target, args.field, args.outlet))
    return {"neighbors": len(frame.neighbors)}


def cmd_profile(run: Run, args) -> dict:
    target = run.target_stem(args.target)
    arts = _subset(run, args.outlet, _date_range(args))
    _, frame = _frame(run, arts, target, args.field, 1)
    seed = derive_seed(run.cfg.seed, "profile", target, args.field, args.outlet or "all")
    prof = profile_frame(frame, run.lex, seed, run.cfg.sample_count, {"target": target, "field": args.field})
    run.write_json(f"{_tag('profile', target, args.field, args.outlet or 'all')}.json", _profile_payload(prof, args.outlet))
    return {"significant": list(prof.significant_emotions())}


def cmd_timeline(run: Run, args) -> dict:
    target = run.target_stem(args.target)
    arts = _subset(run, args.outlet, _date_range(args))
    tp = temporal_profiles(
        arts, target, args.field, args.grouping, args.rolling, run.build, run.lex, run.syn,
        derive_seed(run.cfg.seed, "timeline", target, args.field, args.outlet or "all"),
        run.cfg.sample_count, run.parses,
    )
    run.write_text(f"{_tag('timeline', target, args.field, args.outlet or 'all')}.csv", temporal_to_csv(tp))
    return {"points": len(tp.points), "persistent": [e for e in EMOTIONS if tp.is_persistent(e)]}


def cmd_communities(run: Run, args) -> dict:
    target = run.target_stem(args.target)
    arts = _subset(run, args.outlet, _date_range(args))
    net, frame = _frame(run, arts, target, args.field, args.radius)
    graph = net if args.full else frame.subgraph
    part = louvain(graph, args.layer, derive_seed(run.cfg.seed, "louvain", target, args.field, args.outlet or "all"))
    q = modularity(graph, part, args.layer)
    run.write_text(f"{_tag('communities', target, args.field, args.outlet or 'all')}.tsv", part.to_tsv())
    return {"communities": part.community_count, "modularity": q}


def cmd_diff(run: Run, args) -> dict:
    target = run.target_stem(args.target)
    split = dt.date.fromisoformat(args.split or run.cfg.split_date) if (args.split or run.cfg.split_date) else None
    if split is None:
        raise ValidationError("diff needs --split or split_date in the config")
    before = _subset(run, args.outlet, (None, split - dt.timedelta(days=1)))
    after = _subset(run, args.outlet, (split, None))
    _, fb = _frame(run, before, target, args.field, 1)
    _, fa = _frame(run, after, target, args.field, 1)
    d = frame_diff(fb, fa)
    payload = d.to_dict()
    payload["split"] = split.isoformat()
    run.write_json(f"{_tag('diff', target, args.field, args.outlet or 'all')}.json", payload)
    return {"added": len(d.added), "removed": len(d.removed)}


def cmd_correlate(run: Run, args) -> dict:
    arts = run.articles
    if args.target:
        arts = filter_articles(arts, keyword=run.target_stem(args.target), field=args.field, language=run.cfg.language)
    if args.outlet:
        arts = filter_articles(arts, outlet=args.outlet)
    fb = [a.shares_facebook for a in arts]
    tw = [a.shares_twitter for a in arts]
    res = pearson(fb, tw)
    bins = log_bin_heatmap(list(zip(fb, tw)), args.base)
    tag = _tag("correlate", run.target_stem(args.target) if args.target else None, args.outlet or "all")
    run.write_json(f"{tag}.json", {"r": res.r, "p_two_sided": res.p_two_sided, "n": res.n, "method": res.method,
                                    "x": "shares_facebook", "y": "shares_twitter", "heatmap_base": bins.base})
    run.write_text(f"{tag}_heatmap.csv", bins.to_csv())
    return {"r": res.r, "n": res.n}


def cmd_prevalence(run: Run, args) -> dict:
    target = run.target_stem(args.target)
    s = prevalence_series(run.articles, target, args.field, args.outlet, args.ma_window, run.cfg.language)
    run.write_text(f"{_tag('prevalence', target, args.field, args.outlet or 'all')}.csv", s.to_csv())
    return {"days": len(s.points)}


def _read_commented(path: Path) -> str:
    return "".join(l for l in path.read_text(encoding="utf-8").splitlines(True) if not l.startswith("# config_hash="))


def _profile_from_json(data: dict) -> EmotionProfile:
    em = data["emotions"]
    return EmotionProfile(
        tuple(em[e]["count"] for e in EMOTIONS), tuple(em[e]["mu"] for e in EMOTIONS),
        tuple(em[e]["sigma"] for e in EMOTIONS), tuple(em[e]["z"] for e in EMOTIONS),
        tuple(em[e]["significant"] for e in EMOTIONS), data["covered_words"], data.get("metadata", {}),
    )


def _heatmap_from_csv(text: str) -> HeatmapBins:
    import numpy as np

    rows = list(csv.reader(io.StringIO(text)))
    base = float(rows[0][1])
    xe = tuple(float(v) for v in rows[1][1:])
    ye = tuple(float(v) for v in rows[2][1:])
    counts = np.array([[int(v) for v in r] for r in rows[3:] if r], dtype=np.int64)
    return HeatmapBins(xe, ye, counts.reshape(len(xe) - 1, len(ye) - 1), base)


def cmd_render(run: Run, args) -> dict:
    src = Path(args.input)
    if not src.exists():
        raise ValidationError(f"input path does not exist: {src}")
    name = args.name or src.stem
    if args.kind == "wheel":
        data = json.loads(src.read_text(encoding="utf-8"))
        prof = _profile_from_json(data)
        title = f"{data['metadata'].get('target', '')} {data['metadata'].get('field', '')}".strip()
        run.write_svg(f"{name}.svg", render_wheel(prof, WheelSpec(title=title)))
    elif args.kind == "network":
        data = json.loads(src.read_text(encoding="utf-8"))
        from .frames import SemanticFrame
        sub = tfmn_from_dict(data["subgraph"])
        frame = SemanticFrame(data["target"], frozenset(data["neighbors"]), sub, data["radius"])
        if args.partition:
            rows = [l.split("\t") for l in _read_commented(Path(args.partition)).splitlines() if l.strip()]
            part = Partition({s: int(c) for s, c in rows})
        else:
            part = louvain(sub, "combined", derive_seed(run.cfg.seed, "louvain", data["target"]))
        run.write_svg(f"{name}.svg", render_network(frame, part, LayoutSpec(seed=derive_seed(run.cfg.seed, "layout") % 2**32)))
    elif args.kind == "timeseries":
        rows = list(csv.DictReader(io.StringIO(_read_commented(src))))
        series = {e: [] for e in EMOTIONS}
        for r in rows:
            series[r["emotion"]].append((dt.date.fromisoformat(r["date"]), float(r["z_rolled"]) if r["z_rolled"] else None))
        from .frames import persistence_flags
        rolled = list(zip(*[[v for _, v in series[e]] for e in EMOTIONS]))
        flags = dict(zip(EMOTIONS, persistence_flags(rolled)))
        run.write_svg(f"{name}.svg", render_timeseries([(e, series[e]) for e in EMOTIONS], persistent=flags))
    elif args.kind == "heatmap":
        bins = _heatmap_from_csv(_read_commented(src))
        run.write_svg(f"{name}.svg", render_heatmap(bins, "facebook shares", "twitter shares"))
    return {"kind": args.kind}


def cmd_pipeline(run: Run, args) -> dict:
    cfg = run.cfg
    arts = run.articles
    cmd_ingest(run, args)
    targets = [run.target_stem(t) for t in cfg.targets]
    split = dt.date.fromisoformat(cfg.split_date) if cfg.split_date else None

    def attempt(label, fn):
        try:
            return fn()
        except EmptyFrameError as exc:
            run.notes.append(f"{label}: {exc}")
            return None

    for target in targets:
        for outlet in OUTLET_CLASSES:
            sub = _subset(run, outlet)
            for field_ in ("title", "body"):
                def do_profile():
                    _, frame = _frame(run, sub, target, field_, 1)
                    seed = derive_seed(cfg.seed, "profile", target, field_, outlet)
                    prof = profile_frame(frame, run.lex, seed, cfg.sample_count, {"target": target, "field": field_})
                    tag = _tag("profile", target, field_, outlet)
                    run.write_json(f"{tag}.json", _profile_payload(prof, outlet))
                    run.write_svg(f"{tag}.svg", render_wheel(prof, WheelSpec(title=f"{target} {field_} {outlet}")))
                attempt(f"profile {target} {field_} {outlet}", do_profile)

            def do_timeline():
                tp = temporal_profiles(
                    sub, target, "both", "day", 7, run.build, run.lex, run.syn,
                    derive_seed(cfg.seed, "timeline", target, "both", outlet), cfg.sample_count, run.parses,
                )
                tag = _tag("timeline", target, "both", outlet)
                run.write_text(f"{tag}.csv", temporal_to_csv(tp))
                flags = {e: tp.is_persistent(e) for e in EMOTIONS}
                run.write_svg(f"{tag}.svg", render_timeseries(
                    [(e, tp.series(e)) for e in EMOTIONS], persistent=flags, title=f"{target} {outlet}"))
            attempt(f"timeline {target} {outlet}", do_timeline)

            if split is not None:
                def do_split():
                    frames = {}
                    for label, rng_ in (("before", (None, split - dt.timedelta(days=1))), ("after", (split, None))):
                        _, fr = _frame(run, _subset(run, outlet, rng_), target, "title", 1)
                        frames[label] = fr
                        part = louvain(fr.subgraph, "combined", derive_seed(cfg.seed, "louvain", target, outlet, label))
                        tag = _tag("frame", target, "title", outlet, label)
                        run.write_json(f"{tag}.json", _frame_payload(fr, target, "title", outlet))
                        run.write_text(f"{_tag('communities', target, 'title', outlet, label)}.tsv", part.to_tsv())
                        layout = LayoutSpec(seed=derive_seed(cfg.seed, "layout", target, outlet, label) % 2**32)
                        run.write_svg(f"{tag}.svg", render_network(fr, part, layout, title=f"{target} {outlet} {label}"))
                    d = frame_diff(frames["before"], frames["after"])
                    payload = d.to_dict()
                    payload["split"] = split.isoformat()
                    run.write_json(f"{_tag('diff', target, 'title', outlet)}.json", payload)
                attempt(f"split {target} {outlet}", do_split)

    # share correlation and heatmap over articles mentioning the first target in titles
    if targets:
        mention = filter_articles(arts, keyword=targets[0], field="title", language=cfg.language)
        corr = {}
        for outlet in (None,) + OUTLET_CLASSES:
            sub = filter_articles(mention, outlet=outlet) if outlet else mention
            try:
                res = pearson([a.shares_facebook for a in sub], [a.shares_twitter for a in sub])
                corr[outlet or "all"] = {"r": res.r, "p_two_sided": res.p_two_sided, "n": res.n}
            except ValueError as exc:
                run.notes.append(f"correlation {outlet or 'all'}: {exc}")
        run.write_json(_tag("correlate", targets[0]) + ".json", {"target": targets[0], "results": corr})
        bins = log_bin_heatmap([(a.shares_facebook, a.shares_twitter) for a in mention], 2.0)
        run.write_text(_tag("heatmap", targets[0]) + ".csv", bins.to_csv())
        run.write_svg(_tag("heatmap", targets[0]) + ".svg", render_heatmap(bins, "facebook shares", "twitter shares"))

    for target in targets:
        series = []
        for outlet in OUTLET_CLASSES:
            s = prevalence_series(arts, target, "either", outlet, 7, cfg.language)
            run.write_text(f"{_tag('prevalence', target, outlet)}.csv", s.to_csv())
            series.append((outlet, list(s.smoothed)))
        run.write_svg(f"{_tag('prevalence', target)}.svg", render_timeseries(
            series, threshold_band=0.0, persistent={o: True for o in OUTLET_CLASSES},
            title=f"share of articles mentioning {target}", y_label="fraction"))

    run.write_text("shares.csv", platform_share_summary(arts).to_csv())
    return {"targets": targets}


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--config", help=f"TOML config file (default: ${CONFIG_ENV})")
    g.add_argument("--corpus")
    g.add_argument("--lexicon")
    g.add_argument("--synonyms")
    g.add_argument("--mode", choices=("cooccurrence", "dependency"))
    g.add_argument("--max-tree-distance", dest="max_tree_distance", type=int)
    g.add_argument("--window", type=int)
    g.add_argument("--language", choices=("italian", "english"))
    g.add_argument("--conllu-dir", dest="conllu_dir")
    g.add_argument("--seed", type=int)
    g.add_argument("--sample-count", dest="sample_count", type=int)
    g.add_argument("--out")

    p = _Parser(prog="newsframes", description="Emotional and semantic frames of news corpora.")
    p.add_argument("--backend", action="store_true", help="print the kernel backend and exit")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def scoped(name, help_, target=True, field_choices=("title", "body", "both")):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if target:
            sp.add_argument("--target", required=True)
        sp.add_argument("--field", choices=field_choices, default="title")
        sp.add_argument("--outlet", choices=OUTLET_CLASSES)
        sp.add_argument("--since")
        sp.add_argument("--until")
        return sp

    sub.add_parser("ingest", parents=[common], help="validate a corpus and summarize it")
    sp = scoped("build", "build the network for a field", target=False)
    sp.add_argument("--target")
    sp = scoped("frame", "extract the semantic frame of a target")
    sp.add_argument("--radius", type=int, default=1)
    scoped("profile", "emotion z-score profile of a target")
    sp = scoped("timeline", "daily or weekly emotion profiles")
    sp.add_argument("--grouping", choices=("day", "week"), default="day")
    sp.add_argument("--rolling", type=int, default=7)
    sp = scoped("communities", "Louvain communities of a frame")
    sp.add_argument("--radius", type=int, default=1)
    sp.add_argument("--layer", choices=("combined", "syntactic", "synonym"), default="combined")
    sp.add_argument("--full", action="store_true", help="cluster the whole network, not just the frame")
    sp = scoped("diff", "frame before/after a split date")
    sp.add_argument("--split", dest="split")
    sp = sub.add_parser("correlate", parents=[common], help="facebook/twitter share correlation and heatmap")
    sp.add_argument("--target")
    sp.add_argument("--field", choices=("title", "body", "either"), default="title")
    sp.add_argument("--outlet", choices=OUTLET_CLASSES)
    sp.add_argument("--base", type=float, default=2.0)
    sp = sub.add_parser("prevalence", parents=[common], help="daily share of articles mentioning a target")
    sp.add_argument("--target", required=True)
    sp.add_argument("--field", choices=("title", "body", "either"), default="either")
    sp.add_argument("--outlet", choices=OUTLET_CLASSES)
    sp.add_argument("--ma-window", dest="ma_window", type=int, default=7, help="moving-average window in days")
    sp = sub.add_parser("render", parents=[common], help="render an SVG from a previous output")
    sp.add_argument("--kind", choices=("wheel", "network", "timeseries", "heatmap"), required=True)
    sp.add_argument("--input", required=True)
    sp.add_argument("--partition")
    sp.add_argument("--name")
    sp = sub.add_parser("pipeline", parents=[common], help="run every analysis for the configured targets")
    sp.add_argument("--targets", nargs="+")
    sp.add_argument("--split", dest="split_date")
    return p


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "backend", False):
            print(_kernels.BACKEND)
            return 0
        if args.command is None:
            raise ValidationError(f"a subcommand is required: {', '.join(COMMANDS)}")
        cfg = load_config(args)
        need_corpus = args.command != "render"
        cfg.validate(need_corpus=need_corpus)
        r = Run(cfg, args.command)
        extra = HANDLERS[args.command](r, args)
        print(r.summary(**(extra or {})))
        return 0
    except ValidationError as exc:
        print(json.dumps({"status": "error", "kind": "validation", "message": str(exc)}), file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - every runtime failure maps to exit 2
        print(json.dumps({"status": "error", "kind": "runtime", "message": f"{type(exc).__name__}: {exc}"}), file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
