"""Textual forma mentis network construction.

A network is built from parsed sentences: content-word stems become nodes and
every pair of them lying close in the sentence (dependency-tree distance, or
token distance after stopword removal) gains one unit of syntactic weight.
A synonym layer and lexicon emotions are added on top.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Optional

import numpy as np

from . import _kernels
from .corpus import stem, tokenize
from .lexicon import EMOTIONS, EmotionLexicon, SynonymMap, bundled_path, emotions_of

CONTENT_UPOS = ("NOUN", "PROPN", "VERB", "ADJ", "ADV")
_SENTENCE_END = re.compile(r"[.!?;:\n]+")


class NetworkError(ValueError):
    pass


class Token(NamedTuple):
    surface: str
    stem: str
    pos: str
    head: int
    deprel: str


@dataclass(frozen=True)
class ParsedDocument:
    sentences: tuple = ()
    source: str = "conllu"  # "conllu" or "cooccurrence"

    @property
    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)

    @property
    def root_count(self) -> int:
        return sum(1 for s in self.sentences for t in s if t.head == 0)


@dataclass(frozen=True)
class BuildConfig:
    mode: str = "cooccurrence"
    max_tree_distance: int = 3
    window: int = 4
    stopwords: str = "italian"
    pos_whitelist: tuple = CONTENT_UPOS
    language: str = "italian"

    def __post_init__(self):
        if self.mode not in ("dependency", "cooccurrence"):
            raise NetworkError(f"unknown build mode {self.mode!r}")
        if self.max_tree_distance < 1:
            raise NetworkError("max_tree_distance must be >= 1")
        if self.window < 2:
            raise NetworkError("window must be >= 2")
        object.__setattr__(self, "pos_whitelist", tuple(self.pos_whitelist))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pos_whitelist"] = list(self.pos_whitelist)
        return d


@lru_cache(maxsize=None)
def load_stopwords(name: str) -> frozenset:
    """Bundled stopword list by id ("italian", "english") or a file path."""
    p = Path(name)
    if not p.exists():
        p = bundled_path(f"stopwords_{name[:2]}.txt")
    with open(p, encoding="utf-8") as fh:
        return frozenset(w.strip().lower() for w in fh if w.strip() and not w.startswith("#"))


# --------------------------------------------------------------------------
# input parsing
# --------------------------------------------------------------------------

def parse_conllu_text(text: str, language: str = "italian", origin: str = "<string>") -> ParsedDocument:
    sentences = []
    current: list = []
    start_line = 1

    def close(lineno):
        if not current:
            return
        roots = sum(1 for t in current if t.head == 0)
        if roots != 1:
            kind = "no root" if roots == 0 else f"{roots} roots"
            raise NetworkError(f"{origin}: line {start_line}: sentence has {kind}")
        for t in current:
            if t.head > len(current):
                raise NetworkError(f"{origin}: line {start_line}: HEAD {t.head} out of range")
        sentences.append(tuple(current))

    lines = text.split("\n")
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\r")
        if not line.strip():
            close(lineno)
            current = []
            start_line = lineno + 1
            continue
        if line.startswith("#"):
            if not current:
                start_line = lineno + 1
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise NetworkError(f"{origin}: line {lineno}: expected 10 columns, found {len(cols)}")
        tid = cols[0]
        if "-" in tid or "." in tid:
            continue
        try:
            idx = int(tid)
        except ValueError:
            raise NetworkError(f"{origin}: line {lineno}: non-integer ID {tid!r}") from None
        if idx != len(current) + 1:
            raise NetworkError(f"{origin}: line {lineno}: token ID {idx} out of sequence")
        try:
            head = int(cols[6])
        except ValueError:
            raise NetworkError(f"{origin}: line {lineno}: non-integer HEAD {cols[6]!r}") from None
        if head < 0:
            raise NetworkError(f"{origin}: line {lineno}: negative HEAD")
        form, lemma = cols[1], cols[2]
        base = lemma if lemma not in ("_", "") else form
        st = stem(base, language) if base else ""
        current.append(Token(form, st, cols[3], head, cols[7]))
    close(len(lines))
    return ParsedDocument(tuple(sentences), "conllu")


def parse_conllu(path, language: str = "italian") -> ParsedDocument:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        return parse_conllu_text(fh.read(), language, origin=str(path))


def cooccurrence_parse(text: str, config: BuildConfig, language: Optional[str] = None) -> ParsedDocument:
    """Sentence-split, drop stopwords, and chain the survivors.

    Token ``k`` (1-based) gets head ``k-1`` so tree distance equals distance
    in the filtered token sequence.
    """
    if config.mode != "cooccurrence":
        raise NetworkError("cooccurrence_parse requires mode='cooccurrence'")
    language = language or config.language
    stops = load_stopwords(config.stopwords)
    sentences = []
    for chunk in _SENTENCE_END.split(text):
        words = [w for w in tokenize(chunk) if w.lower() not in stops]
        if not words:
            continue
        sent = tuple(
            Token(w, stem(w, language), "X", k, "root" if k == 0 else "dep")
            for k, w in enumerate(words)
        )
        sentences.append(sent)
    return ParsedDocument(tuple(sentences), "cooccurrence")


# --------------------------------------------------------------------------
# the network
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Tfmn:
    """Undirected two-layer word network.

    ``edges`` maps canonical (a, b) with a < b to (syntactic, synonym) weights.
    """

    nodes: Mapping[str, frozenset]
    edges: Mapping[tuple, tuple]
    provenance: BuildConfig = field(default_factory=BuildConfig)

    @classmethod
    def empty(cls, config: BuildConfig) -> "Tfmn":
        return cls(MappingProxyType({}), MappingProxyType({}), config)

    @classmethod
    def from_parts(cls, nodes: dict, edges: dict, config: BuildConfig) -> "Tfmn":
        clean = {}
        for (a, b), (ws, wy) in edges.items():
            if a == b:
                raise NetworkError(f"self-loop on {a!r}")
            if ws < 0 or wy < 0:
                raise NetworkError("negative edge weight")
            if ws == 0 and wy == 0:
                continue
            key = (a, b) if a < b else (b, a)
            if key in clean:
                raise NetworkError(f"duplicate edge {key}")
            clean[key] = (int(ws), int(wy))
        incident = {s for e in clean for s in e}
        node_map = {s: frozenset(nodes.get(s, ())) for s in sorted(incident)}
        return cls(
            MappingProxyType(node_map),
            MappingProxyType(dict(sorted(clean.items()))),
            config,
        )

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other):
        if not isinstance(other, Tfmn):
            return NotImplemented
        return (
            dict(self.nodes) == dict(other.nodes)
            and dict(self.edges) == dict(other.edges)
            and self.provenance == other.provenance
        )

    def __hash__(self):
        return hash((tuple(self.nodes.items()), tuple(self.edges.items()), self.provenance))

    def layer_weight(self, a: str, b: str, layer: str = "combined") -> int:
        key = (a, b) if a < b else (b, a)
        ws, wy = self.edges.get(key, (0, 0))
        return _layer_value(ws, wy, layer)

    def adjacency(self, layer: str = "combined") -> dict:
        adj: dict = {s: {} for s in self.nodes}
        for (a, b), (ws, wy) in self.edges.items():
            w = _layer_value(ws, wy, layer)
            if w > 0:
                adj[a][b] = w
                adj[b][a] = w
        return adj

    def total_degree(self, stem_: str) -> int:
        return total_degrees(self).get(stem_, 0)

    def induced(self, keep: Iterable[str]) -> "Tfmn":
        keep = set(keep)
        edges = {e: w for e, w in self.edges.items() if e[0] in keep and e[1] in keep}
        return Tfmn.from_parts(dict(self.nodes), edges, self.provenance)

    def with_emotions(self, lex: EmotionLexicon) -> "Tfmn":
        nodes = {s: emotions_of(lex, s) for s in self.nodes}
        return Tfmn(MappingProxyType(nodes), self.edges, self.provenance)

    def edge_arrays(self, layer: str = "combined"):
        """(stems, src, dst, weight) with node indices into sorted stems."""
        stems = tuple(sorted(self.nodes))
        index = {s: i for i, s in enumerate(stems)}
        src, dst, w = [], [], []
        for (a, b), (ws, wy) in self.edges.items():
            v = _layer_value(ws, wy, layer)
            if v > 0:
                src.append(index[a])
                dst.append(index[b])
                w.append(float(v))
        return (
            stems,
            np.asarray(src, dtype=np.int64),
            np.asarray(dst, dtype=np.int64),
            np.asarray(w, dtype=np.float64),
        )


def _layer_value(ws: int, wy: int, layer: str) -> int:
    if layer == "combined":
        return ws + wy
    if layer == "syntactic":
        return ws
    if layer == "synonym":
        return wy
    raise NetworkError(f"unknown layer {layer!r}")


def _sentence_pairs(sentence, config: BuildConfig):
    n = len(sentence)
    if n < 2:
        return ()
    if config.mode == "dependency":
        whitelist = set(config.pos_whitelist)
        keep = np.array(
            [t.pos in whitelist and t.stem.isalpha() for t in sentence], dtype=np.bool_
        )
        max_dist = config.max_tree_distance
    else:
        keep = np.array([t.stem.isalpha() for t in sentence], dtype=np.bool_)
        max_dist = config.window - 1
    if keep.sum() < 2:
        return ()
    heads = np.array([t.head for t in sentence], dtype=np.int64)
    ii, jj = _kernels.tree_pairs(heads, keep, max_dist)
    out = []
    for i, j in zip(ii.tolist(), jj.tolist()):
        a, b = sentence[i].stem, sentence[j].stem
        if a != b:
            out.append((a, b) if a < b else (b, a))
    return out


def build_tfmn(docs: Iterable[ParsedDocument], config: BuildConfig, lexicon: Optional[EmotionLexicon] = None) -> Tfmn:
    """Syntactic layer over all sentences of ``docs``; emotions from ``lexicon``."""
    expected = "conllu" if config.mode == "dependency" else "cooccurrence"
    counts: Counter = Counter()
    for doc in docs:
        if doc.source != expected:
            raise NetworkError(
                f"build mode {config.mode!r} cannot use documents produced by {doc.source!r}"
            )
        for sent in doc.sentences:
            counts.update(_sentence_pairs(sent, config))
    edges = {e: (w, 0) for e, w in counts.items()}
    net = Tfmn.from_parts({}, edges, config)
    if lexicon is not None:
        net = net.with_emotions(lexicon)
    return net


def add_synonym_layer(net: Tfmn, syn: SynonymMap) -> Tfmn:
    """Increment synonym weight for each synonym pair whose stems are both nodes."""
    edges = dict(net.edges)
    for a, b in syn.undirected():
        if a in net.nodes and b in net.nodes:
            ws, wy = edges.get((a, b), (0, 0))
            edges[(a, b)] = (ws, wy + 1)
    return Tfmn.from_parts(dict(net.nodes), edges, net.provenance)


def merge_tfmn(a: Tfmn, b: Tfmn) -> Tfmn:
    if a.provenance != b.provenance:
        raise NetworkError("cannot merge networks built with different configurations")
    nodes = {s: a.nodes.get(s, frozenset()) | b.nodes.get(s, frozenset()) for s in set(a.nodes) | set(b.nodes)}
    edges = dict(a.edges)
    for e, (ws, wy) in b.edges.items():
        xs, xy = edges.get(e, (0, 0))
        edges[e] = (xs + ws, xy + wy)
    return Tfmn.from_parts(nodes, edges, a.provenance)


def build_from_texts(texts: Iterable[str], config: BuildConfig, lexicon=None, synonyms=None) -> Tfmn:
    """Co-occurrence network over raw texts, with optional synonym layer."""
    docs = [cooccurrence_parse(t, config) for t in texts]
    net = build_tfmn(docs, config, lexicon)
    if synonyms is not None:
        net = add_synonym_layer(net, synonyms)
    return net


# --------------------------------------------------------------------------
# export
# --------------------------------------------------------------------------

def edges_tsv(net: Tfmn) -> str:
    lines = [f"{a}\t{b}\t{ws}\t{wy}" for (a, b), (ws, wy) in net.edges.items()]
    return "".join(line + "\n" for line in lines)


def total_degrees(net: Tfmn) -> dict:
    """Distinct neighbors per node across both layers."""
    deg = dict.fromkeys(net.nodes, 0)
    for a, b in net.edges:
        deg[a] += 1
        deg[b] += 1
    return deg


def nodes_tsv(net: Tfmn) -> str:
    """Rows ``stem \t emotions \t total_degree``."""
    deg = total_degrees(net)
    lines = []
    for s, emos in net.nodes.items():
        ordered = [e for e in EMOTIONS if e in emos]
        lines.append(f"{s}\t{','.join(ordered)}\t{deg[s]}")
    return "".join(line + "\n" for line in lines)


def tfmn_to_dict(net: Tfmn) -> dict:
    # "degree" is derived and ignored by tfmn_from_dict
    return {
        "provenance": net.provenance.to_dict(),
        "nodes": {s: [e for e in EMOTIONS if e in emos] for s, emos in net.nodes.items()},
        "degree": total_degrees(net),
        "edges": [[a, b, ws, wy] for (a, b), (ws, wy) in net.edges.items()],
    }


def tfmn_from_dict(data: dict) -> Tfmn:
    config = BuildConfig(**data["provenance"])
    edges = {(a, b): (ws, wy) for a, b, ws, wy in data["edges"]}
    return Tfmn.from_parts({s: frozenset(e) for s, e in data["nodes"].items()}, edges, config)


def tfmn_to_json(net: Tfmn) -> str:
    return json.dumps(tfmn_to_dict(net), ensure_ascii=False, indent=1, sort_keys=True)
