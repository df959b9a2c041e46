"""Emotion lexicon and synonym relation, indexed by stem."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .corpus import stem

# Wheel order; also the column order of every emotion array in this package.
EMOTIONS = ("joy", "trust", "fear", "surprise", "sadness", "disgust", "anger", "anticipation")
IGNORED_COLUMNS = ("positive", "negative")


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class EmotionLexicon:
    entries: Mapping[str, frozenset]

    @property
    def vocabulary_size(self) -> int:
        return len(self.entries)

    @cached_property
    def vocabulary(self) -> tuple:
        """Stems in sorted order; row order of :meth:`membership`."""
        return tuple(sorted(self.entries))

    def __contains__(self, stem_: str) -> bool:
        return stem_ in self.entries

    @cached_property
    def _membership(self) -> np.ndarray:
        vocab = self.vocabulary
        out = np.zeros((len(vocab), len(EMOTIONS)), dtype=np.uint8)
        for r, s in enumerate(vocab):
            for e in self.entries[s]:
                out[r, EMOTIONS.index(e)] = 1
        out.setflags(write=False)
        return out

    def membership(self) -> np.ndarray:
        """(vocabulary_size, 8) uint8 indicator matrix, read-only."""
        return self._membership

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Iterable]) -> "EmotionLexicon":
        entries = {}
        for s, emos in mapping.items():
            emos = frozenset(emos)
            bad = emos - set(EMOTIONS)
            if bad:
                raise LexiconError(f"unknown emotion {sorted(bad)[0]!r}")
            entries[s] = emos
        return cls(MappingProxyType(dict(sorted(entries.items()))))


def emotions_of(lex: EmotionLexicon, stem_: str) -> frozenset:
    return lex.entries.get(stem_, frozenset())


def load_emotion_lexicon(path, language: str = "italian") -> EmotionLexicon:
    """Load a word/emotion/flag TSV (NRC word-level layout).

    Positive/negative sentiment rows are accepted and ignored. A word whose
    rows are all flag 0 is kept as an explicitly neutral entry.
    """
    entries: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise LexiconError(f"line {lineno}: malformed row, expected word<TAB>emotion<TAB>flag")
            word, emotion, flag = (p.strip() for p in parts)
            if not word or flag not in ("0", "1"):
                raise LexiconError(f"line {lineno}: malformed row {line!r}")
            emotion = emotion.lower()
            if emotion in IGNORED_COLUMNS:
                entries.setdefault(stem(word, language), set())
                continue
            if emotion not in EMOTIONS:
                raise LexiconError(f"line {lineno}: unknown emotion {emotion!r}")
            s = stem(word, language)
            bucket = entries.setdefault(s, set())
            if flag == "1":
                bucket.add(emotion)
    return EmotionLexicon.from_mapping(entries)


@dataclass(frozen=True)
class SynonymMap:
    """Symmetric, irreflexive relation over stems, stored as directed pairs."""

    pairs: frozenset

    def __post_init__(self):
        for a, b in self.pairs:
            if a == b:
                raise LexiconError(f"self-synonym {a!r}")
            if (b, a) not in self.pairs:
                raise LexiconError(f"asymmetric synonym pair ({a!r}, {b!r})")

    @classmethod
    def from_pairs(cls, pairs) -> "SynonymMap":
        out = set()
        for a, b in pairs:
            if a != b:
                out.add((a, b))
                out.add((b, a))
        return cls(frozenset(out))

    def undirected(self) -> list:
        return sorted((a, b) for a, b in self.pairs if a < b)

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs


def load_synonyms(path, language: str = "italian") -> SynonymMap:
    raw = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip() or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split("\t")]
            if len(parts) != 2 or not all(parts):
                raise LexiconError(f"line {lineno}: malformed row, expected word<TAB>word")
            raw.append((stem(parts[0], language), stem(parts[1], language)))
    return SynonymMap.from_pairs(raw)


def bundled_path(name: str) -> Path:
    """Path of a data file shipped with the package."""
    return Path(str(resources.files("newsframes") / "data" / name))


def default_lexicon() -> EmotionLexicon:
    return load_emotion_lexicon(bundled_path("lexicon_it.tsv"))


def default_synonyms() -> SynonymMap:
    return load_synonyms(bundled_path("synonyms_it.tsv"))
