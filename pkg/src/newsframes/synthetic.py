"""Seeded generator for a small Italian-like news corpus.

The corpus carries known signatures so the pipeline can be checked end to
end:

* mainstream titles around "vaccino" use only trust/anticipation words and
  no disgust words;
* alternative titles around "vaccino" use a word set whose per-emotion counts
  match the lexicon's own proportions, i.e. an emotionally neutral frame;
* titles around "AstraZeneca" gain "trombosi", "minaccia" and "pericolo" only
  from the split date on;
* "morte" and "trombosi" become more frequent in bodies after the split.

Run ``python -m newsframes.synthetic --seed 0 --out corpus.jsonl``.
"""

from __future__ import annotations

import argparse
import datetime as dt
import math
from typing import Optional

import numpy as np

from .corpus import Article, ArticleSet, stem, write_articles
from .lexicon import EMOTIONS, bundled_path
from .seeding import derive_seed

SPLIT_DATE = dt.date(2021, 3, 15)
START_DATE = dt.date(2021, 2, 1)
AZ_BEFORE = ("consegna", "dose", "lotto", "fiala", "approvazione", "studio", "efficacia", "ministro", "regione")
AZ_ADDED = ("trombosi", "minaccia", "pericolo")
PFIZER_BEFORE = ("allergia", "reazione", "febbre", "dose", "consegna", "ritardo", "governo", "frigorifero")
PFIZER_AFTER = ("dose", "consegna")
VACCINE_FORMS = ("vaccino", "vaccini", "vaccinazione")
CONNECTORS = ("e", "per", "con", "tra", "della", "sul", "nel", "dopo")

DOMAINS = {
    "mainstream": ("corriere.example.it", "repubblica.example.it", "ansa.example.it"),
    "alternative": ("byoblu.example.it", "lantidiplomatico.example.it", "imolaoggi.example.it"),
}


def read_surface_lexicon(path=None, language: str = "italian") -> dict:
    """stem -> (first surface form in file order, emotion set)."""
    path = path or bundled_path("lexicon_it.tsv")
    out: dict = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                continue
            word, emotion, flag = parts
            s = stem(word, language)
            surface, emos = out.get(s, (word, set()))
            if emotion in EMOTIONS and flag == "1":
                emos.add(emotion)
            out[s] = (surface, emos)
    return {s: (w, frozenset(e)) for s, (w, e) in sorted(out.items())}


def balanced_subset(lexicon: dict, size: int, rng: np.random.Generator, exclude=()) -> list:
    """Greedy pick of ``size`` stems whose running emotion counts track the
    lexicon-wide proportions as closely as possible."""
    stems = [s for s in lexicon if s not in exclude]
    rng.shuffle(stems)
    members = np.array([[e in lexicon[s][1] for e in EMOTIONS] for s in stems], dtype=np.float64)
    allm = np.array([[e in v[1] for e in EMOTIONS] for v in lexicon.values()], dtype=np.float64)
    p = allm.mean(axis=0)
    counts = np.zeros(len(EMOTIONS))
    free = np.ones(len(stems), dtype=bool)
    chosen = []
    for k in range(1, size + 1):
        cost = ((counts[None, :] + members - p * k) ** 2).sum(axis=1)
        cost[~free] = np.inf
        pick = int(np.argmin(cost))
        free[pick] = False
        counts += members[pick]
        chosen.append(stems[pick])
    return chosen


def _cycle(pool, rng: np.random.Generator):
    """Endless draws without replacement, reshuffled each pass."""
    pool = list(pool)
    while True:
        order = rng.permutation(len(pool))
        for i in order:
            yield pool[i]


def _title(words: list, anchor: str, rng: np.random.Generator) -> str:
    c = [CONNECTORS[i] for i in rng.integers(0, len(CONNECTORS), size=3)]
    w1, w2, w3 = words
    return f"{w1.capitalize()}, {c[0]} {anchor} {c[1]} {w2} {c[2]} {w3}"


def _body(vocab: list, rng: np.random.Generator, extra: list) -> str:
    sentences = []
    for _ in range(int(rng.integers(3, 6))):
        n = int(rng.integers(5, 9))
        words = [vocab[i] for i in rng.integers(0, len(vocab), size=n)]
        conn = [CONNECTORS[i] for i in rng.integers(0, len(CONNECTORS), size=n)]
        parts = []
        for w, cn in zip(words, conn):
            parts.extend([w, cn])
        sentences.append(" ".join(parts[:-1]).capitalize() + ".")
    for word in extra:
        pos = int(rng.integers(0, len(sentences)))
        s = sentences[pos].rstrip(".")
        sentences[pos] = f"{s} con {word}."
    return " ".join(sentences)


def _shares(rng: np.random.Generator, outlet: str) -> tuple:
    fb = int(rng.lognormal(5.8 if outlet == "mainstream" else 5.3, 1.1))
    tw = int(max(0.0, math.exp(0.45 * math.log1p(fb)) * rng.lognormal(0.0, 0.7) - 1.0))
    return tw, fb


def generate_corpus(
    seed: int = 0,
    days: int = 70,
    start: dt.date = START_DATE,
    split: dt.date = SPLIT_DATE,
    lexicon_path=None,
    neutral_size: int = 60,
) -> ArticleSet:
    lex = read_surface_lexicon(lexicon_path)
    rng = np.random.default_rng(derive_seed(seed, "synthetic"))
    surface = {s: w for s, (w, _) in lex.items()}

    trust_pool = [
        s for s, (_, e) in lex.items()
        if ("trust" in e or "anticipation" in e) and "disgust" not in e
    ]
    special = {stem(w) for w in AZ_ADDED + AZ_BEFORE + PFIZER_BEFORE + ("morte",)}
    neutral_pool = balanced_subset(lex, neutral_size, np.random.default_rng(derive_seed(seed, "neutral")))
    body_vocab = [surface[s] for s in lex if s not in special]

    draws = {
        "mainstream": _cycle([surface[s] for s in trust_pool], rng),
        "alternative": _cycle([surface[s] for s in neutral_pool], rng),
    }
    az_before = {c: _cycle(AZ_BEFORE, rng) for c in DOMAINS}
    az_after = {c: _cycle(AZ_BEFORE + AZ_ADDED, rng) for c in DOMAINS}
    pf_before = _cycle(PFIZER_BEFORE, rng)
    pf_after = _cycle(PFIZER_AFTER, rng)

    articles = []
    for offset in range(days):
        day = start + dt.timedelta(days=offset)
        after = day >= split
        for outlet in ("mainstream", "alternative"):
            kinds = ["vaccine", "astrazeneca", "general"]
            if outlet == "mainstream":
                kinds.append("pfizer")
            for k, kind in enumerate(kinds):
                if kind == "vaccine":
                    form = VACCINE_FORMS[int(rng.integers(0, len(VACCINE_FORMS)))]
                    title = _title([next(draws[outlet]) for _ in range(3)], form, rng)
                elif kind == "astrazeneca":
                    src = az_after[outlet] if after else az_before[outlet]
                    title = _title([next(src) for _ in range(3)], "AstraZeneca", rng)
                elif kind == "pfizer":
                    src = pf_after if after else pf_before
                    title = _title([next(src) for _ in range(3)], "Pfizer", rng)
                else:
                    title = _title([body_vocab[i] for i in rng.integers(0, len(body_vocab), size=3)], "governo", rng)
                extra = []
                if rng.random() < (0.35 if after else 0.08):
                    extra.append("morte")
                if rng.random() < ((0.25 if outlet == "mainstream" else 0.3) if after else 0.03):
                    extra.append("trombosi")
                if kind == "vaccine":
                    extra.append("vaccino")
                body = _body(body_vocab, rng, extra)
                tw, fb = _shares(rng, outlet)
                domain = DOMAINS[outlet][int(rng.integers(0, len(DOMAINS[outlet])))]
                aid = f"{day.strftime('%Y%m%d')}-{outlet[0]}{k}"
                articles.append(Article(
                    id=aid,
                    url=f"https://{domain}/{aid}",
                    outlet_domain=domain,
                    outlet_class=outlet,
                    date=day,
                    title=title,
                    body=body,
                    shares_twitter=tw,
                    shares_facebook=fb,
                ))
    return ArticleSet(tuple(articles))


def main(argv: Optional[list] = None) -> int:
    ap = argparse.ArgumentParser(prog="python -m newsframes.synthetic", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--days", type=int, default=70)
    ap.add_argument("--out", required=True)
    args = ap.parse_args(argv)
    arts = generate_corpus(seed=args.seed, days=args.days)
    write_articles(arts, args.out)
    print(f"wrote {len(arts)} articles to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
