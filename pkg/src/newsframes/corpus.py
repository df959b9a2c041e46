"""Article records, ingestion, stemming and filtering."""

from __future__ import annotations

import csv
import datetime as dt
import io
import json
import re
from dataclasses import asdict, dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Optional

import snowballstemmer

OUTLET_CLASSES = ("mainstream", "alternative")
LANGUAGES = ("italian", "english")
FIELDS = ("id", "url", "outlet_domain", "outlet_class", "date", "title", "body", "shares_twitter", "shares_facebook")

_TOKEN_RE = re.compile(r"[^\W\d_]+", re.UNICODE)


class CorpusError(ValueError):
    """Raised for malformed or inconsistent corpus input."""


@dataclass(frozen=True)
class Article:
    id: str
    url: str
    outlet_domain: str
    outlet_class: str
    date: dt.date
    title: str
    body: str
    shares_twitter: int = 0
    shares_facebook: int = 0

    def __post_init__(self):
        if self.outlet_class not in OUTLET_CLASSES:
            raise CorpusError(f"unknown outlet_class {self.outlet_class!r}")
        if self.shares_twitter < 0 or self.shares_facebook < 0:
            raise CorpusError(f"negative share count in article {self.id!r}")

    def text(self, field: str) -> str:
        if field == "title":
            return self.title
        if field == "body":
            return self.body
        if field in ("both", "either"):
            return self.title + "\n" + self.body
        raise ValueError(f"unknown field {field!r}")

    def to_record(self) -> dict:
        rec = asdict(self)
        rec["date"] = self.date.isoformat()
        return rec


@dataclass(frozen=True)
class ArticleSet:
    """Immutable, (date, id)-ordered collection of articles."""

    articles: tuple = ()
    window: Optional[tuple] = None

    def __post_init__(self):
        arts = tuple(sorted(self.articles, key=lambda a: (a.date, a.id)))
        seen = set()
        for a in arts:
            if a.id in seen:
                raise CorpusError(f"duplicate id {a.id!r}")
            seen.add(a.id)
        object.__setattr__(self, "articles", arts)
        if self.window is not None:
            lo, hi = self.window
            if lo is not None and hi is not None and lo > hi:
                raise CorpusError("window start after end")
            for a in arts:
                if (lo is not None and a.date < lo) or (hi is not None and a.date > hi):
                    raise CorpusError(f"article {a.id!r} dated {a.date} outside window")

    def __iter__(self) -> Iterator[Article]:
        return iter(self.articles)

    def __len__(self) -> int:
        return len(self.articles)

    def __getitem__(self, i):
        return self.articles[i]

    @property
    def observation_window(self) -> Optional[tuple]:
        """The configured window, or [min date, max date] when unset."""
        if self.window is not None:
            lo, hi = self.window
            if lo is not None and hi is not None:
                return self.window
        if not self.articles:
            return self.window
        lo = self.articles[0].date
        hi = self.articles[-1].date
        if self.window is not None:
            lo = self.window[0] or lo
            hi = self.window[1] or hi
        return (lo, hi)

    def counts_by_outlet(self) -> dict:
        out = {c: 0 for c in OUTLET_CLASSES}
        for a in self.articles:
            out[a.outlet_class] += 1
        return out

    def subset(self, articles: Iterable[Article]) -> "ArticleSet":
        return ArticleSet(tuple(articles), self.window)


# --------------------------------------------------------------------------
# ingestion
# --------------------------------------------------------------------------

def parse_date(value) -> dt.date:
    """Normalize an ISO date or datetime string to its UTC calendar day."""
    if isinstance(value, dt.datetime):
        d = value
    elif isinstance(value, dt.date):
        return value
    else:
        s = str(value).strip()
        if len(s) == 10:
            return dt.date.fromisoformat(s)
        d = dt.datetime.fromisoformat(s.replace("Z", "+00:00"))
    if d.tzinfo is not None:
        d = d.astimezone(dt.timezone.utc)
    return d.date()


def _article_from_record(rec: dict, where: str) -> Article:
    missing = [k for k in FIELDS if k not in rec]
    if missing:
        raise CorpusError(f"{where}: missing field(s) {', '.join(missing)}")
    if rec["outlet_class"] not in OUTLET_CLASSES:
        raise CorpusError(f"{where}: unknown outlet_class {rec['outlet_class']!r}")
    try:
        date = parse_date(rec["date"])
    except (TypeError, ValueError) as exc:
        raise CorpusError(f"{where}: unparseable date {rec['date']!r}") from exc
    try:
        tw = int(rec["shares_twitter"])
        fb = int(rec["shares_facebook"])
    except (TypeError, ValueError) as exc:
        raise CorpusError(f"{where}: share counts must be integers") from exc
    try:
        return Article(
            id=str(rec["id"]),
            url=str(rec["url"]),
            outlet_domain=str(rec["outlet_domain"]),
            outlet_class=rec["outlet_class"],
            date=date,
            title=str(rec["title"]),
            body=str(rec["body"]),
            shares_twitter=tw,
            shares_facebook=fb,
        )
    except CorpusError as exc:
        raise CorpusError(f"{where}: {exc}") from exc


def _read_jsonl(path: Path) -> list:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {lineno}: malformed record ({exc.msg})") from exc
            if not isinstance(rec, dict):
                raise CorpusError(f"line {lineno}: malformed record (not an object)")
            records.append((f"line {lineno}", rec))
    return records


def _read_csv(path: Path) -> list:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(reader.fieldnames) != set(FIELDS):
            raise CorpusError(f"line 1: CSV header must be exactly {','.join(FIELDS)}")
        records = []
        for rec in reader:
            if None in rec or any(v is None for v in rec.values()):
                raise CorpusError(f"line {reader.line_num}: malformed record (wrong column count)")
            records.append((f"line {reader.line_num}", rec))
    return records


def ingest_articles(path, format: Optional[str] = None, window: Optional[tuple] = None) -> ArticleSet:
    """Read a JSONL or CSV corpus into an ArticleSet sorted by (date, id).

    ``format`` defaults to the file suffix.
    """
    path = Path(path)
    if format is None:
        format = "csv" if path.suffix.lower() == ".csv" else "jsonl"
    if format == "jsonl":
        records = _read_jsonl(path)
    elif format == "csv":
        records = _read_csv(path)
    else:
        raise ValueError(f"unknown corpus format {format!r}")
    articles = []
    seen = {}
    for where, rec in records:
        art = _article_from_record(rec, where)
        if art.id in seen:
            raise CorpusError(f"{where}: duplicate id {art.id!r} (first seen at {seen[art.id]})")
        seen[art.id] = where
        articles.append(art)
    return ArticleSet(tuple(articles), window)


def write_articles(articles: ArticleSet, path, format: Optional[str] = None) -> None:
    path = Path(path)
    if format is None:
        format = "csv" if path.suffix.lower() == ".csv" else "jsonl"
    if format == "jsonl":
        with open(path, "w", encoding="utf-8") as fh:
            for a in articles:
                fh.write(json.dumps(a.to_record(), ensure_ascii=False, sort_keys=True) + "\n")
    elif format == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=FIELDS)
            writer.writeheader()
            for a in articles:
                writer.writerow(a.to_record())
    else:
        raise ValueError(f"unknown corpus format {format!r}")


def articles_to_jsonl(articles: Iterable[Article]) -> str:
    buf = io.StringIO()
    for a in articles:
        buf.write(json.dumps(a.to_record(), ensure_ascii=False, sort_keys=True) + "\n")
    return buf.getvalue()


# --------------------------------------------------------------------------
# stemming and matching
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _stemmer(language: str):
    if language not in LANGUAGES:
        raise ValueError(f"unsupported language {language!r}")
    return snowballstemmer.stemmer(language)


@lru_cache(maxsize=200_000)
def stem(word: str, language: str = "italian") -> str:
    """Snowball stem of ``word``, lowercased."""
    if not word:
        raise ValueError("cannot stem an empty word")
    return _stemmer(language).stemWord(word.lower())


def tokenize(text: str) -> list:
    """Alphabetic tokens; digits, punctuation and apostrophes split words."""
    return _TOKEN_RE.findall(text)


def match_keyword(text: str, target: str, language: str = "italian") -> bool:
    """True iff some token of ``text`` stems to a form starting with ``target``."""
    return any(stem(tok, language).startswith(target) for tok in tokenize(text))


def filter_articles(
    articles: ArticleSet,
    keyword: Optional[str] = None,
    field: str = "either",
    dates: Optional[tuple] = None,
    outlet: Optional[str] = None,
    language: str = "italian",
) -> ArticleSet:
    """Conjunctive filter preserving order. ``dates`` is an inclusive
    (start, end) pair where either bound may be None."""
    if field not in ("title", "body", "either"):
        raise ValueError(f"unknown field {field!r}")
    if outlet is not None and outlet not in OUTLET_CLASSES:
        raise CorpusError(f"unknown outlet_class {outlet!r}")
    lo = hi = None
    if dates is not None:
        lo, hi = dates
        if lo is not None and hi is not None and lo > hi:
            raise ValueError("date range start after end")

    def keep(a: Article) -> bool:
        if outlet is not None and a.outlet_class != outlet:
            return False
        if lo is not None and a.date < lo:
            return False
        if hi is not None and a.date > hi:
            return False
        if keyword is not None:
            if field == "title":
                return match_keyword(a.title, keyword, language)
            if field == "body":
                return match_keyword(a.body, keyword, language)
            return match_keyword(a.title, keyword, language) or match_keyword(a.body, keyword, language)
        return True

    return articles.subset(a for a in articles if keep(a))
