"""Weakly supervised corpus construction and corpus statistics.

The loop: clean raw sentences, score them with a hyperbole classifier, keep
the confident ones, sample a subset for double annotation, and keep only the
unanimous judgments. All stages stream JSONL records.
"""

from __future__ import annotations

import hashlib
import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import IncompleteLabels, PoolTooSmall
from .text import Span, Tagger, analyze

LABEL_HYPERBOLE = "hyperbole"
LABEL_LITERAL = "literal"


@dataclass
class CorpusRecord:
    id: str
    text: str
    label: str | None = None
    probability: float | None = None
    span: tuple[int, int] | None = None   # annotated hyperbolic span, token bounds

    def to_json(self) -> dict:
        out = {"id": self.id, "text": self.text}
        if self.label is not None:
            out["label"] = self.label
        if self.probability is not None:
            out["prob"] = self.probability
        if self.span is not None:
            out["span"] = list(self.span)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "CorpusRecord":
        span = obj.get("span")
        return cls(
            id=str(obj.get("id", "")),
            text=obj["text"],
            label=obj.get("label"),
            probability=obj.get("prob"),
            span=tuple(span) if span else None,
        )


@dataclass
class AnnotationBatch:
    records: list[CorpusRecord]
    labels_a: list[str | None] = field(default_factory=list)
    labels_b: list[str | None] = field(default_factory=list)

    def __post_init__(self):
        if not self.labels_a:
            self.labels_a = [None] * len(self.records)
        if not self.labels_b:
            self.labels_b = [None] * len(self.records)
        if len(self.labels_a) != len(self.records) or len(self.labels_b) != len(self.records):
            raise IncompleteLabels("label arrays must align with records")


@dataclass(frozen=True)
class CorpusStats:
    n_total: int
    n_non_hypo_sampled: int
    avg_span_tokens: float
    pct_long_spans: float     # spans longer than one token, in [0, 100]
    n_distinct_spans: int
    n_distinct_pos_ngrams: int
    has_span_stats: bool


def _normalize(text: str) -> str:
    return " ".join(text.split()).lower()


def _record_id(text: str) -> str:
    return hashlib.sha1(_normalize(text).encode("utf-8")).hexdigest()[:12]


def clean_corpus(raw: Iterable[str], counters: dict | None = None) -> Iterator[CorpusRecord]:
    """Drop duplicates and incomplete sentences (no initial capital)."""
    counters = counters if counters is not None else {}
    counters.setdefault("duplicates", 0)
    counters.setdefault("no_initial_capital", 0)
    counters.setdefault("kept", 0)
    seen: set[str] = set()
    for line in raw:
        text = line.strip()
        if not text:
            continue
        if not text[0].isupper():
            counters["no_initial_capital"] += 1
            continue
        key = _normalize(text)
        if key in seen:
            counters["duplicates"] += 1
            continue
        seen.add(key)
        counters["kept"] += 1
        yield CorpusRecord(id=_record_id(text), text=text)


def filter_by_classifier(records: Iterable[CorpusRecord], scorer,
                         threshold: float = 0.8, jobs: int = 1,
                         counters: dict | None = None) -> Iterator[CorpusRecord]:
    """Keep records whose positive-class probability strictly exceeds the
    threshold; the probability is stored on each kept record."""
    if not (0.0 < threshold < 1.0):
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    counters = counters if counters is not None else {}
    counters.setdefault("kept", 0)
    counters.setdefault("dropped", 0)

    def _score(record: CorpusRecord) -> CorpusRecord:
        record.probability = float(scorer(record.text))
        return record

    if jobs > 1:
        batch: list[CorpusRecord] = []
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for record in records:
                batch.append(record)
                if len(batch) >= jobs * 8:
                    yield from _emit(pool.map(_score, batch), threshold, counters)
                    batch = []
            if batch:
                yield from _emit(pool.map(_score, batch), threshold, counters)
    else:
        yield from _emit(map(_score, records), threshold, counters)


def _emit(scored: Iterable[CorpusRecord], threshold: float,
          counters: dict) -> Iterator[CorpusRecord]:
    for record in scored:
        if record.probability > threshold:
            counters["kept"] += 1
            yield record
        else:
            counters["dropped"] += 1


def sample_for_annotation(pool: Sequence[CorpusRecord], n: int,
                          seed: int) -> AnnotationBatch:
    """Uniform sample without replacement, reproducible by seed."""
    if n > len(pool):
        raise PoolTooSmall(f"asked for {n} from a pool of {len(pool)}")
    picked = random.Random(seed).sample(list(pool), n)
    return AnnotationBatch(records=picked)


def merge_annotations(batch: AnnotationBatch) -> tuple[list[CorpusRecord], int, float]:
    """Keep only unanimously judged records.

    Returns (kept records with their agreed label, dropped count,
    raw agreement)."""
    kept: list[CorpusRecord] = []
    dropped = 0
    for record, a, b in zip(batch.records, batch.labels_a, batch.labels_b):
        if a is None or b is None:
            raise IncompleteLabels(f"record {record.id} is missing a judgment")
        if a == b:
            record.label = a
            kept.append(record)
        else:
            dropped += 1
    total = len(batch.records)
    agreement = len(kept) / total if total else 0.0
    return kept, dropped, agreement


def corpus_stats(records: Sequence[CorpusRecord],
                 tagger: Tagger | None = None) -> CorpusStats:
    """Audit statistics over a labeled sample.

    Span statistics cover hyperbole-labeled records that carry a span
    annotation; POS n-grams come from tagging those sentences.
    """
    if tagger is None:
        from .text import RuleTagger
        tagger = RuleTagger()
    n_total = len(records)
    n_non_hypo = sum(1 for r in records if r.label == LABEL_LITERAL)

    lengths: list[int] = []
    distinct_spans: set[str] = set()
    distinct_ngrams: set[tuple[str, ...]] = set()
    for record in records:
        if record.span is None or record.label == LABEL_LITERAL:
            continue
        start, end = record.span
        sentence = analyze(record.text, tagger)
        span = Span(start, end)
        lengths.append(len(span))
        distinct_spans.add(" ".join(sentence.normalized()[start:end]))
        distinct_ngrams.add(sentence.tags_for(span))

    if not lengths:
        return CorpusStats(n_total, n_non_hypo, 0.0, 0.0, 0, 0, has_span_stats=False)
    avg = sum(lengths) / len(lengths)
    pct_long = 100.0 * sum(1 for n in lengths if n > 1) / len(lengths)
    return CorpusStats(n_total, n_non_hypo, avg, pct_long,
                       len(distinct_spans), len(distinct_ngrams), has_span_stats=True)


def read_records(path) -> Iterator[CorpusRecord]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield CorpusRecord.from_json(json.loads(line))


def write_records(records: Iterable[CorpusRecord], path) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_json(), ensure_ascii=False) + "\n")
            count += 1
    return count


def read_batch(path) -> AnnotationBatch:
    records, labels_a, labels_b = [], [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            records.append(CorpusRecord.from_json(obj))
            labels_a.append(obj.get("label_a"))
            labels_b.append(obj.get("label_b"))
    return AnnotationBatch(records=records, labels_a=labels_a, labels_b=labels_b)


def write_batch(batch: AnnotationBatch, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record, a, b in zip(batch.records, batch.labels_a, batch.labels_b):
            obj = record.to_json()
            if a is not None:
                obj["label_a"] = a
            if b is not None:
                obj["label_b"] = b
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
