"""Candidate over-generation from masked variants, plus training-pair export."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence

from .backends import Backend
from .embeddings import EmbeddingStore
from .errors import AllRequestsFailed, BackendUnavailable, EmptyInput, NoMatch
from .masking import MaskedSentence, PatternSet, select_training_masks
from .text import Span, TaggedSentence, detokenize


@dataclass(frozen=True)
class Candidate:
    text: str
    mask_index: int      # which masked variant produced it
    rank: int            # backend rank within that variant
    masked_span: Span


@dataclass
class CandidateSet:
    source: str
    candidates: list[Candidate] = field(default_factory=list)
    failures: int = 0    # masked variants whose backend request failed


class TrainingPair(NamedTuple):
    masked: str
    original: str


def overgenerate(masks: Sequence[MaskedSentence], backend: Backend,
                 num_return: int = 1, jobs: int = 1) -> CandidateSet:
    """Collect backend completions for every masked variant.

    Completions are deduplicated by normalized text with stable
    (mask index, backend rank) order. Copies of the source are kept: the
    ranker's copy guard is responsible for rejecting them. Individual
    request failures are tolerated and counted; if every request fails the
    whole operation fails.
    """
    if not masks:
        raise EmptyInput("no masked variants to infill")

    def _one(mask: MaskedSentence) -> list[str] | None:
        try:
            return list(backend.infill(mask.masked_text, num_return))
        except BackendUnavailable:
            return None

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_one, masks))
    else:
        results = [_one(m) for m in masks]

    out = CandidateSet(source=detokenize(masks[0].source.tokens))
    seen: set[str] = set()
    for mask_index, (mask, completions) in enumerate(zip(masks, results)):
        if completions is None:
            out.failures += 1
            continue
        for rank, text in enumerate(completions):
            key = " ".join(text.lower().split())
            if key in seen:
                continue
            seen.add(key)
            out.candidates.append(Candidate(text, mask_index, rank, mask.masked_span))
    if out.failures == len(masks):
        raise AllRequestsFailed(f"all {len(masks)} infill requests failed")
    return out


def make_training_pairs(sentences: Iterable[TaggedSentence], patterns: PatternSet,
                        store: EmbeddingStore, k: int = 3,
                        counters: dict | None = None) -> Iterator[TrainingPair]:
    """Stream (masked, original) pairs for fine-tuning the infill model.

    Up to k pairs per sentence, picked by span unexpectedness. Sentences
    without a pattern match are skipped and counted.
    """
    counters = counters if counters is not None else {}
    counters.setdefault("skipped_no_match", 0)
    counters.setdefault("pairs", 0)
    for sentence in sentences:
        try:
            masks = select_training_masks(sentence, patterns, store, k=k)
        except NoMatch:
            counters["skipped_no_match"] += 1
            continue
        original = detokenize(sentence.tokens)
        for mask in masks:
            counters["pairs"] += 1
            yield TrainingPair(masked=mask.masked_text, original=original)
