"""POS-pattern library, hyperbolic-span candidates and mask production.

Pattern extraction aligns a hyperbolic sentence with its literal lookalike by
their longest common contiguous token run. By default the shared run itself
is taken as the hyperbolic span (the lookalike contains the same hyperbolic
words in a literal context); the complementary reading, which takes the
longest leftover run in the hyperbolic sentence instead, is kept behind the
`span_source` flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .embeddings import EmbeddingStore, score_spans
from .errors import EmptyInput, NoMatch, NoOverlap
from .text import Span, TaggedSentence

MASK_TOKEN = "<mask>"

DEFAULT_MAX_PATTERN_LEN = 5
DEFAULT_TOP_K = 3

SPAN_SOURCES = ("overlap", "residual")


@dataclass(frozen=True)
class PosPattern:
    tags: tuple[str, ...]
    support: int

    def __post_init__(self):
        if not self.tags:
            raise ValueError("empty tag sequence")
        if self.support < 1:
            raise ValueError("support must be >= 1")

    def label(self) -> str:
        return "+".join(self.tags)


class PatternSet:
    """Distinct POS tag sequences with support counts."""

    def __init__(self, counts: dict[tuple[str, ...], int] | None = None):
        self._counts = dict(counts or {})

    def __len__(self) -> int:
        return len(self._counts)

    def __contains__(self, tags: Sequence[str]) -> bool:
        return tuple(tags) in self._counts

    def __iter__(self):
        for tags in sorted(self._counts):
            yield PosPattern(tags, self._counts[tags])

    @property
    def max_len(self) -> int:
        return max((len(t) for t in self._counts), default=0)

    def add(self, tags: Sequence[str]) -> None:
        key = tuple(tags)
        self._counts[key] = self._counts.get(key, 0) + 1

    def filter_support(self, min_support: int) -> "PatternSet":
        return PatternSet({t: c for t, c in self._counts.items() if c >= min_support})

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for pattern in self:
                fh.write(f"{pattern.label()}\t{pattern.support}\n")

    @classmethod
    def load(cls, path) -> "PatternSet":
        counts: dict[tuple[str, ...], int] = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                label, _, support = line.partition("\t")
                counts[tuple(label.split("+"))] = int(support) if support else 1
        return cls(counts)


@dataclass(frozen=True)
class MaskedSentence:
    """A sentence with exactly one contiguous span replaced by the mask token."""

    source: TaggedSentence
    masked_span: Span
    text: tuple[str, ...]

    @property
    def masked_text(self) -> str:
        return " ".join(self.text)

    def original_span(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.source.tokens[self.masked_span.start:self.masked_span.end])

    def reconstruct(self) -> tuple[str, ...]:
        """Splice the original span back in place of the placeholder."""
        at = self.text.index(MASK_TOKEN)
        return self.text[:at] + self.original_span() + self.text[at + 1:]


def mask_span(sentence: TaggedSentence, span: Span) -> MaskedSentence:
    if span.end > len(sentence):
        raise ValueError(f"span {span} outside sentence of length {len(sentence)}")
    surfaces = sentence.surfaces()
    text = surfaces[:span.start] + (MASK_TOKEN,) + surfaces[span.end:]
    return MaskedSentence(source=sentence, masked_span=span, text=text)


def _longest_common_run(a: Sequence[str], b: Sequence[str]) -> tuple[int, int, int]:
    """(start_a, start_b, length) of the longest common contiguous run.

    Ties resolve to the earliest occurrence in `a`, then in `b`.
    """
    best = (0, 0, 0)
    prev = [0] * (len(b) + 1)
    for i in range(1, len(a) + 1):
        cur = [0] * (len(b) + 1)
        ai = a[i - 1]
        for j in range(1, len(b) + 1):
            if ai == b[j - 1]:
                cur[j] = prev[j - 1] + 1
                if cur[j] > best[2]:
                    best = (i - cur[j], j - cur[j], cur[j])
        prev = cur
    return best


def align_hyperbolic_span(hypo: TaggedSentence, non_hypo: TaggedSentence,
                          span_source: str = "overlap") -> Span | None:
    """Locate the hyperbolic span of `hypo` from its overlap with `non_hypo`.

    Returns None for degenerate alignments (identical sentences, or no
    leftover run in residual mode). Raises NoOverlap when the pair shares no
    token at all.
    """
    if span_source not in SPAN_SOURCES:
        raise ValueError(f"span_source must be one of {SPAN_SOURCES}")
    start, _, length = _longest_common_run(hypo.normalized(), non_hypo.normalized())
    if length == 0:
        raise NoOverlap("sentence pair shares no token")
    if length == len(hypo):
        return None
    if span_source == "overlap":
        return Span(start, start + length)
    # Residual: longest contiguous run of hypo tokens outside the overlap,
    # earliest on ties.
    runs = []
    for lo, hi in ((0, start), (start + length, len(hypo))):
        if hi > lo:
            runs.append(Span(lo, hi))
    if not runs:
        return None
    return max(runs, key=lambda s: (len(s), -s.start))


def extract_pos_patterns(pairs: Sequence[tuple[TaggedSentence, TaggedSentence]],
                         span_source: str = "overlap",
                         max_pattern_len: int = DEFAULT_MAX_PATTERN_LEN,
                         counters: dict | None = None) -> PatternSet:
    """Build the POS pattern library from (hyperbolic, literal-lookalike) pairs.

    Pairs without overlap, with degenerate alignment, or whose span exceeds
    the length cap are skipped and counted.
    """
    if not pairs:
        raise EmptyInput("no sentence pairs to extract patterns from")
    counters = counters if counters is not None else {}
    counters.setdefault("no_overlap", 0)
    counters.setdefault("degenerate", 0)
    counters.setdefault("too_long", 0)
    counters.setdefault("used", 0)

    patterns = PatternSet()
    for hypo, non_hypo in pairs:
        try:
            span = align_hyperbolic_span(hypo, non_hypo, span_source)
        except NoOverlap:
            counters["no_overlap"] += 1
            continue
        if span is None:
            counters["degenerate"] += 1
            continue
        if len(span) > max_pattern_len:
            counters["too_long"] += 1
            continue
        patterns.add(hypo.tags_for(span))
        counters["used"] += 1
    return patterns


def match_spans(sentence: TaggedSentence, patterns: PatternSet) -> list[Span]:
    """All contiguous spans whose tag sequence is in the pattern set,
    ordered by (start, length)."""
    max_len = min(patterns.max_len, len(sentence))
    spans = []
    for start in range(len(sentence)):
        for n in range(1, max_len + 1):
            if start + n > len(sentence):
                break
            if sentence.tags[start:start + n] in patterns:
                spans.append(Span(start, start + n))
    return spans


def select_training_masks(sentence: TaggedSentence, patterns: PatternSet,
                          store: EmbeddingStore,
                          k: int = DEFAULT_TOP_K) -> list[MaskedSentence]:
    """Mask the top-k matched spans by unexpectedness (training mode).

    Ties break to the earlier start, then the shorter span, so output is
    reproducible.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    spans = match_spans(sentence, patterns)
    if not spans:
        raise NoMatch("no span matches any pattern")
    reports = score_spans(sentence, spans, store)
    ranked = sorted(
        zip(spans, reports),
        key=lambda item: (-item[1].value, item[0].start, len(item[0])),
    )
    return [mask_span(sentence, span) for span, _ in ranked[:k]]


def mask_all(sentence: TaggedSentence, patterns: PatternSet) -> list[MaskedSentence]:
    """Mask every matched span (inference mode), dropping duplicates that
    produce identical masked text."""
    spans = match_spans(sentence, patterns)
    if not spans:
        raise NoMatch("no span matches any pattern")
    out, seen = [], set()
    for span in spans:
        masked = mask_span(sentence, span)
        if masked.text in seen:
            continue
        seen.add(masked.text)
        out.append(masked)
    return out


def exact_match(predicted: Iterable[Span], gold: Span) -> bool:
    """True iff the gold span's token boundaries appear among the predictions."""
    return any(span.start == gold.start and span.end == gold.end for span in predicted)
