"""Automatic evaluation: BLEU and the COPY / retrieve / retrieve-replace baselines."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .embeddings import EmbeddingStore
from .errors import EmptyInput, NoMatch
from .masking import PatternSet, match_spans, select_training_masks
from .ranking import RankerConfig, rank_and_select
from .text import Span, TaggedSentence, Tagger, analyze, detokenize, tokenize

BLEU_ORDER = 4
SMOOTH_EPS = 0.1


@dataclass(frozen=True)
class EvalCase:
    literal: str
    references: tuple[str, ...]

    def __post_init__(self):
        if not self.references:
            raise EmptyInput("an evaluation case needs at least one reference")


@dataclass
class SystemResult:
    bleu: float | None = None
    error: str | None = None
    outputs: list[str] = field(default_factory=list)


@dataclass
class EvalReport:
    systems: dict[str, SystemResult] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            name: {"bleu": r.bleu, "error": r.error, "outputs": r.outputs}
            for name, r in self.systems.items()
        }

    def table(self) -> str:
        width = max([len(n) for n in self.systems] + [6])
        lines = [f"{'system'.ljust(width)}  BLEU"]
        for name, result in self.systems.items():
            score = f"{result.bleu:.2f}" if result.bleu is not None else f"error: {result.error}"
            lines.append(f"{name.ljust(width)}  {score}")
        return "\n".join(lines)


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def _bleu_stats(candidate: Sequence[str], references: Sequence[Sequence[str]]):
    """Clipped match / total counts per order, plus candidate and closest
    reference lengths."""
    matches = [0] * BLEU_ORDER
    totals = [0] * BLEU_ORDER
    for n in range(1, BLEU_ORDER + 1):
        counts = _ngram_counts(candidate, n)
        if not counts:
            continue
        max_ref: Counter = Counter()
        for ref in references:
            for ngram, count in _ngram_counts(ref, n).items():
                if count > max_ref[ngram]:
                    max_ref[ngram] = count
        matches[n - 1] = sum(min(c, max_ref[g]) for g, c in counts.items())
        totals[n - 1] = sum(counts.values())
    c = len(candidate)
    r = min((len(ref) for ref in references),
            key=lambda rl: (abs(rl - c), rl))
    return matches, totals, c, r


def _bleu_from_stats(matches: Sequence[int], totals: Sequence[int],
                     c: int, r: int) -> float:
    """BLEU-4 with epsilon counts substituted for zero n-gram matches and
    orders the candidate is too short for dropped from the geometric mean."""
    log_sum = 0.0
    used = 0
    for m, t in zip(matches, totals):
        if t == 0:
            continue
        used += 1
        log_sum += math.log((m if m > 0 else SMOOTH_EPS) / t)
    if used == 0 or c == 0:
        return 0.0
    precision = math.exp(log_sum / used)
    bp = 1.0 if c > r else math.exp(1.0 - r / c)
    return 100.0 * bp * precision


def bleu(candidate: str, references: Sequence[str]) -> float:
    """Sentence BLEU-4 in [0, 100]; deterministic, reference-order invariant."""
    if not candidate.strip() or not references:
        raise EmptyInput("candidate and references must be non-empty")
    cand = [t.normalized for t in tokenize(candidate)]
    refs = [[t.normalized for t in tokenize(ref)] for ref in references]
    return _bleu_from_stats(*_bleu_stats(cand, refs))


def corpus_bleu(pairs: Sequence[tuple[str, Sequence[str]]]) -> float:
    """Corpus BLEU-4: counts aggregated over all cases before the ratio."""
    if not pairs:
        raise EmptyInput("no candidate/reference pairs")
    agg_m = [0] * BLEU_ORDER
    agg_t = [0] * BLEU_ORDER
    agg_c = agg_r = 0
    for candidate, references in pairs:
        cand = [t.normalized for t in tokenize(candidate)] if candidate.strip() else []
        refs = [[t.normalized for t in tokenize(ref)] for ref in references]
        if not refs:
            raise EmptyInput("a case has no references")
        matches, totals, c, r = _bleu_stats(cand, refs) if cand else ([0] * 4, [0] * 4, 0, min(len(x) for x in refs))
        for i in range(BLEU_ORDER):
            agg_m[i] += matches[i]
            agg_t[i] += totals[i]
        agg_c += c
        agg_r += r
    return _bleu_from_stats(agg_m, agg_t, agg_c, agg_r)


def run_copy(case: EvalCase) -> str:
    """Echo the literal input; the copy baseline."""
    return case.literal


def _retrieve(literal: str, corpus: Sequence, para_backend) -> list[tuple[float, int, str]]:
    scored = []
    for idx, record in enumerate(corpus):
        text = record.text if hasattr(record, "text") else str(record)
        scored.append((para_backend(literal, text), idx, text))
    # Highest similarity first; ties keep corpus order.
    scored.sort(key=lambda item: (-item[0], item[1]))
    return scored


def run_r1(case: EvalCase, corpus: Sequence, para_backend) -> str:
    """Retrieval baseline: the corpus sentence most similar to the input."""
    if not corpus:
        raise EmptyInput("retrieval corpus is empty")
    return _retrieve(case.literal, corpus, para_backend)[0][2]


def _substitute(sentence: TaggedSentence, span: Span,
                replacement: Sequence[str]) -> str:
    surfaces = list(sentence.surfaces())
    replacement = list(replacement)
    if span.start == 0 and replacement and surfaces[0][:1].isupper():
        replacement[0] = replacement[0][:1].upper() + replacement[0][1:]
    return " ".join(surfaces[:span.start] + replacement + surfaces[span.end:])


def run_r3(case: EvalCase, corpus: Sequence, patterns: PatternSet,
           store: EmbeddingStore, hypo_backend, para_backend,
           config: RankerConfig = RankerConfig(), tagger: Tagger | None = None,
           top_retrieved: int = 5, spans_per_sentence: int = 3) -> str:
    """Retrieve-replace-rank baseline.

    Takes the most similar corpus sentences, extracts their most unexpected
    pattern spans, substitutes them into pattern-matched spans of the input
    wherever the POS tag sequences agree, and ranks the variants. Falls back
    to plain retrieval when nothing matches.
    """
    if tagger is None:
        from .text import RuleTagger
        tagger = RuleTagger()
    retrieved = _retrieve(case.literal, corpus, para_backend)[:top_retrieved]
    input_sentence = analyze(case.literal, tagger)
    input_spans = match_spans(input_sentence, patterns)

    variants: list[str] = []
    seen: set[str] = set()
    for _, _, text in retrieved:
        sentence = analyze(text, tagger)
        try:
            masks = select_training_masks(sentence, patterns, store, k=spans_per_sentence)
        except NoMatch:
            continue
        for mask in masks:
            donor_span = mask.masked_span
            donor_tags = sentence.tags_for(donor_span)
            for span in input_spans:
                if input_sentence.tags_for(span) != donor_tags:
                    continue
                donor_text = [t.surface for t in sentence.tokens[donor_span.start:donor_span.end]]
                variant = _substitute(input_sentence, span, donor_text)
                if variant not in seen:
                    seen.add(variant)
                    variants.append(variant)
    if not variants:
        return run_r1(case, corpus, para_backend)
    best = rank_and_select(detokenize(input_sentence.tokens), variants,
                           hypo_backend, para_backend, config)
    return best.text


def evaluate_systems(cases: Sequence[EvalCase],
                     systems: dict[str, Callable[[EvalCase], str]],
                     jobs: int = 1) -> EvalReport:
    """Corpus BLEU per system; a failing system is reported, not fatal.

    Cases are independent, so jobs > 1 runs them concurrently; outputs keep
    input order either way.
    """
    if not cases or not systems:
        raise EmptyInput("need at least one case and one system")
    report = EvalReport()
    for name, system in systems.items():
        result = SystemResult()
        try:
            if jobs > 1:
                from concurrent.futures import ThreadPoolExecutor
                with ThreadPoolExecutor(max_workers=jobs) as pool:
                    outputs = list(pool.map(system, cases))
            else:
                outputs = [system(case) for case in cases]
            result.outputs = outputs
            result.bleu = corpus_bleu([(o, c.references) for o, c in zip(outputs, cases)])
        except Exception as exc:  # propagate per system, keep the report partial
            result.error = f"{type(exc).__name__}: {exc}"
        report.systems[name] = result
    return report


def read_cases(path) -> list[EvalCase]:
    cases = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            cases.append(EvalCase(obj["literal"], tuple(obj["references"])))
    return cases
