"""Scikit-learn style estimators wrapping the mask / over-generate / rank core.

`PatternMasker` learns the POS pattern library from labeled sentence pairs
and turns new sentences into masked variants. `HyperboleParaphraser` runs
the full pipeline: mask everything that looks like a hyperbole slot, ask the
infill backend for completions, and keep the candidate with the best score.
Both compose with sklearn tooling (`get_params`, `clone`, pipelines).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from sklearn.base import BaseEstimator, TransformerMixin

from .backends import Backend, BackendTagger, MockBackend
from .embeddings import EmbeddingStore
from .errors import NoMatch
from .masking import (DEFAULT_MAX_PATTERN_LEN, DEFAULT_TOP_K, PatternSet,
                      extract_pos_patterns, mask_all, select_training_masks)
from .overgenerate import overgenerate
from .ranking import RankerConfig, score_candidates, select_best
from .text import RuleTagger, analyze, detokenize
from .validation import check_fitted, check_pair_list, check_text_list


class PatternMasker(BaseEstimator, TransformerMixin):
    """Learns hyperbolic POS patterns from sentence pairs and masks new text.

    In `infer` mode every pattern-matched span yields one masked variant; in
    `train` mode only the `top_k` most unexpected spans do, which needs an
    embedding store.
    """

    def __init__(self, mode="infer", top_k=DEFAULT_TOP_K,
                 max_pattern_len=DEFAULT_MAX_PATTERN_LEN, span_source="overlap",
                 min_support=1, embeddings=None, tagger=None):
        self.mode = mode
        self.top_k = top_k
        self.max_pattern_len = max_pattern_len
        self.span_source = span_source
        self.min_support = min_support
        self.embeddings = embeddings
        self.tagger = tagger

    def _tagger(self):
        return self.tagger if self.tagger is not None else RuleTagger()

    def fit(self, X, y=None):
        """X: (hyperbole, literal lookalike) text pairs or {hypo, non_hypo} dicts."""
        pairs = check_pair_list(X)
        tagger = self._tagger()
        tagged = [(analyze(h, tagger), analyze(n, tagger)) for h, n in pairs]
        self.extraction_counters_ = {}
        patterns = extract_pos_patterns(tagged, span_source=self.span_source,
                                        max_pattern_len=self.max_pattern_len,
                                        counters=self.extraction_counters_)
        self.patterns_ = patterns.filter_support(self.min_support)
        return self

    def set_patterns(self, patterns: PatternSet):
        """Adopt a prebuilt pattern library instead of fitting."""
        self.patterns_ = patterns.filter_support(self.min_support)
        return self

    def transform(self, X):
        """One list of masked variants per input sentence; sentences without
        a pattern match yield an empty list."""
        check_fitted(self, "patterns_")
        if self.mode not in ("infer", "train"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "train" and self.embeddings is None:
            raise ValueError("train mode needs an embedding store")
        tagger = self._tagger()
        store = self.embeddings if self.embeddings is not None else EmbeddingStore({})
        out = []
        for raw in check_text_list(X):
            sentence = analyze(raw, tagger)
            try:
                if self.mode == "train":
                    masks = select_training_masks(sentence, self.patterns_, store, k=self.top_k)
                else:
                    masks = mask_all(sentence, self.patterns_)
            except NoMatch:
                masks = []
            out.append(masks)
        return out


class HyperboleParaphraser(BaseEstimator, TransformerMixin):
    """Full pipeline estimator: literal sentences in, hyperbolic paraphrases out.

    `fit` learns the pattern library from sentence pairs (or adopt one via
    `patterns`). `transform`/`predict` run mask, over-generate and rank per
    sentence; a sentence with no maskable span is passed through unchanged.
    """

    def __init__(self, backend=None, patterns=None, gamma=0.8, epsilon=0.001,
                 num_return=1, max_pattern_len=DEFAULT_MAX_PATTERN_LEN,
                 span_source="overlap", min_support=1, tagger=None, jobs=1):
        self.backend = backend
        self.patterns = patterns
        self.gamma = gamma
        self.epsilon = epsilon
        self.num_return = num_return
        self.max_pattern_len = max_pattern_len
        self.span_source = span_source
        self.min_support = min_support
        self.tagger = tagger
        self.jobs = jobs

    def _backend(self) -> Backend:
        return self.backend if self.backend is not None else MockBackend()

    def _resolve_patterns(self) -> PatternSet:
        if getattr(self, "patterns_", None) is not None:
            return self.patterns_
        if self.patterns is None:
            check_fitted(self, "patterns_")
        return self.patterns

    def fit(self, X, y=None):
        masker = PatternMasker(max_pattern_len=self.max_pattern_len,
                               span_source=self.span_source,
                               min_support=self.min_support, tagger=self.tagger)
        masker.fit(X)
        self.patterns_ = masker.patterns_
        return self

    def generate_one(self, literal: str, jobs: int | None = None) -> dict:
        """Run the pipeline on one sentence and return the full record."""
        patterns = self._resolve_patterns()
        backend = self._backend()
        tagger = self.tagger if self.tagger is not None else BackendTagger(backend)
        config = RankerConfig(self.gamma, self.epsilon)
        sentence = analyze(literal, tagger)
        record = {"literal": literal}
        try:
            masks = mask_all(sentence, patterns)
        except NoMatch:
            record.update(output=detokenize(sentence.tokens), fallback="no_pattern_match",
                          hypo_score=None, para_score=None, final_score=None,
                          candidates=0)
            return record
        candidates = overgenerate(masks, backend, num_return=self.num_return,
                                  jobs=self.jobs if jobs is None else jobs)
        scored = score_candidates(candidates.source, candidates,
                                  backend.hyperbole_score, backend.paraphrase_score,
                                  config)
        best = select_best(scored)
        record.update(output=best.text, hypo_score=best.hypo_score,
                      para_score=best.para_score, final_score=best.final_score,
                      candidates=len(scored),
                      fallback=None if best.final_score > 0 else "ranker_window")
        return record

    def generate_records(self, X) -> list[dict]:
        """Full per-sentence records, in input order regardless of jobs."""
        texts = check_text_list(X)
        if self.jobs > 1:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                return list(pool.map(lambda t: self.generate_one(t, jobs=1), texts))
        return [self.generate_one(t) for t in texts]

    def transform(self, X):
        return [r["output"] for r in self.generate_records(X)]

    def predict(self, X):
        return self.transform(X)
