"""Hyperbolic paraphrase engine: mask, over-generate and rank.

The public surface mirrors the workflow: tokenize and tag text, learn
POS patterns of hyperbolic spans, score span unexpectedness with word
embeddings, generate candidates through an infill backend and select the
best-scoring one. The sklearn-style estimators in `pipeline` tie it all
together.
"""

from .backends import HttpBackend, MockBackend, ReplayBackend
from .config import EngineConfig, load_config
from .embeddings import (EmbeddingStore, UnexpectednessReport, cosine_distance,
                         load_embeddings, sentence_unexpectedness,
                         span_unexpectedness)
from .errors import MoverError
from .evaluation import EvalCase, bleu, corpus_bleu, evaluate_systems
from .masking import (MASK_TOKEN, MaskedSentence, PatternSet, PosPattern,
                      exact_match, extract_pos_patterns, mask_all, match_spans,
                      select_training_masks)
from .overgenerate import CandidateSet, make_training_pairs, overgenerate
from .pipeline import HyperboleParaphraser, PatternMasker
from .ranking import (RankedCandidate, RankerConfig, rank_ablation,
                      rank_and_select, score_candidate)
from .text import (RuleTagger, Span, TaggedSentence, Token, analyze,
                   detokenize, enumerate_ngrams, pos_tag, tokenize)

__version__ = "0.1.0"

__all__ = [
    "CandidateSet", "EmbeddingStore", "EngineConfig", "EvalCase",
    "HttpBackend", "HyperboleParaphraser", "MASK_TOKEN", "MaskedSentence",
    "MockBackend", "MoverError", "PatternMasker", "PatternSet", "PosPattern",
    "RankedCandidate", "RankerConfig", "ReplayBackend", "RuleTagger", "Span",
    "TaggedSentence", "Token", "UnexpectednessReport", "analyze", "bleu",
    "corpus_bleu", "cosine_distance", "detokenize", "enumerate_ngrams",
    "evaluate_systems", "exact_match", "extract_pos_patterns",
    "load_config", "load_embeddings", "make_training_pairs", "mask_all",
    "match_spans", "overgenerate", "pos_tag", "rank_ablation",
    "rank_and_select", "score_candidate", "select_training_masks",
    "sentence_unexpectedness", "span_unexpectedness", "tokenize",
]
