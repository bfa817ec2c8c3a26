"""Word-vector storage and the unexpectedness scores.

A sentence's unexpectedness is the average cosine distance over all of its
word pairs; a span's unexpectedness averages over pairs that cross the span
boundary (one word inside, one outside). High values signal semantic
incongruity, which is the semantic cue for hyperbolic spans.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InconsistentDim, ZeroVector
from .text import Span, TaggedSentence, _is_punct


@dataclass(frozen=True)
class UnexpectednessReport:
    value: float          # in [0, 2]; 0 when no pair was counted
    pairs_counted: int
    skipped_tokens: int   # OOV plus punctuation


class EmbeddingStore:
    """Read-only word -> unit vector map; lookups are case-insensitive.

    Vectors are normalized to unit length at load time so the pairwise
    distance reduces to 1 - dot, which keeps corpus-scale scoring cheap.
    """

    def __init__(self, vectors: dict[str, np.ndarray]):
        if not vectors:
            self.dim = 0
            self._table: dict[str, np.ndarray] = {}
            return
        dims = {len(v) for v in vectors.values()}
        if len(dims) != 1:
            raise InconsistentDim(f"mixed vector lengths: {sorted(dims)}")
        self.dim = dims.pop()
        self._table = {}
        for word, vec in vectors.items():
            arr = np.asarray(vec, dtype=np.float64)
            norm = np.linalg.norm(arr)
            if norm == 0:
                continue
            self._table[word.lower()] = arr / norm

    def __len__(self) -> int:
        return len(self._table)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self._table

    def get(self, word: str) -> np.ndarray | None:
        return self._table.get(word.lower())


def load_embeddings(path, vocab_filter: set[str] | None = None,
                    counters: dict | None = None) -> EmbeddingStore:
    """Parse a text embedding file (`word v1 ... v_dim` per line).

    Unparseable lines are skipped and counted under `malformed`; a line whose
    vector length disagrees with the first parsed line is fatal. An optional
    vocabulary filter bounds memory on large files.
    """
    if vocab_filter is not None:
        vocab_filter = {w.lower() for w in vocab_filter}
    counters = counters if counters is not None else {}
    counters.setdefault("malformed", 0)
    counters.setdefault("loaded", 0)
    counters.setdefault("filtered_out", 0)

    dim = None
    table: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.rstrip("\n").split(" ")
            if len(parts) < 2:
                counters["malformed"] += 1
                continue
            word = parts[0]
            try:
                values = [float(p) for p in parts[1:] if p != ""]
            except ValueError:
                counters["malformed"] += 1
                continue
            if not values:
                counters["malformed"] += 1
                continue
            if dim is None:
                dim = len(values)
            elif len(values) != dim:
                raise InconsistentDim(
                    f"line for {word!r} has {len(values)} values, expected {dim}")
            if vocab_filter is not None and word.lower() not in vocab_filter:
                counters["filtered_out"] += 1
                continue
            vec = np.asarray(values, dtype=np.float64)
            if np.linalg.norm(vec) == 0:
                counters["malformed"] += 1
                continue
            table[word.lower()] = vec
            counters["loaded"] += 1
    return EmbeddingStore(table)


def cosine_distance(u: Sequence[float], v: Sequence[float]) -> float:
    """1 - cos(u, v), clamped into [0, 2]."""
    a = np.asarray(u, dtype=np.float64)
    b = np.asarray(v, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ZeroVector("cosine distance undefined for a zero vector")
    return float(min(2.0, max(0.0, 1.0 - float(a @ b) / (na * nb))))


def _scorable_rows(sentence: TaggedSentence, store: EmbeddingStore):
    """Unit vectors for tokens that take part in pair averages.

    Punctuation is treated as out of vocabulary: it would dominate pair
    counts without carrying semantic content.
    """
    indices, rows = [], []
    for token in sentence.tokens:
        if _is_punct(token.normalized):
            continue
        vec = store.get(token.normalized)
        if vec is None:
            continue
        indices.append(token.index)
        rows.append(vec)
    skipped = len(sentence.tokens) - len(indices)
    matrix = np.vstack(rows) if rows else np.empty((0, store.dim or 1))
    return np.asarray(indices), matrix, skipped


def sentence_unexpectedness(sentence: TaggedSentence,
                            store: EmbeddingStore) -> UnexpectednessReport:
    """Average cosine distance over all unordered in-vocabulary word pairs."""
    _, matrix, skipped = _scorable_rows(sentence, store)
    k = matrix.shape[0]
    if k < 2:
        return UnexpectednessReport(0.0, 0, skipped)
    gram = matrix @ matrix.T
    iu = np.triu_indices(k, 1)
    distances = 1.0 - gram[iu]
    value = float(min(2.0, max(0.0, float(distances.mean()))))
    return UnexpectednessReport(value, distances.size, skipped)


def score_spans(sentence: TaggedSentence, spans: Sequence[Span],
                store: EmbeddingStore) -> list[UnexpectednessReport]:
    """Span unexpectedness for many spans of one sentence, sharing one
    vector matrix. Pairs take one word inside the span and one outside."""
    indices, matrix, skipped = _scorable_rows(sentence, store)
    reports = []
    for span in spans:
        if span.end > len(sentence):
            raise ValueError(f"span {span} outside sentence of length {len(sentence)}")
        inside = (indices >= span.start) & (indices < span.end) if indices.size else np.array([], bool)
        n_in = int(inside.sum())
        n_out = int(indices.size - n_in)
        if n_in == 0 or n_out == 0:
            reports.append(UnexpectednessReport(0.0, 0, skipped))
            continue
        cross = 1.0 - matrix[inside] @ matrix[~inside].T
        value = float(min(2.0, max(0.0, float(cross.mean()))))
        reports.append(UnexpectednessReport(value, cross.size, skipped))
    return reports


def span_unexpectedness(sentence: TaggedSentence, span: Span,
                        store: EmbeddingStore) -> UnexpectednessReport:
    """Average cosine distance over in-vocabulary pairs crossing the span boundary."""
    return score_spans(sentence, [span], store)[0]
