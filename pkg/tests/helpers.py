"""Shared builders for synthetic sentences, embeddings and corpora."""

from __future__ import annotations

import random

import numpy as np

from mover import EmbeddingStore, RuleTagger, analyze
from mover.text import TaggedSentence

TAGGER = RuleTagger()

# Small vocabulary with known fallback-tagger behavior, used by fuzz corpora.
VOCAB = [
    "the", "a", "cat", "dog", "car", "house", "light", "honey", "snow",
    "music", "power", "beauty", "time", "night", "river", "city", "is",
    "was", "looks", "seems", "runs", "very", "too", "always", "never",
    "good", "bad", "sweet", "cold", "bright", "heavy", "faster", "sweeter",
    "colder", "than", "in", "on", "with", "of",
]


def random_words(rng: random.Random, n: int) -> list[str]:
    return [rng.choice(VOCAB) for _ in range(n)]


def make_sentence(words: list[str]) -> TaggedSentence:
    return analyze(" ".join(words), TAGGER)


def random_sentence(rng: random.Random, min_len=3, max_len=12) -> TaggedSentence:
    return make_sentence(random_words(rng, rng.randint(min_len, max_len)))


def random_store(words, dim=10, seed=0) -> EmbeddingStore:
    rng = np.random.RandomState(seed)
    return EmbeddingStore({w: rng.uniform(-1, 1, size=dim) for w in set(words)})


def write_embeddings_file(path, words, dim=10, seed=0) -> None:
    rng = np.random.RandomState(seed)
    with open(path, "w", encoding="utf-8") as fh:
        for word in sorted(set(words)):
            vec = rng.uniform(-1, 1, size=dim)
            fh.write(word + " " + " ".join(f"{x:.6f}" for x in vec) + "\n")
