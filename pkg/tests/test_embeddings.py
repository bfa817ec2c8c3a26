import itertools
import random

import numpy as np
import pytest

from helpers import make_sentence, random_sentence, random_store, random_words

from mover import (EmbeddingStore, Span, cosine_distance, load_embeddings,
                   sentence_unexpectedness, span_unexpectedness)
from mover.errors import InconsistentDim, ZeroVector


def brute_cosine_distance(u, v):
    u, v = np.asarray(u, float), np.asarray(v, float)
    return 1.0 - float(u @ v) / (np.linalg.norm(u) * np.linalg.norm(v))


def brute_sentence_score(sentence, store):
    """Independent double loop over unordered in-vocabulary pairs."""
    vecs = [store.get(t.normalized) for t in sentence.tokens
            if any(ch.isalnum() for ch in t.normalized) and t.normalized in store]
    total, pairs = 0.0, 0
    for i, j in itertools.combinations(range(len(vecs)), 2):
        total += brute_cosine_distance(vecs[i], vecs[j])
        pairs += 1
    return (total / pairs if pairs else 0.0), pairs


def brute_span_score(sentence, span, store):
    inside, outside = [], []
    for t in sentence.tokens:
        if not any(ch.isalnum() for ch in t.normalized) or t.normalized not in store:
            continue
        (inside if span.start <= t.index < span.end else outside).append(store.get(t.normalized))
    total, pairs = 0.0, 0
    for u in inside:
        for v in outside:
            total += brute_cosine_distance(u, v)
            pairs += 1
    return (total / pairs if pairs else 0.0), pairs


def test_cosine_identity_orthogonal_antipodal():
    assert cosine_distance([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0
    assert cosine_distance([1, 0], [0, 1]) == 1.0
    assert cosine_distance([1, 0], [-1, 0]) == 2.0


def test_cosine_rejects_zero_vector():
    with pytest.raises(ZeroVector):
        cosine_distance([0, 0], [1, 0])


def test_cosine_symmetry_and_scale_invariance():
    rng = np.random.RandomState(3)
    for _ in range(50):
        u, v = rng.uniform(-1, 1, 6), rng.uniform(-1, 1, 6)
        assert cosine_distance(u, v) == pytest.approx(cosine_distance(v, u), abs=1e-12)
        assert cosine_distance(3.7 * u, v) == pytest.approx(cosine_distance(u, v), abs=1e-12)


def test_load_embeddings_basic(tmp_path):
    path = tmp_path / "vecs.txt"
    path.write_text("cat 1 0 0\ndog 0 1 0\n")
    store = load_embeddings(path)
    assert len(store) == 2 and store.dim == 3
    assert "CAT" in store  # case-insensitive lookup


def test_load_embeddings_inconsistent_dim_is_fatal(tmp_path):
    path = tmp_path / "vecs.txt"
    path.write_text("cat 1 0 0 0\ndog 0 1 0\n")
    with pytest.raises(InconsistentDim):
        load_embeddings(path)


def test_load_embeddings_malformed_lines_skipped(tmp_path):
    path = tmp_path / "vecs.txt"
    path.write_text("cat 1 0 0\n. . . 1 0 0\ndog 0 1 0\n")
    counters = {}
    store = load_embeddings(path, counters=counters)
    assert len(store) == 2
    assert counters["malformed"] == 1


def test_load_embeddings_vocab_filter(tmp_path):
    # 10k-line synthetic file restricted to a 50-word vocabulary: only the
    # 30 planted vocabulary lines survive.
    path = tmp_path / "big.txt"
    vocab = {f"keep{i}" for i in range(50)}
    planted = sorted(vocab)[:30]
    with open(path, "w") as fh:
        for i in range(10_000):
            word = planted[(i // 300) % 30] if i % 300 == 0 else f"junk{i}"
            fh.write(f"{word} 0.5 0.25 -0.125\n")
    store = load_embeddings(path, vocab_filter=vocab)
    assert len(store) == 30
    assert len(store) <= 50


def test_unit_normalization_at_load():
    store = EmbeddingStore({"a": np.array([3.0, 4.0])})
    assert np.linalg.norm(store.get("a")) == pytest.approx(1.0, abs=1e-12)


def test_sentence_score_identical_embeddings_zero():
    store = EmbeddingStore({w: np.ones(4) for w in ["cat", "dog", "car"]})
    report = sentence_unexpectedness(make_sentence(["cat", "dog", "car"]), store)
    assert report.value == pytest.approx(0.0, abs=1e-12)
    assert report.pairs_counted == 3


def test_two_token_sentence_is_single_pair(store):
    sentence = make_sentence(["honey", "snow"])
    report = sentence_unexpectedness(sentence, store)
    assert report.pairs_counted == 1
    assert report.value == pytest.approx(
        brute_cosine_distance(store.get("honey"), store.get("snow")), abs=1e-12)
    # The one cross pair of a 2-token sentence is the one sentence pair.
    span_report = span_unexpectedness(sentence, Span(0, 1), store)
    assert span_report.value == pytest.approx(report.value, abs=1e-12)


def test_whole_sentence_span_has_no_pairs(store):
    sentence = make_sentence(["honey", "snow", "light"])
    report = span_unexpectedness(sentence, Span(0, 3), store)
    assert report.value == 0.0 and report.pairs_counted == 0


def test_oov_and_punctuation_excluded(store):
    sentence = make_sentence(["honey", "zzzunknown", ".", "snow"])
    report = sentence_unexpectedness(sentence, store)
    assert report.pairs_counted == 1
    assert report.skipped_tokens == 2


def test_matches_brute_force_oracle():
    rng = random.Random(123)
    store = random_store(random_words(rng, 200) + ["the", "is"], dim=10, seed=5)
    for _ in range(300):
        sentence = random_sentence(rng)
        got = sentence_unexpectedness(sentence, store)
        want_value, want_pairs = brute_sentence_score(sentence, store)
        assert got.pairs_counted == want_pairs
        assert got.value == pytest.approx(want_value, abs=1e-9)

        start = rng.randrange(len(sentence))
        end = rng.randint(start + 1, len(sentence))
        span = Span(start, end)
        got_span = span_unexpectedness(sentence, span, store)
        want_value, want_pairs = brute_span_score(sentence, span, store)
        assert got_span.pairs_counted == want_pairs
        assert got_span.value == pytest.approx(want_value, abs=1e-9)


def test_permutation_invariance(store):
    rng = random.Random(9)
    words = ["honey", "snow", "light", "music", "power"]
    base = sentence_unexpectedness(make_sentence(words), store)
    for _ in range(10):
        shuffled = words[:]
        rng.shuffle(shuffled)
        report = sentence_unexpectedness(make_sentence(shuffled), store)
        assert report.value == pytest.approx(base.value, abs=1e-12)
        assert report.pairs_counted == base.pairs_counted
