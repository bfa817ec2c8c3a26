import random

import pytest

from helpers import TAGGER, make_sentence, random_sentence, random_store, random_words

from mover import (MASK_TOKEN, PatternSet, Span, analyze, exact_match,
                   extract_pos_patterns, mask_all, match_spans,
                   select_training_masks, span_unexpectedness)
from mover.errors import EmptyInput, NoMatch, NoOverlap
from mover.masking import align_hyperbolic_span, mask_span


def tagged(text):
    return analyze(text, TAGGER)


def pattern_set(*labels):
    return PatternSet({tuple(label.split("+")): 1 for label in labels})


def random_patterns(rng, sentences, per_sentence=2, max_len=3):
    """Patterns sampled from actual tag sequences, so matches exist."""
    counts = {}
    for sentence in sentences:
        for _ in range(per_sentence):
            start = rng.randrange(len(sentence))
            n = rng.randint(1, max_len)
            if start + n > len(sentence):
                n = len(sentence) - start
            key = sentence.tags[start:start + n]
            counts[key] = counts.get(key, 0) + 1
    return PatternSet(counts)


# --- pattern extraction ---------------------------------------------------

def test_alignment_golden():
    # Frozen output of the longest-common-run alignment on this pair.
    hypo = tagged("X is sweeter than honey")
    non = tagged("honey is sweeter than sugar")
    span = align_hyperbolic_span(hypo, non, "overlap")
    assert (span.start, span.end) == (1, 4)
    assert hypo.span_text(span) == "is sweeter than"
    residual = align_hyperbolic_span(hypo, non, "residual")
    assert (residual.start, residual.end) == (0, 1)
    patterns = extract_pos_patterns([(hypo, non)])
    assert [(p.label(), p.support) for p in patterns] == [("VBZ+JJR+IN", 1)]


def test_identical_sentences_contribute_nothing():
    pair = (tagged("the cat is cold"), tagged("the cat is cold"))
    counters = {}
    patterns = extract_pos_patterns([pair], counters=counters)
    assert len(patterns) == 0
    assert counters["degenerate"] == 1


def test_no_overlap_pair_skipped_and_counted():
    pairs = [
        (tagged("honey is sweet"), tagged("dogs bark loudly")),
        (tagged("X is sweeter than honey"), tagged("honey is sweeter than sugar")),
    ]
    counters = {}
    patterns = extract_pos_patterns(pairs, counters=counters)
    assert counters["no_overlap"] == 1
    assert counters["used"] == 1
    assert len(patterns) == 1


def test_overlong_spans_dropped_by_cap():
    hypo = tagged("the old cat sat on the wide mat today")
    non = tagged("the old cat sat on the wide mat yesterday")
    counters = {}
    patterns = extract_pos_patterns([(hypo, non)], max_pattern_len=5, counters=counters)
    assert counters["too_long"] == 1 and len(patterns) == 0
    patterns = extract_pos_patterns([(hypo, non)], max_pattern_len=8)
    assert len(patterns) == 1


def test_empty_pairs_rejected():
    with pytest.raises(EmptyInput):
        extract_pos_patterns([])


def test_support_accumulates():
    pair = (tagged("X is sweeter than honey"), tagged("honey is sweeter than sugar"))
    patterns = extract_pos_patterns([pair, pair])
    assert [(p.label(), p.support) for p in patterns] == [("VBZ+JJR+IN", 2)]


# --- matching -------------------------------------------------------------

def test_match_single_pattern():
    sentence = tagged("faster than light")
    spans = match_spans(sentence, pattern_set("JJR+IN+NN"))
    assert [(s.start, s.end) for s in spans] == [(0, 3)]


def test_match_empty_pattern_set():
    assert match_spans(tagged("faster than light"), PatternSet()) == []


def test_match_multiple_patterns_ordered():
    # Tags: honey/NN sweeter/JJR than/IN light/NN
    sentence = tagged("honey sweeter than light")
    assert sentence.tags == ("NN", "JJR", "IN", "NN")
    patterns = pattern_set("JJR+IN+NN", "NN")
    spans = match_spans(sentence, patterns)
    assert [(s.start, s.end) for s in spans] == [(0, 1), (1, 4), (3, 4)]
    # Sorted by (start, length) and every span's tags are in the set.
    assert spans == sorted(spans, key=lambda s: (s.start, len(s)))
    assert all(sentence.tags_for(s) in patterns for s in spans)


def test_pattern_set_roundtrips_through_file(tmp_path):
    patterns = PatternSet({("JJR", "IN", "NN"): 12, ("NN",): 3})
    path = tmp_path / "patterns.txt"
    patterns.save(path)
    assert path.read_text() == "JJR+IN+NN\t12\nNN\t3\n"
    loaded = PatternSet.load(path)
    assert [(p.label(), p.support) for p in loaded] == \
           [(p.label(), p.support) for p in patterns]
    assert loaded.max_len == 3
    assert len(loaded.filter_support(10)) == 1


# --- training-mask selection ----------------------------------------------

def test_single_match_single_mask(store):
    masks = select_training_masks(tagged("faster than light"), pattern_set("JJR+IN+NN"), store)
    assert len(masks) == 1
    assert masks[0].masked_text == MASK_TOKEN


def test_top_k_by_unexpectedness_oracle(store):
    sentence = tagged("the honey is sweeter than cold snow in the night")
    patterns = pattern_set("NN", "JJ", "JJR")
    spans = match_spans(sentence, patterns)
    assert len(spans) == 5
    scored = sorted(
        ((span_unexpectedness(sentence, s, store).value, s) for s in spans),
        key=lambda item: (-item[0], item[1].start, len(item[1])),
    )
    expected = [s for _, s in scored[:3]]
    masks = select_training_masks(sentence, patterns, store, k=3)
    assert [m.masked_span for m in masks] == expected


def test_top_k_default_is_three(store):
    sentence = tagged("the honey is sweeter than cold snow in the night")
    patterns = pattern_set("NN", "JJ", "JJR")
    assert len(select_training_masks(sentence, patterns, store)) == 3


def test_no_match_raises(store):
    with pytest.raises(NoMatch):
        select_training_masks(tagged("faster than light"), pattern_set("MD"), store)
    with pytest.raises(NoMatch):
        mask_all(tagged("faster than light"), pattern_set("MD"))


def test_prefix_property(store):
    rng = random.Random(21)
    sentences = [random_sentence(rng) for _ in range(50)]
    patterns = random_patterns(rng, sentences)
    for sentence in sentences:
        try:
            bigger = select_training_masks(sentence, patterns, store, k=6)
        except NoMatch:
            continue
        for k in range(1, 6):
            smaller = select_training_masks(sentence, patterns, store, k=k)
            assert smaller == bigger[:k]


# --- inference masking ----------------------------------------------------

def test_mask_all_emits_each_match():
    sentence = tagged("honey sweeter than light")
    masks = mask_all(sentence, pattern_set("JJR+IN+NN", "NN"))
    assert len(masks) == 3
    for mask in masks:
        assert mask.text.count(MASK_TOKEN) == 1
        assert mask.reconstruct() == sentence.surfaces()


def test_mask_all_deduplicates_identical_masked_text():
    # "cold cold" with a JJ pattern produces "<mask> cold" and "cold <mask>",
    # distinct; but spans of both lengths over the same words can collide.
    sentence = tagged("cold cold")
    masks = mask_all(sentence, pattern_set("JJ", "JJ+JJ"))
    texts = [m.masked_text for m in masks]
    assert len(texts) == len(set(texts))
    assert texts == ["<mask> cold", "<mask>", "cold <mask>"]


def test_splice_back_fuzz(store):
    rng = random.Random(42)
    sentences = [random_sentence(rng) for _ in range(200)]
    patterns = random_patterns(rng, sentences)
    checked = 0
    for sentence in sentences:
        try:
            masks = mask_all(sentence, patterns)
        except NoMatch:
            continue
        for mask in masks:
            assert mask.reconstruct() == sentence.surfaces()
            checked += 1
    assert checked > 100


def test_mask_span_bounds_checked():
    with pytest.raises(ValueError):
        mask_span(tagged("too short"), Span(0, 5))


# --- exact match ----------------------------------------------------------

def test_exact_match_cases():
    assert exact_match([Span(0, 1), Span(2, 4)], Span(2, 4)) is True
    assert exact_match([Span(2, 5)], Span(2, 4)) is False
    assert exact_match([], Span(2, 4)) is False
