import math
import time
from collections import Counter

import pytest

from helpers import TAGGER, random_store

from mover import EvalCase, MockBackend, PatternSet, bleu, corpus_bleu, evaluate_systems
from mover.corpus import CorpusRecord
from mover.errors import EmptyInput
from mover.evaluation import run_copy, run_r1, run_r3

# --- independent BLEU oracle -------------------------------------------------
# Plain-Counter implementation of modified precisions + brevity penalty,
# kept deliberately separate from the library code path.

EPS = 0.1


def _oracle_ngrams(tokens, n):
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def _oracle_stats(cand, refs):
    m, t = [0] * 4, [0] * 4
    for n in range(1, 5):
        counts = _oracle_ngrams(cand, n)
        t[n - 1] = sum(counts.values())
        best = Counter()
        for ref in refs:
            ref_counts = _oracle_ngrams(ref, n)
            for g in counts:
                best[g] = max(best[g], ref_counts[g])
        m[n - 1] = sum(min(v, best[g]) for g, v in counts.items())
    c = len(cand)
    r = min((len(x) for x in refs), key=lambda rl: (abs(rl - c), rl))
    return m, t, c, r


def _oracle_finish(m, t, c, r):
    logs = [math.log((mi if mi > 0 else EPS) / ti) for mi, ti in zip(m, t) if ti > 0]
    if not logs or c == 0:
        return 0.0
    bp = 1.0 if c > r else math.exp(1 - r / c)
    return 100.0 * bp * math.exp(sum(logs) / len(logs))


def oracle_bleu(candidate, references):
    return _oracle_finish(*_oracle_stats(candidate.split(),
                                         [r.split() for r in references]))


def oracle_corpus_bleu(pairs):
    M, T, C, R = [0] * 4, [0] * 4, 0, 0
    for cand, refs in pairs:
        m, t, c, r = _oracle_stats(cand.split(), [x.split() for x in refs])
        M = [a + b for a, b in zip(M, m)]
        T = [a + b for a, b in zip(T, t)]
        C += c
        R += r
    return _oracle_finish(M, T, C, R)


# Mini-suite with oracle-computed expectations, frozen.
BLEU_CASES = [
    ("the cat sat on the mat", ["the cat sat on the mat"], 100.0),
    ("red fish swim deep", ["the cat sat on the mat"], 2.7403115968),
    ("the cat sat on a rug", ["the cat sat on the mat"], 50.8132748155),
    ("a tiny cat", ["a tiny cat sleeps"], 71.6531310574),
    ("the dog barked loudly today",
     ["the dog barked", "a dog barked loudly yesterday"], 37.6060309309),
]
CORPUS_BLEU_EXPECTED = 53.8335520516


def test_bleu_matches_oracle_goldens():
    for candidate, references, expected in BLEU_CASES:
        assert oracle_bleu(candidate, references) == pytest.approx(expected, abs=1e-6)
        assert bleu(candidate, references) == pytest.approx(expected, abs=1e-6)


def test_corpus_bleu_matches_oracle():
    pairs = [(c, r) for c, r, _ in BLEU_CASES]
    assert oracle_corpus_bleu(pairs) == pytest.approx(CORPUS_BLEU_EXPECTED, abs=1e-6)
    assert corpus_bleu(pairs) == pytest.approx(CORPUS_BLEU_EXPECTED, abs=1e-6)


def test_bleu_perfect_match_is_100():
    assert bleu("the cat sat on the mat", ["the cat sat on the mat"]) == pytest.approx(100.0)


def test_bleu_zero_overlap_is_tiny():
    assert bleu("red fish swim deep", ["the cat sat on the mat"]) < 5.0


def test_bleu_reference_order_invariant():
    candidate, references, _ = BLEU_CASES[4]
    assert bleu(candidate, references) == pytest.approx(
        bleu(candidate, list(reversed(references))), abs=1e-12)


def test_bleu_rejects_empty():
    with pytest.raises(EmptyInput):
        bleu("", ["ref"])
    with pytest.raises(EmptyInput):
        bleu("cand", [])


# --- baselines ---------------------------------------------------------------

def corpus_of(*sentences):
    return [CorpusRecord(id=str(i), text=s) for i, s in enumerate(sentences)]


def test_copy_echoes_input():
    case = EvalCase("Being out of fashion is very bad .", ("whatever",))
    assert run_copy(case) == case.literal


def test_copy_gets_zero_final_score_under_copy_guard():
    from mover import RankerConfig, score_candidate
    backend = MockBackend()
    literal = "Being out of fashion is very bad ."
    ranked = score_candidate(literal, literal, backend.hyperbole_score,
                             backend.paraphrase_score, RankerConfig(0.8, 0.001))
    assert ranked.para_score == 1.0
    assert ranked.final_score == 0.0


def test_r1_returns_verbatim_member():
    backend = MockBackend()
    corpus = corpus_of("The night was endless .",
                       "Being out of fashion is very bad .",
                       "His piano playing is beyond bad .")
    case = EvalCase("Being out of fashion is very bad .", ("x",))
    assert run_r1(case, corpus, backend.paraphrase_score) == corpus[1].text


def test_r1_single_sentence_corpus():
    backend = MockBackend()
    corpus = corpus_of("The night was endless .")
    case = EvalCase("Anything at all", ("x",))
    assert run_r1(case, corpus, backend.paraphrase_score) == corpus[0].text


def test_r1_output_always_from_corpus():
    backend = MockBackend()
    corpus = corpus_of("A colossal storm hit .", "The night was endless .")
    for literal in ("The storm was big .", "It was dark ."):
        out = run_r1(EvalCase(literal, ("x",)), corpus, backend.paraphrase_score)
        assert out in [r.text for r in corpus]


def r3_fixture():
    backend = MockBackend(seed=3)
    corpus = corpus_of("That hill is endless today .",
                       "Her voice was deafening .")
    patterns = PatternSet({("JJ",): 2})
    words = ["hill", "endless", "today", "voice", "deafening", "fashion",
             "bad", "is", "was", "that", "her", "being", "out", "of", "very"]
    store = random_store(words, seed=13)
    return backend, corpus, patterns, store


def test_r3_substitutes_matching_pos_span():
    backend, corpus, patterns, store = r3_fixture()
    case = EvalCase("Being out of fashion is very bad .", ("x",))
    out = run_r3(case, corpus, patterns, store, backend.hyperbole_score,
                 backend.paraphrase_score, tagger=TAGGER)
    # "bad" (JJ) replaced by a donor JJ span; everything else intact.
    assert out in {"Being out of fashion is very endless .",
                   "Being out of fashion is very deafening ."}


def test_r3_differs_only_at_substituted_span():
    backend, corpus, patterns, store = r3_fixture()
    literal = "Being out of fashion is very bad ."
    out = run_r3(EvalCase(literal, ("x",)), corpus, patterns, store,
                 backend.hyperbole_score, backend.paraphrase_score, tagger=TAGGER)
    in_tokens = literal.split()
    out_tokens = out.split()
    assert len(out_tokens) == len(in_tokens)
    diffs = [i for i, (a, b) in enumerate(zip(in_tokens, out_tokens)) if a != b]
    assert diffs == [6]


def test_r3_falls_back_to_r1_without_matches():
    backend, corpus, _, store = r3_fixture()
    patterns = PatternSet({("MD",): 1})  # matches nothing anywhere
    case = EvalCase("Being out of fashion is very bad .", ("x",))
    out = run_r3(case, corpus, patterns, store, backend.hyperbole_score,
                 backend.paraphrase_score, tagger=TAGGER)
    assert out == run_r1(case, corpus, backend.paraphrase_score)


def test_r3_capitalizes_at_sentence_start():
    backend = MockBackend(seed=3)
    corpus = corpus_of("The endless hill .")
    patterns = PatternSet({("NN",): 1})
    store = random_store(["hill", "endless", "fashion", "beauty"], seed=13)
    case = EvalCase("Beauty is rare .", ("x",))
    out = run_r3(case, corpus, patterns, store, backend.hyperbole_score,
                 backend.paraphrase_score, tagger=TAGGER)
    assert out[0].isupper()


# --- evaluate_systems ---------------------------------------------------------

def test_copy_bleu_100_on_identity_cases():
    cases = [EvalCase(f"sentence number {i} here", (f"sentence number {i} here",))
             for i in range(3)]
    report = evaluate_systems(cases, {"copy": run_copy})
    assert report.systems["copy"].bleu == pytest.approx(100.0)


def test_report_includes_every_system_and_survives_errors():
    cases = [EvalCase("a b c d", ("a b c d",))]

    def broken(case):
        raise RuntimeError("nope")

    report = evaluate_systems(cases, {"copy": run_copy, "broken": broken})
    assert set(report.systems) == {"copy", "broken"}
    assert report.systems["copy"].bleu is not None
    assert report.systems["broken"].error is not None
    assert "broken" in report.table()


def test_evaluate_jobs_match_serial():
    cases = [EvalCase(f"case {i} text here", (f"case {i} text there",))
             for i in range(12)]
    systems = {"copy": run_copy, "upper": lambda case: case.literal.upper()}
    serial = evaluate_systems(cases, systems, jobs=1)
    parallel = evaluate_systems(cases, systems, jobs=4)
    for name in systems:
        assert serial.systems[name].outputs == parallel.systems[name].outputs
        assert serial.systems[name].bleu == pytest.approx(parallel.systems[name].bleu)


def test_evaluate_rejects_empty():
    with pytest.raises(EmptyInput):
        evaluate_systems([], {"copy": run_copy})
    with pytest.raises(EmptyInput):
        evaluate_systems([EvalCase("a", ("b",))], {})
