"""Accuracy checks for fine-tuned checkpoints; they run only when trained
model directories and labeled test splits are supplied via environment
variables, since training takes hours and is GPU-optional."""

import json
import os

import pytest

from mover_service.engine import RealEngine

CLASSIFIER_VARS = ("HYPO_CLASSIFIER_DIR", "HYPO_TEST_JSONL")
PARAPHRASE_VARS = ("HYPO_PARAPHRASE_DIR", "HYPO_PAIR_TEST_JSONL")


def read_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


@pytest.mark.skipif(not all(os.environ.get(v) for v in CLASSIFIER_VARS),
                    reason=f"set {', '.join(CLASSIFIER_VARS)} to run")
def test_classifier_accuracy_on_held_out_split():
    engine = RealEngine(classifier_model=os.environ["HYPO_CLASSIFIER_DIR"])
    rows = read_jsonl(os.environ["HYPO_TEST_JSONL"])
    correct = 0
    for row in rows:
        predicted = engine.hyperbole_score(row["text"]) > 0.5
        correct += int(predicted == (row["label"] == "hyperbole"))
    assert rows
    assert correct / len(rows) >= 0.75


@pytest.mark.skipif(not all(os.environ.get(v) for v in PARAPHRASE_VARS),
                    reason=f"set {', '.join(PARAPHRASE_VARS)} to run")
def test_paraphrase_scorer_accuracy_on_held_out_pairs():
    engine = RealEngine(paraphrase_model=os.environ["HYPO_PARAPHRASE_DIR"])
    rows = read_jsonl(os.environ["HYPO_PAIR_TEST_JSONL"])
    correct = 0
    for row in rows:
        predicted = engine.paraphrase_score(row["source"], row["candidate"]) > 0.5
        correct += int(predicted == int(row["label"]))
    assert rows
    assert correct / len(rows) >= 0.88
