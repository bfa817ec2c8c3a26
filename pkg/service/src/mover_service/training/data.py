"""Training-data loading and validation.

Two file schemas, both JSONL:
  - infill pairs: {"masked": "... <mask> ...", "original": "..."}
  - labeled sentences: {"text": "...", "label": "hyperbole" | "literal"}
Pair files additionally come with labels for the paraphrase scorer:
  - scored pairs: {"source": "...", "candidate": "...", "label": 0 | 1}
Validation failures carry the line number so bad exports are easy to fix.
"""

from __future__ import annotations

import json

MASK_TOKEN = "<mask>"
LABELS = ("hyperbole", "literal")


class DataFileError(ValueError):
    pass


def _iter_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFileError(f"{path}:{lineno}: invalid JSON ({exc})") from exc


def load_infill_pairs(path) -> list[tuple[str, str]]:
    pairs = []
    for lineno, obj in _iter_jsonl(path):
        masked, original = obj.get("masked"), obj.get("original")
        if not isinstance(masked, str) or not isinstance(original, str):
            raise DataFileError(f"{path}:{lineno}: need string fields masked and original")
        if masked.count(MASK_TOKEN) != 1:
            raise DataFileError(
                f"{path}:{lineno}: masked text must contain exactly one {MASK_TOKEN}")
        pairs.append((masked, original))
    if not pairs:
        raise DataFileError(f"{path}: no training pairs")
    return pairs


def load_labeled_sentences(path) -> list[tuple[str, int]]:
    rows = []
    for lineno, obj in _iter_jsonl(path):
        text, label = obj.get("text"), obj.get("label")
        if not isinstance(text, str) or not text.strip():
            raise DataFileError(f"{path}:{lineno}: need a non-empty text field")
        if label not in LABELS:
            raise DataFileError(f"{path}:{lineno}: label must be one of {LABELS}")
        rows.append((text, 1 if label == "hyperbole" else 0))
    if not rows:
        raise DataFileError(f"{path}: no labeled sentences")
    return rows


def load_scored_pairs(path) -> list[tuple[str, str, int]]:
    rows = []
    for lineno, obj in _iter_jsonl(path):
        source, candidate, label = obj.get("source"), obj.get("candidate"), obj.get("label")
        if not isinstance(source, str) or not isinstance(candidate, str):
            raise DataFileError(f"{path}:{lineno}: need string fields source and candidate")
        if label not in (0, 1):
            raise DataFileError(f"{path}:{lineno}: label must be 0 or 1")
        rows.append((source, candidate, int(label)))
    if not rows:
        raise DataFileError(f"{path}: no scored pairs")
    return rows
