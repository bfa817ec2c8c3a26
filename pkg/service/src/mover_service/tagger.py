"""Whitespace tokenizer plus lexicon/suffix POS tagger for the /tag endpoint.

The service tags whatever token stream the client sends, split on
whitespace, so a pre-tokenized request keeps its arity. The lexicon file is
plain text, one `word<TAB>TAG` per line.
"""

from __future__ import annotations

import re
from importlib import resources

_NUMERIC_RE = re.compile(r"^\d[\d.,:/-]*$")

_PUNCT_TAGS = {
    ".": ".", "!": ".", "?": ".", "...": ":",
    ",": ",", ";": ":", ":": ":", "-": ":", "--": ":",
    "(": "-LRB-", "[": "-LRB-", "{": "-LRB-",
    ")": "-RRB-", "]": "-RRB-", "}": "-RRB-",
    "$": "$", "#": "#",
}


def load_lexicon(path=None) -> dict[str, str]:
    if path is None:
        text = resources.files("mover_service").joinpath("data/tagger_lexicon.tsv").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    lexicon = {}
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            word, tag = line.split("\t")
            lexicon[word] = tag
    return lexicon


class LexiconTagger:
    def __init__(self, lexicon_path=None):
        self.lexicon = load_lexicon(lexicon_path)

    def tag_text(self, text: str) -> tuple[list[str], list[str]]:
        tokens = text.split()
        return tokens, [self._tag_one(t) for t in tokens]

    def _tag_one(self, surface: str) -> str:
        word = surface.lower()
        if word and not any(ch.isalnum() for ch in word):
            if word in _PUNCT_TAGS:
                return _PUNCT_TAGS[word]
            if word in {'"', "'", "`", "``", "''"}:
                return "''"
            return "SYM"
        tag = self.lexicon.get(word)
        if tag:
            return tag
        if _NUMERIC_RE.match(word):
            return "CD"
        if word.endswith("ly"):
            return "RB"
        if word.endswith("ing"):
            return "VBG"
        if word.endswith("ed"):
            return "VBD"
        degree = self._degree_tag(word)
        if degree:
            return degree
        if word.endswith("s") and not word.endswith("ss") and len(word) > 2:
            stem_tag = self.lexicon.get(word[:-1])
            if stem_tag in {"VB", "VBP"}:
                return "VBZ"
            return "NNS"
        if surface[:1].isupper():
            return "NNP"
        return "NN"

    def _degree_tag(self, word: str) -> str | None:
        for suffix, tag in (("er", "JJR"), ("est", "JJS")):
            if not word.endswith(suffix) or len(word) <= len(suffix) + 1:
                continue
            base = word[: -len(suffix)]
            stems = [base, base + "e"]
            if len(base) >= 2 and base[-1] == base[-2]:
                stems.append(base[:-1])
            if base.endswith("i"):
                stems.append(base[:-1] + "y")
            if any(self.lexicon.get(s) == "JJ" for s in stems):
                return tag
        return None
