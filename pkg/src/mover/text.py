"""Tokenization, Penn-Treebank POS tagging and contiguous spans.

The tokenizer is rule based (whitespace plus punctuation splitting plus the
common English contraction splits) and is frozen by golden tests; everything
downstream only relies on it being internally consistent. All types here are
immutable and safe to share across workers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Protocol, Sequence

from .errors import EmptyInput, TagCountMismatch

# Closed Penn Treebank tagset, including the bracket/punctuation tags.
PTB_TAGS = frozenset({
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD",
    "NN", "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR",
    "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP",
    "VBZ", "WDT", "WP", "WP$", "WRB",
    ".", ",", ":", "``", "''", "-LRB-", "-RRB-", "$", "#",
})


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    index: int


@dataclass(frozen=True)
class Span:
    """Half-open token range [start, end) within one sentence."""

    start: int
    end: int

    def __post_init__(self):
        if not (0 <= self.start < self.end):
            raise ValueError(f"invalid span [{self.start}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.start

    def contains(self, index: int) -> bool:
        return self.start <= index < self.end


@dataclass(frozen=True)
class TaggedSentence:
    raw: str
    tokens: tuple[Token, ...]
    tags: tuple[str, ...]

    def __post_init__(self):
        if len(self.tags) != len(self.tokens):
            raise TagCountMismatch(
                f"{len(self.tags)} tags for {len(self.tokens)} tokens")
        bad = set(self.tags) - PTB_TAGS
        if bad:
            raise ValueError(f"tags outside the PTB tagset: {sorted(bad)}")

    def __len__(self) -> int:
        return len(self.tokens)

    def surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)

    def normalized(self) -> tuple[str, ...]:
        return tuple(t.normalized for t in self.tokens)

    def tags_for(self, span: Span) -> tuple[str, ...]:
        if span.end > len(self.tokens):
            raise ValueError(f"span {span} outside sentence of length {len(self)}")
        return self.tags[span.start:span.end]

    def span_text(self, span: Span) -> str:
        return " ".join(t.surface for t in self.tokens[span.start:span.end])


# Tokens that must never be re-split (clitics produced by contraction rules).
_CLITICS = frozenset({"n't", "'ll", "'re", "'ve", "'m", "'d", "'s"})
_CLITIC_SUFFIXES = ("'ll", "'re", "'ve", "'m", "'d", "'s")

_LEAD_PUNCT = set("\"'`([{“”‘’«")
_TRAIL_PUNCT = set(".,!?;:)]}\"'`“”‘’»")

_NUMERIC_RE = re.compile(r"^\d[\d.,:/-]*$")


def _normalize_apostrophes(text: str) -> str:
    return text.replace("’", "'").replace("‘", "'")


def _is_punct(text: str) -> bool:
    return bool(text) and not any(ch.isalnum() for ch in text)


def _split_chunk(chunk: str) -> list[str]:
    plain = _normalize_apostrophes(chunk).lower()
    if plain in _CLITICS:
        return [chunk]
    if _is_punct(chunk):
        return [chunk]

    out: list[str] = []
    # Leading quotes/brackets come off one at a time.
    while chunk and chunk[0] in _LEAD_PUNCT:
        out.append(chunk[0])
        chunk = chunk[1:]

    # Trailing punctuation, collected in reverse. An ellipsis stays whole and
    # a '.' or ',' glued to a digit stays inside the token ("3.5", "1,000").
    trail: list[str] = []
    while chunk and chunk[-1] in _TRAIL_PUNCT:
        if chunk.endswith("..."):
            trail.append("...")
            chunk = chunk[:-3]
            continue
        if chunk[-1] in ".," and len(chunk) >= 2 and chunk[-2].isdigit() and _NUMERIC_RE.match(chunk):
            break
        trail.append(chunk[-1])
        chunk = chunk[:-1]

    if chunk:
        out.extend(_split_core(chunk))
    out.extend(reversed(trail))
    return [t for t in out if t]


def _split_core(core: str) -> list[str]:
    plain = _normalize_apostrophes(core).lower()
    if plain in _CLITICS:
        return [core]
    if plain.endswith("n't") and len(plain) > 3:
        return [core[:-3], core[-3:]]
    if plain == "cannot":
        return [core[:3], core[3:]]
    for suffix in _CLITIC_SUFFIXES:
        if plain.endswith(suffix) and len(plain) > len(suffix):
            cut = len(core) - len(suffix)
            return [core[:cut], core[cut:]]
    return [core]


def tokenize(raw: str) -> tuple[Token, ...]:
    """Split raw text into tokens; deterministic and detokenizable."""
    if raw is None or not raw.strip():
        raise EmptyInput("cannot tokenize empty text")
    surfaces: list[str] = []
    for chunk in raw.split():
        surfaces.extend(_split_chunk(chunk))
    return tuple(
        Token(s, _normalize_apostrophes(s).lower(), i)
        for i, s in enumerate(surfaces)
    )


def detokenize(tokens: Sequence[Token] | Sequence[str]) -> str:
    """Join tokens back into the normalized one-space-per-token form."""
    parts = [t.surface if isinstance(t, Token) else t for t in tokens]
    return " ".join(parts)


class Tagger(Protocol):
    def tag(self, tokens: Sequence[Token]) -> Sequence[str]: ...


def _load_lexicon(path=None) -> dict[str, str]:
    if path is None:
        source = resources.files("mover").joinpath("data/tagger_lexicon.tsv")
        text = source.read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    lex = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, tag = line.split("\t")
        lex[word] = tag
    return lex


_PUNCT_TAGS = {
    ".": ".", "!": ".", "?": ".", "...": ":",
    ",": ",", ";": ":", ":": ":", "-": ":", "--": ":",
    "(": "-LRB-", "[": "-LRB-", "{": "-LRB-",
    ")": "-RRB-", "]": "-RRB-", "}": "-RRB-",
    "$": "$", "#": "#",
}


class RuleTagger:
    """Lexicon plus suffix-rule tagger, bundled so tests run offline.

    Crude by design: one tag per lexicon word, heuristics for the rest. The
    model service provides a proper tagger in deployment.
    """

    def __init__(self, lexicon_path=None):
        self.lexicon = _load_lexicon(lexicon_path)

    def tag(self, tokens: Sequence[Token]) -> tuple[str, ...]:
        return tuple(self._tag_one(t) for t in tokens)

    def _tag_one(self, token: Token) -> str:
        word = token.normalized
        if _is_punct(word):
            if word in _PUNCT_TAGS:
                return _PUNCT_TAGS[word]
            if word in {'"', "``", "''", "'", "`"}:
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
        comparative = self._degree_tag(word, "er", "JJR")
        if comparative:
            return comparative
        superlative = self._degree_tag(word, "est", "JJS")
        if superlative:
            return superlative
        if word.endswith("s") and not word.endswith("ss") and len(word) > 2:
            stem_tag = self.lexicon.get(word[:-1])
            if stem_tag in {"VB", "VBP"}:
                return "VBZ"
            return "NNS"
        if token.surface[:1].isupper():
            return "NNP"
        return "NN"

    def _degree_tag(self, word: str, suffix: str, tag: str) -> str | None:
        # "colder" -> cold, "nicer" -> nice, "hotter" -> hot, "happier" -> happy
        if not word.endswith(suffix) or len(word) <= len(suffix) + 1:
            return None
        base = word[: -len(suffix)]
        stems = [base, base + "e"]
        if len(base) >= 2 and base[-1] == base[-2]:
            stems.append(base[:-1])
        if base.endswith("i"):
            stems.append(base[:-1] + "y")
        for stem in stems:
            if self.lexicon.get(stem) == "JJ":
                return tag
        return None


def pos_tag(tokens: Sequence[Token], tagger: Tagger) -> TaggedSentence:
    """Tag a token sequence; one PTB tag per token."""
    if not tokens:
        raise EmptyInput("cannot tag an empty token sequence")
    tags = tuple(tagger.tag(tokens))
    if len(tags) != len(tokens):
        raise TagCountMismatch(
            f"tagger returned {len(tags)} tags for {len(tokens)} tokens")
    return TaggedSentence(raw=detokenize(tokens), tokens=tuple(tokens), tags=tags)


def analyze(raw: str, tagger: Tagger) -> TaggedSentence:
    """Tokenize and tag in one step, keeping the original raw text."""
    tokens = tokenize(raw)
    sentence = pos_tag(tokens, tagger)
    return TaggedSentence(raw=raw, tokens=sentence.tokens, tags=sentence.tags)


def enumerate_ngrams(sentence: TaggedSentence | int, min_n: int, max_n: int) -> list[Span]:
    """All contiguous spans with length in [min_n, max_n], ordered by (start, length)."""
    if not (1 <= min_n <= max_n):
        raise ValueError(f"need 1 <= min_n <= max_n, got [{min_n}, {max_n}]")
    length = sentence if isinstance(sentence, int) else len(sentence)
    spans = []
    for start in range(length):
        for n in range(min_n, max_n + 1):
            if start + n > length:
                break
            spans.append(Span(start, start + n))
    return spans
