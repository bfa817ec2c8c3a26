"""Model backends: deterministic mock, scripted replay and HTTP client.

The engine needs four capabilities: span infilling, a hyperbole score, a
paraphrase score and POS tagging. The mock backend serves all four without
any model weights and is bit-reproducible given its seed, so the whole test
suite runs offline. The HTTP backend talks to the companion model service.
"""

from __future__ import annotations

import hashlib
import json
import os
from collections import Counter
from typing import Protocol, Sequence

import requests

from .errors import BackendUnavailable, TagCountMismatch
from .masking import MASK_TOKEN
from .text import RuleTagger, Token, detokenize, tokenize

DEFAULT_ENDPOINT_ENV = "MOVER_BACKEND"

# Filler phrases the mock infill draws from; chosen to be recognizably
# exaggerated so smoke-test output reads sensibly.
MOCK_FILLERS = (
    "a million",
    "absolutely endless",
    "astronomical",
    "beyond belief",
    "centuries",
    "colossal",
    "deafening",
    "forever",
    "impossibly",
    "infinite",
    "monumental",
    "sheer hell",
    "unbearable",
    "unimaginably",
)


def stable_unit(*parts) -> float:
    """Deterministic pseudo-random float in [0, 1), stable across hosts."""
    digest = hashlib.sha1("\x1f".join(str(p) for p in parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / 2 ** 64


def token_overlap(a: str, b: str) -> float:
    """Multiset Jaccard similarity over normalized tokens; 1.0 iff identical."""
    ta = Counter(a.lower().split())
    tb = Counter(b.lower().split())
    if not ta and not tb:
        return 1.0
    inter = sum((ta & tb).values())
    union = sum((ta | tb).values())
    return inter / union


class Backend(Protocol):
    def infill(self, masked_text: str, num_return: int) -> list[str]: ...
    def hyperbole_score(self, text: str) -> float: ...
    def paraphrase_score(self, source: str, candidate: str) -> float: ...
    def tag(self, text: str) -> tuple[list[str], list[str]]: ...


class MockBackend:
    """Offline stand-in for the model service; pure functions of (seed, input)."""

    def __init__(self, seed: int = 0, fillers: Sequence[str] = MOCK_FILLERS,
                 tagger: RuleTagger | None = None):
        self.seed = seed
        self.fillers = tuple(fillers)
        self.tagger = tagger or RuleTagger()

    def infill(self, masked_text: str, num_return: int = 1) -> list[str]:
        if MASK_TOKEN not in masked_text:
            raise BackendUnavailable("mock infill needs a mask placeholder")
        base = int(stable_unit(self.seed, "infill", masked_text) * len(self.fillers))
        out = []
        for rank in range(min(num_return, len(self.fillers))):
            filler = self.fillers[(base + rank) % len(self.fillers)]
            out.append(masked_text.replace(MASK_TOKEN, filler))
        return out

    def hyperbole_score(self, text: str) -> float:
        return stable_unit(self.seed, "hypo", text)

    def paraphrase_score(self, source: str, candidate: str) -> float:
        return token_overlap(source, candidate)

    def tag(self, text: str) -> tuple[list[str], list[str]]:
        tokens = tokenize(text)
        tags = self.tagger.tag(tokens)
        return [t.surface for t in tokens], list(tags)


class ReplayBackend:
    """Backend with scripted responses, falling back to the mock.

    Script file layout (JSON): `infill` maps masked text to completions,
    `hypo` maps candidate text to a score, `para` is a list of
    [source, candidate, score] triples.
    """

    def __init__(self, script: dict | str, seed: int = 0):
        if isinstance(script, str):
            with open(script, encoding="utf-8") as fh:
                script = json.load(fh)
        self._infill = dict(script.get("infill", {}))
        self._hypo = dict(script.get("hypo", {}))
        self._para = {(s, c): float(p) for s, c, p in script.get("para", [])}
        self._fallback = MockBackend(seed=script.get("seed", seed))

    def infill(self, masked_text: str, num_return: int = 1) -> list[str]:
        scripted = self._infill.get(masked_text)
        if scripted is None:
            return self._fallback.infill(masked_text, num_return)
        return list(scripted)[:num_return]

    def hyperbole_score(self, text: str) -> float:
        if text in self._hypo:
            return float(self._hypo[text])
        return self._fallback.hyperbole_score(text)

    def paraphrase_score(self, source: str, candidate: str) -> float:
        if (source, candidate) in self._para:
            return self._para[(source, candidate)]
        return self._fallback.paraphrase_score(source, candidate)

    def tag(self, text: str) -> tuple[list[str], list[str]]:
        return self._fallback.tag(text)


class HttpBackend:
    """Client for the model service wire protocol."""

    def __init__(self, endpoint: str, timeout: float = 30.0,
                 session: requests.Session | None = None):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.session = session or requests.Session()

    def _post(self, path: str, payload: dict) -> dict:
        url = f"{self.endpoint}{path}"
        try:
            resp = self.session.post(url, json=payload, timeout=self.timeout)
        except requests.RequestException as exc:
            raise BackendUnavailable(f"POST {url}: {exc}") from exc
        if resp.status_code >= 400:
            raise BackendUnavailable(f"POST {url}: HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            return resp.json()
        except ValueError as exc:
            raise BackendUnavailable(f"POST {url}: non-JSON response") from exc

    @staticmethod
    def _score_from(body: dict, url_hint: str) -> float:
        score = body.get("score")
        if not isinstance(score, (int, float)) or not (0.0 <= score <= 1.0):
            raise BackendUnavailable(f"{url_hint}: bad score {score!r}")
        return float(score)

    def infill(self, masked_text: str, num_return: int = 1) -> list[str]:
        body = self._post("/infill", {"masked": masked_text, "num_return": num_return})
        candidates = body.get("candidates")
        if not isinstance(candidates, list) or not all(isinstance(c, str) for c in candidates):
            raise BackendUnavailable("/infill: bad candidates payload")
        return candidates

    def hyperbole_score(self, text: str) -> float:
        return self._score_from(self._post("/score/hyperbole", {"text": text}), "/score/hyperbole")

    def paraphrase_score(self, source: str, candidate: str) -> float:
        body = self._post("/score/paraphrase", {"source": source, "candidate": candidate})
        return self._score_from(body, "/score/paraphrase")

    def tag(self, text: str) -> tuple[list[str], list[str]]:
        body = self._post("/tag", {"text": text})
        tokens, tags = body.get("tokens"), body.get("tags")
        if not isinstance(tokens, list) or not isinstance(tags, list):
            raise BackendUnavailable("/tag: bad payload")
        if len(tokens) != len(tags):
            raise TagCountMismatch(f"/tag returned {len(tags)} tags for {len(tokens)} tokens")
        return tokens, tags


class CachingBackend:
    """Delegates to another backend, memoizing the two scoring calls so a
    run (including ranking ablations) never re-scores a (source, candidate)
    pair."""

    def __init__(self, backend: Backend):
        self.backend = backend
        self._hypo: dict[str, float] = {}
        self._para: dict[tuple[str, str], float] = {}

    def infill(self, masked_text: str, num_return: int = 1) -> list[str]:
        return self.backend.infill(masked_text, num_return)

    def hyperbole_score(self, text: str) -> float:
        if text not in self._hypo:
            self._hypo[text] = self.backend.hyperbole_score(text)
        return self._hypo[text]

    def paraphrase_score(self, source: str, candidate: str) -> float:
        key = (source, candidate)
        if key not in self._para:
            self._para[key] = self.backend.paraphrase_score(source, candidate)
        return self._para[key]

    def tag(self, text: str) -> tuple[list[str], list[str]]:
        return self.backend.tag(text)


class BackendTagger:
    """Adapter exposing a backend's /tag capability as a token-sequence tagger."""

    def __init__(self, backend: Backend):
        self.backend = backend

    def tag(self, tokens: Sequence[Token]) -> tuple[str, ...]:
        _, tags = self.backend.tag(detokenize(tokens))
        if len(tags) != len(tokens):
            raise TagCountMismatch(
                f"backend returned {len(tags)} tags for {len(tokens)} tokens")
        return tuple(tags)


def resolve_endpoint(explicit: str | None) -> str | None:
    return explicit or os.environ.get(DEFAULT_ENDPOINT_ENV)
