"""Inference engines behind the endpoints.

The mock engine is a pure function of (seed, request): identical requests
produce identical responses across runs and hosts, so clients can pin
goldens against it. The real engine loads fine-tuned checkpoints lazily and
needs the `models` extra installed.
"""

from __future__ import annotations

import hashlib
from collections import Counter

from .tagger import LexiconTagger

MASK_TOKEN = "<mask>"

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


def _stable_unit(*parts) -> float:
    digest = hashlib.sha1("\x1f".join(str(p) for p in parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / 2 ** 64


def _clamp(score: float) -> float:
    return min(1.0, max(0.0, float(score)))


class MockEngine:
    mode = "mock"

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.tagger = LexiconTagger()

    def infill(self, masked: str, num_return: int) -> tuple[list[str], bool]:
        base = int(_stable_unit(self.seed, "infill", masked) * len(MOCK_FILLERS))
        count = min(num_return, len(MOCK_FILLERS))
        candidates = [masked.replace(MASK_TOKEN, MOCK_FILLERS[(base + r) % len(MOCK_FILLERS)])
                      for r in range(count)]
        return candidates, count < num_return

    def hyperbole_score(self, text: str) -> float:
        return _clamp(_stable_unit(self.seed, "hypo", text))

    def paraphrase_score(self, source: str, candidate: str) -> float:
        a = Counter(source.lower().split())
        b = Counter(candidate.lower().split())
        if not a and not b:
            return 1.0
        union = sum((a | b).values())
        return _clamp(sum((a & b).values()) / union)

    def tag(self, text: str) -> tuple[list[str], list[str]]:
        return self.tagger.tag_text(text)


class RealEngine:
    """Fine-tuned checkpoints behind the same interface.

    Paths come from the launch flags: an infill seq2seq model, a binary
    hyperbole classifier and a sentence-embedding paraphrase scorer. Models
    load lazily on first use and are shared read-only afterwards.
    """

    mode = "real"

    def __init__(self, infill_model=None, classifier_model=None,
                 paraphrase_model=None, device: str = "cpu"):
        self.infill_path = infill_model
        self.classifier_path = classifier_model
        self.paraphrase_path = paraphrase_model
        self.device = device
        self.tagger = LexiconTagger()
        self._infill = None
        self._classifier = None
        self._embedder = None

    def _load_infill(self):
        if self._infill is None:
            if not self.infill_path:
                raise RuntimeError("no infill model configured; launch with --infill-model")
            from transformers import AutoModelForSeq2SeqLM, AutoTokenizer
            tokenizer = AutoTokenizer.from_pretrained(self.infill_path)
            model = AutoModelForSeq2SeqLM.from_pretrained(self.infill_path).to(self.device)
            model.eval()
            self._infill = (tokenizer, model)
        return self._infill

    def _load_classifier(self):
        if self._classifier is None:
            if not self.classifier_path:
                raise RuntimeError("no classifier configured; launch with --classifier-model")
            from transformers import AutoModelForSequenceClassification, AutoTokenizer
            tokenizer = AutoTokenizer.from_pretrained(self.classifier_path)
            model = AutoModelForSequenceClassification.from_pretrained(self.classifier_path).to(self.device)
            model.eval()
            self._classifier = (tokenizer, model)
        return self._classifier

    def _load_embedder(self):
        if self._embedder is None:
            if not self.paraphrase_path:
                raise RuntimeError("no paraphrase model configured; launch with --paraphrase-model")
            from sentence_transformers import SentenceTransformer
            self._embedder = SentenceTransformer(self.paraphrase_path, device=self.device)
        return self._embedder

    def infill(self, masked: str, num_return: int) -> tuple[list[str], bool]:
        import torch
        tokenizer, model = self._load_infill()
        prompt = masked.replace(MASK_TOKEN, tokenizer.mask_token or MASK_TOKEN)
        inputs = tokenizer(prompt, return_tensors="pt").to(self.device)
        with torch.no_grad():
            generated = model.generate(
                **inputs,
                num_beams=max(4, num_return),
                num_return_sequences=num_return,
                max_new_tokens=inputs["input_ids"].shape[1] + 16,
            )
        texts = [tokenizer.decode(g, skip_special_tokens=True).strip() for g in generated]
        deduped = list(dict.fromkeys(texts))
        return deduped[:num_return], len(deduped) < num_return

    def hyperbole_score(self, text: str) -> float:
        import torch
        tokenizer, model = self._load_classifier()
        inputs = tokenizer(text, return_tensors="pt", truncation=True).to(self.device)
        with torch.no_grad():
            logits = model(**inputs).logits
        positive = torch.softmax(logits, dim=-1)[0, -1].item()
        return _clamp(positive)

    def paraphrase_score(self, source: str, candidate: str) -> float:
        embedder = self._load_embedder()
        vectors = embedder.encode([source, candidate], convert_to_numpy=True,
                                  normalize_embeddings=True)
        return _clamp(float(vectors[0] @ vectors[1]))

    def tag(self, text: str) -> tuple[list[str], list[str]]:
        return self.tagger.tag_text(text)
