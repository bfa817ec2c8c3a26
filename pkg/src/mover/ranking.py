"""Candidate scoring and selection.

A candidate keeps its hyperbole score as final score only when its paraphrase
score falls strictly inside the (gamma, 1 - epsilon) window; otherwise the
final score is zero. The upper bound guards against verbatim copies of the
input. Selection takes the best final score, falling back to the best raw
hyperbole score when the window filtered everything out.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import EmptyCandidateSet
from .overgenerate import CandidateSet

HypoScorer = Callable[[str], float]
ParaScorer = Callable[[str, str], float]

ABLATION_MODES = ("full", "hypo_only", "random")


@dataclass(frozen=True)
class RankerConfig:
    gamma: float = 0.8
    epsilon: float = 0.001

    def __post_init__(self):
        if not (0.0 < self.gamma < 1.0 - self.epsilon < 1.0):
            raise ValueError(
                f"need 0 < gamma < 1 - epsilon < 1, got gamma={self.gamma}, "
                f"epsilon={self.epsilon}")


@dataclass(frozen=True)
class RankedCandidate:
    text: str
    hypo_score: float
    para_score: float
    final_score: float


class ScoreCache:
    """Memoizes backend scores per (source, candidate) within a run, so
    ablation modes reuse them."""

    def __init__(self, hypo_backend: HypoScorer, para_backend: ParaScorer):
        self._hypo_backend = hypo_backend
        self._para_backend = para_backend
        self._hypo: dict[str, float] = {}
        self._para: dict[tuple[str, str], float] = {}

    def hypo(self, text: str) -> float:
        if text not in self._hypo:
            self._hypo[text] = self._hypo_backend(text)
        return self._hypo[text]

    def para(self, source: str, candidate: str) -> float:
        key = (source, candidate)
        if key not in self._para:
            self._para[key] = self._para_backend(source, candidate)
        return self._para[key]


def score_candidate(source: str, candidate: str, hypo_backend: HypoScorer,
                    para_backend: ParaScorer,
                    config: RankerConfig = RankerConfig()) -> RankedCandidate:
    """Score one candidate; the paraphrase window is open on both ends."""
    hypo = hypo_backend(candidate)
    para = para_backend(source, candidate)
    final = hypo if config.gamma < para < 1.0 - config.epsilon else 0.0
    return RankedCandidate(candidate, hypo, para, final)


def _texts(candidates: CandidateSet | Sequence[str]) -> list[str]:
    if isinstance(candidates, CandidateSet):
        return [c.text for c in candidates.candidates]
    return list(candidates)


def score_candidates(source: str, candidates: CandidateSet | Sequence[str],
                     hypo_backend: HypoScorer, para_backend: ParaScorer,
                     config: RankerConfig = RankerConfig()) -> list[RankedCandidate]:
    texts = _texts(candidates)
    if not texts:
        raise EmptyCandidateSet("no candidates to score")
    return [score_candidate(source, t, hypo_backend, para_backend, config) for t in texts]


def select_best(scored: Sequence[RankedCandidate]) -> RankedCandidate:
    """Best final score, or best hyperbole score when everything was
    filtered out. Ties keep the earliest candidate."""
    if not scored:
        raise EmptyCandidateSet("no scored candidates to select from")
    survivors = [c for c in scored if c.final_score > 0.0]
    pool = survivors or list(scored)
    key = (lambda c: c.final_score) if survivors else (lambda c: c.hypo_score)
    best = pool[0]
    for cand in pool[1:]:
        if key(cand) > key(best):
            best = cand
    return best


def rank_and_select(source: str, candidates: CandidateSet | Sequence[str],
                    hypo_backend: HypoScorer, para_backend: ParaScorer,
                    config: RankerConfig = RankerConfig()) -> RankedCandidate:
    return select_best(score_candidates(source, candidates, hypo_backend,
                                        para_backend, config))


def rank_ablation(source: str, candidates: CandidateSet | Sequence[str],
                  hypo_backend: HypoScorer, para_backend: ParaScorer,
                  config: RankerConfig = RankerConfig(), mode: str = "full",
                  seed: int | None = None) -> RankedCandidate:
    """Selection variants for ablations: ignore the paraphrase window
    (hypo_only) or pick uniformly at random (random, seeded)."""
    if mode not in ABLATION_MODES:
        raise ValueError(f"mode must be one of {ABLATION_MODES}")
    if mode == "full":
        return rank_and_select(source, candidates, hypo_backend, para_backend, config)
    scored = score_candidates(source, candidates, hypo_backend, para_backend, config)
    if mode == "hypo_only":
        best = scored[0]
        for cand in scored[1:]:
            if cand.hypo_score > best.hypo_score:
                best = cand
        return best
    if seed is None:
        raise ValueError("random mode needs a seed")
    return random.Random(seed).choice(scored)
