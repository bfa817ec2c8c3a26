"""HTTP surface: /infill, /score/hyperbole, /score/paraphrase, /tag, /health.

Request bodies are validated by pydantic, so malformed JSON is rejected with
a 422 and a machine-readable reason. Scores are clamped to [0, 1]; infill
responses carry at most the requested number of candidates plus a
`truncated` flag. Handlers are stateless, model handles are shared
read-only, so concurrent requests are safe.
"""

from __future__ import annotations

from fastapi import FastAPI
from pydantic import BaseModel, Field, field_validator

from .engine import MASK_TOKEN, MockEngine, RealEngine


class InfillRequest(BaseModel):
    masked: str
    num_return: int = Field(default=1, ge=1, le=64)

    @field_validator("masked")
    @classmethod
    def exactly_one_placeholder(cls, value: str) -> str:
        if value.count(MASK_TOKEN) != 1:
            raise ValueError(f"masked text must contain exactly one {MASK_TOKEN}")
        return value


class InfillResponse(BaseModel):
    candidates: list[str]
    truncated: bool = False


class HyperboleRequest(BaseModel):
    text: str = Field(min_length=1)


class ParaphraseRequest(BaseModel):
    source: str = Field(min_length=1)
    candidate: str = Field(min_length=1)


class ScoreResponse(BaseModel):
    score: float = Field(ge=0.0, le=1.0)


class TagRequest(BaseModel):
    text: str = Field(min_length=1)


class TagResponse(BaseModel):
    tokens: list[str]
    tags: list[str]


def create_app(engine=None, seed: int = 0) -> FastAPI:
    engine = engine if engine is not None else MockEngine(seed=seed)
    app = FastAPI(title="hyperbole model service")

    @app.get("/health")
    def health():
        return {"status": "ok", "mode": engine.mode,
                "seed": getattr(engine, "seed", None)}

    @app.post("/infill", response_model=InfillResponse)
    def infill(request: InfillRequest) -> InfillResponse:
        candidates, truncated = engine.infill(request.masked, request.num_return)
        return InfillResponse(candidates=candidates, truncated=truncated)

    @app.post("/score/hyperbole", response_model=ScoreResponse)
    def hyperbole(request: HyperboleRequest) -> ScoreResponse:
        return ScoreResponse(score=engine.hyperbole_score(request.text))

    @app.post("/score/paraphrase", response_model=ScoreResponse)
    def paraphrase(request: ParaphraseRequest) -> ScoreResponse:
        return ScoreResponse(score=engine.paraphrase_score(request.source, request.candidate))

    @app.post("/tag", response_model=TagResponse)
    def tag(request: TagRequest) -> TagResponse:
        tokens, tags = engine.tag(request.text)
        if len(tokens) != len(tags):
            raise RuntimeError("tagger arity violation")
        return TagResponse(tokens=tokens, tags=tags)

    return app


def engine_from_args(args) -> MockEngine | RealEngine:
    if args.mock:
        return MockEngine(seed=args.seed)
    return RealEngine(infill_model=args.infill_model,
                      classifier_model=args.classifier_model,
                      paraphrase_model=args.paraphrase_model,
                      device=args.device)
