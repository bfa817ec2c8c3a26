"""Model service for the hyperbole paraphrase engine."""

from .app import create_app
from .engine import MockEngine, RealEngine

__version__ = "0.1.0"

__all__ = ["create_app", "MockEngine", "RealEngine"]
