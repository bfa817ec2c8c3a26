"""Input validation helpers for the estimator layer."""

from __future__ import annotations

from sklearn.exceptions import NotFittedError


def check_text_list(X) -> list[str]:
    if isinstance(X, str):
        raise TypeError("expected a sequence of sentences, got a single string")
    out = list(X)
    if not out:
        raise ValueError("X is empty")
    bad = [x for x in out if not isinstance(x, str)]
    if bad:
        raise TypeError(f"expected strings, got {type(bad[0]).__name__}")
    return out


def check_pair_list(X) -> list[tuple[str, str]]:
    out = []
    for item in X:
        if isinstance(item, dict):
            pair = (item["hypo"], item["non_hypo"])
        else:
            pair = tuple(item)
        if len(pair) != 2 or not all(isinstance(p, str) for p in pair):
            raise TypeError("expected (hyperbole, literal lookalike) string pairs")
        out.append(pair)
    if not out:
        raise ValueError("X is empty")
    return out


def check_fitted(estimator, attribute: str) -> None:
    if getattr(estimator, attribute, None) is None:
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted; call fit or supply "
            f"a pattern set")
