"""Estimator plumbing and the shared decision type."""

from __future__ import annotations

import inspect
from dataclasses import dataclass, field
from typing import Mapping

from .errors import NoExamples, NotFittedError

# A sparse binary context: strictly increasing feature ids.
FeatureVector = tuple[int, ...]

DICTIONARY = "dictionary"
LEARNER = "learner"
FALLBACK = "fallback"
PROVENANCES = (DICTIONARY, LEARNER, FALLBACK)


@dataclass(frozen=True)
class TagDecision:
    """One tagging decision: the chosen tag id, where it came from, and
    optional per-tag scores (probabilities, votes, or rule scores)."""

    tag: int
    provenance: str
    scores: Mapping[int, float] | None = None


class BaseEstimator:
    """Minimal scikit-learn-style parameter handling.

    Subclasses declare all hyperparameters as explicit ``__init__``
    arguments and store them under the same attribute names; fitted state
    uses trailing-underscore attributes.
    """

    @classmethod
    def _param_names(cls) -> list[str]:
        sig = inspect.signature(cls.__init__)
        return [
            p.name
            for p in sig.parameters.values()
            if p.name != "self" and p.kind not in (p.VAR_POSITIONAL, p.VAR_KEYWORD)
        ]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for key, value in params.items():
            if key not in valid:
                raise ValueError(f"unknown parameter {key!r} for {type(self).__name__}")
            setattr(self, key, value)
        return self

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"


def check_is_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted yet; call fit() first"
        )


def check_training_examples(X, y) -> tuple[list[FeatureVector], list[int]]:
    """Normalize (feature vector, label) training pairs.

    Feature vectors become sorted de-duplicated int tuples; labels become
    ints. Raises NoExamples for empty input and ValueError for ragged or
    negative data.
    """
    if X is None or y is None:
        raise NoExamples("training data is missing")
    X = [tuple(sorted({int(f) for f in x})) for x in X]
    y = [int(t) for t in y]
    if len(X) != len(y):
        raise ValueError(f"X and y lengths differ: {len(X)} != {len(y)}")
    if not X:
        raise NoExamples("no training examples")
    for x in X:
        if x and x[0] < 0:
            raise ValueError("feature ids must be non-negative")
    return X, y
