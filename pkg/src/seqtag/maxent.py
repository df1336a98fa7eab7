"""Conditional maximum-entropy classifier trained by iterative scaling.

The model is the exponential form p(tag | context) proportional to
exp(sum of weights of active (feature, tag) pairs). Training adjusts the
weights so that, for every (feature, tag) pair, the model's conditional
expectation matches the empirical frequency. The scaling constant divides
every update by C = max active-feature count + 1; the classical
correction feature implied by that constant is category-independent here
(all features are binary), so it cancels in the conditional softmax and
is not materialized.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .base import (
    FALLBACK,
    LEARNER,
    BaseEstimator,
    FeatureVector,
    TagDecision,
    check_is_fitted,
    check_training_examples,
)
from .errors import MalformedLine


class _Encoded:
    """Flattened view of a training set for vectorized expectation sums."""

    def __init__(self, X: list[FeatureVector], labels: list[int], categories: list[int]):
        cat_of = {tag: j for j, tag in enumerate(categories)}
        self.n = len(X)
        self.lens = np.array([len(x) for x in X], dtype=np.int64)
        if int(self.lens.min(initial=1)) == 0:
            raise ValueError("every training example needs at least one feature")
        self.flat = np.fromiter(
            (f for x in X for f in x), dtype=np.int64, count=int(self.lens.sum())
        )
        self.starts = np.zeros(self.n, dtype=np.int64)
        np.cumsum(self.lens[:-1], out=self.starts[1:])
        self.rows = np.repeat(np.arange(self.n), self.lens)
        self.ycol = np.array([cat_of[t] for t in labels], dtype=np.int64)
        self.n_features = int(self.flat.max()) + 1

    def empirical(self, n_categories: int) -> np.ndarray:
        counts = np.bincount(
            self.flat * n_categories + self.ycol[self.rows],
            minlength=self.n_features * n_categories,
        )
        return counts.reshape(self.n_features, n_categories).astype(float) / self.n

    def probabilities(self, weights: np.ndarray) -> np.ndarray:
        scores = np.add.reduceat(weights[self.flat], self.starts, axis=0)
        scores -= scores.max(axis=1, keepdims=True)
        p = np.exp(scores)
        p /= p.sum(axis=1, keepdims=True)
        return p

    def model_expectation(self, p: np.ndarray) -> np.ndarray:
        n_categories = p.shape[1]
        expectation = np.empty((self.n_features, n_categories))
        weights_per_active = p[self.rows]
        for a in range(n_categories):
            expectation[:, a] = np.bincount(
                self.flat, weights=weights_per_active[:, a], minlength=self.n_features
            )
        return expectation / self.n


class MaxentClassifier(BaseEstimator):
    """Maximum-entropy disambiguator fit by generalized iterative scaling.

    Stops when the largest |empirical - model| expectation gap over all
    (feature, category) pairs drops to ``tolerance``, or after
    ``max_iterations`` updates (reported via ``converged_``, not an
    error). Pairs never observed in training keep weight 0 permanently.
    """

    def __init__(self, max_iterations: int = 500, tolerance: float = 1e-3):
        self.max_iterations = max_iterations
        self.tolerance = tolerance

    def fit(self, X: Iterable[FeatureVector], y: Iterable[int]) -> "MaxentClassifier":
        X, y = check_training_examples(X, y)
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be > 0")
        self.categories_ = sorted(set(y))
        encoded = _Encoded(X, y, self.categories_)
        n_categories = len(self.categories_)
        empirical = encoded.empirical(n_categories)
        attested = empirical > 0
        log_empirical = np.where(attested, np.log(np.where(attested, empirical, 1.0)), 0.0)
        self.c_gis_ = int(encoded.lens.max()) + 1

        weights = np.zeros((encoded.n_features, n_categories))
        history: list[float] = []
        iterations = 0
        converged = False
        while True:
            p = encoded.probabilities(weights)
            model = encoded.model_expectation(p)
            residual = float(np.abs(empirical - model).max())
            gold = p[np.arange(encoded.n), encoded.ycol]
            history.append(float(np.log(np.maximum(gold, 1e-300)).mean()))
            if residual <= self.tolerance:
                converged = True
                break
            if iterations >= self.max_iterations:
                break
            weights[attested] += (log_empirical[attested] - np.log(model[attested])) / self.c_gis_
            iterations += 1

        self.weights_ = weights
        self.n_features_ = encoded.n_features
        self.residual_ = residual
        self.converged_ = converged
        self.n_iter_ = iterations
        self.ll_history_ = history
        return self

    def decide(self, x: FeatureVector) -> TagDecision:
        check_is_fitted(self, "weights_")
        active = [f for f in x if 0 <= f < self.n_features_]
        n_categories = len(self.categories_)
        if not active:
            share = 1.0 / n_categories
            scores = {tag: share for tag in self.categories_}
            return TagDecision(self.categories_[0], FALLBACK, scores)
        s = self.weights_[active].sum(axis=0)
        s -= s.max()
        p = np.exp(s)
        p /= p.sum()
        # argmax returns the first maximum; categories_ ascends, so ties
        # resolve to the lowest tag id.
        winner = self.categories_[int(np.argmax(p))]
        scores = {tag: float(p[j]) for j, tag in enumerate(self.categories_)}
        return TagDecision(winner, LEARNER, scores)

    def predict(self, X: Iterable[FeatureVector]) -> list[int]:
        return [self.decide(x).tag for x in X]

    def to_lines(self) -> list[str]:
        check_is_fitted(self, "weights_")
        nonzero = np.argwhere(self.weights_ != 0.0)
        lines = [
            f"max_iterations {self.max_iterations}",
            f"tolerance {self.tolerance!r}",
            f"c_gis {self.c_gis_}",
            "categories " + ",".join(str(t) for t in self.categories_),
            f"n_features {self.n_features_}",
            f"converged {int(self.converged_)}",
            f"residual {self.residual_!r}",
            f"weights {len(nonzero)}",
        ]
        for f, j in nonzero:
            lines.append(f"{int(f)}\t{self.categories_[int(j)]}\t{float(self.weights_[f, j])!r}")
        return lines

    @classmethod
    def from_lines(cls, lines: list[str]) -> "MaxentClassifier":
        try:
            max_iterations = int(lines[0].split()[1])
            tolerance = float(lines[1].split()[1])
            c_gis = int(lines[2].split()[1])
            categories = [int(t) for t in lines[3].split()[1].split(",")]
            n_features = int(lines[4].split()[1])
            converged = bool(int(lines[5].split()[1]))
            residual = float(lines[6].split()[1])
            n_weights = int(lines[7].split()[1])
        except (IndexError, ValueError):
            raise MalformedLine(1, "bad maxent header") from None
        if len(lines) != 8 + n_weights:
            raise MalformedLine(8, f"expected {n_weights} weights, found {len(lines) - 8}")
        model = cls(max_iterations=max_iterations, tolerance=tolerance)
        model.categories_ = categories
        model.c_gis_ = c_gis
        model.n_features_ = n_features
        model.converged_ = converged
        model.residual_ = residual
        model.ll_history_ = []
        model.n_iter_ = 0
        cat_of = {tag: j for j, tag in enumerate(categories)}
        weights = np.zeros((n_features, len(categories)))
        for lineno, line in enumerate(lines[8:], start=9):
            parts = line.split("\t")
            if len(parts) != 3:
                raise MalformedLine(lineno, "expected feature<TAB>tag<TAB>weight")
            try:
                f = int(parts[0])
                tag = int(parts[1])
                weights[f, cat_of[tag]] = float(parts[2])
            except (ValueError, KeyError, IndexError):
                raise MalformedLine(lineno, "bad weight line") from None
        model.weights_ = weights
        return model


def check_constraints(model: MaxentClassifier, X, y) -> float:
    """Max |empirical - model| conditional expectation over all
    (feature, category) pairs of the given examples."""
    check_is_fitted(model, "weights_")
    X, y = check_training_examples(X, y)
    unknown = set(y) - set(model.categories_)
    if unknown:
        raise ValueError(f"labels {sorted(unknown)} unknown to the model")
    encoded = _Encoded(X, y, model.categories_)
    n_categories = len(model.categories_)
    weights = model.weights_
    if encoded.n_features > model.n_features_:
        padded = np.zeros((encoded.n_features, n_categories))
        padded[: model.n_features_] = weights
        weights = padded
    else:
        weights = weights[: encoded.n_features]
    p = encoded.probabilities(weights)
    return float(np.abs(encoded.empirical(n_categories) - encoded.model_expectation(p)).max())
