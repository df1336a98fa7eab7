"""First-match decision list over sparse binary features."""

from __future__ import annotations

from collections import Counter
from typing import Iterable

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

# One rule: (feature id, tag id, conditional frequency, feature count).
Entry = tuple[int, int, float, int]


class DecisionListClassifier(BaseEstimator):
    """Rules ranked by the empirical conditional frequency of a tag given
    a single feature; prediction takes the first rule whose feature is
    active in the context.

    Ordering is total: descending score, then descending feature count,
    then ascending feature id, then ascending tag id. Contexts matching
    no rule fall back to the training majority tag.
    """

    def __init__(self, min_count: int = 1):
        self.min_count = min_count

    def fit(self, X: Iterable[FeatureVector], y: Iterable[int]) -> "DecisionListClassifier":
        X, y = check_training_examples(X, y)
        if self.min_count < 1:
            raise ValueError("min_count must be >= 1")
        pair_counts: Counter = Counter()
        feature_counts: Counter = Counter()
        label_counts: Counter = Counter()
        for x, tag in zip(X, y):
            label_counts[tag] += 1
            for f in x:
                pair_counts[(f, tag)] += 1
                feature_counts[f] += 1
        entries: list[Entry] = []
        for (f, tag), pair_count in pair_counts.items():
            if pair_count >= self.min_count:
                entries.append((f, tag, pair_count / feature_counts[f], feature_counts[f]))
        entries.sort(key=lambda e: (-e[2], -e[3], e[0], e[1]))
        top = max(label_counts.values())
        self.fallback_tag_ = min(tag for tag, c in label_counts.items() if c == top)
        self.entries_ = entries
        self._index_entries()
        return self

    def _index_entries(self) -> None:
        # First (= best) entry position per feature; first-match-wins over
        # the whole list reduces to a min over the context's features.
        best: dict[int, int] = {}
        for position, (f, _tag, _score, _count) in enumerate(self.entries_):
            if f not in best:
                best[f] = position
        self._best_position = best

    def decide(self, x: FeatureVector) -> TagDecision:
        check_is_fitted(self, "entries_")
        best = None
        for f in x:
            position = self._best_position.get(f)
            if position is not None and (best is None or position < best):
                best = position
        if best is None:
            return TagDecision(self.fallback_tag_, FALLBACK)
        _f, tag, score, _count = self.entries_[best]
        return TagDecision(tag, LEARNER, {tag: score})

    def predict(self, X: Iterable[FeatureVector]) -> list[int]:
        return [self.decide(x).tag for x in X]

    def to_lines(self) -> list[str]:
        check_is_fitted(self, "entries_")
        lines = [
            f"min_count {self.min_count}",
            f"fallback {self.fallback_tag_}",
            f"entries {len(self.entries_)}",
        ]
        for f, tag, score, count in self.entries_:
            lines.append(f"{f}\t{tag}\t{score!r}\t{count}")
        return lines

    @classmethod
    def from_lines(cls, lines: list[str]) -> "DecisionListClassifier":
        try:
            min_count = int(lines[0].split()[1])
            fallback = int(lines[1].split()[1])
            n = int(lines[2].split()[1])
        except (IndexError, ValueError):
            raise MalformedLine(1, "bad decision-list header") from None
        if len(lines) != 3 + n:
            raise MalformedLine(3, f"expected {n} entries, found {len(lines) - 3}")
        model = cls(min_count=min_count)
        entries: list[Entry] = []
        for lineno, line in enumerate(lines[3:], start=4):
            parts = line.split("\t")
            if len(parts) != 4:
                raise MalformedLine(lineno, "expected feature<TAB>tag<TAB>score<TAB>count")
            try:
                entries.append((int(parts[0]), int(parts[1]), float(parts[2]), int(parts[3])))
            except ValueError:
                raise MalformedLine(lineno, "non-numeric entry field") from None
        model.entries_ = entries
        model.fallback_tag_ = fallback
        model._index_entries()
        return model
