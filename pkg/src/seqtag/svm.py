"""Soft-margin SVM with a polynomial kernel over sparse binary features.

The kernel is (x.y + 1)^degree where x.y is the size of the feature-id
intersection. Binary training runs sequential minimal optimization with
maximal-violating-pair working-set selection; multiclass goes through
one-vs-one voting. The stored bias follows the literal midpoint-of-class-
extrema formula evaluated over every training point.
"""

from __future__ import annotations

import warnings
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .base import (
    LEARNER,
    BaseEstimator,
    FeatureVector,
    TagDecision,
    check_is_fitted,
    check_training_examples,
)
from .errors import DegenerateProblem, MalformedLine, SingleCategory

DENSE_GRAM_LIMIT = 5000


def kernel(x: Iterable[int], y: Iterable[int], degree: int = 1) -> float:
    """Polynomial kernel (|x intersect y| + 1) ** degree."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    overlap = len(set(x).intersection(y))
    return float((overlap + 1) ** degree)


def _feature_incidence(X: Sequence[FeatureVector]) -> dict[int, np.ndarray]:
    rows: dict[int, list[int]] = {}
    for i, x in enumerate(X):
        for f in x:
            rows.setdefault(f, []).append(i)
    return {f: np.array(idx, dtype=np.int64) for f, idx in rows.items()}


class _GramProvider:
    """Kernel rows over a fixed training set.

    Builds the full Gram matrix up to DENSE_GRAM_LIMIT points; beyond
    that, rows are computed on demand and kept in a bounded LRU cache.
    """

    def __init__(self, X: Sequence[FeatureVector], degree: int):
        self.n = len(X)
        self.degree = degree
        self._X = X
        self._incidence = _feature_incidence(X)
        if self.n <= DENSE_GRAM_LIMIT:
            dot = np.zeros((self.n, self.n))
            for idx in self._incidence.values():
                dot[np.ix_(idx, idx)] += 1.0
            self._full = (dot + 1.0) ** degree
            self._cache = None
        else:
            self._full = None
            self._cache: OrderedDict[int, np.ndarray] = OrderedDict()
            self._max_rows = max(16, (DENSE_GRAM_LIMIT * DENSE_GRAM_LIMIT) // self.n)

    def row(self, i: int) -> np.ndarray:
        if self._full is not None:
            return self._full[i]
        cached = self._cache.get(i)
        if cached is not None:
            self._cache.move_to_end(i)
            return cached
        overlaps = np.zeros(self.n)
        parts = [self._incidence[f] for f in self._X[i] if f in self._incidence]
        if parts:
            counts = np.bincount(np.concatenate(parts), minlength=self.n)
            overlaps[: len(counts)] = counts
        row = (overlaps + 1.0) ** self.degree
        self._cache[i] = row
        if len(self._cache) > self._max_rows:
            self._cache.popitem(last=False)
        return row

    def entry(self, i: int, j: int) -> float:
        return float(self.row(i)[j])


def gram_matrix(X: Sequence[FeatureVector], degree: int = 1) -> np.ndarray:
    """Full kernel matrix; PSD and symmetric for any degree >= 1."""
    provider = _GramProvider([tuple(sorted(set(x))) for x in X], degree)
    if provider._full is not None:
        return provider._full.copy()
    return np.vstack([provider.row(i) for i in range(provider.n)])


def dual_objective(
    X: Sequence[FeatureVector],
    labels: Sequence[int],
    alphas: Sequence[float],
    degree: int = 1,
) -> float:
    """sum(a_i) - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j)."""
    a = np.asarray(alphas, dtype=float)
    y = np.asarray(labels, dtype=float)
    v = a * y
    K = gram_matrix(X, degree)
    return float(a.sum() - 0.5 * v @ K @ v)


def compute_bias(
    X: Sequence[FeatureVector],
    labels: Sequence[int],
    alphas: Sequence[float],
    degree: int = 1,
) -> float:
    """Bias as the negated midpoint of the class extrema of the
    uncorrected margins b_i = sum_j a_j y_j K(x_j, x_i), taken over all
    training points (not just support vectors)."""
    X = [tuple(sorted(set(x))) for x in X]
    y = np.asarray(labels, dtype=float)
    a = np.asarray(alphas, dtype=float)
    if not ((y > 0).any() and (y < 0).any()):
        raise DegenerateProblem("both classes are required to place the bias")
    provider = _GramProvider(X, degree)
    b_vec = np.zeros(len(X))
    for j in np.nonzero(a)[0]:
        b_vec += a[j] * y[j] * provider.row(int(j))
    return float(-(b_vec[y < 0].max() + b_vec[y > 0].min()) / 2.0)


class BinarySvm(BaseEstimator):
    """Two-class SVM trained by SMO.

    Working-set selection pairs the most violating example reachable from
    above with the most violating reachable from below (the maximal
    violating pair); optimization stops when the violation gap falls
    within 2 * kkt_tolerance. Only support vectors (alpha > 0) are kept.
    """

    def __init__(
        self,
        C: float = 1.0,
        degree: int = 2,
        kkt_tolerance: float = 1e-3,
        max_passes: int = 1000,
    ):
        self.C = C
        self.degree = degree
        self.kkt_tolerance = kkt_tolerance
        self.max_passes = max_passes

    def _validate_params(self) -> None:
        if self.C <= 0:
            raise ValueError("C must be > 0")
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        if self.kkt_tolerance <= 0:
            raise ValueError("kkt_tolerance must be > 0")
        if self.max_passes < 1:
            raise ValueError("max_passes must be >= 1")

    def fit(self, X: Iterable[FeatureVector], y: Iterable[int]) -> "BinarySvm":
        self._validate_params()
        X, y = check_training_examples(X, y)
        labels = set(y)
        if not labels <= {-1, 1}:
            raise ValueError(f"binary labels must be +1/-1, got {sorted(labels)}")
        if len(labels) < 2:
            raise DegenerateProblem("training data holds a single class")

        n = len(X)
        yf = np.array(y, dtype=float)
        gram = _GramProvider(X, self.degree)
        C = float(self.C)
        tol = float(self.kkt_tolerance)
        alpha = np.zeros(n)
        # F_i = sum_j a_j y_j K_ij - y_i; the threshold cancels in every
        # comparison below, so it is never tracked during optimization.
        F = -yf.copy()

        max_steps = self.max_passes * n
        steps = 0
        gap = np.inf
        while True:
            up = ((yf > 0) & (alpha < C)) | ((yf < 0) & (alpha > 0))
            low = ((yf > 0) & (alpha > 0)) | ((yf < 0) & (alpha < C))
            if not up.any() or not low.any():
                gap = 0.0
                break
            i_up = int(np.argmin(np.where(up, F, np.inf)))
            i_low = int(np.argmax(np.where(low, F, -np.inf)))
            gap = float(F[i_low] - F[i_up])
            if gap <= 2.0 * tol or steps >= max_steps:
                break
            if not self._step(gram, yf, alpha, F, i_low, i_up, C):
                break
            steps += 1

        converged = gap <= 2.0 * tol
        if not converged:
            warnings.warn(
                f"SMO stopped after {steps} steps with violation gap {gap:.3g}",
                RuntimeWarning,
                stacklevel=2,
            )

        bias_vec = np.zeros(n)
        for j in np.nonzero(alpha)[0]:
            bias_vec += alpha[j] * yf[j] * gram.row(int(j))
        bias = float(-(bias_vec[yf < 0].max() + bias_vec[yf > 0].min()) / 2.0)

        keep = alpha > 0
        self.support_vectors_ = [X[i] for i in np.nonzero(keep)[0]]
        self.dual_coef_ = alpha[keep].copy()
        self.support_labels_ = yf[keep].copy()
        self.intercept_ = bias
        self.converged_ = converged
        self.kkt_gap_ = gap
        self.n_steps_ = steps
        self._sv_incidence = _feature_incidence(self.support_vectors_)
        self._sv_weights = self.dual_coef_ * self.support_labels_
        return self

    def _step(self, gram, yf, alpha, F, i1, i2, C) -> bool:
        # Classical two-multiplier analytic update on the pair (i1, i2).
        a1, a2 = alpha[i1], alpha[i2]
        y1, y2 = yf[i1], yf[i2]
        s = y1 * y2
        if s < 0:
            L = max(0.0, a2 - a1)
            H = min(C, C + a2 - a1)
        else:
            L = max(0.0, a1 + a2 - C)
            H = min(C, a1 + a2)
        if H <= L:
            return False
        row1 = gram.row(i1)
        row2 = gram.row(i2)
        eta = row1[i1] + row2[i2] - 2.0 * row1[i2]
        delta = F[i1] - F[i2]
        if eta > 1e-12:
            a2_new = a2 + y2 * delta / eta
            a2_new = min(max(a2_new, L), H)
        else:
            # Flat direction (duplicate points): jump to the helpful end.
            a2_new = H if y2 * delta > 0 else L
        if a2_new < 1e-8:
            a2_new = 0.0
        elif a2_new > C - 1e-8:
            a2_new = C
        if abs(a2_new - a2) < 1e-14 * (a2_new + a2 + 1e-14):
            return False
        a1_new = a1 + s * (a2 - a2_new)
        # Cancellation dust here would keep a dead example inside the
        # working sets and stall pair selection; snap it to the bound.
        # The threshold stays far below any real multiplier, so the
        # equality constraint only absorbs rounding noise.
        dust = 1e-12 * max(1.0, C)
        if a1_new < dust:
            a1_new = 0.0
        elif a1_new > C - dust:
            a1_new = C
        alpha[i1] = a1_new
        alpha[i2] = a2_new
        F += (a1_new - a1) * y1 * row1 + (a2_new - a2) * y2 * row2
        return True

    def _margins(self, X: Sequence[FeatureVector]) -> np.ndarray:
        check_is_fitted(self, "dual_coef_")
        n_sv = len(self.support_vectors_)
        out = np.empty(len(X))
        for q, x in enumerate(X):
            overlaps = np.zeros(n_sv)
            parts = [self._sv_incidence[f] for f in set(x) if f in self._sv_incidence]
            if parts:
                counts = np.bincount(np.concatenate(parts), minlength=n_sv)
                overlaps[: len(counts)] = counts
            out[q] = ((overlaps + 1.0) ** self.degree) @ self._sv_weights + self.intercept_
        return out

    def decision_function(self, X: Sequence[FeatureVector]) -> np.ndarray:
        return self._margins([tuple(x) for x in X])

    def margin_one(self, x: FeatureVector) -> float:
        return float(self._margins([tuple(x)])[0])

    def predict_one(self, x: FeatureVector) -> int:
        # sgn(0) = +1 by convention.
        return 1 if self.margin_one(x) >= 0.0 else -1

    def predict(self, X: Sequence[FeatureVector]) -> list[int]:
        return [1 if m >= 0.0 else -1 for m in self.decision_function(X)]

    def to_lines(self) -> list[str]:
        check_is_fitted(self, "dual_coef_")
        lines = [
            f"config C={self.C!r} degree={self.degree} "
            f"kkt_tolerance={self.kkt_tolerance!r} max_passes={self.max_passes}",
            f"bias {self.intercept_!r}",
            f"converged {int(self.converged_)}",
            f"sv {len(self.support_vectors_)}",
        ]
        for a, label, x in zip(self.dual_coef_, self.support_labels_, self.support_vectors_):
            ids = ",".join(str(f) for f in x)
            lines.append(f"{float(a)!r}\t{int(label)}\t{ids}")
        return lines

    @classmethod
    def from_lines(cls, lines: list[str]) -> "BinarySvm":
        try:
            config = dict(item.split("=", 1) for item in lines[0].split()[1:])
            model = cls(
                C=float(config["C"]),
                degree=int(config["degree"]),
                kkt_tolerance=float(config["kkt_tolerance"]),
                max_passes=int(config["max_passes"]),
            )
            bias = float(lines[1].split()[1])
            converged = bool(int(lines[2].split()[1]))
            n_sv = int(lines[3].split()[1])
        except (IndexError, ValueError, KeyError):
            raise MalformedLine(1, "bad binary-svm header") from None
        if len(lines) != 4 + n_sv:
            raise MalformedLine(4, f"expected {n_sv} support vectors, found {len(lines) - 4}")
        coefs: list[float] = []
        svs: list[FeatureVector] = []
        sv_labels: list[float] = []
        for lineno, line in enumerate(lines[4:], start=5):
            parts = line.split("\t")
            if len(parts) != 3:
                raise MalformedLine(lineno, "expected alpha<TAB>label<TAB>ids")
            try:
                coefs.append(float(parts[0]))
                sv_labels.append(float(parts[1]))
                svs.append(tuple(int(f) for f in parts[2].split(",")) if parts[2] else ())
            except ValueError:
                raise MalformedLine(lineno, "bad support-vector line") from None
        model.support_vectors_ = svs
        model.dual_coef_ = np.array(coefs)
        model.support_labels_ = np.array(sv_labels)
        model.intercept_ = bias
        model.converged_ = converged
        model.kkt_gap_ = 0.0
        model.n_steps_ = 0
        model._sv_incidence = _feature_incidence(svs)
        model._sv_weights = model.dual_coef_ * model.support_labels_
        return model


class PairwiseSvmClassifier(BaseEstimator):
    """One-vs-one multiclass SVM.

    Trains one binary model per unordered tag pair (the lower tag id maps
    to +1) and predicts by voting. A vote tie goes to the tied tag with
    the larger sum of |margin| over the contests it won, then to the
    lowest tag id. Pairs missing a class in the training data are skipped
    and recorded in ``skipped_pairs_``.
    """

    def __init__(
        self,
        C: float = 1.0,
        degree: int = 2,
        kkt_tolerance: float = 1e-3,
        max_passes: int = 1000,
        tags: Sequence[int] | None = None,
        n_jobs: int = 1,
    ):
        self.C = C
        self.degree = degree
        self.kkt_tolerance = kkt_tolerance
        self.max_passes = max_passes
        self.tags = tags
        self.n_jobs = n_jobs

    def fit(self, X: Iterable[FeatureVector], y: Iterable[int]) -> "PairwiseSvmClassifier":
        X, y = check_training_examples(X, y)
        observed = sorted(set(y))
        if len(observed) < 2:
            raise SingleCategory(
                "pairwise training needs at least two distinct tags"
            )
        universe = sorted(set(observed) | set(self.tags or ()))
        by_tag: dict[int, list[int]] = {tag: [] for tag in universe}
        for i, tag in enumerate(y):
            by_tag[tag].append(i)

        tasks: list[tuple[int, int]] = []
        skipped: list[tuple[int, int]] = []
        for a, b in combinations(universe, 2):
            if by_tag[a] and by_tag[b]:
                tasks.append((a, b))
            else:
                skipped.append((a, b))

        def train_pair(pair: tuple[int, int]) -> BinarySvm:
            a, b = pair
            idx = by_tag[a] + by_tag[b]
            Xp = [X[i] for i in idx]
            yp = [1 if y[i] == a else -1 for i in idx]
            model = BinarySvm(
                C=self.C,
                degree=self.degree,
                kkt_tolerance=self.kkt_tolerance,
                max_passes=self.max_passes,
            )
            return model.fit(Xp, yp)

        workers = int(self.n_jobs or 1)
        if workers > 1 and len(tasks) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                trained = list(pool.map(train_pair, tasks))
        else:
            trained = [train_pair(pair) for pair in tasks]

        self.models_ = dict(zip(tasks, trained))
        self.skipped_pairs_ = tuple(skipped)
        self.classes_ = observed
        return self

    def decide(self, x: FeatureVector) -> TagDecision:
        check_is_fitted(self, "models_")
        x = tuple(x)
        votes: dict[int, int] = {}
        won_margin: dict[int, float] = {}
        for (a, b), model in self.models_.items():
            margin = model.margin_one(x)
            winner = a if margin >= 0.0 else b
            votes[winner] = votes.get(winner, 0) + 1
            won_margin[winner] = won_margin.get(winner, 0.0) + abs(margin)
        top = max(votes.values())
        tied = [tag for tag, count in votes.items() if count == top]
        tied.sort(key=lambda tag: (-won_margin.get(tag, 0.0), tag))
        scores = {tag: float(count) for tag, count in sorted(votes.items())}
        return TagDecision(tied[0], LEARNER, scores)

    def predict(self, X: Iterable[FeatureVector]) -> list[int]:
        return [self.decide(x).tag for x in X]

    def to_lines(self) -> list[str]:
        check_is_fitted(self, "models_")
        lines = [
            f"C {self.C!r}",
            f"degree {self.degree}",
            f"kkt_tolerance {self.kkt_tolerance!r}",
            f"max_passes {self.max_passes}",
            "classes " + ",".join(str(t) for t in self.classes_),
            "skipped " + (" ".join(f"{a}:{b}" for a, b in self.skipped_pairs_) or "-"),
            f"pairs {len(self.models_)}",
        ]
        for (a, b), model in self.models_.items():
            block = model.to_lines()
            lines.append(f"pair {a} {b} {len(block)}")
            lines.extend(block)
        return lines

    @classmethod
    def from_lines(cls, lines: list[str]) -> "PairwiseSvmClassifier":
        try:
            C = float(lines[0].split()[1])
            degree = int(lines[1].split()[1])
            kkt_tolerance = float(lines[2].split()[1])
            max_passes = int(lines[3].split()[1])
            classes = [int(t) for t in lines[4].split()[1].split(",")]
            skipped_text = lines[5].split(" ", 1)[1]
            n_pairs = int(lines[6].split()[1])
        except (IndexError, ValueError):
            raise MalformedLine(1, "bad pairwise-svm header") from None
        model = cls(C=C, degree=degree, kkt_tolerance=kkt_tolerance, max_passes=max_passes)
        skipped: list[tuple[int, int]] = []
        if skipped_text != "-":
            for item in skipped_text.split():
                a, b = item.split(":")
                skipped.append((int(a), int(b)))
        models: dict[tuple[int, int], BinarySvm] = {}
        cursor = 7
        for _ in range(n_pairs):
            if cursor >= len(lines):
                raise MalformedLine(cursor, "truncated pair block")
            header = lines[cursor].split()
            if len(header) != 4 or header[0] != "pair":
                raise MalformedLine(cursor + 1, "expected a pair header")
            a, b, length = int(header[1]), int(header[2]), int(header[3])
            block = lines[cursor + 1 : cursor + 1 + length]
            if len(block) != length:
                raise MalformedLine(cursor + 1, "truncated pair block")
            models[(a, b)] = BinarySvm.from_lines(block)
            cursor += 1 + length
        if cursor != len(lines):
            raise MalformedLine(cursor, "trailing data after pair blocks")
        model.models_ = models
        model.skipped_pairs_ = tuple(skipped)
        model.classes_ = classes
        return model
