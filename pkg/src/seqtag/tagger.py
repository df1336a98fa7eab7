"""End-to-end tagging: dictionary assignment, learner disambiguation, fallback.

Words with exactly one lexicon candidate are tagged from the dictionary
and never reach a learner. Ambiguous words go to the trained method on
their extracted features. Unknown words take the global majority tag.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

from .base import DICTIONARY, FALLBACK, LEARNER, TagDecision
from .corpus import Lexicon, Sentence, TagSet, build_lexicon
from .decision_list import DecisionListClassifier
from .errors import EmptyCorpus, UnknownMethod
from .features import FeatureConfig, FeatureVocabulary, build_vocabulary, extract
from .maxent import MaxentClassifier
from .svm import PairwiseSvmClassifier

METHODS = ("baseline", "dlist", "maxent", "svm")

_LEARNERS = {
    "dlist": DecisionListClassifier,
    "maxent": MaxentClassifier,
    "svm": PairwiseSvmClassifier,
}


@dataclass
class TrainReport:
    method: str
    sentences: int
    tokens: int
    ambiguous_examples: int
    features: int
    seconds: float
    notes: tuple[str, ...] = ()


@dataclass
class TaggerBundle:
    """Everything needed to tag raw text: dictionary, tag inventory,
    feature scheme, frozen vocabulary, and the trained learner (both None
    for the baseline method)."""

    method: str
    lexicon: Lexicon
    tag_set: TagSet
    feature_config: FeatureConfig
    vocabulary: FeatureVocabulary | None
    learner: object | None
    report: TrainReport | None = None


def baseline_predict(lexicon: Lexicon, word: str) -> TagDecision:
    """Rank-1 candidate of the word; unknown words take the majority tag."""
    candidates = lexicon.candidates(word)
    if not candidates:
        return TagDecision(lexicon.majority_tag(), FALLBACK)
    if len(candidates) == 1:
        return TagDecision(candidates[0][0], DICTIONARY)
    return TagDecision(candidates[0][0], LEARNER)


def train_tagger(
    training: list[Sentence],
    method: str = "svm",
    feature_config: FeatureConfig | None = None,
    learner_params: dict | None = None,
) -> TaggerBundle:
    if method not in METHODS:
        raise UnknownMethod(
            f"unknown method {method!r}; expected one of {', '.join(METHODS)}"
        )
    if not training:
        raise EmptyCorpus("training corpus contains no sentences")
    started = time.perf_counter()
    lexicon, tag_set = build_lexicon(training)
    config = feature_config or FeatureConfig()
    params = dict(learner_params or {})
    n_tokens = sum(len(s) for s in training)

    if method == "baseline":
        report = TrainReport(
            method, len(training), n_tokens, 0, 0, time.perf_counter() - started
        )
        return TaggerBundle(method, lexicon, tag_set, config, None, None, report)

    vocabulary = build_vocabulary(training, lexicon, config)
    X = []
    y = []
    for sentence in training:
        for position, token in enumerate(sentence):
            if lexicon.is_ambiguous(token.word):
                X.append(extract(sentence, position, lexicon, vocabulary, config))
                y.append(tag_set.id(token.tag))

    if method == "svm":
        params.setdefault("tags", list(range(len(tag_set))))
    learner = _LEARNERS[method](**params)
    learner.fit(X, y)

    notes = []
    if method == "svm" and learner.skipped_pairs_:
        named = ", ".join(
            f"({tag_set.name(a)}, {tag_set.name(b)})" for a, b in learner.skipped_pairs_
        )
        notes.append(f"svm: skipped pairs with no ambiguous examples: {named}")
    if method == "maxent" and not learner.converged_:
        notes.append(
            f"maxent: stopped before convergence, residual={learner.residual_:.3g}"
        )
    report = TrainReport(
        method,
        len(training),
        n_tokens,
        len(X),
        len(vocabulary),
        time.perf_counter() - started,
        tuple(notes),
    )
    return TaggerBundle(method, lexicon, tag_set, config, vocabulary, learner, report)


def tag_sentence(bundle: TaggerBundle, sentence: Sentence) -> list[TagDecision]:
    """Tag every token of one sentence; output length equals input length."""
    decisions: list[TagDecision] = []
    for position, token in enumerate(sentence):
        candidates = bundle.lexicon.candidates(token.word)
        if not candidates:
            decisions.append(TagDecision(bundle.lexicon.majority_tag(), FALLBACK))
        elif len(candidates) == 1:
            decisions.append(TagDecision(candidates[0][0], DICTIONARY))
        elif bundle.method == "baseline":
            decisions.append(TagDecision(candidates[0][0], LEARNER))
        else:
            x = extract(
                sentence, position, bundle.lexicon, bundle.vocabulary, bundle.feature_config
            )
            decisions.append(bundle.learner.decide(x))
    return decisions


def tag_corpus(bundle: TaggerBundle, sentences: Iterable[Sentence]) -> list[list[TagDecision]]:
    return [tag_sentence(bundle, sentence) for sentence in sentences]


def format_tagged_output(
    sentences: Iterable[Sentence],
    decisions: Iterable[list[TagDecision]],
    tag_set: TagSet,
) -> str:
    """Render ``word<TAB>tag<TAB>provenance`` lines with blank-line
    sentence separators."""
    blocks = []
    for sentence, decided in zip(sentences, decisions):
        lines = [
            f"{token.word}\t{tag_set.name(decision.tag)}\t{decision.provenance}"
            for token, decision in zip(sentence, decided)
        ]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")
