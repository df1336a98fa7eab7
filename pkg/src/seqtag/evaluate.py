"""Evaluation metrics, the method-comparison harness, and a seeded
synthetic corpus generator.

Precision is reported separately for ambiguous tokens (the interesting
partition) and for all tokens. Ambiguity is always judged by the
*training* lexicon, so the split is identical for every method evaluated
on the same bundle family.

The generator builds corpora where each ambiguous word's correct tag is
signalled by the identity of the following cue word. Cue words are
shared across ambiguous words but their meaning is assigned per word, so
no single feature resolves the ambiguity in aggregate; a method has to
combine the target word with its context to use the signal.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .corpus import Lexicon, Sentence, Token
from .errors import InvalidSpec, MissingGoldTags
from .features import FeatureConfig, ablated
from .tagger import TaggerBundle, tag_sentence, train_tagger

DEFAULT_TRAIN_FRACTION = 8322 / 10452

DEFAULT_WORDS_PER_TAG: Mapping[str, int] = {
    "adj": 110,
    "adv": 80,
    "det": 8,
    "noun": 220,
    "pu": 3,
    "verb": 160,
}

_RESERVED_TAGS = ("det", "pu")


@dataclass
class Metrics:
    ambiguous_total: int = 0
    ambiguous_correct: int = 0
    unambiguous_total: int = 0
    unambiguous_correct: int = 0
    unknown_total: int = 0
    unknown_correct: int = 0
    confusion: Counter = field(default_factory=Counter)

    @property
    def all_total(self) -> int:
        return self.ambiguous_total + self.unambiguous_total + self.unknown_total

    @property
    def all_correct(self) -> int:
        return self.ambiguous_correct + self.unambiguous_correct + self.unknown_correct

    @property
    def ambiguous_precision(self) -> float | None:
        if self.ambiguous_total == 0:
            return None
        return self.ambiguous_correct / self.ambiguous_total

    @property
    def all_words_precision(self) -> float | None:
        if self.all_total == 0:
            return None
        return self.all_correct / self.all_total


def evaluate(bundle: TaggerBundle, test: Iterable[Sentence]) -> Metrics:
    """Tag a gold corpus and score it against the gold tags."""
    metrics = Metrics()
    for sentence in test:
        for token in sentence:
            if token.tag is None:
                raise MissingGoldTags(
                    f"evaluation token {token.word!r} has no gold tag"
                )
        decisions = tag_sentence(bundle, sentence)
        for token, decision in zip(sentence, decisions):
            predicted = bundle.tag_set.name(decision.tag)
            correct = predicted == token.tag
            metrics.confusion[(token.tag, predicted)] += 1
            n_candidates = len(bundle.lexicon.candidates(token.word))
            if n_candidates == 0:
                metrics.unknown_total += 1
                metrics.unknown_correct += correct
            elif n_candidates == 1:
                metrics.unambiguous_total += 1
                metrics.unambiguous_correct += correct
            else:
                metrics.ambiguous_total += 1
                metrics.ambiguous_correct += correct
    return metrics


@dataclass
class SyntheticCorpusSpec:
    """Knobs for the seeded corpus sampler.

    ``signal_strength`` is the probability that an ambiguous token is
    followed by its designated cue word; ``majority_share`` is the prior
    of each ambiguous word's majority tag (0.5 = uniform).
    """

    seed: int = 42
    sentences: int = 2700
    words_per_tag: Mapping[str, int] = field(
        default_factory=lambda: dict(DEFAULT_WORDS_PER_TAG)
    )
    ambiguity_rate: float = 0.25
    signal_strength: float = 0.9
    majority_share: float = 0.65
    ambiguous_words: int = 48
    min_units: int = 6
    max_units: int = 12

    def validate(self) -> None:
        problems = []
        if self.sentences < 1:
            problems.append("sentences must be >= 1")
        for name, value in (
            ("ambiguity_rate", self.ambiguity_rate),
            ("signal_strength", self.signal_strength),
        ):
            if not 0.0 <= value <= 1.0:
                problems.append(f"{name} must lie in [0, 1]")
        if not 0.5 <= self.majority_share <= 1.0:
            problems.append("majority_share must lie in [0.5, 1]")
        if self.ambiguous_words < 1:
            problems.append("ambiguous_words must be >= 1")
        if not 1 <= self.min_units <= self.max_units:
            problems.append("need 1 <= min_units <= max_units")
        content = [t for t in self.words_per_tag if t not in _RESERVED_TAGS]
        if len(content) < 2:
            problems.append("need at least two content tags in words_per_tag")
        if self.words_per_tag.get("det", 0) < 2:
            problems.append("need at least two 'det' cue words")
        if self.words_per_tag.get("pu", 0) < 1:
            problems.append("need at least one 'pu' terminator word")
        if any(count < 1 for count in self.words_per_tag.values()):
            problems.append("all vocabulary sizes must be >= 1")
        if problems:
            raise InvalidSpec("; ".join(problems))


@dataclass
class GeneratorTruth:
    """Ground truth of one generated corpus, for oracle measurements."""

    cue_words: frozenset[str]
    candidates: dict[str, tuple[str, str]]  # ambiguous word -> (majority, minority)
    cue_map: dict[str, dict[str, str]]  # ambiguous word -> cue word -> tag

    def oracle_tag(self, word: str, next_word: str | None) -> str:
        mapping = self.cue_map[word]
        if next_word is not None and next_word in mapping:
            return mapping[next_word]
        return self.candidates[word][0]


def generate_with_truth(spec: SyntheticCorpusSpec) -> tuple[list[Sentence], GeneratorTruth]:
    spec.validate()
    rng = random.Random(spec.seed)

    content_tags = sorted(t for t in spec.words_per_tag if t not in _RESERVED_TAGS)
    fillers = [
        (f"{tag}{i}", tag)
        for tag in content_tags
        for i in range(spec.words_per_tag[tag])
    ]
    cues = [f"det{i}" for i in range(spec.words_per_tag["det"])]
    terminators = [f"pu{i}" for i in range(spec.words_per_tag["pu"])]

    classes = list(itertools.combinations(content_tags, 2))
    candidates: dict[str, tuple[str, str]] = {}
    cue_map: dict[str, dict[str, str]] = {}
    ambiguous = []
    for k in range(spec.ambiguous_words):
        pair = classes[k % len(classes)]
        majority = rng.choice(pair)
        minority = pair[0] if majority == pair[1] else pair[1]
        word = f"amb{k}"
        cue_major, cue_minor = rng.sample(cues, 2)
        candidates[word] = (majority, minority)
        cue_map[word] = {cue_major: majority, cue_minor: minority}
        ambiguous.append(word)

    cue_for = {
        (word, tag): cue
        for word, mapping in cue_map.items()
        for cue, tag in mapping.items()
    }

    sentences: list[Sentence] = []
    for _ in range(spec.sentences):
        tokens: list[Token] = []
        for _ in range(rng.randint(spec.min_units, spec.max_units)):
            if rng.random() < spec.ambiguity_rate:
                word = rng.choice(ambiguous)
                majority, minority = candidates[word]
                gold = majority if rng.random() < spec.majority_share else minority
                tokens.append(Token(word, gold))
                if rng.random() < spec.signal_strength:
                    tokens.append(Token(cue_for[(word, gold)], "det"))
            else:
                filler, tag = rng.choice(fillers)
                tokens.append(Token(filler, tag))
        tokens.append(Token(rng.choice(terminators), "pu"))
        sentences.append(Sentence(tuple(tokens)))

    truth = GeneratorTruth(frozenset(cues), candidates, cue_map)
    return sentences, truth


def generate_synthetic_corpus(spec: SyntheticCorpusSpec) -> list[Sentence]:
    return generate_with_truth(spec)[0]


def measure_context_signal(
    sentences: Iterable[Sentence], truth: GeneratorTruth
) -> float | None:
    """Fraction of ambiguous tokens whose next word carries their cue."""
    total = 0
    informative = 0
    for sentence in sentences:
        for position, token in enumerate(sentence):
            if token.word not in truth.candidates:
                continue
            total += 1
            if position + 1 < len(sentence):
                informative += sentence[position + 1].word in truth.cue_words
    if total == 0:
        return None
    return informative / total


def split_corpus(
    sentences: list[Sentence], train_fraction: float = DEFAULT_TRAIN_FRACTION
) -> tuple[list[Sentence], list[Sentence]]:
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must lie strictly between 0 and 1")
    cut = int(len(sentences) * train_fraction)
    cut = max(1, min(cut, len(sentences) - 1))
    return sentences[:cut], sentences[cut:]


@dataclass
class ComparisonRow:
    method: str
    config_label: str
    metrics: Metrics
    seconds: float


def run_comparison(
    training: list[Sentence],
    test: list[Sentence],
    methods: Iterable[str] = ("baseline", "dlist", "maxent", "svm"),
    feature_configs: Iterable[tuple[str, FeatureConfig]] | None = None,
    learner_params: Mapping[str, dict] | None = None,
) -> list[ComparisonRow]:
    """Train and evaluate each (method, feature config) combination.

    ``learner_params`` maps method name to its constructor kwargs. Rows
    carry wall seconds for diagnostics; the serialized renderings omit
    them so reports are reproducible byte for byte.
    """
    configs = list(feature_configs) if feature_configs else [("all", FeatureConfig())]
    params = dict(learner_params or {})
    rows: list[ComparisonRow] = []
    for label, config in configs:
        for method in methods:
            started = time.perf_counter()
            bundle = train_tagger(
                training, method, feature_config=config,
                learner_params=params.get(method),
            )
            metrics = evaluate(bundle, test)
            rows.append(
                ComparisonRow(method, label, metrics, time.perf_counter() - started)
            )
    return rows


def ablation_configs(base: FeatureConfig) -> list[tuple[str, FeatureConfig]]:
    """The full feature set plus a word-features-off variant."""
    return [("all", base), ("no-word", ablated(base, use_word=False))]


def render_records(rows: Iterable[ComparisonRow]) -> str:
    lines = []
    for row in rows:
        m = row.metrics
        lines.append(
            json.dumps(
                {
                    "method": row.method,
                    "config": row.config_label,
                    "ambiguous_precision": m.ambiguous_precision,
                    "all_words_precision": m.all_words_precision,
                    "ambiguous_correct": m.ambiguous_correct,
                    "ambiguous_total": m.ambiguous_total,
                    "all_correct": m.all_correct,
                    "all_total": m.all_total,
                },
                sort_keys=True,
            )
        )
    return "\n".join(lines) + "\n"


def _percent(value: float | None) -> str:
    return "-" if value is None else f"{100.0 * value:.1f}"


def render_table(rows: Iterable[ComparisonRow]) -> str:
    """Aligned text table; precisions to one decimal place."""
    header = ("method", "features", "ambiguous%", "all-words%")
    body = [
        (
            row.method,
            row.config_label,
            _percent(row.metrics.ambiguous_precision),
            _percent(row.metrics.all_words_precision),
        )
        for row in rows
    ]
    widths = [
        max(len(header[col]), *(len(line[col]) for line in body)) if body else len(header[col])
        for col in range(4)
    ]
    def fmt(line):
        return "  ".join(text.ljust(widths[col]) for col, text in enumerate(line)).rstrip()
    ruled = ["-" * widths[col] for col in range(4)]
    return "\n".join([fmt(header), fmt(ruled)] + [fmt(line) for line in body]) + "\n"
