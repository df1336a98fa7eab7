"""Sparse-feature sequence tagging toolkit.

Trains and compares decision-list, maximum-entropy, and support-vector
classifiers for resolving lexically ambiguous tags, using binary context
features drawn from a fixed window around each token. Dictionary lookups
constrain every prediction to the tags a word was actually seen with.
"""

from .base import (
    DICTIONARY,
    FALLBACK,
    LEARNER,
    BaseEstimator,
    TagDecision,
    check_is_fitted,
    check_training_examples,
)
from .corpus import (
    FORMAT_TAGGED,
    FORMAT_WORDS,
    Lexicon,
    Sentence,
    TagSet,
    Token,
    build_lexicon,
    format_corpus,
    load_corpus,
    load_lexicon_overrides,
    partition_tokens,
    save_corpus,
)
from .decision_list import DecisionListClassifier
from .errors import (
    CorruptModel,
    DegenerateProblem,
    EmptyCorpus,
    EmptyVocabulary,
    FormatVersionMismatch,
    InvalidSpec,
    MalformedLine,
    MissingGoldTags,
    NoExamples,
    NotFittedError,
    PositionOutOfRange,
    SeqtagError,
    SingleCategory,
    UnknownMethod,
    UnknownTag,
)
from .evaluate import (
    ComparisonRow,
    Metrics,
    SyntheticCorpusSpec,
    ablation_configs,
    evaluate,
    generate_synthetic_corpus,
    generate_with_truth,
    measure_context_signal,
    render_records,
    render_table,
    run_comparison,
    split_corpus,
)
from .features import (
    FeatureConfig,
    FeatureKey,
    FeatureVocabulary,
    ablated,
    build_vocabulary,
    extract,
)
from .maxent import MaxentClassifier, check_constraints
from .persistence import load_bundle, save_bundle
from .svm import (
    BinarySvm,
    PairwiseSvmClassifier,
    compute_bias,
    dual_objective,
    gram_matrix,
    kernel,
)
from .tagger import (
    METHODS,
    TaggerBundle,
    TrainReport,
    baseline_predict,
    format_tagged_output,
    tag_corpus,
    tag_sentence,
    train_tagger,
)

__version__ = "0.1.0"

__all__ = [
    "BaseEstimator",
    "BinarySvm",
    "ComparisonRow",
    "CorruptModel",
    "DecisionListClassifier",
    "DegenerateProblem",
    "DICTIONARY",
    "EmptyCorpus",
    "EmptyVocabulary",
    "FALLBACK",
    "FeatureConfig",
    "FeatureKey",
    "FeatureVocabulary",
    "FormatVersionMismatch",
    "FORMAT_TAGGED",
    "FORMAT_WORDS",
    "InvalidSpec",
    "LEARNER",
    "Lexicon",
    "MalformedLine",
    "MaxentClassifier",
    "METHODS",
    "Metrics",
    "MissingGoldTags",
    "NoExamples",
    "NotFittedError",
    "PairwiseSvmClassifier",
    "PositionOutOfRange",
    "Sentence",
    "SeqtagError",
    "SingleCategory",
    "SyntheticCorpusSpec",
    "TagDecision",
    "TaggerBundle",
    "TagSet",
    "Token",
    "TrainReport",
    "UnknownMethod",
    "UnknownTag",
    "ablated",
    "ablation_configs",
    "baseline_predict",
    "build_lexicon",
    "build_vocabulary",
    "check_constraints",
    "check_is_fitted",
    "check_training_examples",
    "compute_bias",
    "dual_objective",
    "evaluate",
    "extract",
    "format_corpus",
    "format_tagged_output",
    "generate_synthetic_corpus",
    "generate_with_truth",
    "gram_matrix",
    "kernel",
    "load_bundle",
    "load_corpus",
    "load_lexicon_overrides",
    "measure_context_signal",
    "partition_tokens",
    "render_records",
    "render_table",
    "run_comparison",
    "save_bundle",
    "save_corpus",
    "split_corpus",
    "tag_corpus",
    "tag_sentence",
    "train_tagger",
]
