"""Exception hierarchy for the seqtag package."""


class SeqtagError(Exception):
    """Base class for all errors raised by this package."""


class MalformedLine(SeqtagError):
    """A data line does not match the declared file format."""

    def __init__(self, line_number: int, detail: str = ""):
        self.line_number = line_number
        message = f"malformed line {line_number}"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class EmptyCorpus(SeqtagError):
    """No usable tokens were found in the corpus."""


class MissingGoldTags(SeqtagError):
    """An operation that needs gold tags received untagged tokens."""


class UnknownTag(SeqtagError):
    """A tag name is not part of the tag inventory."""


class PositionOutOfRange(SeqtagError):
    """A token index does not fall inside its sentence."""


class EmptyVocabulary(SeqtagError):
    """Feature enumeration produced no features."""


class NoExamples(SeqtagError):
    """A learner was asked to train on an empty example list."""


class DegenerateProblem(SeqtagError):
    """A binary training problem contains only one label class."""


class SingleCategory(SeqtagError):
    """Multiclass training requires at least two distinct tags."""


class InvalidSpec(SeqtagError):
    """A synthetic-corpus specification fails validation."""


class UnknownMethod(SeqtagError):
    """The requested learner id is not one of the supported methods."""


class NotFittedError(SeqtagError):
    """A model was used before fit() completed."""


class FormatVersionMismatch(SeqtagError):
    """A model file was written under an incompatible format version."""


class CorruptModel(SeqtagError):
    """A model file is truncated or structurally damaged."""

    def __init__(self, section: str, detail: str = ""):
        self.section = section
        message = f"corrupt model file in section {section!r}"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)
