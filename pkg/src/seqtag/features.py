"""Sparse binary context features over a symmetric word window.

Three key groups, each independently switchable:

* ``POS``       -- a candidate tag of the word at a given offset.
* ``POS_ORDER`` -- a (candidate tag, frequency rank) pair; ranks are
  1-based and capped at 9.
* ``WORD``      -- the surface form at a given offset.

Offsets are part of every key. Offsets falling outside the sentence emit
one boundary key per enabled group. Neighboring words contribute their
*candidate* sets from the lexicon, never any decided tag, so extraction
at tagging time needs no left-to-right state.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Iterator

from .base import FeatureVector
from .corpus import Lexicon, Sentence
from .errors import EmptyVocabulary, MalformedLine, PositionOutOfRange

KIND_POS = "POS"
KIND_POS_ORDER = "POS_ORDER"
KIND_WORD = "WORD"
KINDS = (KIND_POS, KIND_POS_ORDER, KIND_WORD)
MAX_RANK = 9


@dataclass(frozen=True)
class FeatureKey:
    """One feature key; ``payload=None`` marks a sentence-boundary slot."""

    kind: str
    offset: int
    payload: int | tuple[int, int] | str | None = None


@dataclass(frozen=True)
class FeatureConfig:
    window: int = 3
    use_pos: bool = True
    use_pos_order: bool = True
    use_word: bool = True

    def __post_init__(self):
        if self.window < 0:
            raise ValueError("window must be >= 0")
        if not (self.use_pos or self.use_pos_order or self.use_word):
            raise ValueError("at least one feature group must be enabled")

    def label(self) -> str:
        disabled = [
            name
            for flag, name in (
                (self.use_pos, "pos"),
                (self.use_pos_order, "pos-order"),
                (self.use_word, "word"),
            )
            if not flag
        ]
        parts = [f"window={self.window}"]
        parts += [f"no-{name}" for name in disabled]
        return ",".join(parts)


class FeatureVocabulary:
    """Bidirectional feature-key registry; freeze after enumeration.

    While unfrozen, ``id_for`` allocates dense ids in first-seen order.
    Once frozen, lookups of unseen keys return None instead of growing
    the table.
    """

    def __init__(self):
        self._ids: dict[FeatureKey, int] = {}
        self._keys: list[FeatureKey] = []
        self._frozen = False

    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> "FeatureVocabulary":
        self._frozen = True
        return self

    def id_for(self, key: FeatureKey) -> int | None:
        fid = self._ids.get(key)
        if fid is None and not self._frozen:
            fid = len(self._keys)
            self._ids[key] = fid
            self._keys.append(key)
        return fid

    def get(self, key: FeatureKey) -> int | None:
        return self._ids.get(key)

    def key_for(self, fid: int) -> FeatureKey:
        return self._keys[fid]

    def __len__(self) -> int:
        return len(self._keys)

    def __contains__(self, key: FeatureKey) -> bool:
        return key in self._ids

    def keys(self) -> Iterator[FeatureKey]:
        return iter(self._keys)


def extract(
    sentence: Sentence,
    position: int,
    lexicon: Lexicon,
    vocabulary: FeatureVocabulary,
    config: FeatureConfig,
) -> FeatureVector:
    """Extract the active feature ids for one token position.

    Unknown words (absent from the lexicon) emit no POS/POS_ORDER keys
    and a WORD key only if the vocabulary already holds it; with a frozen
    vocabulary every unseen key is silently dropped.
    """
    n = len(sentence)
    if position < 0 or position >= n:
        raise PositionOutOfRange(
            f"position {position} outside sentence of length {n}"
        )
    ids: set[int] = set()

    def add(key: FeatureKey, allocate: bool = True) -> None:
        fid = vocabulary.id_for(key) if allocate else vocabulary.get(key)
        if fid is not None:
            ids.add(fid)

    for offset in range(-config.window, config.window + 1):
        j = position + offset
        if 0 <= j < n:
            word = sentence[j].word
            candidates = lexicon.candidates(word)
            if candidates:
                for rank, (tag, _count) in enumerate(candidates, start=1):
                    if config.use_pos:
                        add(FeatureKey(KIND_POS, offset, tag))
                    if config.use_pos_order:
                        add(FeatureKey(KIND_POS_ORDER, offset, (tag, min(rank, MAX_RANK))))
                if config.use_word:
                    add(FeatureKey(KIND_WORD, offset, word))
            elif config.use_word:
                add(FeatureKey(KIND_WORD, offset, word), allocate=False)
        else:
            if config.use_pos:
                add(FeatureKey(KIND_POS, offset, None))
            if config.use_pos_order:
                add(FeatureKey(KIND_POS_ORDER, offset, None))
            if config.use_word:
                add(FeatureKey(KIND_WORD, offset, None))
    return tuple(sorted(ids))


def build_vocabulary(
    training: Iterable[Sentence], lexicon: Lexicon, config: FeatureConfig
) -> FeatureVocabulary:
    """Enumerate features over every ambiguous training position, then freeze."""
    vocabulary = FeatureVocabulary()
    for sentence in training:
        for position, token in enumerate(sentence):
            if lexicon.is_ambiguous(token.word):
                extract(sentence, position, lexicon, vocabulary, config)
    if len(vocabulary) == 0:
        raise EmptyVocabulary(
            "the training corpus has no ambiguous positions, so there is "
            "nothing for a learner to fit; --method baseline still works"
        )
    return vocabulary.freeze()


def _encode_payload(key: FeatureKey) -> str:
    if key.payload is None:
        return ""
    if key.kind == KIND_POS:
        return str(key.payload)
    if key.kind == KIND_POS_ORDER:
        tag, rank = key.payload
        return f"{tag},{rank}"
    return key.payload


def _decode_payload(kind: str, text: str, lineno: int):
    if text == "":
        return None
    try:
        if kind == KIND_POS:
            return int(text)
        if kind == KIND_POS_ORDER:
            tag, rank = text.split(",")
            return (int(tag), int(rank))
    except ValueError:
        raise MalformedLine(lineno, f"bad payload {text!r} for kind {kind}") from None
    return text


def vocabulary_to_lines(vocabulary: FeatureVocabulary) -> list[str]:
    lines = []
    for fid, key in enumerate(vocabulary.keys()):
        lines.append(f"{fid}\t{key.kind}\t{key.offset}\t{_encode_payload(key)}")
    return lines


def vocabulary_from_lines(lines: Iterable[str]) -> FeatureVocabulary:
    vocabulary = FeatureVocabulary()
    for lineno, line in enumerate(lines, start=1):
        parts = line.split("\t")
        if len(parts) != 4:
            raise MalformedLine(lineno, "expected id<TAB>kind<TAB>offset<TAB>payload")
        fid_text, kind, offset_text, payload_text = parts
        if kind not in KINDS:
            raise MalformedLine(lineno, f"unknown feature kind {kind!r}")
        try:
            fid = int(fid_text)
            offset = int(offset_text)
        except ValueError:
            raise MalformedLine(lineno, "non-integer id or offset") from None
        key = FeatureKey(kind, offset, _decode_payload(kind, payload_text, lineno))
        assigned = vocabulary.id_for(key)
        if assigned != fid:
            raise MalformedLine(lineno, f"id {fid} out of order (expected {assigned})")
    return vocabulary.freeze()


def save_vocabulary(vocabulary: FeatureVocabulary, dest) -> None:
    text = "\n".join(vocabulary_to_lines(vocabulary)) + "\n"
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as handle:
            handle.write(text)


def load_vocabulary(source) -> FeatureVocabulary:
    if hasattr(source, "read"):
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    else:
        with open(source, "rb") as handle:
            text = handle.read().decode("utf-8")
    return vocabulary_from_lines(text.splitlines())


def ablated(config: FeatureConfig, **flags) -> FeatureConfig:
    """Convenience for turning groups off, e.g. ablated(cfg, use_word=False)."""
    return replace(config, **flags)
