"""Corpus I/O, the candidate-tag lexicon, and ambiguity partitioning.

Two line-oriented formats are supported:

* ``tab-tagged`` -- one ``word<TAB>tag`` per line, blank-line sentence
  separators, ``#``-prefixed comment lines.
* ``tab-words`` -- one bare word per line, same separators and comments.

Tags are carried as names on tokens; dense integer ids live in a
:class:`TagSet` built alongside the lexicon.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import EmptyCorpus, MalformedLine, MissingGoldTags, UnknownTag

FORMAT_TAGGED = "tab-tagged"
FORMAT_WORDS = "tab-words"
COMMENT_PREFIX = "#"


@dataclass(frozen=True)
class Token:
    word: str
    tag: str | None = None


@dataclass(frozen=True)
class Sentence:
    """A non-empty run of tokens."""

    tokens: tuple[Token, ...]

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("a sentence needs at least one token")

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __getitem__(self, index):
        return self.tokens[index]


class TagSet:
    """Ordered inventory of distinct tag names with dense ids."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        self.names = tuple(names)
        if not self.names:
            raise ValueError("empty tag set")
        self._index = {name: i for i, name in enumerate(self.names)}
        if len(self._index) != len(self.names):
            raise ValueError("duplicate tag names")

    @classmethod
    def from_observed(cls, names: Iterable[str]) -> "TagSet":
        return cls(sorted(set(names)))

    def id(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownTag(f"tag {name!r} is not in the tag set") from None

    def name(self, tag_id: int) -> str:
        return self.names[tag_id]

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, TagSet) and self.names == other.names

    def __repr__(self) -> str:
        return f"TagSet({list(self.names)!r})"


class Lexicon:
    """Word -> candidate tags ordered by descending training count.

    Count ties break toward the lower tag id, which equals ascending tag
    name because tag ids are assigned in sorted-name order. Ranks are the
    1-based positions in that ordering.
    """

    def __init__(self, entries: dict[str, tuple[tuple[int, int], ...]], n_tags: int):
        self._entries = entries
        counts = [0] * n_tags
        for cands in entries.values():
            for tag, count in cands:
                counts[tag] += count
        self.global_tag_counts = tuple(counts)

    def candidates(self, word: str) -> tuple[tuple[int, int], ...]:
        return self._entries.get(word, ())

    def __contains__(self, word: str) -> bool:
        return word in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def words(self) -> Iterator[str]:
        return iter(self._entries)

    def is_ambiguous(self, word: str) -> bool:
        return len(self._entries.get(word, ())) > 1

    def rank(self, word: str, tag: int) -> int | None:
        for position, (candidate, _count) in enumerate(self.candidates(word), start=1):
            if candidate == tag:
                return position
        return None

    def majority_tag(self) -> int:
        counts = self.global_tag_counts
        best = 0
        for tag in range(1, len(counts)):
            if counts[tag] > counts[best]:
                best = tag
        return best


def _read_text(source) -> str:
    if hasattr(source, "read"):
        data = source.read()
        return data.decode("utf-8") if isinstance(data, bytes) else data
    with open(source, "rb") as handle:
        return handle.read().decode("utf-8")


def load_corpus(source, format: str = FORMAT_TAGGED) -> list[Sentence]:
    """Parse a corpus file or stream into sentences.

    ``tab-words`` input yields tokens with ``tag=None``. Comment lines are
    skipped; repeated blank lines never create empty sentences.
    """
    if format not in (FORMAT_TAGGED, FORMAT_WORDS):
        raise ValueError(f"unknown corpus format {format!r}")
    text = _read_text(source)
    sentences: list[Sentence] = []
    current: list[Token] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.startswith(COMMENT_PREFIX):
            continue
        if not raw.strip():
            if current:
                sentences.append(Sentence(tuple(current)))
                current = []
            continue
        if format == FORMAT_TAGGED:
            parts = raw.split("\t")
            if len(parts) < 2 or not parts[0] or not parts[1]:
                raise MalformedLine(lineno, "expected word<TAB>tag")
            current.append(Token(parts[0], parts[1]))
        else:
            if "\t" in raw:
                raise MalformedLine(lineno, "expected a bare word")
            current.append(Token(raw))
    if current:
        sentences.append(Sentence(tuple(current)))
    return sentences


def format_corpus(sentences: Iterable[Sentence], format: str = FORMAT_TAGGED) -> str:
    if format not in (FORMAT_TAGGED, FORMAT_WORDS):
        raise ValueError(f"unknown corpus format {format!r}")
    blocks = []
    for sentence in sentences:
        lines = []
        for token in sentence:
            if format == FORMAT_TAGGED:
                if token.tag is None:
                    raise MissingGoldTags(
                        f"token {token.word!r} has no tag to serialize"
                    )
                lines.append(f"{token.word}\t{token.tag}")
            else:
                lines.append(token.word)
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def save_corpus(sentences: Iterable[Sentence], dest, format: str = FORMAT_TAGGED) -> None:
    text = format_corpus(sentences, format)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as handle:
            handle.write(text)


def load_lexicon_overrides(source) -> list[tuple[str, tuple[str, ...]]]:
    """Parse ``word<TAB>tag1,tag2,...`` override lines, preserving file order."""
    text = _read_text(source)
    overrides: list[tuple[str, tuple[str, ...]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.startswith(COMMENT_PREFIX) or not raw.strip():
            continue
        parts = raw.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise MalformedLine(lineno, "expected word<TAB>tag1,tag2,...")
        tags = tuple(t for t in parts[1].split(",") if t)
        if not tags:
            raise MalformedLine(lineno, "empty tag list")
        if len(set(tags)) != len(tags):
            raise MalformedLine(lineno, "duplicate tags in override")
        overrides.append((parts[0], tags))
    return overrides


def build_lexicon(
    training: Iterable[Sentence],
    overrides: Iterable[tuple[str, tuple[str, ...]]] | None = None,
) -> tuple[Lexicon, TagSet]:
    """Count (word, tag) pairs over a gold-tagged corpus.

    Overrides replace a word's candidate *set*; candidate ordering always
    follows the lexicon invariant (descending count, then ascending tag
    name), with unobserved override tags carrying count 0.
    """
    counts: dict[str, Counter] = {}
    observed: set[str] = set()
    total = 0
    for sentence in training:
        for token in sentence:
            if token.tag is None:
                raise MissingGoldTags(
                    f"training token {token.word!r} has no gold tag"
                )
            counts.setdefault(token.word, Counter())[token.tag] += 1
            observed.add(token.tag)
            total += 1
    if total == 0:
        raise EmptyCorpus("training corpus contains no tokens")

    override_list = list(overrides) if overrides else []
    for _word, tags in override_list:
        observed.update(tags)
    tag_set = TagSet.from_observed(observed)

    def ordered(counter: Counter) -> tuple[tuple[int, int], ...]:
        pairs = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))
        return tuple((tag_set.id(name), count) for name, count in pairs)

    entries = {word: ordered(counter) for word, counter in counts.items()}
    for word, tags in override_list:
        seen = counts.get(word, Counter())
        restricted = Counter({name: seen.get(name, 0) for name in tags})
        entries[word] = ordered(restricted)
    return Lexicon(entries, len(tag_set)), tag_set


def partition_tokens(
    sentences: Iterable[Sentence], lexicon: Lexicon
) -> tuple[list[tuple[int, int]], list[tuple[int, int]], list[tuple[int, int]]]:
    """Split token positions into (ambiguous, unambiguous, unknown) lists."""
    ambiguous: list[tuple[int, int]] = []
    unambiguous: list[tuple[int, int]] = []
    unknown: list[tuple[int, int]] = []
    for si, sentence in enumerate(sentences):
        for ti, token in enumerate(sentence):
            n = len(lexicon.candidates(token.word))
            if n == 0:
                unknown.append((si, ti))
            elif n == 1:
                unambiguous.append((si, ti))
            else:
                ambiguous.append((si, ti))
    return ambiguous, unambiguous, unknown
