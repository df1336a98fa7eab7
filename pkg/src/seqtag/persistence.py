"""Single-file tagger bundle serialization.

Layout: a version header, then counted sections (tag set, feature
config, lexicon, vocabulary, learner), then an ``end`` sentinel that
catches truncation. All floats are written with repr() so reloaded
models reproduce tagging behavior byte for byte.
"""

from __future__ import annotations

from .corpus import Lexicon, TagSet
from .decision_list import DecisionListClassifier
from .errors import CorruptModel, FormatVersionMismatch, MalformedLine
from .features import FeatureConfig, vocabulary_from_lines, vocabulary_to_lines
from .maxent import MaxentClassifier
from .svm import PairwiseSvmClassifier
from .tagger import METHODS, TaggerBundle

FORMAT_NAME = "seqtag-bundle"
FORMAT_VERSION = 1

_LEARNER_IO = {
    "dlist": DecisionListClassifier,
    "maxent": MaxentClassifier,
    "svm": PairwiseSvmClassifier,
}


def _lexicon_lines(lexicon: Lexicon) -> list[str]:
    lines = []
    for word in lexicon.words():
        cands = ",".join(f"{tag}:{count}" for tag, count in lexicon.candidates(word))
        lines.append(f"{word}\t{cands}")
    return lines


def _lexicon_from_lines(lines: list[str], n_tags: int) -> Lexicon:
    entries = {}
    for lineno, line in enumerate(lines, start=1):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise MalformedLine(lineno, "expected word<TAB>tag:count,...")
        cands = []
        for item in parts[1].split(","):
            tag_text, _, count_text = item.partition(":")
            cands.append((int(tag_text), int(count_text)))
        entries[parts[0]] = tuple(cands)
    return Lexicon(entries, n_tags)


def _config_lines(config: FeatureConfig) -> list[str]:
    return [
        f"window {config.window}",
        f"use_pos {int(config.use_pos)}",
        f"use_pos_order {int(config.use_pos_order)}",
        f"use_word {int(config.use_word)}",
    ]


def _config_from_lines(lines: list[str]) -> FeatureConfig:
    values = {}
    for line in lines:
        name, _, value = line.partition(" ")
        values[name] = int(value)
    return FeatureConfig(
        window=values["window"],
        use_pos=bool(values["use_pos"]),
        use_pos_order=bool(values["use_pos_order"]),
        use_word=bool(values["use_word"]),
    )


def bundle_to_text(bundle: TaggerBundle) -> str:
    lines = [f"{FORMAT_NAME} {FORMAT_VERSION}", f"method {bundle.method}"]

    def section(name: str, body: list[str]) -> None:
        lines.append(f"[{name} {len(body)}]")
        lines.extend(body)

    section("tagset", list(bundle.tag_set.names))
    section("config", _config_lines(bundle.feature_config))
    section("lexicon", _lexicon_lines(bundle.lexicon))
    if bundle.method != "baseline":
        section("vocabulary", vocabulary_to_lines(bundle.vocabulary))
        section("learner", bundle.learner.to_lines())
    lines.append("end")
    return "\n".join(lines) + "\n"


def save_bundle(bundle: TaggerBundle, dest) -> None:
    text = bundle_to_text(bundle)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as handle:
            handle.write(text)


class _Reader:
    def __init__(self, lines: list[str]):
        self._lines = lines
        self._cursor = 0

    def next_line(self, section: str) -> str:
        if self._cursor >= len(self._lines):
            raise CorruptModel(section, "unexpected end of file")
        line = self._lines[self._cursor]
        self._cursor += 1
        return line

    def section(self, name: str) -> list[str]:
        header = self.next_line(name)
        prefix = f"[{name} "
        if not (header.startswith(prefix) and header.endswith("]")):
            raise CorruptModel(name, f"expected section header, found {header!r}")
        try:
            count = int(header[len(prefix):-1])
        except ValueError:
            raise CorruptModel(name, "non-integer section length") from None
        if self._cursor + count > len(self._lines):
            raise CorruptModel(name, "section is truncated")
        body = self._lines[self._cursor : self._cursor + count]
        self._cursor += count
        return body


def bundle_from_text(text: str) -> TaggerBundle:
    lines = text.splitlines()
    reader = _Reader(lines)

    header = reader.next_line("header").split()
    if len(header) != 2 or header[0] != FORMAT_NAME:
        raise CorruptModel("header", "not a seqtag bundle")
    if header[1] != str(FORMAT_VERSION):
        raise FormatVersionMismatch(
            f"bundle format version {header[1]} is not supported "
            f"(this build reads version {FORMAT_VERSION})"
        )
    method_line = reader.next_line("header").split()
    if len(method_line) != 2 or method_line[0] != "method" or method_line[1] not in METHODS:
        raise CorruptModel("header", "missing or unknown method")
    method = method_line[1]

    try:
        tag_set = TagSet(reader.section("tagset"))
    except ValueError as exc:
        raise CorruptModel("tagset", str(exc)) from None
    try:
        config = _config_from_lines(reader.section("config"))
    except (KeyError, ValueError) as exc:
        raise CorruptModel("config", str(exc)) from None
    try:
        lexicon = _lexicon_from_lines(reader.section("lexicon"), len(tag_set))
    except (MalformedLine, ValueError) as exc:
        raise CorruptModel("lexicon", str(exc)) from None

    vocabulary = None
    learner = None
    if method != "baseline":
        try:
            vocabulary = vocabulary_from_lines(reader.section("vocabulary"))
        except MalformedLine as exc:
            raise CorruptModel("vocabulary", str(exc)) from None
        try:
            learner = _LEARNER_IO[method].from_lines(reader.section("learner"))
        except MalformedLine as exc:
            raise CorruptModel("learner", str(exc)) from None

    if reader.next_line("end") != "end":
        raise CorruptModel("end", "missing end sentinel")
    return TaggerBundle(method, lexicon, tag_set, config, vocabulary, learner)


def load_bundle(source) -> TaggerBundle:
    if hasattr(source, "read"):
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    else:
        with open(source, "rb") as handle:
            text = handle.read().decode("utf-8")
    return bundle_from_text(text)
