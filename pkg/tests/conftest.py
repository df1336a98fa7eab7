"""Shared corpus-building helpers."""

from seqtag.corpus import Sentence, Token


def sent(text: str) -> Sentence:
    """Parse "word/tag word/tag ..." into a Sentence.

    A bare "word" (no slash) becomes an untagged token.
    """
    tokens = []
    for chunk in text.split():
        word, slash, tag = chunk.partition("/")
        tokens.append(Token(word, tag if slash else None))
    return Sentence(tuple(tokens))


def corpus(*texts: str) -> list[Sentence]:
    return [sent(text) for text in texts]
