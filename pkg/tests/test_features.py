import io

import pytest

from conftest import corpus, sent
from seqtag.corpus import build_lexicon
from seqtag.errors import EmptyVocabulary, MalformedLine, PositionOutOfRange
from seqtag.features import (
    KIND_POS,
    KIND_POS_ORDER,
    KIND_WORD,
    MAX_RANK,
    FeatureConfig,
    FeatureKey,
    FeatureVocabulary,
    ablated,
    build_vocabulary,
    extract,
    load_vocabulary,
    save_vocabulary,
    vocabulary_from_lines,
    vocabulary_to_lines,
)


def run_lexicon():
    # "run": VERB 3x, NOUN 1x -> VERB rank 1, NOUN rank 2.
    return build_lexicon(corpus("run/VERB", "run/VERB", "run/VERB", "run/NOUN"))


def one_word_keys(config):
    """Extract on the 1-token sentence [run] and return the key set."""
    lexicon, tags = run_lexicon()
    vocab = FeatureVocabulary()
    ids = extract(sent("run"), 0, lexicon, vocab, config)
    return {vocab.key_for(fid) for fid in ids}, tags


def test_window_one_single_word_emits_eleven_keys():
    keys, tags = one_word_keys(FeatureConfig(window=1))
    verb, noun = tags.id("VERB"), tags.id("NOUN")
    assert keys == {
        FeatureKey(KIND_POS, -1, None),
        FeatureKey(KIND_POS_ORDER, -1, None),
        FeatureKey(KIND_WORD, -1, None),
        FeatureKey(KIND_POS, 0, verb),
        FeatureKey(KIND_POS, 0, noun),
        FeatureKey(KIND_POS_ORDER, 0, (verb, 1)),
        FeatureKey(KIND_POS_ORDER, 0, (noun, 2)),
        FeatureKey(KIND_WORD, 0, "run"),
        FeatureKey(KIND_POS, 1, None),
        FeatureKey(KIND_POS_ORDER, 1, None),
        FeatureKey(KIND_WORD, 1, None),
    }
    assert len(keys) == 11


def test_no_word_group_drops_word_keys_and_is_subset():
    full, _ = one_word_keys(FeatureConfig(window=1))
    trimmed, _ = one_word_keys(FeatureConfig(window=1, use_word=False))
    assert all(key.kind != KIND_WORD for key in trimmed)
    assert trimmed < full
    assert len(trimmed) == 8


def test_unknown_neighbor_contributes_nothing():
    lexicon, _ = run_lexicon()
    vocab = FeatureVocabulary()
    with_neighbor = extract(sent("run zebra"), 0, lexicon, vocab, FeatureConfig(window=1))
    keys = {vocab.key_for(fid) for fid in with_neighbor}
    assert not any(key.offset == 1 for key in keys)


def test_unknown_focus_word_emits_word_key_only_if_known():
    lexicon, _ = run_lexicon()
    vocab = FeatureVocabulary()
    ids = extract(sent("zebra"), 0, lexicon, vocab, FeatureConfig(window=0))
    assert ids == ()
    fid = vocab.id_for(FeatureKey(KIND_WORD, 0, "zebra"))
    again = extract(sent("zebra"), 0, lexicon, vocab, FeatureConfig(window=0))
    assert again == (fid,)


def test_frozen_vocabulary_never_grows():
    lexicon, _ = run_lexicon()
    vocab = FeatureVocabulary()
    extract(sent("run"), 0, lexicon, vocab, FeatureConfig(window=1))
    size = len(vocab)
    vocab.freeze()
    ids = extract(sent("walk run walk"), 1, lexicon, vocab, FeatureConfig(window=1))
    assert len(vocab) == size
    known = {vocab.key_for(fid) for fid in ids}
    assert all(key.offset == 0 or key.payload is None for key in known)


def test_extract_is_pure():
    lexicon, _ = run_lexicon()
    vocab = FeatureVocabulary()
    config = FeatureConfig(window=2)
    sentence = sent("run run run")
    first = extract(sentence, 1, lexicon, vocab, config)
    vocab.freeze()
    assert extract(sentence, 1, lexicon, vocab, config) == first


def test_position_out_of_range():
    lexicon, _ = run_lexicon()
    with pytest.raises(PositionOutOfRange):
        extract(sent("run"), 1, lexicon, FeatureVocabulary(), FeatureConfig())
    with pytest.raises(PositionOutOfRange):
        extract(sent("run"), -1, lexicon, FeatureVocabulary(), FeatureConfig())


def test_rank_cap_shares_deep_ranks():
    sentences = corpus(*[f"deep/T{i:02d}" for i in range(12)])
    lexicon, tags = build_lexicon(sentences)
    vocab = FeatureVocabulary()
    extract(sent("deep"), 0, lexicon, vocab, FeatureConfig(window=0, use_pos=False, use_word=False))
    ranks = [key.payload[1] for key in vocab.keys()]
    assert max(ranks) == MAX_RANK
    assert ranks.count(MAX_RANK) == 12 - MAX_RANK + 1


def test_config_validation():
    with pytest.raises(ValueError):
        FeatureConfig(window=-1)
    with pytest.raises(ValueError):
        FeatureConfig(use_pos=False, use_pos_order=False, use_word=False)
    assert FeatureConfig(window=0).label() == "window=0"
    assert ablated(FeatureConfig(), use_word=False).label() == "window=3,no-word"


def test_build_vocabulary_counts_toy_corpus():
    training = corpus("run/VERB", "run/VERB", "run/VERB", "run/NOUN")
    lexicon, _ = build_lexicon(training)
    vocab = build_vocabulary(training, lexicon, FeatureConfig(window=1))
    assert vocab.frozen
    assert len(vocab) == 11


def test_build_vocabulary_without_ambiguity():
    training = corpus("a/X b/Y")
    lexicon, _ = build_lexicon(training)
    with pytest.raises(EmptyVocabulary, match="baseline"):
        build_vocabulary(training, lexicon, FeatureConfig())


def test_word_group_monotone_vocabulary_growth():
    training = corpus("run/VERB fast/ADV", "run/NOUN", "run/VERB")
    lexicon, _ = build_lexicon(training)
    full = build_vocabulary(training, lexicon, FeatureConfig(window=1))
    no_word = build_vocabulary(training, lexicon, FeatureConfig(window=1, use_word=False))
    assert set(no_word.keys()) <= set(full.keys())
    assert len(no_word) <= len(full)


# ----------------------------------------------------------- persistence

def test_vocabulary_round_trip():
    lexicon, _ = run_lexicon()
    vocab = FeatureVocabulary()
    extract(sent("run zebra run"), 0, lexicon, vocab, FeatureConfig(window=2))
    vocab.id_for(FeatureKey(KIND_WORD, 2, "zebra"))
    vocab.freeze()
    lines = vocabulary_to_lines(vocab)
    restored = vocabulary_from_lines(lines)
    assert list(restored.keys()) == list(vocab.keys())
    assert restored.frozen
    assert all(restored.get(key) == vocab.get(key) for key in vocab.keys())


def test_vocabulary_file_round_trip(tmp_path):
    vocab = FeatureVocabulary()
    vocab.id_for(FeatureKey(KIND_POS, -2, 4))
    vocab.id_for(FeatureKey(KIND_POS_ORDER, 0, (1, 2)))
    vocab.id_for(FeatureKey(KIND_WORD, 3, None))
    vocab.freeze()
    path = tmp_path / "vocab.tsv"
    save_vocabulary(vocab, path)
    assert list(load_vocabulary(path).keys()) == list(vocab.keys())


@pytest.mark.parametrize(
    "line",
    [
        "0\tPOS\t1",                 # missing column
        "0\tNOISE\t1\t2",            # unknown kind
        "x\tPOS\t1\t2",              # non-integer id
        "0\tPOS\t1\tq",              # bad payload
        "0\tPOS_ORDER\t0\t1",        # rank missing
        "5\tPOS\t1\t2",              # id out of order
    ],
)
def test_vocabulary_rejects_damage(line):
    with pytest.raises(MalformedLine):
        vocabulary_from_lines([line])


def test_vocabulary_stream_io():
    vocab = FeatureVocabulary()
    vocab.id_for(FeatureKey(KIND_WORD, 0, "a"))
    vocab.freeze()
    buffer = io.StringIO()
    save_vocabulary(vocab, buffer)
    restored = load_vocabulary(io.StringIO(buffer.getvalue()))
    assert list(restored.keys()) == list(vocab.keys())
