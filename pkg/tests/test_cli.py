"""End-to-end command tests driven through cli.run (no subprocesses)."""

import json

import pytest

from seqtag.cli import run
from seqtag.corpus import FORMAT_WORDS, load_corpus, save_corpus

GENERATE = ["generate", "--seed", "9", "--sentences", "120"]


@pytest.fixture()
def data(tmp_path):
    train = tmp_path / "train.tt"
    test = tmp_path / "test.tt"
    code = run(GENERATE + ["--train-out", str(train), "--test-out", str(test)])
    assert code == 0
    return {"train": train, "test": test, "dir": tmp_path}


def test_generate_splits_deterministically(data, tmp_path):
    again_train = tmp_path / "again-train.tt"
    again_test = tmp_path / "again-test.tt"
    assert run(GENERATE + ["--train-out", str(again_train),
                           "--test-out", str(again_test)]) == 0
    assert again_train.read_bytes() == data["train"].read_bytes()
    assert again_test.read_bytes() == data["test"].read_bytes()
    whole = tmp_path / "whole.tt"
    assert run(GENERATE + ["--out", str(whole)]) == 0
    joined = load_corpus(data["train"]) + load_corpus(data["test"])
    assert load_corpus(whole) == joined


def test_train_eval_tag_pipeline(data, capsys):
    model = data["dir"] / "m.svm"
    assert run(["train", "--in", str(data["train"]), "--model", str(model),
                "--method", "svm", "--degree", "1", "--C", "10"]) == 0
    err = capsys.readouterr().err
    assert "# train:" in err
    assert "# trained svm:" in err

    assert run(["eval", "--in", str(data["test"]), "--model", str(model)]) == 0
    out = capsys.readouterr().out
    amb_line, all_line = out.splitlines()
    assert amb_line.startswith("ambiguous: ")
    assert all_line.startswith("all-words: ")
    assert "%" in amb_line

    tagged = data["dir"] / "tagged.tsv"
    assert run(["tag", "--in", str(data["test"]), "--model", str(model),
                "--format", "tab-tagged", "--out", str(tagged)]) == 0
    lines = tagged.read_text().splitlines()
    fields = [line.split("\t") for line in lines if line]
    assert all(len(f) == 3 for f in fields)
    assert {f[2] for f in fields} <= {"dictionary", "learner", "fallback"}

    # Words-format input of the same text tags identically: gold column ignored.
    words = data["dir"] / "words.txt"
    save_corpus(load_corpus(data["test"]), words, format=FORMAT_WORDS)
    assert run(["tag", "--in", str(words), "--model", str(model)]) == 0
    assert capsys.readouterr().out == tagged.read_text()


def test_compare_writes_table_and_records(data, capsys):
    records = data["dir"] / "rows.jsonl"
    argv = ["compare", "--in", str(data["train"]), "--test", str(data["test"]),
            "--methods", "baseline,dlist", "--out", str(records)]
    assert run(argv) == 0
    table = capsys.readouterr().out
    head, ruler, *body = table.splitlines()
    assert head.split() == ["method", "features", "ambiguous%", "all-words%"]
    assert set(ruler) <= {"-", " "}
    assert [line.split()[0] for line in body] == ["baseline", "dlist"]

    rows = [json.loads(line) for line in records.read_text().splitlines()]
    assert [r["method"] for r in rows] == ["baseline", "dlist"]
    assert all(r["config"] == "all" for r in rows)

    # Identical invocation reproduces both artifacts byte for byte.
    second = data["dir"] / "rows2.jsonl"
    assert run(argv[:-1] + [str(second)]) == 0
    assert capsys.readouterr().out == table
    assert second.read_bytes() == records.read_bytes()


def test_compare_ablation_doubles_the_rows(data, capsys):
    argv = ["compare", "--in", str(data["train"]), "--test", str(data["test"]),
            "--methods", "baseline", "--ablate-word"]
    assert run(argv) == 0
    body = capsys.readouterr().out.splitlines()[2:]
    assert [line.split()[1] for line in body] == ["all", "no-word"]


@pytest.mark.parametrize(
    "argv, fragment",
    [
        ([], "subcommand"),
        (["train", "--in", "x.tt", "--model", "m", "--degree", "0"], "--degree"),
        (["train", "--in", "x.tt", "--model", "m", "--C", "0"], "--C"),
        (["train", "--in", "x.tt", "--model", "m", "--min-count", "0"], "--min-count"),
        (["train", "--in", "x.tt", "--model", "m", "--window", "-1"], "--window"),
        (["train", "--in", "x.tt", "--model", "m", "--no-pos", "--no-pos-order",
          "--no-word"], "--no-word"),
        (["train", "--model", "m"], "--in"),
        (["tag", "--in", "x", "--model", "m", "--format", "xml"], "--format"),
        (["compare", "--in", "a", "--test", "b", "--methods", "baseline,oracle"],
         "--methods"),
        (["generate", "--out", "x", "--signal", "1.5"], "--signal"),
        (["generate", "--out", "x", "--majority", "0.2"], "--majority"),
        (["generate", "--train-out", "only-half"], "--test-out"),
        (["generate"], "--out"),
        (["frobnicate"], "invalid choice"),
    ],
)
def test_usage_errors_exit_one_and_name_the_flag(argv, fragment, capsys):
    assert run(argv) == 1
    err = capsys.readouterr().err
    assert "usage error:" in err
    assert fragment in err


def test_data_errors_exit_two(data, tmp_path, capsys):
    assert run(["train", "--in", str(tmp_path / "absent.tt"),
                "--model", str(tmp_path / "m")]) == 2
    assert "error:" in capsys.readouterr().err

    bad = tmp_path / "bad.tt"
    bad.write_text("word without tab\n")
    assert run(["train", "--in", str(bad), "--model", str(tmp_path / "m")]) == 2
    assert "malformed line 1" in capsys.readouterr().err

    not_model = tmp_path / "not.model"
    not_model.write_text("hello\n")
    assert run(["eval", "--in", str(data["test"]), "--model", str(not_model)]) == 2
    assert "error:" in capsys.readouterr().err


def test_thread_env_is_validated(data, tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("SEQTAG_THREADS", "zero")
    assert run(["train", "--in", str(data["train"]),
                "--model", str(tmp_path / "m")]) == 1
    assert "SEQTAG_THREADS" in capsys.readouterr().err
    monkeypatch.setenv("SEQTAG_THREADS", "0")
    assert run(["train", "--in", str(data["train"]),
                "--model", str(tmp_path / "m")]) == 1


def test_thread_env_does_not_change_artifacts(data, tmp_path, monkeypatch, capsys):
    serial = tmp_path / "serial.svm"
    threaded = tmp_path / "threaded.svm"
    base = ["train", "--in", str(data["train"]), "--method", "svm", "--degree", "1"]
    monkeypatch.setenv("SEQTAG_THREADS", "1")
    assert run(base + ["--model", str(serial)]) == 0
    monkeypatch.setenv("SEQTAG_THREADS", "4")
    assert run(base + ["--model", str(threaded)]) == 0
    capsys.readouterr()
    assert serial.read_bytes() == threaded.read_bytes()


def test_config_echo_lists_resolved_values(data, capsys):
    assert run(["eval", "--in", str(data["test"]),
                "--model", str(data["dir"] / "missing")]) == 2
    err = capsys.readouterr().err
    assert err.startswith("# eval: ")
    assert "infile=" in err
    assert "threads=" in err
