import json

import numpy as np
import pytest

from denormkit import cli, crf
from denormkit.corpus import read_labeled

SMALL = ["--segments", "20", "--per-segment", "5"]


@pytest.fixture(scope="module")
def prepared(tmp_path_factory):
    root = tmp_path_factory.mktemp("small")
    assert cli.main(["synth", "-n", "600", "--seed", "3", "-o", str(root / "corpus.txt")]) == 0
    assert cli.main(["prepare", str(root / "corpus.txt"), "-o", str(root / "data"), *SMALL]) == 0
    return root


def test_prepare_outputs(prepared):
    data = prepared / "data"
    manifest = json.loads((data / "manifest.json").read_text(encoding="utf-8"))
    assert (manifest["train"], manifest["tune"], manifest["test"]) == (400, 100, 100)
    assert manifest["seed"] == 0
    for name in ("train.tsv", "tune.tsv", "test.tsv", "test.txt", "test.ref.txt", "report.tsv"):
        assert (data / name).is_file()
    lines = (data / "test.txt").read_text(encoding="utf-8").splitlines()
    assert all(len(line.split()) <= cli.WRAP for line in lines)
    assert len(read_labeled(data / "test.tsv")) == 100


def test_prepare_too_small(tmp_path, capsys):
    corpus = tmp_path / "c.txt"
    corpus.write_text("Zdanie.\n" * 100, encoding="utf-8")
    assert cli.main(["prepare", str(corpus), "-o", str(tmp_path / "out")]) == 2
    assert "2001" in capsys.readouterr().err


def test_train_segment_evaluate(prepared, tmp_path, capsys):
    data = prepared / "data"
    model = tmp_path / "b.crf"
    log = tmp_path / "log.tsv"
    assert cli.main(["train", "boundary", "--train", str(data / "train.tsv"), "--tune", str(data / "tune.tsv"),
                     "-o", str(model), "--epochs", "3", "--log", str(log)]) == 0
    rows = log.read_text(encoding="utf-8").splitlines()
    assert rows[0] == "epoch\tobjective\tstep\ttune_f1"
    assert len(rows) == 5
    loaded = crf.load_model(model)
    assert loaded.labels == ("NONE", "PERIOD", "QUESTION", "EXCLAM")
    seg = tmp_path / "seg.txt"
    assert cli.main(["segment", str(data / "test.txt"), "--boundary-model", str(model), "-o", str(seg)]) == 0
    capsys.readouterr()
    assert cli.main(["evaluate", str(seg), str(data / "test.ref.txt"), "--kind", "boundary"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[-1].startswith("boundary\t")


def test_train_zero_epochs_writes_zero_model(prepared, tmp_path):
    model = tmp_path / "z.crf"
    assert cli.main(["train", "comma", "--train", str(prepared / "data" / "train.tsv"),
                     "-o", str(model), "--epochs", "0"]) == 0
    assert not crf.load_model(model).weight_vector().any()


def test_train_keeps_best_tune_epoch(prepared, tmp_path, monkeypatch):
    """Epoch 1 scores well on tune, epoch 2 overfits: epoch 1 must be saved."""
    data = prepared / "data"
    real_train = crf.train
    snapshots = {}

    def contrived(dataset, labels, templates, config, on_epoch=None):
        good = real_train(dataset, labels, templates, crf.TrainConfig(epochs=10))
        # epoch 2 never predicts a boundary
        bad_state = good.state_weights.copy()
        bad_state[:, labels.index("NONE")] += 50.0
        bad = crf.CrfModel(labels, templates, good.feature_vocab, bad_state, good.transition_weights)
        snapshots.update(good=good, bad=bad)
        on_epoch(crf.EpochRecord(1, -10.0, 0.1), good)
        on_epoch(crf.EpochRecord(2, -5.0, 0.1), bad)
        return bad

    monkeypatch.setattr(crf, "train", contrived)
    model = tmp_path / "best.crf"
    log = tmp_path / "log.tsv"
    assert cli.main(["train", "boundary", "--train", str(data / "train.tsv"), "--tune", str(data / "tune.tsv"),
                     "-o", str(model), "--epochs", "2", "--log", str(log)]) == 0
    f1 = [float(r.split("\t")[3]) for r in log.read_text(encoding="utf-8").splitlines()[1:]]
    assert f1[1] > f1[2] and f1[1] > f1[0]
    saved = crf.load_model(model)
    np.testing.assert_array_equal(saved.transition_weights, snapshots["good"].transition_weights)
    assert crf.format_model(saved) == crf.format_model(snapshots["good"])


def test_train_rejects_foreign_label(tmp_path, capsys):
    bad = tmp_path / "bad.tsv"
    bad.write_text("ala\tNONE\tNONE\nma\tSEMICOLON\tNONE\n", encoding="utf-8")
    assert cli.main(["train", "boundary", "--train", str(bad), "-o", str(tmp_path / "m")]) == 2
    assert "bad.tsv:2:" in capsys.readouterr().err


def test_segment_missing_model(tmp_path):
    text = tmp_path / "in.txt"
    text.write_text("ala ma kota\n", encoding="utf-8")
    assert cli.main(["segment", str(text), "--boundary-model", str(tmp_path / "nope.crf")]) == 2


def test_denorm_and_missing_lexicon(tmp_path, capsys):
    text = tmp_path / "in.txt"
    text.write_text("mam czterdzieści cztery lata\nwidzę jennifer lopez\n", encoding="utf-8")
    assert cli.main(["denorm", str(text)]) == 0
    assert capsys.readouterr().out == "Mam 44 lata.\nWidzę Jennifer Lopez.\n"
    empty = tmp_path / "lex"
    empty.mkdir()
    assert cli.main(["denorm", str(text), "--lexicons", str(empty)]) == 2
    assert "numerals.tsv" in capsys.readouterr().err
    # with every stage that needs numerals off, only the casing tables are required
    (empty / "names.tsv").write_text("jennifer\tJennifer\t0\n", encoding="utf-8")
    (empty / "surnames.tsv").write_text("lopez\tLopez\t0\n", encoding="utf-8")
    assert cli.main(["denorm", str(text), "--lexicons", str(empty),
                     "--no-numbers", "--no-entities", "--no-abbreviations"]) == 0
    assert capsys.readouterr().out == "Mam czterdzieści cztery lata.\nWidzę Jennifer Lopez.\n"


def test_denorm_env_fallback(tmp_path, monkeypatch, capsys):
    lex = tmp_path / "lex"
    lex.mkdir()
    monkeypatch.setenv("DENORM_LEXICON_DIR", str(lex))
    text = tmp_path / "in.txt"
    text.write_text("ala\n", encoding="utf-8")
    assert cli.main(["denorm", str(text)]) == 2
    assert str(lex) in capsys.readouterr().err


def test_denorm_config_file(tmp_path, capsys):
    conf = tmp_path / "d.conf"
    conf.write_text("casing = off\n", encoding="utf-8")
    text = tmp_path / "in.txt"
    text.write_text("mam pięć lat\n", encoding="utf-8")
    assert cli.main(["denorm", str(text), "--config", str(conf)]) == 0
    assert capsys.readouterr().out == "mam 5 lat.\n"


@pytest.mark.parametrize("kind", ["bleu", "nist", "ter", "meteor"])
def test_evaluate_text_metrics(tmp_path, capsys, kind):
    pred, gold = tmp_path / "p.txt", tmp_path / "g.txt"
    pred.write_text("ala ma kota i psa\nnie wiem\n", encoding="utf-8")
    gold.write_text("ala ma kota i psa\nnie wiem\n", encoding="utf-8")
    assert cli.main(["evaluate", str(pred), str(gold), "--kind", kind]) == 0
    line = capsys.readouterr().out.splitlines()[-1]
    assert line.split("\t")[0] == {"bleu": "BLEU", "nist": "NIST", "ter": "TER", "meteor": "METEOR"}[kind]
    gold.write_text("ala ma kota i psa\n", encoding="utf-8")
    assert cli.main(["evaluate", str(pred), str(gold), "--kind", kind]) == 2


def test_usage_errors(capsys):
    assert cli.main([]) == 2
    assert cli.main(["train", "sentence", "--train", "x", "-o", "y"]) == 2
    capsys.readouterr()


def test_internal_error_exit_code(tmp_path, monkeypatch):
    def boom(*a, **k):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli.synth, "generate", boom)
    assert cli.main(["synth", "-n", "1", "-o", str(tmp_path / "x")]) == 1


def test_invalid_utf8_input(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_bytes(b"ala \xff ma\n")
    assert cli.main(["denorm", str(bad)]) == 2
